#pragma once

#include <string>
#include <vector>

#include "pacing/types.hpp"

namespace pacing {

enum class ViolationCode {
  kDimensionMismatch,
  kNanInput,
  kDomain,          // alpha/x/p outside their ranges
  kAllocationSum,   // per-good allocation infeasible or not full
  kNotTopBid,       // winner's paced bid below the (tied) highest
  kPriceMismatch,   // price != highest other paced bid for a winner
  kSpendMismatch,   // s_ij != p_j * x_ij
  kBudgetExceeded,
  kUnderspendAlpha, // strict underspend but alpha < 1
  kDemandOrder,     // CE: bought lower bang-per-buck before exhausting higher
  kDemandUnmet,     // CE: affordable strictly-demanded item not fully bought
  kOverpricedBuy,   // CE: bought an item priced above value
};

const char* violation_code_name(ViolationCode code);

struct Violation {
  ViolationCode code;
  int bidder = -1;  // -1 when not bidder-specific
  int good = -1;    // -1 when not good-specific
  std::string detail;
};

struct Verdict {
  bool accepted = true;
  std::vector<Violation> violations;

  explicit operator bool() const { return accepted; }
};

ObjectiveValues objectives(const PacingInstance& inst, const PacingOutcome& out);

// Checks the three pacing-equilibrium conditions within tol:
//  (a) allocation feasible per good, full when someone values the good, and
//      winners hold (tied-)highest paced bids;
//  (b) each winner's price equals the highest paced bid other than its own;
//  (c) budgets respected, with alpha_i = 1 whenever the budget is underspent.
Verdict verify_equilibrium(const PacingInstance& inst, const PacingOutcome& out,
                           const Tolerance& tol = {});

// Competitive equilibrium with budgets, checked through the bang-per-buck
// characterization of demand-optimal bundles.
Verdict verify_competitive(const PacingInstance& inst, const CompetitiveOutcome& ce,
                           const Tolerance& tol = {});

}  // namespace pacing
