#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pacing/best_response.hpp"
#include "pacing/bnb.hpp"
#include "pacing/gen.hpp"
#include "pacing/types.hpp"
#include "pacing/verify.hpp"

namespace pacing {

enum class UpdateMode { kSimultaneous, kSequential };

struct BrConfig {
  TieBreak tie_break = TieBreak::kHigh;
  int max_iters = 100;
  std::optional<std::vector<double>> init;  // absent: U[0,1] per bidder from seed
  std::uint64_t seed = 0;                   // init draw + auction tie-breaking
  double convergence_tol = 1e-9;
  UpdateMode update = UpdateMode::kSimultaneous;
};

// One recorded profile with the day's realized play (random tie winners).
struct BrIteration {
  std::vector<double> alphas;
  Matrix fractions;               // realized allocation, 0/1 columns
  std::vector<double> prices;
  std::vector<double> spends;     // per bidder
  std::vector<double> utilities;  // realized, over-budget penalty applied
  double max_change = 0.0;        // multiplier movement from previous profile
};

struct BrTrace {
  std::vector<BrIteration> iterations;  // index 0 holds the initial profile
  std::uint64_t seed = 0;
  bool converged = false;
};

// Every round each bidder replaces its multiplier with a best response to the
// current rival bids under random tie-breaking, picking the highest (lowest)
// optimal multiplier per tie_break. Rounds are simultaneous by default.
BrTrace br_dynamics(const PacingInstance& inst, const BrConfig& config, const Tolerance& tol = {});

struct RegretRow {
  double realized = 0.0;   // penalized utility
  double best = 0.0;       // best-response utility against the final bids
  double absolute = 0.0;
  double relative = 0.0;
  bool defined = false;    // false when the best-response utility is <= 0
  double overspend = 0.0;
  double penalty = 0.0;
};

struct RegretReport {
  std::vector<RegretRow> rows;
  double max_relative = 0.0;  // over defined rows
  double mean_relative = 0.0;
};

// Relative regret against the final bid profile; over-budget utilities are
// penalized by overspend * (spend/budget) * (paced welfare/budget).
RegretReport regret(const PacingInstance& inst, const BrTrace& trace, const Tolerance& tol = {});
RegretReport regret_vs_bids(const PacingInstance& inst, const Matrix& bids,
                            const std::vector<double>& realized_utilities,
                            const Tolerance& tol = {});

// Penalized utility of a realized play (value won minus spend, minus the
// over-budget penalty product when spend exceeds the budget).
double penalized_utility(const PacingInstance& inst, int bidder, double value_won,
                         double spend, double paced_value_won);

struct AdaptiveConfig {
  std::vector<double> init_alphas;
  double alpha_min = 0.05;
  double step = 0.01;      // epsilon
  std::uint64_t seed = 0;  // auction tie-breaking
};

struct AdaptiveTrace {
  Matrix bids;                  // n x auctions
  Matrix allocation;            // n x auctions, 0/1
  Matrix spends;                // n x auctions
  std::vector<int> winners;     // -1 when unsold
  std::vector<double> prices;
  Matrix alpha_history;         // (auctions+1) x n
  std::vector<double> final_remaining;
  std::uint64_t seed = 0;
};

// Sequential second-price auctions with bid cap min(v * alpha, remaining
// budget) and the multiplicative update toward the target per-auction spend.
AdaptiveTrace adaptive_pacing(const ScaledInstance& scaled, const AdaptiveConfig& config,
                              const Tolerance& tol = {});

// Fraction of auctions of each original good type won per bidder; entries of
// never-allocated types are NaN with defined=false.
struct EmpiricalAllocation {
  Matrix fractions;            // n x m (original goods)
  std::vector<char> defined;   // per original good
};
EmpiricalAllocation empirical_allocation(const ScaledInstance& scaled, const AdaptiveTrace& trace);

// Hindsight-best utility of a single fixed multiplier against recorded rival
// bids (O(m log m) sweep; ties filled fractionally within the budget).
double best_fixed_alpha_utility(const PacingInstance& inst, int bidder, const Matrix& rival_bids,
                                const Tolerance& tol = {});

// Regret rows for an adaptive run against the recorded bids.
RegretReport adaptive_regret(const ScaledInstance& scaled, const AdaptiveTrace& trace,
                             const Tolerance& tol = {});

// Constant multipliers and fractions are a stable solution of the limit
// dynamics iff no multiplier would ever be adjusted: budget-exhausting
// bidders spend at exactly their budget rate, everyone else is unpaced.
// Implemented by rate bookkeeping, independent of verify_equilibrium.
Verdict stability_check(const PacingInstance& inst, const PacingOutcome& outcome,
                        const Tolerance& tol = {});

struct InitSpec {
  enum class Kind { kMip, kConstant } kind = Kind::kConstant;
  double value = 0.5;  // constant inits
  std::string label() const;
};

struct WarmStartRow {
  int scale_index = 0;
  double sigma = 0.0;
  int factor = 1;
  std::string init;
  double step = 0.0;
  double alpha_min = 0.0;
  double max_rel_regret = 0.0;
  double mean_rel_regret = 0.0;
  bool mip_skipped = false;  // MIP seed unavailable (timeout)
};

// Grid of adaptive runs over scale configs x inits x step sizes x minimum
// multipliers; MIP inits come from the feasibility MIP on the base instance.
std::vector<WarmStartRow> warm_start_study(const PacingInstance& base,
                                           const std::vector<ScaleConfig>& scales,
                                           const std::vector<InitSpec>& inits,
                                           const std::vector<double>& step_grid,
                                           const std::vector<double>& alpha_min_grid,
                                           const SolverConfig& solver_config,
                                           const Tolerance& tol = {});

}  // namespace pacing
