#pragma once

#include <vector>

#include "pacing/types.hpp"

namespace pacing {

enum class TieBreak { kHigh, kLow };

// How tied-top bids resolve when evaluating a response.
//  kFractional: the bidder may take any fraction of a tied item (the
//    one-shot game's assumption); ties are filled greedily by bang-per-buck
//    within the leftover budget.
//  kRandomTie: a uniformly random tied bidder wins the whole item; the
//    expected margin (v - h)/K accrues, and a multiplier whose tied wins
//    could overspend the budget is treated as infeasible.
enum class TieModel { kFractional, kRandomTie };

struct ResponseEval {
  double utility = 0.0;
  double spend = 0.0;        // expected spend under kRandomTie
  bool over_budget = false;  // forced (or possibly-won tied) spend exceeds the budget
  double overspend = 0.0;
  std::vector<double> fractions;
};

struct AlphaInterval {
  double lo = 0.0, hi = 0.0;
  bool lo_open = false, hi_open = false;

  bool contains(double a, double eps) const {
    bool above = lo_open ? a > lo : a >= lo - eps;
    bool below = hi_open ? a < hi : a <= hi + eps;
    return above && below;
  }
};

struct BestResponse {
  double alpha = 0.0;
  std::vector<double> fractions;
  double utility = 0.0;
  // Set when every plateau except alpha ~ 0 would force overspending.
  bool only_zero_feasible = false;
  // Maximizers of utility: a union of closed points and open intervals.
  std::vector<AlphaInterval> optimal_set;
};

ResponseEval evaluate_response(const PacingInstance& inst, int bidder, const Matrix& rival_bids,
                               double alpha, const Tolerance& tol = {},
                               TieModel model = TieModel::kFractional);

// Exact search over the finite set of critical multipliers (each rival bid
// divided by each own value); utility is constant between critical points.
BestResponse best_response(const PacingInstance& inst, int bidder, const Matrix& rival_bids,
                           const Tolerance& tol = {}, TieBreak tie = TieBreak::kHigh,
                           TieModel model = TieModel::kFractional);

// Representative multiplier from the optimal set per the tie-break rule. Open
// endpoints are approached to within eps_tie.
double pick_alpha(const std::vector<AlphaInterval>& optimal_set, TieBreak tie, double eps_tie);

}  // namespace pacing
