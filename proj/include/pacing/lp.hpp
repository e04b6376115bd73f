#pragma once

#include <utility>
#include <vector>

namespace pacing {

struct LpRow {
  std::vector<std::pair<int, double>> coef;  // (var index, coefficient)
  char sense = 'L';                          // 'L' <=, 'G' >=, 'E' ==
  double rhs = 0.0;
};

// minimize cost . x  subject to rows, lo <= x <= up (bounds may be infinite)
struct LpModel {
  int num_vars = 0;
  std::vector<double> lo, up, cost;
  std::vector<LpRow> rows;

  int add_var(double lo_, double up_, double cost_ = 0.0) {
    lo.push_back(lo_);
    up.push_back(up_);
    cost.push_back(cost_);
    return num_vars++;
  }
  void add_row(char sense, double rhs, std::vector<std::pair<int, double>> coef) {
    rows.push_back({std::move(coef), sense, rhs});
  }
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterLimit };

struct LpSolution {
  LpStatus status = LpStatus::kIterLimit;
  double objective = 0.0;
  std::vector<double> x;
  long iterations = 0;
};

struct LpOptions {
  double feas_tol = 1e-7;
  double opt_tol = 1e-7;
  long max_iters = 0;  // 0: derived from problem size
};

// Dense two-phase primal simplex on bounded variables, Bland's rule fallback
// after a degenerate stall.
LpSolution solve_lp(const LpModel& model, const LpOptions& opts = {});

}  // namespace pacing
