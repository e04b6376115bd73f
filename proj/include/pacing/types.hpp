#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace pacing {

using Matrix = std::vector<std::vector<double>>;

inline constexpr double kUnlimited = std::numeric_limits<double>::infinity();

inline Matrix zeros(int rows, int cols) {
  return Matrix(static_cast<std::size_t>(rows), std::vector<double>(static_cast<std::size_t>(cols), 0.0));
}

// A pacing game: n bidders, m single-slot second-price auctions, values
// v[i][j] >= 0 and budgets B[i] > 0 (kUnlimited for an infinite budget).
struct PacingInstance {
  int n = 0;
  int m = 0;
  Matrix values;                // n x m
  std::vector<double> budgets;  // n

  bool unlimited(int i) const { return std::isinf(budgets[static_cast<std::size_t>(i)]); }

  void validate() const {
    if (n < 1 || m < 1) throw std::invalid_argument("instance: n and m must be >= 1");
    if (static_cast<int>(values.size()) != n) throw std::invalid_argument("instance: values row count != n");
    for (const auto& row : values) {
      if (static_cast<int>(row.size()) != m) throw std::invalid_argument("instance: values column count != m");
      for (double v : row) {
        if (!(v >= 0.0) || std::isnan(v)) throw std::invalid_argument("instance: values must be >= 0");
      }
    }
    if (static_cast<int>(budgets.size()) != n) throw std::invalid_argument("instance: budgets size != n");
    for (double b : budgets) {
      if (std::isnan(b) || (!(b > 0.0) && !std::isinf(b))) throw std::invalid_argument("instance: budgets must be > 0 or unlimited");
    }
  }
};

// Candidate equilibrium: multipliers, fractional allocation, per-good prices
// and the implied spends s[i][j] = p[j] * x[i][j].
struct PacingOutcome {
  std::vector<double> alphas;  // n, in [0,1]
  Matrix fractions;            // n x m, in [0,1]
  std::vector<double> prices;  // m, >= 0
  Matrix spends;               // n x m

  static PacingOutcome from_parts(std::vector<double> alphas, Matrix fractions, std::vector<double> prices) {
    PacingOutcome out;
    out.alphas = std::move(alphas);
    out.fractions = std::move(fractions);
    out.prices = std::move(prices);
    out.spends = zeros(static_cast<int>(out.fractions.size()),
                       static_cast<int>(out.prices.size()));
    for (std::size_t i = 0; i < out.fractions.size(); ++i)
      for (std::size_t j = 0; j < out.prices.size(); ++j)
        out.spends[i][j] = out.prices[j] * out.fractions[i][j];
    return out;
  }

  int n() const { return static_cast<int>(alphas.size()); }
  int m() const { return static_cast<int>(prices.size()); }
};

struct ObjectiveValues {
  double revenue = 0.0;        // sum of spends
  double social_welfare = 0.0; // sum x_ij v_ij
  double paced_welfare = 0.0;  // sum x_ij alpha_i v_ij
};

// Walrasian equilibrium with budgets: item prices plus demand-optimal bundles.
struct CompetitiveOutcome {
  std::vector<double> prices;  // m
  Matrix fractions;            // n x m
};

// Parameters of the (eps, H)-smoothed game. The existence condition requires
// penalty > value_bound / epsilon.
struct SmoothedGameParams {
  double epsilon = 0.0;      // smoothing width (currency)
  double penalty = 0.0;      // over-budget penalty rate H
  double value_bound = 0.0;  // M, upper bound on a bidder's total valuation

  bool valid() const {
    return epsilon > 0.0 && penalty > 0.0 && value_bound > 0.0 && penalty > value_bound / epsilon;
  }

  // M = max_i sum_j v_ij plus the artificial good's worth; H just above M/eps.
  static SmoothedGameParams for_instance(const PacingInstance& inst, double epsilon) {
    double m_bound = 0.0;
    for (int i = 0; i < inst.n; ++i) {
      double s = 0.0;
      for (int j = 0; j < inst.m; ++j) s += inst.values[i][j];
      m_bound = std::max(m_bound, s);
    }
    m_bound += 2.0 * epsilon;
    SmoothedGameParams p;
    p.epsilon = epsilon;
    p.value_bound = m_bound;
    p.penalty = 2.0 * m_bound / epsilon + 1.0;
    return p;
  }
};

struct Tolerance {
  double eps_feas = 1e-6;  // feasibility checks (budgets, prices, allocation)
  double eps_tie = 1e-6;   // paced-bid tie detection
};

// |a-b| within eps, with a relative guard for large magnitudes.
inline bool close(double a, double b, double eps, double scale = 1.0) {
  return std::fabs(a - b) <= eps * std::max(1.0, std::fabs(scale));
}

}  // namespace pacing
