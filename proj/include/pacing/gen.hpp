#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pacing/types.hpp"

namespace pacing {

enum class InstanceKind { kComplete, kSampled, kCorrelated };

const char* instance_kind_name(InstanceKind k);
InstanceKind instance_kind_from_name(const std::string& name);

struct GenConfig {
  InstanceKind kind = InstanceKind::kComplete;
  int n = 0, m = 0;
  double sigma = 0.0;  // correlated family only
  std::uint64_t seed = 0;
};

// Stylized families. complete: v ~ U[0,1], B_i ~ U(0, sum_j v_ij / n].
// sampled: a fair coin decides each bidder-good interest edge (equivalent to
// a uniform subset per good), lonely bidders get one uniform good. correlated:
// column means mu_j ~ U[0,1], v_ij Gaussian(mu_j, sigma) truncated to [0,1].
PacingInstance gen_stylized(const GenConfig& config);

// Binary-decision gadget: two bidders, four items.
struct GadgetParams {
  double k1 = 4.0;
  double alpha = 0.25;
  double delta = 0.0;
  double epsilon = -1.0;  // < 0: defaults to 1e-3 * k1

  double k2() const { return (1.0 - alpha - delta) / (2.0 * alpha) * k1; }
  double eps() const { return epsilon < 0.0 ? 1e-3 * k1 : epsilon; }
  void validate() const;
};

PacingInstance gen_gadget(const GadgetParams& params);

// 3-CNF, literals +-(var+1), vars 1-indexed in literals.
struct Cnf {
  int num_vars = 0;
  std::vector<std::array<int, 3>> clauses;
};

Cnf parse_dimacs(std::istream& in);
bool brute_force_sat(const Cnf& cnf);  // num_vars <= 24

struct SatReduction {
  PacingInstance instance;
  double threshold = 0.0;  // revenue >= threshold iff satisfiable
  int clause_bidder = 0;   // index of the unlimited-budget bidder
};

// Per-variable binary gadgets (K1=4, alpha=1/4, delta=0), literal bidders
// valuing their clauses' items at 1, one unlimited bidder at 2.
SatReduction gen_3sat_revenue(const Cnf& cnf);

struct Fixture {
  PacingInstance instance;
  std::vector<std::pair<std::string, PacingOutcome>> outcomes;
  std::optional<CompetitiveOutcome> ce;
};

// Hard-coded instances with their stated equilibria: revenue_gap,
// welfare_gap, paced_welfare_gap, misreporting, budget perturbation pairs,
// ce_lower_rev (with its competitive equilibrium), cycling, single_bidder.
std::map<std::string, Fixture> fixtures();

struct ScaleConfig {
  int factor = 1;          // C >= 1
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
};

struct ScaledInstance {
  PacingInstance instance;     // n bidders, C*m auctions
  std::vector<int> good_types; // auction -> original good (0-indexed)
};

// C copies of every good in rotation, budgets scaled by C, values perturbed
// by Gaussian(0, sigma) noise clamped at zero.
ScaledInstance scale_instance(const PacingInstance& inst, const ScaleConfig& config);

}  // namespace pacing
