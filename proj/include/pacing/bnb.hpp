#pragma once

#include <optional>
#include <string>

#include "pacing/mip.hpp"
#include "pacing/types.hpp"
#include "pacing/verify.hpp"

namespace pacing {

enum class SolveStatus { kOptimal, kFeasible, kInfeasible, kTimeout };

const char* solve_status_name(SolveStatus s);

struct SolverConfig {
  double time_limit_s = 300.0;  // matches the experiments' five-minute cap
  double mip_gap = 1e-9;        // relative optimality tolerance
  double feas_tol = 1e-7;       // LP feasibility tolerance
  double int_tol = 1e-6;        // binary integrality tolerance
  enum class Backend { kEmbedded, kExternalAdapter } backend = Backend::kEmbedded;
  // Optimization stops early once the incumbent reaches this value (used by
  // decision queries such as the 3SAT reduction).
  std::optional<double> target_objective;
  bool stop_at_first_incumbent = false;  // implicit for feasibility objectives
};

struct SolveStats {
  long nodes = 0;
  long lp_iterations = 0;
  double wall_time_s = 0.0;
  long verification_rejects = 0;  // integral LP points failing the verifier
};

struct SolveResult {
  SolveStatus status = SolveStatus::kInfeasible;
  std::optional<PacingOutcome> outcome;
  std::optional<double> objective_value;  // in the objective's natural sense
  double best_bound = 0.0;                // optimistic bound, same sense
  SolveStats stats;
  double relaxed_slack_sum = 0.0;         // relaxed mode only
  bool relaxed_is_equilibrium = false;
  Verdict verdict;                        // of the returned outcome
};

// Depth-first branch and bound over the model's binaries with LP relaxation
// bounds; most-fractional branching (family order w, r, d, y on ties),
// best-bound restarts every 1000 nodes. Incumbents are decoded and verified
// before acceptance.
SolveResult solve(const MilpModel& model, const SolverConfig& config = {});

// Narrow hook for swapping in a system MILP solver. The embedded solver is
// the default and the only backend the tests require.
class MilpBackend {
 public:
  virtual ~MilpBackend() = default;
  virtual SolveResult solve(const MilpModel& model, const SolverConfig& config) = 0;
};
void register_external_backend(MilpBackend* backend);  // nullptr to clear

// Continuous relaxation with a partial binary assignment (-1 free, 0, 1).
struct LpRelaxResult {
  bool feasible = false;
  double objective = 0.0;  // natural sense
  std::vector<double> x;   // full variable vector (fixed values substituted)
};
LpRelaxResult lp_relax_solve(const MilpModel& model, const std::vector<int>& fixings,
                             double feas_tol = 1e-7);

}  // namespace pacing
