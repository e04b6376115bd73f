#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pacing/lp.hpp"
#include "pacing/types.hpp"

namespace pacing {

enum class MilpObjective {
  kFeasibility,
  kRelaxedFeasibility,  // slack z_i on the complementarity constraint, minimized
  kMaxRevenue,
  kMinRevenue,
  kMaxPacedWelfare,
  kMinPacedWelfare,
};

const char* objective_name(MilpObjective o);
MilpObjective objective_from_name(const std::string& name);

// The pacing-equilibrium MILP. Continuous alpha_i, s_ij, p_j, h_j (plus z_i
// in relaxed mode); binary d_ij, y_i, w_ij, r_ij. Rows are the thirteen
// constraint families; binaries are relaxed to [0,1] in `lp` and enforced by
// the branch-and-bound layer.
struct MilpModel {
  PacingInstance original;  // as handed in
  PacingInstance game;      // padded to n >= 2, unlimited budgets replaced
  bool padded = false;
  MilpObjective objective = MilpObjective::kFeasibility;
  int n = 0, m = 0;              // dimensions of `game`
  std::vector<double> vbar;      // per-good max value
  double obj_scale = 0.0;        // reported objective = obj_scale * lp objective
  LpModel lp;
  std::vector<int> binaries;     // branching order: w, r, d, y

  int v_alpha(int i) const { return i; }
  int v_s(int i, int j) const { return n + i * m + j; }
  int v_p(int j) const { return n + n * m + j; }
  int v_h(int j) const { return n + n * m + m + j; }
  int v_d(int i, int j) const { return n + n * m + 2 * m + i * m + j; }
  int v_y(int i) const { return n + 2 * n * m + 2 * m + i; }
  int v_w(int i, int j) const { return 2 * n + 2 * n * m + 2 * m + i * m + j; }
  int v_r(int i, int j) const { return 2 * n + 3 * n * m + 2 * m + i * m + j; }
  int v_z(int i) const { return 2 * n + 4 * n * m + 2 * m + i; }  // relaxed only

  bool has_z() const { return objective == MilpObjective::kRelaxedFeasibility; }
  int num_vars() const { return 2 * n + 4 * n * m + 2 * m + (has_z() ? n : 0); }
  bool is_binary_var(int v) const { return v >= v_d(0, 0) && v < v_z(0); }
};

MilpModel build_model(const PacingInstance& inst, MilpObjective objective);

// Extra lower bound on a multiplier (used by the binary-choice gadget tests).
void add_alpha_lower_bound(MilpModel& model, int bidder, double bound);

// Assignment satisfying (1)-(13) built from a verified outcome, following the
// constructive direction of the correctness argument.
std::vector<double> encode_outcome(const MilpModel& model, const PacingOutcome& outcome);

// Fractions recovered as x_ij = s_ij / p_j; zero-priced goods go wholly to
// the designated winner when it values them. Padding is stripped.
PacingOutcome decode(const MilpModel& model, const std::vector<double>& raw);

struct ResidualReport {
  double max_violation = 0.0;
  int worst_row = -1;      // -1: a variable bound
  std::string description;
};
ResidualReport check_assignment(const MilpModel& model, const std::vector<double>& x,
                                bool enforce_integrality = true);

// Plain-text export (LP format) for debugging against external solvers.
void write_lp_file(const MilpModel& model, std::ostream& os);

}  // namespace pacing
