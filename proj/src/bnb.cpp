#include "pacing/bnb.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace pacing {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

MilpBackend* g_external_backend = nullptr;

// Bound tightening over the full model within the node's bounds: drops
// redundant rows, fixes implied binaries, and detects infeasibility. This is
// the only presolve beyond variable bounds.
struct Presolved {
  bool infeasible = false;
  std::vector<double> lo, up;          // tightened bounds, full var space
  std::vector<char> row_active;
};

Presolved tighten(const LpModel& lp, std::vector<double> lo, std::vector<double> up,
                  const std::vector<char>& is_binary, double tol) {
  Presolved ps;
  ps.lo = std::move(lo);
  ps.up = std::move(up);
  ps.row_active.assign(lp.rows.size(), 1);

  for (int v = 0; v < lp.num_vars; ++v)
    if (ps.lo[v] > ps.up[v] + tol) {
      ps.infeasible = true;
      return ps;
    }

  bool changed = true;
  for (int pass = 0; pass < 6 && changed; ++pass) {
    changed = false;
    for (std::size_t r = 0; r < lp.rows.size(); ++r) {
      if (!ps.row_active[r]) continue;
      const LpRow& row = lp.rows[r];

      double min_act = 0.0, max_act = 0.0;
      for (const auto& [v, a] : row.coef) {
        if (a > 0) {
          min_act += a * ps.lo[v];
          max_act += a * ps.up[v];
        } else {
          min_act += a * ps.up[v];
          max_act += a * ps.lo[v];
        }
      }

      bool need_le = row.sense != 'G';  // activity <= rhs
      bool need_ge = row.sense != 'L';  // activity >= rhs
      if (need_le && min_act > row.rhs + tol) {
        ps.infeasible = true;
        return ps;
      }
      if (need_ge && max_act < row.rhs - tol) {
        ps.infeasible = true;
        return ps;
      }
      bool le_slack = !need_le || max_act <= row.rhs + tol;
      bool ge_slack = !need_ge || min_act >= row.rhs - tol;
      if (le_slack && ge_slack) {
        ps.row_active[r] = 0;
        continue;
      }

      for (const auto& [v, a] : row.coef) {
        if (ps.up[v] - ps.lo[v] <= 1e-12) continue;
        if (need_le) {
          double rest = min_act - (a > 0 ? a * ps.lo[v] : a * ps.up[v]);
          double room = row.rhs - rest;
          if (a > 0) {
            double nb = room / a;
            if (nb < ps.up[v] - 1e-9) {
              ps.up[v] = is_binary[v] && nb < 1.0 - tol ? 0.0 : nb;
              changed = true;
            }
          } else {
            double nb = room / a;
            if (nb > ps.lo[v] + 1e-9) {
              ps.lo[v] = is_binary[v] && nb > tol ? 1.0 : nb;
              changed = true;
            }
          }
        }
        if (need_ge) {
          double rest = max_act - (a > 0 ? a * ps.up[v] : a * ps.lo[v]);
          double room = row.rhs - rest;
          if (a > 0) {
            double nb = room / a;
            if (nb > ps.lo[v] + 1e-9) {
              ps.lo[v] = is_binary[v] && nb > tol ? 1.0 : nb;
              changed = true;
            }
          } else {
            double nb = room / a;
            if (nb < ps.up[v] - 1e-9) {
              ps.up[v] = is_binary[v] && nb < 1.0 - tol ? 0.0 : nb;
              changed = true;
            }
          }
        }
        if (ps.lo[v] > ps.up[v] + tol) {
          ps.infeasible = true;
          return ps;
        }
      }
    }
  }
  return ps;
}

struct NodeLpResult {
  enum { kOk, kInfeasible, kNumeric } state = kNumeric;
  double objective = 0.0;        // minimize sense, full model
  std::vector<double> x;         // full var space
  long iterations = 0;
};

NodeLpResult solve_node_lp(const MilpModel& md, const Presolved& ps, double feas_tol) {
  NodeLpResult res;

  // Compress: fixed columns substituted, inactive rows dropped.
  const LpModel& full = md.lp;
  std::vector<int> comp_of(full.num_vars, -1);
  LpModel lp;
  double offset = 0.0;
  for (int v = 0; v < full.num_vars; ++v) {
    if (ps.up[v] - ps.lo[v] <= 1e-12) {
      offset += full.cost[v] * ps.lo[v];
      continue;
    }
    comp_of[v] = lp.add_var(ps.lo[v], ps.up[v], full.cost[v]);
  }
  for (std::size_t r = 0; r < full.rows.size(); ++r) {
    if (!ps.row_active[r]) continue;
    const LpRow& row = full.rows[r];
    double rhs = row.rhs;
    std::vector<std::pair<int, double>> coef;
    for (const auto& [v, a] : row.coef) {
      if (comp_of[v] < 0) rhs -= a * ps.lo[v];
      else coef.push_back({comp_of[v], a});
    }
    if (coef.empty()) {
      bool ok = (row.sense == 'L' && 0.0 <= rhs + feas_tol) ||
                (row.sense == 'G' && 0.0 >= rhs - feas_tol) ||
                (row.sense == 'E' && std::fabs(rhs) <= feas_tol);
      if (!ok) {
        res.state = NodeLpResult::kInfeasible;
        return res;
      }
      continue;
    }
    lp.add_row(row.sense, rhs, std::move(coef));
  }

  LpOptions opts;
  opts.feas_tol = feas_tol;
  LpSolution sol = solve_lp(lp, opts);
  res.iterations = sol.iterations;
  if (sol.status == LpStatus::kInfeasible) {
    res.state = NodeLpResult::kInfeasible;
    return res;
  }
  if (sol.status != LpStatus::kOptimal) {
    res.state = NodeLpResult::kNumeric;
    return res;
  }
  res.state = NodeLpResult::kOk;
  res.objective = sol.objective + offset;
  res.x.assign(full.num_vars, 0.0);
  for (int v = 0; v < full.num_vars; ++v)
    res.x[v] = comp_of[v] >= 0 ? sol.x[comp_of[v]] : ps.lo[v];
  return res;
}

struct Node {
  std::vector<signed char> fix;  // per binary index in md.binaries: -1,0,1
  double bound;                  // minimize sense
  long id;
};

}  // namespace

const char* solve_status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kFeasible: return "feasible";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kTimeout: return "timeout";
  }
  return "unknown";
}

void register_external_backend(MilpBackend* backend) { g_external_backend = backend; }

LpRelaxResult lp_relax_solve(const MilpModel& model, const std::vector<int>& fixings,
                             double feas_tol) {
  if (fixings.size() != model.binaries.size())
    throw std::invalid_argument("lp_relax_solve: fixings size must match binary count");
  std::vector<double> lo = model.lp.lo, up = model.lp.up;
  for (std::size_t k = 0; k < fixings.size(); ++k) {
    if (fixings[k] < 0) continue;
    lo[model.binaries[k]] = up[model.binaries[k]] = static_cast<double>(fixings[k]);
  }
  std::vector<char> isbin(model.lp.num_vars, 0);
  for (int b : model.binaries) isbin[b] = 1;
  Presolved ps = tighten(model.lp, std::move(lo), std::move(up), isbin, feas_tol);
  LpRelaxResult out;
  if (ps.infeasible) return out;
  NodeLpResult nl = solve_node_lp(model, ps, feas_tol);
  if (nl.state != NodeLpResult::kOk) return out;
  out.feasible = true;
  out.objective = model.obj_scale == 0.0 ? 0.0 : model.obj_scale * nl.objective;
  out.x = std::move(nl.x);
  return out;
}

SolveResult solve(const MilpModel& md, const SolverConfig& config) {
  if (config.backend == SolverConfig::Backend::kExternalAdapter) {
    if (!g_external_backend) throw std::runtime_error("no external MILP backend registered");
    return g_external_backend->solve(md, config);
  }

  auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  SolveResult res;
  const std::size_t nbin = md.binaries.size();
  std::vector<char> isbin(md.lp.num_vars, 0);
  for (int b : md.binaries) isbin[b] = 1;

  const bool feas_only = md.objective == MilpObjective::kFeasibility;
  bool stop_first = config.stop_at_first_incumbent || feas_only;

  double inc_val = kInf;  // minimize sense
  std::optional<PacingOutcome> inc_outcome;
  Verdict inc_verdict;
  double inc_zsum = 0.0;
  bool inc_is_eq = false;

  std::vector<Node> open;
  open.push_back({std::vector<signed char>(nbin, -1), -kInf, 0});
  long next_id = 1;
  long processed = 0;
  bool timed_out = false;
  bool target_hit = false;
  double min_closed_bound = kInf;  // bounds of subtrees closed without full exploration

  auto gap_margin = [&] {
    return inc_val == kInf ? 0.0 : config.mip_gap * std::max(1.0, std::fabs(inc_val));
  };

  while (!open.empty()) {
    if (elapsed() > config.time_limit_s) {
      timed_out = true;
      break;
    }

    // Depth-first, with a best-bound restart every 1000 nodes.
    std::size_t pick = open.size() - 1;
    if (processed > 0 && processed % 1000 == 0) {
      for (std::size_t k = 0; k < open.size(); ++k)
        if (open[k].bound < open[pick].bound ||
            (open[k].bound == open[pick].bound && open[k].id < open[pick].id))
          pick = k;
    }
    Node node = std::move(open[pick]);
    open.erase(open.begin() + static_cast<std::ptrdiff_t>(pick));
    ++processed;

    if (node.bound >= inc_val - gap_margin()) continue;

    std::vector<double> lo = md.lp.lo, up = md.lp.up;
    for (std::size_t k = 0; k < nbin; ++k) {
      if (node.fix[k] < 0) continue;
      lo[md.binaries[k]] = up[md.binaries[k]] = static_cast<double>(node.fix[k]);
    }
    Presolved ps = tighten(md.lp, std::move(lo), std::move(up), isbin, config.feas_tol);
    if (ps.infeasible) continue;

    NodeLpResult nl = solve_node_lp(md, ps, config.feas_tol);
    res.stats.lp_iterations += nl.iterations;
    if (nl.state == NodeLpResult::kInfeasible) continue;

    double bound = node.bound;
    if (nl.state == NodeLpResult::kOk) {
      bound = std::max(bound, nl.objective);
      if (bound >= inc_val - gap_margin()) continue;
    }

    // Branch variable: most fractional binary, ties by family order w,r,d,y
    // then index (the order of md.binaries).
    int branch = -1;
    double best_frac = config.int_tol;
    if (nl.state == NodeLpResult::kOk) {
      for (std::size_t k = 0; k < nbin; ++k) {
        double v = nl.x[md.binaries[k]];
        double frac = std::min(v, 1.0 - v);
        if (frac > best_frac + 1e-12) {
          best_frac = frac;
          branch = static_cast<int>(k);
        }
      }
    } else {
      // Numerical failure: keep the parent bound and branch on the first
      // unfixed binary so the subtree is not lost.
      for (std::size_t k = 0; k < nbin; ++k)
        if (node.fix[k] < 0 && ps.up[md.binaries[k]] - ps.lo[md.binaries[k]] > 0.5) {
          branch = static_cast<int>(k);
          break;
        }
      if (branch < 0) {
        min_closed_bound = std::min(min_closed_bound, bound == -kInf ? -kInf : bound);
        continue;  // fully fixed yet numerically unsolved; give up on the node
      }
    }

    if (branch < 0) {
      // Integral point: decode, verify, maybe accept.
      PacingOutcome out = decode(md, nl.x);
      Verdict verdict = verify_equilibrium(md.original, out);
      double zsum = 0.0;
      if (md.has_z())
        for (int i = 0; i < md.n; ++i) zsum += nl.x[md.v_z(i)];
      bool acceptable = md.has_z() ? true : verdict.accepted;
      if (!acceptable) {
        ++res.stats.verification_rejects;
        continue;
      }
      if (nl.objective < inc_val) {
        inc_val = nl.objective;
        inc_outcome = std::move(out);
        inc_verdict = std::move(verdict);
        inc_zsum = zsum;
        inc_is_eq = md.has_z() ? (zsum <= 1e-6 && inc_verdict.accepted) : true;
      }
      if (stop_first) break;
      if (config.target_objective && md.obj_scale != 0.0) {
        double reported = md.obj_scale * inc_val;
        bool maximizing = md.obj_scale < 0.0;
        if ((maximizing && reported >= *config.target_objective - 1e-9) ||
            (!maximizing && reported <= *config.target_objective + 1e-9)) {
          target_hit = true;
          break;
        }
      }
      continue;
    }

    Node zero{node.fix, bound, next_id++};
    zero.fix[static_cast<std::size_t>(branch)] = 0;
    Node one{node.fix, bound, next_id++};
    one.fix[static_cast<std::size_t>(branch)] = 1;
    open.push_back(std::move(zero));
    open.push_back(std::move(one));  // the 1-branch explored first
  }

  res.stats.wall_time_s = elapsed();
  res.stats.nodes = processed;

  double open_bound = min_closed_bound;
  for (const Node& nd : open) open_bound = std::min(open_bound, nd.bound);
  bool exhausted = open.empty() && min_closed_bound == kInf;

  if (inc_outcome) {
    res.outcome = std::move(inc_outcome);
    res.verdict = std::move(inc_verdict);
    res.objective_value = md.obj_scale == 0.0 ? 0.0 : md.obj_scale * inc_val;
    res.relaxed_slack_sum = inc_zsum;
    res.relaxed_is_equilibrium = inc_is_eq;
    if (timed_out) res.status = SolveStatus::kTimeout;
    else if (feas_only || stop_first || target_hit) res.status = SolveStatus::kFeasible;
    else if (exhausted || open_bound >= inc_val - gap_margin()) res.status = SolveStatus::kOptimal;
    else res.status = SolveStatus::kFeasible;
    double bb = std::min(inc_val, open_bound);
    res.best_bound = md.obj_scale == 0.0 ? 0.0 : md.obj_scale * bb;
  } else {
    res.status = timed_out ? SolveStatus::kTimeout : SolveStatus::kInfeasible;
    double bb = std::min(open_bound, inc_val);
    res.best_bound = md.obj_scale == 0.0 || bb == kInf || bb == -kInf ? 0.0 : md.obj_scale * bb;
  }
  return res;
}

}  // namespace pacing
