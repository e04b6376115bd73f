#include "pacing/mip.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace pacing {

const char* objective_name(MilpObjective o) {
  switch (o) {
    case MilpObjective::kFeasibility: return "feasibility";
    case MilpObjective::kRelaxedFeasibility: return "relaxed_feasibility";
    case MilpObjective::kMaxRevenue: return "max_revenue";
    case MilpObjective::kMinRevenue: return "min_revenue";
    case MilpObjective::kMaxPacedWelfare: return "max_paced_welfare";
    case MilpObjective::kMinPacedWelfare: return "min_paced_welfare";
  }
  return "unknown";
}

MilpObjective objective_from_name(const std::string& name) {
  for (MilpObjective o : {MilpObjective::kFeasibility, MilpObjective::kRelaxedFeasibility,
                          MilpObjective::kMaxRevenue, MilpObjective::kMinRevenue,
                          MilpObjective::kMaxPacedWelfare, MilpObjective::kMinPacedWelfare})
    if (name == objective_name(o)) return o;
  throw std::invalid_argument("unknown objective: " + name);
}

MilpModel build_model(const PacingInstance& inst, MilpObjective objective) {
  inst.validate();
  MilpModel md;
  md.original = inst;
  md.game = inst;
  md.objective = objective;

  // The runner-up constraint needs a second bidder; pad with a worthless one.
  if (md.game.n == 1) {
    md.game.n = 2;
    md.game.values.push_back(std::vector<double>(static_cast<std::size_t>(md.game.m), 0.0));
    md.game.budgets.push_back(1.0);
    md.padded = true;
  }
  md.n = md.game.n;
  md.m = md.game.m;

  md.vbar.assign(static_cast<std::size_t>(md.m), 0.0);
  for (int j = 0; j < md.m; ++j)
    for (int i = 0; i < md.n; ++i) md.vbar[j] = std::max(md.vbar[j], md.game.values[i][j]);

  // Big-M terms need finite budgets; this bound exceeds any possible spend.
  double budget_cap = 1.0;
  for (int j = 0; j < md.m; ++j) budget_cap += md.vbar[j];
  for (int i = 0; i < md.n; ++i)
    if (md.game.unlimited(i)) md.game.budgets[i] = budget_cap;

  const int n = md.n, m = md.m;
  LpModel& lp = md.lp;
  for (int i = 0; i < n; ++i) lp.add_var(0.0, 1.0);                       // alpha
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) lp.add_var(0.0, md.game.budgets[i]);      // s
  for (int j = 0; j < m; ++j) lp.add_var(0.0, md.vbar[j]);                // p
  for (int j = 0; j < m; ++j) lp.add_var(0.0, md.vbar[j]);                // h
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) lp.add_var(0.0, 1.0);                     // d
  for (int i = 0; i < n; ++i) lp.add_var(0.0, 1.0);                       // y
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) lp.add_var(0.0, 1.0);                     // w
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) lp.add_var(0.0, 1.0);                     // r
  if (md.has_z())
    for (int i = 0; i < n; ++i) lp.add_var(0.0, 1.0);                     // z

  for (int i = 0; i < n; ++i) {  // (1) budget
    std::vector<std::pair<int, double>> c;
    for (int j = 0; j < m; ++j) c.push_back({md.v_s(i, j), 1.0});
    lp.add_row('L', md.game.budgets[i], std::move(c));
  }
  for (int i = 0; i < n; ++i) {  // (2) spend at least y_i B_i
    std::vector<std::pair<int, double>> c;
    for (int j = 0; j < m; ++j) c.push_back({md.v_s(i, j), 1.0});
    c.push_back({md.v_y(i), -md.game.budgets[i]});
    lp.add_row('G', 0.0, std::move(c));
  }
  for (int i = 0; i < n; ++i) {  // (3) alpha_i >= 1 - y_i (- z_i when relaxed)
    std::vector<std::pair<int, double>> c{{md.v_alpha(i), 1.0}, {md.v_y(i), 1.0}};
    if (md.has_z()) c.push_back({md.v_z(i), 1.0});
    lp.add_row('G', 1.0, std::move(c));
  }
  for (int j = 0; j < m; ++j) {  // (4) total spend equals price
    std::vector<std::pair<int, double>> c;
    for (int i = 0; i < n; ++i) c.push_back({md.v_s(i, j), 1.0});
    c.push_back({md.v_p(j), -1.0});
    lp.add_row('E', 0.0, std::move(c));
  }
  for (int i = 0; i < n; ++i)  // (5) s_ij <= B_i d_ij
    for (int j = 0; j < m; ++j)
      lp.add_row('L', 0.0, {{md.v_s(i, j), 1.0}, {md.v_d(i, j), -md.game.budgets[i]}});
  for (int i = 0; i < n; ++i)  // (6) h_j >= alpha_i v_ij
    for (int j = 0; j < m; ++j)
      lp.add_row('G', 0.0, {{md.v_h(j), 1.0}, {md.v_alpha(i), -md.game.values[i][j]}});
  for (int i = 0; i < n; ++i)  // (7) h_j <= alpha_i v_ij + (1 - d_ij) vbar_j
    for (int j = 0; j < m; ++j)
      lp.add_row('L', md.vbar[j],
                 {{md.v_h(j), 1.0}, {md.v_alpha(i), -md.game.values[i][j]}, {md.v_d(i, j), md.vbar[j]}});
  for (int i = 0; i < n; ++i)  // (8) w_ij <= d_ij
    for (int j = 0; j < m; ++j)
      lp.add_row('L', 0.0, {{md.v_w(i, j), 1.0}, {md.v_d(i, j), -1.0}});
  for (int i = 0; i < n; ++i)  // (9) p_j >= alpha_i v_ij - w_ij v_ij
    for (int j = 0; j < m; ++j)
      lp.add_row('G', 0.0,
                 {{md.v_p(j), 1.0}, {md.v_alpha(i), -md.game.values[i][j]}, {md.v_w(i, j), md.game.values[i][j]}});
  for (int i = 0; i < n; ++i)  // (10) p_j <= alpha_i v_ij + (1 - r_ij) vbar_j
    for (int j = 0; j < m; ++j)
      lp.add_row('L', md.vbar[j],
                 {{md.v_p(j), 1.0}, {md.v_alpha(i), -md.game.values[i][j]}, {md.v_r(i, j), md.vbar[j]}});
  for (int j = 0; j < m; ++j) {  // (11) exactly one designated winner
    std::vector<std::pair<int, double>> c;
    for (int i = 0; i < n; ++i) c.push_back({md.v_w(i, j), 1.0});
    lp.add_row('E', 1.0, std::move(c));
  }
  for (int j = 0; j < m; ++j) {  // (12) exactly one designated runner-up
    std::vector<std::pair<int, double>> c;
    for (int i = 0; i < n; ++i) c.push_back({md.v_r(i, j), 1.0});
    lp.add_row('E', 1.0, std::move(c));
  }
  for (int i = 0; i < n; ++i)  // (13) winner and runner-up distinct
    for (int j = 0; j < m; ++j)
      lp.add_row('L', 1.0, {{md.v_r(i, j), 1.0}, {md.v_w(i, j), 1.0}});

  switch (objective) {
    case MilpObjective::kFeasibility:
      md.obj_scale = 0.0;
      break;
    case MilpObjective::kRelaxedFeasibility:
      for (int i = 0; i < n; ++i) lp.cost[md.v_z(i)] = 1.0;
      md.obj_scale = 1.0;
      break;
    case MilpObjective::kMaxRevenue:
      for (int j = 0; j < m; ++j) lp.cost[md.v_p(j)] = -1.0;
      md.obj_scale = -1.0;
      break;
    case MilpObjective::kMinRevenue:
      for (int j = 0; j < m; ++j) lp.cost[md.v_p(j)] = 1.0;
      md.obj_scale = 1.0;
      break;
    case MilpObjective::kMaxPacedWelfare:
      for (int j = 0; j < m; ++j) lp.cost[md.v_h(j)] = -1.0;
      md.obj_scale = -1.0;
      break;
    case MilpObjective::kMinPacedWelfare:
      for (int j = 0; j < m; ++j) lp.cost[md.v_h(j)] = 1.0;
      md.obj_scale = 1.0;
      break;
  }

  // Branching order: family w, r, d, y; lowest index within a family.
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) md.binaries.push_back(md.v_w(i, j));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) md.binaries.push_back(md.v_r(i, j));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) md.binaries.push_back(md.v_d(i, j));
  for (int i = 0; i < n; ++i) md.binaries.push_back(md.v_y(i));

  return md;
}

void add_alpha_lower_bound(MilpModel& model, int bidder, double bound) {
  if (bidder < 0 || bidder >= model.n) throw std::invalid_argument("add_alpha_lower_bound: bad bidder");
  model.lp.lo[model.v_alpha(bidder)] = std::max(model.lp.lo[model.v_alpha(bidder)], bound);
}

std::vector<double> encode_outcome(const MilpModel& model, const PacingOutcome& outcome) {
  const int n = model.n, m = model.m;
  const int no = model.original.n;
  if (outcome.n() != no || outcome.m() != m)
    throw std::invalid_argument("encode_outcome: outcome does not match the model instance");

  std::vector<double> x(static_cast<std::size_t>(model.num_vars()), 0.0);
  const double eps = 1e-9;

  for (int i = 0; i < n; ++i) x[model.v_alpha(i)] = (i < no) ? outcome.alphas[i] : 1.0;
  for (int i = 0; i < no; ++i)
    for (int j = 0; j < m; ++j) x[model.v_s(i, j)] = outcome.spends[i][j];

  for (int j = 0; j < m; ++j) {
    bool any_winner = false;
    double spend_sum = 0.0;
    for (int i = 0; i < no; ++i) {
      if (outcome.fractions[i][j] > eps) any_winner = true;
      spend_sum += outcome.spends[i][j];
    }
    x[model.v_p(j)] = any_winner ? outcome.prices[j] : spend_sum;

    double h = 0.0;
    for (int i = 0; i < n; ++i) h = std::max(h, x[model.v_alpha(i)] * model.game.values[i][j]);
    x[model.v_h(j)] = h;

    // Winner: lowest-index bidder with a positive fraction. Runner-up: a
    // second fraction holder if the top is tied, otherwise the highest other
    // paced bid (lowest index on ties; any such choice is feasible).
    int winner = 0;
    for (int i = 0; i < no; ++i)
      if (outcome.fractions[i][j] > eps) {
        winner = i;
        break;
      }
    int runner = -1;
    for (int i = winner + 1; i < no && any_winner; ++i)
      if (outcome.fractions[i][j] > eps) {
        runner = i;
        break;
      }
    if (runner < 0) {
      double best = -1.0;
      for (int i = 0; i < n; ++i) {
        if (i == winner) continue;
        double bid = x[model.v_alpha(i)] * model.game.values[i][j];
        if (bid > best + eps) {
          best = bid;
          runner = i;
        }
      }
    }
    x[model.v_w(winner, j)] = 1.0;
    x[model.v_r(runner, j)] = 1.0;
    x[model.v_d(winner, j)] = 1.0;
    for (int i = 0; i < no; ++i)
      if (outcome.fractions[i][j] > eps) x[model.v_d(i, j)] = 1.0;
  }

  for (int i = 0; i < n; ++i) {
    double spend = 0.0;
    for (int j = 0; j < m; ++j) spend += x[model.v_s(i, j)];
    double budget = model.game.budgets[i];
    x[model.v_y(i)] = (spend >= budget - 1e-6 * std::max(1.0, budget)) ? 1.0 : 0.0;
  }
  return x;
}

PacingOutcome decode(const MilpModel& model, const std::vector<double>& raw) {
  const int no = model.original.n, m = model.m;
  const double ptol = 1e-7;

  PacingOutcome out;
  out.alphas.resize(static_cast<std::size_t>(no));
  out.prices.resize(static_cast<std::size_t>(m));
  out.fractions = zeros(no, m);
  out.spends = zeros(no, m);

  for (int i = 0; i < no; ++i)
    out.alphas[i] = std::clamp(raw[model.v_alpha(i)], 0.0, 1.0);

  for (int j = 0; j < m; ++j) {
    double p = std::max(0.0, raw[model.v_p(j)]);
    out.prices[j] = p;
    if (p > ptol) {
      double sum = 0.0;
      for (int i = 0; i < no; ++i) {
        double f = std::clamp(raw[model.v_s(i, j)] / p, 0.0, 1.0);
        out.fractions[i][j] = f;
        sum += f;
      }
      // Spend conservation makes the column sum 1 up to solver noise.
      if (std::fabs(sum - 1.0) <= 1e-4 && sum > 0.0)
        for (int i = 0; i < no; ++i) out.fractions[i][j] /= sum;
    } else {
      for (int i = 0; i < no; ++i) {
        if (raw[model.v_w(i, j)] > 0.5 && model.original.values[i][j] > 0.0)
          out.fractions[i][j] = 1.0;
      }
    }
    for (int i = 0; i < no; ++i) out.spends[i][j] = out.prices[j] * out.fractions[i][j];
  }
  return out;
}

ResidualReport check_assignment(const MilpModel& model, const std::vector<double>& x,
                                bool enforce_integrality) {
  ResidualReport rep;
  auto worse = [&](double viol, int row, const std::string& what) {
    if (viol > rep.max_violation) {
      rep.max_violation = viol;
      rep.worst_row = row;
      rep.description = what;
    }
  };
  for (int v = 0; v < model.lp.num_vars; ++v) {
    worse(model.lp.lo[v] - x[v], -1, "lower bound of var " + std::to_string(v));
    worse(x[v] - model.lp.up[v], -1, "upper bound of var " + std::to_string(v));
    if (enforce_integrality && model.is_binary_var(v))
      worse(std::min(std::fabs(x[v]), std::fabs(1.0 - x[v])) - 0.0, -1,
            "integrality of var " + std::to_string(v));
  }
  for (std::size_t r = 0; r < model.lp.rows.size(); ++r) {
    const LpRow& row = model.lp.rows[r];
    double act = 0.0;
    for (const auto& [c, a] : row.coef) act += a * x[c];
    double viol = 0.0;
    if (row.sense == 'L') viol = act - row.rhs;
    else if (row.sense == 'G') viol = row.rhs - act;
    else viol = std::fabs(act - row.rhs);
    worse(viol, static_cast<int>(r), "row " + std::to_string(r));
  }
  return rep;
}

namespace {

std::string var_name(const MilpModel& md, int v) {
  const int n = md.n, m = md.m;
  auto ij = [&](int base) {
    int k = v - base;
    return "_" + std::to_string(k / m) + "_" + std::to_string(k % m);
  };
  if (v < md.v_s(0, 0)) return "alpha_" + std::to_string(v);
  if (v < md.v_p(0)) return "s" + ij(md.v_s(0, 0));
  if (v < md.v_h(0)) return "p_" + std::to_string(v - md.v_p(0));
  if (v < md.v_d(0, 0)) return "h_" + std::to_string(v - md.v_h(0));
  if (v < md.v_y(0)) return "d" + ij(md.v_d(0, 0));
  if (v < md.v_w(0, 0)) return "y_" + std::to_string(v - md.v_y(0));
  if (v < md.v_r(0, 0)) return "w" + ij(md.v_w(0, 0));
  if (v < md.v_r(0, 0) + n * m) return "r" + ij(md.v_r(0, 0));
  return "z_" + std::to_string(v - md.v_z(0));
}

}  // namespace

void write_lp_file(const MilpModel& md, std::ostream& os) {
  os << "\\ pacing equilibrium model: " << objective_name(md.objective) << "\n";
  bool any_cost = false;
  for (double c : md.lp.cost)
    if (c != 0.0) any_cost = true;
  os << "Minimize\n obj:";
  if (!any_cost) os << " 0 alpha_0";
  for (int v = 0; v < md.lp.num_vars; ++v) {
    double c = md.lp.cost[v];
    if (c == 0.0) continue;
    os << (c >= 0 ? " + " : " - ") << std::fabs(c) << " " << var_name(md, v);
  }
  os << "\nSubject To\n";
  for (std::size_t r = 0; r < md.lp.rows.size(); ++r) {
    const LpRow& row = md.lp.rows[r];
    os << " c" << r << ":";
    for (const auto& [v, a] : row.coef)
      os << (a >= 0 ? " + " : " - ") << std::fabs(a) << " " << var_name(md, v);
    os << (row.sense == 'L' ? " <= " : row.sense == 'G' ? " >= " : " = ") << row.rhs << "\n";
  }
  os << "Bounds\n";
  for (int v = 0; v < md.lp.num_vars; ++v)
    os << " " << md.lp.lo[v] << " <= " << var_name(md, v) << " <= " << md.lp.up[v] << "\n";
  os << "Binary\n";
  for (int v : md.binaries) os << " " << var_name(md, v) << "\n";
  os << "End\n";
}

}  // namespace pacing
