#include "pacing/gen.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <sstream>
#include <stdexcept>

#include "pacing/rng.hpp"

namespace pacing {

const char* instance_kind_name(InstanceKind k) {
  switch (k) {
    case InstanceKind::kComplete: return "complete";
    case InstanceKind::kSampled: return "sampled";
    case InstanceKind::kCorrelated: return "correlated";
  }
  return "unknown";
}

InstanceKind instance_kind_from_name(const std::string& name) {
  for (InstanceKind k : {InstanceKind::kComplete, InstanceKind::kSampled, InstanceKind::kCorrelated})
    if (name == instance_kind_name(k)) return k;
  throw std::invalid_argument("unknown instance kind: " + name);
}

PacingInstance gen_stylized(const GenConfig& config) {
  if (config.n < 1 || config.m < 1) throw std::invalid_argument("gen_stylized: n, m must be >= 1");
  if (config.sigma < 0.0) throw std::invalid_argument("gen_stylized: sigma must be >= 0");
  Rng rng(config.seed);
  PacingInstance inst;
  inst.n = config.n;
  inst.m = config.m;
  inst.values = zeros(config.n, config.m);
  inst.budgets.assign(static_cast<std::size_t>(config.n), 1.0);

  switch (config.kind) {
    case InstanceKind::kComplete:
      for (int i = 0; i < inst.n; ++i)
        for (int j = 0; j < inst.m; ++j) inst.values[i][j] = rng.uniform();
      break;
    case InstanceKind::kSampled: {
      std::vector<std::vector<char>> edge(static_cast<std::size_t>(inst.n),
                                          std::vector<char>(static_cast<std::size_t>(inst.m), 0));
      for (int i = 0; i < inst.n; ++i)
        for (int j = 0; j < inst.m; ++j) edge[i][j] = rng.coin() ? 1 : 0;
      for (int i = 0; i < inst.n; ++i) {
        bool any = false;
        for (int j = 0; j < inst.m; ++j) any = any || edge[i][j];
        if (!any) edge[i][rng.uniform_int(0, inst.m - 1)] = 1;
      }
      for (int i = 0; i < inst.n; ++i)
        for (int j = 0; j < inst.m; ++j)
          if (edge[i][j]) inst.values[i][j] = rng.uniform();
      break;
    }
    case InstanceKind::kCorrelated: {
      std::vector<double> mu(static_cast<std::size_t>(inst.m));
      for (int j = 0; j < inst.m; ++j) mu[j] = rng.uniform();
      for (int i = 0; i < inst.n; ++i)
        for (int j = 0; j < inst.m; ++j)
          inst.values[i][j] = rng.truncated_gaussian(mu[j], config.sigma, 0.0, 1.0);
      break;
    }
  }

  for (int i = 0; i < inst.n; ++i) {
    double total = 0.0;
    for (int j = 0; j < inst.m; ++j) total += inst.values[i][j];
    // (0, hi] rather than [0, hi): budgets must stay positive.
    inst.budgets[i] = (1.0 - rng.uniform()) * (total / inst.n);
    if (!(inst.budgets[i] > 0.0)) inst.budgets[i] = 1e-9;
  }
  inst.validate();
  return inst;
}

void GadgetParams::validate() const {
  if (!(k1 > 0.0)) throw std::invalid_argument("gadget: K1 must be > 0");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("gadget: alpha must be in (0,1)");
  if (delta < 0.0) throw std::invalid_argument("gadget: delta must be >= 0");
  if (!(alpha + delta < 1.0)) throw std::invalid_argument("gadget: alpha + delta must be < 1");
  if (!(k2() > 0.0)) throw std::invalid_argument("gadget: derived K2 must be > 0");
}

PacingInstance gen_gadget(const GadgetParams& params) {
  params.validate();
  double big = params.k1 / params.alpha + params.eps();
  PacingInstance inst;
  inst.n = 2;
  inst.m = 4;
  inst.values = {{params.k2(), params.k2(), big, params.k1},
                 {params.k2(), params.k2(), params.k1, big}};
  inst.budgets = {params.k1, params.k1};
  inst.validate();
  return inst;
}

Cnf parse_dimacs(std::istream& in) {
  Cnf cnf;
  int declared_clauses = -1;
  std::string line;
  std::vector<int> lits;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == 'c') continue;
    std::istringstream ls(line);
    if (line[0] == 'p') {
      std::string p, fmt;
      ls >> p >> fmt >> cnf.num_vars >> declared_clauses;
      if (fmt != "cnf") throw std::invalid_argument("dimacs: expected 'p cnf'");
      continue;
    }
    int lit;
    while (ls >> lit) {
      if (lit == 0) {
        if (lits.empty() || lits.size() > 3)
          throw std::invalid_argument("dimacs: clauses must have 1-3 literals");
        while (lits.size() < 3) lits.push_back(lits.back());
        cnf.clauses.push_back({lits[0], lits[1], lits[2]});
        lits.clear();
      } else {
        if (std::abs(lit) > cnf.num_vars) throw std::invalid_argument("dimacs: literal out of range");
        lits.push_back(lit);
      }
    }
  }
  if (!lits.empty()) throw std::invalid_argument("dimacs: unterminated clause");
  if (declared_clauses >= 0 && declared_clauses != static_cast<int>(cnf.clauses.size()))
    throw std::invalid_argument("dimacs: clause count mismatch");
  return cnf;
}

bool brute_force_sat(const Cnf& cnf) {
  if (cnf.num_vars > 24) throw std::invalid_argument("brute_force_sat: too many variables");
  for (std::uint32_t mask = 0; mask < (1u << cnf.num_vars); ++mask) {
    bool ok = true;
    for (const auto& cl : cnf.clauses) {
      bool sat = false;
      for (int lit : cl) {
        int v = std::abs(lit) - 1;
        bool val = (mask >> v) & 1u;
        if ((lit > 0) == val) sat = true;
      }
      if (!sat) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  }
  return false;
}

SatReduction gen_3sat_revenue(const Cnf& cnf) {
  if (cnf.num_vars < 1) throw std::invalid_argument("gen_3sat_revenue: empty formula");
  for (const auto& cl : cnf.clauses)
    for (int lit : cl)
      if (lit == 0 || std::abs(lit) > cnf.num_vars)
        throw std::invalid_argument("gen_3sat_revenue: malformed clause");

  GadgetParams gp;  // K1 = 4, alpha = 1/4, delta = 0, hence K2 = 6
  const int nv = cnf.num_vars;
  const int nc = static_cast<int>(cnf.clauses.size());
  SatReduction red;
  PacingInstance& inst = red.instance;
  inst.n = 2 * nv + 1;
  inst.m = 4 * nv + nc;
  inst.values = zeros(inst.n, inst.m);
  inst.budgets.assign(static_cast<std::size_t>(inst.n), gp.k1);
  red.clause_bidder = 2 * nv;
  inst.budgets[red.clause_bidder] = kUnlimited;

  PacingInstance gadget = gen_gadget(gp);
  for (int v = 0; v < nv; ++v)
    for (int b = 0; b < 2; ++b)
      for (int g = 0; g < 4; ++g) inst.values[2 * v + b][4 * v + g] = gadget.values[b][g];

  for (int c = 0; c < nc; ++c) {
    int item = 4 * nv + c;
    inst.values[red.clause_bidder][item] = 2.0;
    for (int lit : cnf.clauses[c]) {
      int v = std::abs(lit) - 1;
      int bidder = 2 * v + (lit > 0 ? 0 : 1);
      inst.values[bidder][item] = 1.0;
    }
  }

  // Both gadget budgets (K1 each) deplete in every max-revenue equilibrium,
  // so the variable blocks contribute 2*K1 per variable; the clause items
  // contribute one unit each exactly when a satisfying profile exists.
  red.threshold = nc + 2.0 * gp.k1 * nv;
  inst.validate();
  return red;
}

namespace {

PacingOutcome outcome_of(const PacingInstance& inst, std::vector<double> alphas, Matrix fractions) {
  // Prices follow from the bids: each winner pays the highest other bid.
  std::vector<double> prices(static_cast<std::size_t>(inst.m), 0.0);
  for (int j = 0; j < inst.m; ++j) {
    int winner = -1;
    for (int i = 0; i < inst.n; ++i)
      if (fractions[i][j] > 0.0) {
        winner = i;
        break;
      }
    if (winner < 0) continue;
    double other = 0.0;
    for (int i = 0; i < inst.n; ++i)
      if (i != winner) other = std::max(other, alphas[i] * inst.values[i][j]);
    prices[j] = other;
  }
  return PacingOutcome::from_parts(std::move(alphas), std::move(fractions), std::move(prices));
}

}  // namespace

std::map<std::string, Fixture> fixtures() {
  std::map<std::string, Fixture> out;

  {
    Fixture f;
    f.instance.n = 3;
    f.instance.m = 4;
    f.instance.values = {{100, 1, 99, 100}, {1, 100, 99, 0}, {0, 0, 0, 100}};
    f.instance.budgets = {1, 1, 100};
    f.outcomes.push_back({"rev102", outcome_of(f.instance, {1, 0.01, 1},
                                               {{1, 0, 1, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}})});
    f.outcomes.push_back({"rev3", outcome_of(f.instance, {0.01, 1, 1},
                                             {{1, 0, 0, 0}, {0, 1, 1, 0}, {0, 0, 0, 1}})});
    out["revenue_gap"] = std::move(f);
  }
  {
    Fixture f;
    f.instance.n = 3;
    f.instance.m = 4;
    f.instance.values = {{100, 2, 99, 0.01}, {1, 200, 99, 1}, {0, 0, 0, 10000}};
    f.instance.budgets = {1, 2, 0.01};
    f.outcomes.push_back({"sw10399", outcome_of(f.instance, {1, 0.01, 1},
                                                {{1, 0, 1, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}})});
    f.outcomes.push_back({"sw499_99", outcome_of(f.instance, {0.01, 1, 0.0001},
                                                 {{1, 0, 0, 0}, {0, 1, 1, 0.99}, {0, 0, 0, 0.01}})});
    out["welfare_gap"] = std::move(f);
  }
  {
    Fixture f;
    f.instance.n = 2;
    f.instance.m = 4;
    f.instance.values = {{100, 1, 99, 10000}, {1, 100, 99, 0}};
    f.instance.budgets = {1, 1};
    f.outcomes.push_back({"pw10200", outcome_of(f.instance, {1, 0.01},
                                                {{1, 0, 1, 1}, {0, 1, 0, 0}})});
    f.outcomes.push_back({"pw300", outcome_of(f.instance, {0.01, 1},
                                              {{1, 0, 0, 1}, {0, 1, 1, 0}})});
    out["paced_welfare_gap"] = std::move(f);
  }
  {
    Fixture f;
    f.instance.n = 2;
    f.instance.m = 2;
    f.instance.values = {{100, 100}, {0.98, 101}};
    f.instance.budgets = {0.99, kUnlimited};
    f.outcomes.push_back({"truthful", outcome_of(f.instance, {1, 1}, {{1, 0}, {0, 1}})});
    out["misreporting"] = std::move(f);
  }
  {
    Fixture f;
    f.instance.n = 2;
    f.instance.m = 1;
    f.instance.values = {{100}, {1}};
    f.instance.budgets = {1.01, kUnlimited};
    f.outcomes.push_back({"pw100", outcome_of(f.instance, {1, 1}, {{1}, {0}})});
    out["budget_perturb_pw"] = std::move(f);
    Fixture g = out["budget_perturb_pw"];
    g.instance.budgets = {0.99, kUnlimited};
    g.outcomes.clear();
    out["budget_perturb_pw_cut"] = std::move(g);
  }
  {
    Fixture f;
    f.instance.n = 2;
    f.instance.m = 2;
    f.instance.values = {{100, 100}, {1, 101}};
    f.instance.budgets = {1.01, kUnlimited};
    f.outcomes.push_back({"rev101", outcome_of(f.instance, {1, 1}, {{1, 0}, {0, 1}})});
    out["budget_perturb_rev"] = std::move(f);
    Fixture g = out["budget_perturb_rev"];
    g.instance.budgets = {0.99, kUnlimited};
    g.outcomes.clear();
    out["budget_perturb_rev_cut"] = std::move(g);
  }
  {
    Fixture f;
    f.instance.n = 3;
    f.instance.m = 3;
    f.instance.values = {{101, 0, 0}, {100, 200, 10}, {0, 0, 1}};
    f.instance.budgets = {kUnlimited, 10.1, kUnlimited};
    CompetitiveOutcome ce;
    ce.prices = {11, 10, 1};
    ce.fractions = {{1, 0, 0}, {0, 1, 0.1}, {0, 0, 0.9}};
    f.ce = std::move(ce);
    out["ce_lower_rev"] = std::move(f);
  }
  {
    Fixture f;
    f.instance.n = 3;
    f.instance.m = 6;
    f.instance.values = {{100.0, 1300.0, 123.0, 0.0, 11.0, 0.0},
                         {0.0, 6503.0, 300.6, 501.0, 0.0, 25.0},
                         {50.0, 0.0, 0.0, 500.0, 10.0, 5.0}};
    f.instance.budgets = {60, 1300, kUnlimited};
    out["cycling"] = std::move(f);
  }
  {
    Fixture f;
    f.instance.n = 1;
    f.instance.m = 1;
    f.instance.values = {{1}};
    f.instance.budgets = {1};
    f.outcomes.push_back({"solo", outcome_of(f.instance, {1}, {{1}})});
    out["single_bidder"] = std::move(f);
  }
  return out;
}

ScaledInstance scale_instance(const PacingInstance& inst, const ScaleConfig& config) {
  inst.validate();
  if (config.factor < 1) throw std::invalid_argument("scale_instance: factor must be >= 1");
  if (config.noise_sigma < 0.0) throw std::invalid_argument("scale_instance: sigma must be >= 0");
  Rng rng(config.seed);
  ScaledInstance scaled;
  int mm = config.factor * inst.m;
  scaled.instance.n = inst.n;
  scaled.instance.m = mm;
  scaled.instance.values = zeros(inst.n, mm);
  scaled.instance.budgets.resize(static_cast<std::size_t>(inst.n));
  scaled.good_types.resize(static_cast<std::size_t>(mm));
  for (int j = 0; j < mm; ++j) scaled.good_types[j] = j % inst.m;
  for (int i = 0; i < inst.n; ++i)
    scaled.instance.budgets[i] =
        inst.unlimited(i) ? kUnlimited : inst.budgets[i] * config.factor;
  for (int i = 0; i < inst.n; ++i)
    for (int j = 0; j < mm; ++j) {
      double v = inst.values[i][scaled.good_types[j]];
      if (config.noise_sigma > 0.0) v += rng.gaussian(0.0, config.noise_sigma);
      scaled.instance.values[i][j] = std::max(0.0, v);  // values stay non-negative
    }
  scaled.instance.validate();
  return scaled;
}

}  // namespace pacing
