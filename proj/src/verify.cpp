#include "pacing/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pacing {

const char* violation_code_name(ViolationCode code) {
  switch (code) {
    case ViolationCode::kDimensionMismatch: return "dimension_mismatch";
    case ViolationCode::kNanInput: return "nan_input";
    case ViolationCode::kDomain: return "domain";
    case ViolationCode::kAllocationSum: return "allocation_sum";
    case ViolationCode::kNotTopBid: return "not_top_bid";
    case ViolationCode::kPriceMismatch: return "price_mismatch";
    case ViolationCode::kSpendMismatch: return "spend_mismatch";
    case ViolationCode::kBudgetExceeded: return "budget_exceeded";
    case ViolationCode::kUnderspendAlpha: return "underspend_alpha";
    case ViolationCode::kDemandOrder: return "demand_order";
    case ViolationCode::kDemandUnmet: return "demand_unmet";
    case ViolationCode::kOverpricedBuy: return "overpriced_buy";
  }
  return "unknown";
}

namespace {

void add(Verdict& v, ViolationCode code, int bidder, int good, std::string detail) {
  v.accepted = false;
  v.violations.push_back({code, bidder, good, std::move(detail)});
}

std::string fmt(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

bool check_dims_outcome(const PacingInstance& inst, const PacingOutcome& out, Verdict& v) {
  if (out.n() != inst.n || out.m() != inst.m ||
      static_cast<int>(out.fractions.size()) != inst.n ||
      static_cast<int>(out.spends.size()) != inst.n) {
    add(v, ViolationCode::kDimensionMismatch, -1, -1, "outcome dimensions do not match instance");
    return false;
  }
  for (int i = 0; i < inst.n; ++i) {
    if (static_cast<int>(out.fractions[i].size()) != inst.m ||
        static_cast<int>(out.spends[i].size()) != inst.m) {
      add(v, ViolationCode::kDimensionMismatch, i, -1, "outcome row width does not match m");
      return false;
    }
  }
  return true;
}

bool has_nan(const PacingOutcome& out) {
  for (double a : out.alphas)
    if (std::isnan(a)) return true;
  for (double p : out.prices)
    if (std::isnan(p)) return true;
  for (const auto& row : out.fractions)
    for (double x : row)
      if (std::isnan(x)) return true;
  for (const auto& row : out.spends)
    for (double s : row)
      if (std::isnan(s)) return true;
  return false;
}

}  // namespace

ObjectiveValues objectives(const PacingInstance& inst, const PacingOutcome& out) {
  inst.validate();
  Verdict dims;
  if (!check_dims_outcome(inst, out, dims)) throw std::invalid_argument("objectives: dimension mismatch");
  ObjectiveValues obj;
  for (int i = 0; i < inst.n; ++i) {
    for (int j = 0; j < inst.m; ++j) {
      obj.revenue += out.spends[i][j];
      obj.social_welfare += out.fractions[i][j] * inst.values[i][j];
      obj.paced_welfare += out.fractions[i][j] * out.alphas[i] * inst.values[i][j];
    }
  }
  return obj;
}

Verdict verify_equilibrium(const PacingInstance& inst, const PacingOutcome& out, const Tolerance& tol) {
  inst.validate();
  Verdict v;
  if (!check_dims_outcome(inst, out, v)) return v;
  if (has_nan(out)) {
    add(v, ViolationCode::kNanInput, -1, -1, "NaN in outcome");
    return v;
  }

  for (int i = 0; i < inst.n; ++i) {
    double a = out.alphas[i];
    if (a < -tol.eps_feas || a > 1.0 + tol.eps_feas)
      add(v, ViolationCode::kDomain, i, -1, "alpha outside [0,1]: " + fmt(a));
  }

  for (int j = 0; j < inst.m; ++j) {
    if (out.prices[j] < -tol.eps_feas)
      add(v, ViolationCode::kDomain, -1, j, "negative price " + fmt(out.prices[j]));

    double top = 0.0;
    bool someone_values = false;
    for (int i = 0; i < inst.n; ++i) {
      top = std::max(top, out.alphas[i] * inst.values[i][j]);
      if (inst.values[i][j] > 0.0) someone_values = true;
    }

    double alloc = 0.0;
    for (int i = 0; i < inst.n; ++i) {
      double x = out.fractions[i][j];
      if (x < -tol.eps_feas || x > 1.0 + tol.eps_feas)
        add(v, ViolationCode::kDomain, i, j, "fraction outside [0,1]: " + fmt(x));
      alloc += x;

      if (!close(out.spends[i][j], out.prices[j] * x, tol.eps_feas, out.prices[j]))
        add(v, ViolationCode::kSpendMismatch, i, j,
            "s=" + fmt(out.spends[i][j]) + " vs p*x=" + fmt(out.prices[j] * x));

      if (x > tol.eps_feas) {
        double bid = out.alphas[i] * inst.values[i][j];
        if (bid < top - tol.eps_tie * std::max(1.0, top))
          add(v, ViolationCode::kNotTopBid, i, j, "bid " + fmt(bid) + " below top " + fmt(top));
        double highest_other = 0.0;
        for (int k = 0; k < inst.n; ++k)
          if (k != i) highest_other = std::max(highest_other, out.alphas[k] * inst.values[k][j]);
        if (!close(out.prices[j], highest_other, tol.eps_feas, std::max(out.prices[j], highest_other)))
          add(v, ViolationCode::kPriceMismatch, i, j,
              "p=" + fmt(out.prices[j]) + " vs highest other bid " + fmt(highest_other));
      }
    }

    if (alloc > 1.0 + tol.eps_feas)
      add(v, ViolationCode::kAllocationSum, -1, j, "allocation sums to " + fmt(alloc));
    if (someone_values && !close(alloc, 1.0, tol.eps_feas))
      add(v, ViolationCode::kAllocationSum, -1, j, "valued good not fully allocated: " + fmt(alloc));
  }

  for (int i = 0; i < inst.n; ++i) {
    double spend = 0.0;
    for (int j = 0; j < inst.m; ++j) spend += out.spends[i][j];
    if (inst.unlimited(i)) {
      if (!close(out.alphas[i], 1.0, tol.eps_tie))
        add(v, ViolationCode::kUnderspendAlpha, i, -1, "unlimited budget but alpha=" + fmt(out.alphas[i]));
      continue;
    }
    double budget = inst.budgets[i];
    if (spend > budget + tol.eps_feas * std::max(1.0, budget))
      add(v, ViolationCode::kBudgetExceeded, i, -1, "spend " + fmt(spend) + " over budget " + fmt(budget));
    else if (spend < budget - tol.eps_feas * std::max(1.0, budget) &&
             !close(out.alphas[i], 1.0, tol.eps_tie))
      add(v, ViolationCode::kUnderspendAlpha, i, -1,
          "underspend (" + fmt(spend) + " < " + fmt(budget) + ") with alpha=" + fmt(out.alphas[i]));
  }

  return v;
}

Verdict verify_competitive(const PacingInstance& inst, const CompetitiveOutcome& ce, const Tolerance& tol) {
  inst.validate();
  Verdict v;
  if (static_cast<int>(ce.prices.size()) != inst.m ||
      static_cast<int>(ce.fractions.size()) != inst.n) {
    add(v, ViolationCode::kDimensionMismatch, -1, -1, "CE dimensions do not match instance");
    return v;
  }
  for (int i = 0; i < inst.n; ++i)
    if (static_cast<int>(ce.fractions[i].size()) != inst.m) {
      add(v, ViolationCode::kDimensionMismatch, i, -1, "CE row width does not match m");
      return v;
    }

  // Supply side: nothing oversold; positive prices clear; free valued goods
  // fully taken by bidders valuing them.
  for (int j = 0; j < inst.m; ++j) {
    if (ce.prices[j] < -tol.eps_feas)
      add(v, ViolationCode::kDomain, -1, j, "negative price " + fmt(ce.prices[j]));
    double alloc = 0.0, alloc_valuing = 0.0;
    bool someone_values = false;
    for (int i = 0; i < inst.n; ++i) {
      double x = ce.fractions[i][j];
      if (x < -tol.eps_feas || x > 1.0 + tol.eps_feas)
        add(v, ViolationCode::kDomain, i, j, "fraction outside [0,1]: " + fmt(x));
      alloc += x;
      if (inst.values[i][j] > tol.eps_feas) {
        someone_values = true;
        alloc_valuing += x;
      }
    }
    if (alloc > 1.0 + tol.eps_feas)
      add(v, ViolationCode::kAllocationSum, -1, j, "allocation sums to " + fmt(alloc));
    if (ce.prices[j] > tol.eps_feas && !close(alloc, 1.0, tol.eps_feas))
      add(v, ViolationCode::kAllocationSum, -1, j, "positively priced good not cleared: " + fmt(alloc));
    if (ce.prices[j] <= tol.eps_feas && someone_values && !close(alloc_valuing, 1.0, tol.eps_feas))
      add(v, ViolationCode::kAllocationSum, -1, j, "free valued good not fully taken: " + fmt(alloc_valuing));
  }

  // Demand side, bidder by bidder.
  for (int i = 0; i < inst.n; ++i) {
    double spend = 0.0;
    for (int j = 0; j < inst.m; ++j) spend += ce.fractions[i][j] * ce.prices[j];
    double budget = inst.budgets[i];
    bool exhausted = !inst.unlimited(i) && spend >= budget - tol.eps_feas * std::max(1.0, budget);
    if (!inst.unlimited(i) && spend > budget + tol.eps_feas * std::max(1.0, budget))
      add(v, ViolationCode::kBudgetExceeded, i, -1, "spend " + fmt(spend) + " over budget " + fmt(budget));

    for (int j = 0; j < inst.m; ++j) {
      double x = ce.fractions[i][j];
      double vij = inst.values[i][j];
      double pj = ce.prices[j];
      if (x > tol.eps_feas && vij < pj - tol.eps_feas * std::max(1.0, pj))
        add(v, ViolationCode::kOverpricedBuy, i, j, "bought at price " + fmt(pj) + " above value " + fmt(vij));
      // Free value is always demanded in full, budget notwithstanding.
      if (pj <= tol.eps_feas && vij > tol.eps_feas && !close(x, 1.0, tol.eps_feas))
        add(v, ViolationCode::kDemandUnmet, i, j, "free valued good taken only at " + fmt(x));
      // An unexhausted bidder must fully buy anything priced below value.
      if (!exhausted && pj > tol.eps_feas && vij > pj + tol.eps_feas * std::max(1.0, pj) &&
          !close(x, 1.0, tol.eps_feas))
        add(v, ViolationCode::kDemandUnmet, i, j,
            "value " + fmt(vij) + " above price " + fmt(pj) + " but fraction " + fmt(x));
    }

    // Purchases must follow non-increasing bang-per-buck: an item bought while
    // a strictly better-ratio item stays partially unbought is suboptimal.
    for (int j = 0; j < inst.m; ++j) {
      if (ce.prices[j] <= tol.eps_feas || inst.values[i][j] <= tol.eps_feas) continue;
      double ratio_j = inst.values[i][j] / ce.prices[j];
      if (ratio_j < 1.0 - tol.eps_feas) continue;  // never demanded
      if (ce.fractions[i][j] >= 1.0 - tol.eps_feas) continue;
      for (int k = 0; k < inst.m; ++k) {
        if (k == j || ce.prices[k] <= tol.eps_feas) continue;
        if (ce.fractions[i][k] <= tol.eps_feas) continue;
        double ratio_k = inst.values[i][k] / ce.prices[k];
        if (ratio_j > ratio_k * (1.0 + tol.eps_tie) + tol.eps_tie)
          add(v, ViolationCode::kDemandOrder, i, j,
              "bought good " + std::to_string(k) + " (ratio " + fmt(ratio_k) +
                  ") before exhausting good " + std::to_string(j) + " (ratio " + fmt(ratio_j) + ")");
      }
    }
  }

  return v;
}

}  // namespace pacing
