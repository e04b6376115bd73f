#include "pacing/best_response.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pacing {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double top_rival_bid(const Matrix& rival_bids, int bidder, int n, int j) {
  double top = 0.0;
  for (int i = 0; i < n; ++i) {
    if (i == bidder) continue;
    top = std::max(top, rival_bids[i][j]);
  }
  return top;
}

int rivals_at_top(const Matrix& rival_bids, int bidder, int n, int j, double top, double eps) {
  int k = 0;
  for (int i = 0; i < n; ++i) {
    if (i == bidder) continue;
    if (rival_bids[i][j] >= top - eps) ++k;
  }
  return k;
}

}  // namespace

ResponseEval evaluate_response(const PacingInstance& inst, int bidder, const Matrix& rival_bids,
                               double alpha, const Tolerance& tol, TieModel model) {
  inst.validate();
  if (bidder < 0 || bidder >= inst.n) throw std::invalid_argument("evaluate_response: bad bidder index");
  if (static_cast<int>(rival_bids.size()) != inst.n)
    throw std::invalid_argument("evaluate_response: rival_bids must be n x m");

  ResponseEval ev;
  ev.fractions.assign(static_cast<std::size_t>(inst.m), 0.0);
  double budget = inst.budgets[bidder];
  bool unlimited = inst.unlimited(bidder);

  std::vector<int> ties;
  for (int j = 0; j < inst.m; ++j) {
    double h = top_rival_bid(rival_bids, bidder, inst.n, j);
    double bid = alpha * inst.values[bidder][j];
    double eps = tol.eps_tie * std::max(1.0, h);
    if (bid > h + eps) {
      ev.fractions[j] = 1.0;
      ev.spend += h;
      ev.utility += inst.values[bidder][j] - h;
    } else if (inst.values[bidder][j] > 0.0 && bid >= h - eps) {
      ties.push_back(j);
    }
  }

  auto overspends = [&](double amount) {
    return !unlimited && amount > budget + tol.eps_feas * std::max(1.0, budget);
  };

  if (overspends(ev.spend)) {
    ev.over_budget = true;
    ev.overspend = ev.spend - budget;
    ev.utility = kNegInf;
    return ev;
  }

  if (model == TieModel::kRandomTie) {
    // The bidder may win every tie; a multiplier that could overspend is out.
    double worst = ev.spend;
    for (int j : ties) worst += top_rival_bid(rival_bids, bidder, inst.n, j);
    if (overspends(worst)) {
      ev.over_budget = true;
      ev.overspend = worst - budget;
      ev.utility = kNegInf;
      return ev;
    }
    for (int j : ties) {
      double h = top_rival_bid(rival_bids, bidder, inst.n, j);
      double eps = tol.eps_tie * std::max(1.0, h);
      int k = 1 + rivals_at_top(rival_bids, bidder, inst.n, j, h, eps);
      ev.fractions[j] = 1.0 / k;
      ev.spend += h / k;
      ev.utility += (inst.values[bidder][j] - h) / k;
    }
    return ev;
  }

  // Fractional model: fill ties by bang-per-buck. Tied bids satisfy v >= h
  // (alpha <= 1), so every tied unit has non-negative margin; free ties are
  // taken whole.
  std::sort(ties.begin(), ties.end(), [&](int a, int b) {
    double ha = top_rival_bid(rival_bids, bidder, inst.n, a);
    double hb = top_rival_bid(rival_bids, bidder, inst.n, b);
    double ra = ha > 0.0 ? inst.values[bidder][a] / ha : std::numeric_limits<double>::infinity();
    double rb = hb > 0.0 ? inst.values[bidder][b] / hb : std::numeric_limits<double>::infinity();
    if (ra != rb) return ra > rb;
    return a < b;
  });
  double remaining = unlimited ? std::numeric_limits<double>::infinity() : budget - ev.spend;
  for (int j : ties) {
    double h = top_rival_bid(rival_bids, bidder, inst.n, j);
    double frac;
    if (h <= tol.eps_feas) {
      frac = 1.0;
    } else if (remaining <= 0.0) {
      continue;
    } else {
      frac = std::min(1.0, remaining / h);
      remaining -= frac * h;
      ev.spend += frac * h;
    }
    ev.fractions[j] = frac;
    ev.utility += frac * (inst.values[bidder][j] - h);
  }
  return ev;
}

BestResponse best_response(const PacingInstance& inst, int bidder, const Matrix& rival_bids,
                           const Tolerance& tol, TieBreak tie, TieModel model) {
  inst.validate();
  if (bidder < 0 || bidder >= inst.n) throw std::invalid_argument("best_response: bad bidder index");
  for (int i = 0; i < inst.n; ++i) {
    if (i == bidder) continue;
    for (int j = 0; j < inst.m; ++j) {
      double b = rival_bids[i][j];
      if (std::isnan(b) || std::isinf(b) || b < 0.0)
        throw std::invalid_argument("best_response: rival bids must be finite and non-negative");
    }
  }

  // Critical multipliers: each rival top bid divided by the own value.
  std::vector<double> crit{0.0, 1.0};
  for (int j = 0; j < inst.m; ++j) {
    double vij = inst.values[bidder][j];
    if (vij <= 0.0) continue;
    double c = top_rival_bid(rival_bids, bidder, inst.n, j) / vij;
    if (c > 0.0 && c < 1.0) crit.push_back(c);
  }
  std::sort(crit.begin(), crit.end());
  crit.erase(std::unique(crit.begin(), crit.end(),
                         [](double a, double b) { return std::fabs(a - b) <= 1e-15; }),
             crit.end());

  // Candidate segments: each critical point, and the open interval between
  // consecutive ones (utility is constant there: the win set cannot change).
  struct Segment {
    AlphaInterval box;
    double rep;
    double utility = kNegInf;
    bool feasible = false;
  };
  std::vector<Segment> segs;
  for (std::size_t k = 0; k < crit.size(); ++k) {
    segs.push_back({{crit[k], crit[k], false, false}, crit[k], kNegInf, false});
    if (k + 1 < crit.size() && crit[k + 1] - crit[k] > 1e-14)
      segs.push_back({{crit[k], crit[k + 1], true, true}, 0.5 * (crit[k] + crit[k + 1]), kNegInf, false});
  }

  double best = kNegInf;
  for (auto& seg : segs) {
    ResponseEval ev = evaluate_response(inst, bidder, rival_bids, seg.rep, tol, model);
    seg.feasible = !ev.over_budget;
    seg.utility = ev.utility;
    if (seg.feasible) best = std::max(best, seg.utility);
  }

  BestResponse res;
  res.utility = best;  // the alpha = 0 plateau is always affordable
  double utol = 1e-9 * std::max(1.0, std::fabs(best));
  res.only_zero_feasible = true;
  for (const auto& seg : segs) {
    if (!seg.feasible) continue;
    if (seg.box.hi > tol.eps_tie) res.only_zero_feasible = false;
    if (seg.utility >= best - utol) {
      if (!res.optimal_set.empty()) {
        AlphaInterval& last = res.optimal_set.back();
        // Merge only when the junction point itself is covered.
        if (std::fabs(last.hi - seg.box.lo) <= 1e-15 && (!last.hi_open || !seg.box.lo_open)) {
          last.hi = seg.box.hi;
          last.hi_open = seg.box.hi_open;
          continue;
        }
      }
      res.optimal_set.push_back(seg.box);
    }
  }

  res.alpha = pick_alpha(res.optimal_set, tie, tol.eps_tie);
  res.fractions = evaluate_response(inst, bidder, rival_bids, res.alpha, tol, model).fractions;
  return res;
}

double pick_alpha(const std::vector<AlphaInterval>& optimal_set, TieBreak tie, double eps_tie) {
  if (optimal_set.empty()) return 0.0;
  if (tie == TieBreak::kHigh) {
    const AlphaInterval& seg = optimal_set.back();
    if (!seg.hi_open) return seg.hi;
    return seg.hi - std::min(eps_tie, 0.5 * (seg.hi - seg.lo));
  }
  const AlphaInterval& seg = optimal_set.front();
  if (!seg.lo_open) return seg.lo;
  return seg.lo + std::min(eps_tie, 0.5 * (seg.hi - seg.lo));
}

}  // namespace pacing
