#include "pacing/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace pacing {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Tableau {
  int nrows, ncols;              // ncols = structurals + slacks + artificials
  int nstruct, nslack;
  std::vector<double> t;         // row-major nrows x ncols, equals B^-1 A
  std::vector<double> lo, up;    // per column
  std::vector<double> xval;      // per column
  std::vector<double> dcost;     // reduced costs per column
  std::vector<int> basic;        // row -> col
  std::vector<int> pos_in_basis; // col -> row or -1
  std::vector<signed char> at_up;// nonbasic rest bound: 1 up, 0 lo
  std::vector<double> art_sign;  // per row, +-1 of the artificial coefficient
  std::vector<double> rhs;       // original row rhs

  double& at(int r, int c) { return t[static_cast<std::size_t>(r) * ncols + c]; }
  double at(int r, int c) const { return t[static_cast<std::size_t>(r) * ncols + c]; }

  int art_col(int r) const { return nstruct + nslack + r; }
  bool is_art(int c) const { return c >= nstruct + nslack; }
};

// Recompute basic values from scratch: x_B = B^-1 rhs - sum_N T_j x_j.
// B^-1 columns are recoverable from the artificial columns of the tableau.
void refresh_basics(Tableau& tb) {
  int nr = tb.nrows;
  std::vector<double> v(static_cast<std::size_t>(nr), 0.0);
  for (int r = 0; r < nr; ++r) {
    double scaled = tb.art_sign[r] * tb.rhs[r];
    if (scaled == 0.0) continue;
    for (int k = 0; k < nr; ++k) v[k] += tb.at(k, tb.art_col(r)) * scaled;
  }
  for (int c = 0; c < tb.ncols; ++c) {
    if (tb.pos_in_basis[c] >= 0) continue;
    double xc = tb.xval[c];
    if (xc == 0.0) continue;
    for (int k = 0; k < nr; ++k) v[k] -= tb.at(k, c) * xc;
  }
  for (int k = 0; k < nr; ++k) tb.xval[tb.basic[k]] = v[k];
}

void compute_reduced_costs(Tableau& tb, const std::vector<double>& cost) {
  for (int c = 0; c < tb.ncols; ++c) tb.dcost[c] = cost[c];
  for (int r = 0; r < tb.nrows; ++r) {
    double cb = cost[tb.basic[r]];
    if (cb == 0.0) continue;
    for (int c = 0; c < tb.ncols; ++c) tb.dcost[c] -= cb * tb.at(r, c);
  }
}

// One simplex phase on the given cost vector. Returns kOptimal when no
// eligible entering column remains.
LpStatus run_phase(Tableau& tb, const std::vector<double>& cost, const LpOptions& opts,
                   long& iters, long max_iters) {
  compute_reduced_costs(tb, cost);
  const double pivot_tol = 1e-9;
  int stall = 0;
  const int stall_limit = 2 * tb.nrows + 50;
  long since_refresh = 0;

  while (true) {
    if (iters >= max_iters) return LpStatus::kIterLimit;
    bool bland = stall > stall_limit;

    // Entering column.
    int q = -1;
    double best = opts.opt_tol;
    int dir = 0;
    for (int c = 0; c < tb.ncols; ++c) {
      if (tb.pos_in_basis[c] >= 0) continue;
      if (tb.up[c] - tb.lo[c] < 1e-15) continue;  // fixed
      double d = tb.dcost[c];
      if (tb.at_up[c] == 0 && d < -best) {
        q = c; dir = +1; best = bland ? opts.opt_tol : -d;
        if (bland) break;
      } else if (tb.at_up[c] == 1 && d > best) {
        q = c; dir = -1; best = bland ? opts.opt_tol : d;
        if (bland) break;
      }
    }
    if (q < 0) return LpStatus::kOptimal;

    // Ratio test: entering moves by t*dir, basics move by -dir * T[r][q] * t.
    double tmax = tb.up[q] - tb.lo[q];  // bound-to-bound flip
    double tmin = kInf;
    int rstar = -1;
    for (int r = 0; r < tb.nrows; ++r) {
      double y = tb.at(r, q);
      if (std::fabs(y) <= pivot_tol) continue;
      double rate = -dir * y;  // basic value change per unit t
      int bc = tb.basic[r];
      double limit;
      if (rate > 0) {
        if (tb.up[bc] == kInf) continue;
        limit = (tb.up[bc] - tb.xval[bc]) / rate;
      } else {
        if (tb.lo[bc] == -kInf) continue;
        limit = (tb.xval[bc] - tb.lo[bc]) / (-rate);
      }
      if (limit < -1e-9) limit = 0.0;
      limit = std::max(limit, 0.0);
      if (limit < tmin - 1e-10 ||
          (limit < tmin + 1e-10 && rstar >= 0 && std::fabs(y) > std::fabs(tb.at(rstar, q)))) {
        tmin = limit;
        rstar = r;
      }
    }

    ++iters;
    ++since_refresh;

    if (tmin == kInf && tmax == kInf) return LpStatus::kUnbounded;

    if (tmax <= tmin) {
      // Bound flip, basis unchanged.
      double t = tmax;
      for (int r = 0; r < tb.nrows; ++r) {
        double y = tb.at(r, q);
        if (y != 0.0) tb.xval[tb.basic[r]] -= dir * y * t;
      }
      tb.xval[q] = (dir > 0) ? tb.up[q] : tb.lo[q];
      tb.at_up[q] = (dir > 0) ? 1 : 0;
      stall = (t < 1e-12) ? stall + 1 : 0;
      continue;
    }

    double t = tmin;
    stall = (t < 1e-12) ? stall + 1 : 0;

    // Move values.
    for (int r = 0; r < tb.nrows; ++r) {
      double y = tb.at(r, q);
      if (y != 0.0) tb.xval[tb.basic[r]] -= dir * y * t;
    }
    int leave = tb.basic[rstar];
    double rate = -dir * tb.at(rstar, q);
    tb.xval[leave] = (rate > 0) ? tb.up[leave] : tb.lo[leave];  // snap to bound
    tb.at_up[leave] = (rate > 0) ? 1 : 0;
    tb.xval[q] = (dir > 0 ? tb.lo[q] : tb.up[q]) + dir * t;

    // Pivot rows.
    double piv = tb.at(rstar, q);
    double* prow = &tb.t[static_cast<std::size_t>(rstar) * tb.ncols];
    double inv = 1.0 / piv;
    for (int c = 0; c < tb.ncols; ++c) prow[c] *= inv;
    for (int r = 0; r < tb.nrows; ++r) {
      if (r == rstar) continue;
      double f = tb.at(r, q);
      if (f == 0.0) continue;
      double* row = &tb.t[static_cast<std::size_t>(r) * tb.ncols];
      for (int c = 0; c < tb.ncols; ++c) row[c] -= f * prow[c];
    }
    double df = tb.dcost[q];
    if (df != 0.0)
      for (int c = 0; c < tb.ncols; ++c) tb.dcost[c] -= df * prow[c];

    tb.pos_in_basis[leave] = -1;
    tb.pos_in_basis[q] = rstar;
    tb.basic[rstar] = q;

    if (since_refresh >= 256) {
      refresh_basics(tb);
      compute_reduced_costs(tb, cost);
      since_refresh = 0;
    }
  }
}

}  // namespace

LpSolution solve_lp(const LpModel& model, const LpOptions& opts) {
  const int nv = model.num_vars;
  const int nr = static_cast<int>(model.rows.size());
  LpSolution sol;
  sol.x.assign(static_cast<std::size_t>(nv), 0.0);

  Tableau tb;
  tb.nrows = nr;
  tb.nstruct = nv;
  tb.nslack = nr;
  tb.ncols = nv + 2 * nr;
  tb.t.assign(static_cast<std::size_t>(nr) * tb.ncols, 0.0);
  tb.lo.assign(static_cast<std::size_t>(tb.ncols), 0.0);
  tb.up.assign(static_cast<std::size_t>(tb.ncols), 0.0);
  tb.xval.assign(static_cast<std::size_t>(tb.ncols), 0.0);
  tb.dcost.assign(static_cast<std::size_t>(tb.ncols), 0.0);
  tb.basic.assign(static_cast<std::size_t>(nr), -1);
  tb.pos_in_basis.assign(static_cast<std::size_t>(tb.ncols), -1);
  tb.at_up.assign(static_cast<std::size_t>(tb.ncols), 0);
  tb.art_sign.assign(static_cast<std::size_t>(nr), 1.0);
  tb.rhs.assign(static_cast<std::size_t>(nr), 0.0);

  for (int c = 0; c < nv; ++c) {
    tb.lo[c] = model.lo[c];
    tb.up[c] = model.up[c];
    if (tb.up[c] < tb.lo[c]) {
      sol.status = LpStatus::kInfeasible;
      return sol;
    }
  }
  for (int r = 0; r < nr; ++r) {
    int sc = nv + r;
    switch (model.rows[r].sense) {
      case 'L': tb.lo[sc] = 0.0; tb.up[sc] = kInf; break;
      case 'G': tb.lo[sc] = -kInf; tb.up[sc] = 0.0; break;
      case 'E': tb.lo[sc] = 0.0; tb.up[sc] = 0.0; break;
      default: throw std::invalid_argument("solve_lp: bad row sense");
    }
    tb.rhs[r] = model.rows[r].rhs;
  }

  // Rest every non-artificial column at a finite bound (prefer lower).
  auto rest = [&](int c) {
    if (tb.lo[c] > -kInf) {
      tb.xval[c] = tb.lo[c];
      tb.at_up[c] = 0;
    } else if (tb.up[c] < kInf) {
      tb.xval[c] = tb.up[c];
      tb.at_up[c] = 1;
    } else {
      tb.xval[c] = 0.0;
      tb.at_up[c] = 0;
    }
  };
  for (int c = 0; c < nv + nr; ++c) rest(c);

  // Row residuals at the rest point decide each artificial's sign.
  std::vector<double> resid(static_cast<std::size_t>(nr), 0.0);
  for (int r = 0; r < nr; ++r) {
    double act = tb.xval[nv + r];  // slack
    for (const auto& [c, a] : model.rows[r].coef) act += a * tb.xval[c];
    resid[r] = model.rows[r].rhs - act;
  }
  for (int r = 0; r < nr; ++r) {
    for (const auto& [c, a] : model.rows[r].coef) tb.at(r, c) += a;
    tb.at(r, nv + r) = 1.0;  // slack
    double sign = resid[r] < 0.0 ? -1.0 : 1.0;
    tb.art_sign[r] = sign;
    int ac = tb.art_col(r);
    tb.at(r, ac) = sign;
    tb.lo[ac] = 0.0;
    tb.up[ac] = kInf;
    tb.basic[r] = ac;
    tb.pos_in_basis[ac] = r;
    tb.xval[ac] = std::fabs(resid[r]);
    if (sign < 0.0) {
      // Scale the row so the basis column is the identity.
      double* row = &tb.t[static_cast<std::size_t>(r) * tb.ncols];
      for (int c = 0; c < tb.ncols; ++c) row[c] = -row[c];
    }
  }

  long max_iters = opts.max_iters > 0 ? opts.max_iters
                                      : 2000 + 30L * (tb.nrows + tb.ncols);
  long iters = 0;

  // Phase 1: minimize the artificial sum.
  std::vector<double> c1(static_cast<std::size_t>(tb.ncols), 0.0);
  for (int r = 0; r < nr; ++r) c1[tb.art_col(r)] = 1.0;
  LpStatus st = run_phase(tb, c1, opts, iters, max_iters);
  sol.iterations = iters;
  if (st != LpStatus::kOptimal) return sol;  // iteration cap or numeric trouble
  refresh_basics(tb);

  double infeas = 0.0;
  for (int r = 0; r < nr; ++r) infeas += std::fabs(tb.xval[tb.art_col(r)]);
  if (infeas > opts.feas_tol * std::max(1.0, static_cast<double>(nr))) {
    sol.status = LpStatus::kInfeasible;
    sol.iterations = iters;
    return sol;
  }

  // Pivot leftover artificials out of the basis where possible; freeze them.
  for (int r = 0; r < nr; ++r) {
    int bc = tb.basic[r];
    if (!tb.is_art(bc)) continue;
    int q = -1;
    double bestmag = 1e-7;
    for (int c = 0; c < nv + nr; ++c) {
      if (tb.pos_in_basis[c] >= 0) continue;
      if (tb.up[c] - tb.lo[c] < 1e-15) continue;
      double mag = std::fabs(tb.at(r, c));
      if (mag > bestmag) {
        bestmag = mag;
        q = c;
      }
    }
    if (q < 0) continue;  // redundant row; artificial stays basic at zero
    double piv = tb.at(r, q);
    double* prow = &tb.t[static_cast<std::size_t>(r) * tb.ncols];
    double inv = 1.0 / piv;
    for (int c = 0; c < tb.ncols; ++c) prow[c] *= inv;
    for (int k = 0; k < nr; ++k) {
      if (k == r) continue;
      double f = tb.at(k, q);
      if (f == 0.0) continue;
      double* row = &tb.t[static_cast<std::size_t>(k) * tb.ncols];
      for (int c = 0; c < tb.ncols; ++c) row[c] -= f * prow[c];
    }
    tb.pos_in_basis[bc] = -1;
    tb.xval[bc] = 0.0;
    tb.at_up[bc] = 0;
    tb.pos_in_basis[q] = r;
    tb.basic[r] = q;  // degenerate swap; values refreshed below
  }
  for (int r = 0; r < nr; ++r) {
    int ac = tb.art_col(r);
    tb.lo[ac] = 0.0;
    tb.up[ac] = 0.0;
    if (tb.pos_in_basis[ac] < 0) tb.xval[ac] = 0.0;
  }
  refresh_basics(tb);

  // Phase 2.
  std::vector<double> c2(static_cast<std::size_t>(tb.ncols), 0.0);
  for (int c = 0; c < nv; ++c) c2[c] = model.cost[c];
  st = run_phase(tb, c2, opts, iters, max_iters);
  sol.iterations = iters;
  if (st == LpStatus::kIterLimit || st == LpStatus::kUnbounded) {
    sol.status = st;
    return sol;
  }
  refresh_basics(tb);

  sol.status = LpStatus::kOptimal;
  double obj = 0.0;
  for (int c = 0; c < nv; ++c) {
    sol.x[c] = tb.xval[c];
    obj += model.cost[c] * tb.xval[c];
  }
  sol.objective = obj;
  return sol;
}

}  // namespace pacing
