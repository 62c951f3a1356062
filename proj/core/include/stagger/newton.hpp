#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "stagger/errors.hpp"

namespace stagger {

struct SolverConfig {
  double tol_residual = 1e-12;  // on the infinity norm
  int max_iter = 50;
  double fd_rel_step = 1e-7;
  double fd_abs_step = 1e-9;
  int max_halvings = 8;
  int polish_steps = 3;  // extra full steps after convergence, kept while the residual drops
};

template <std::size_t N>
using Vec = std::array<double, N>;

template <std::size_t N>
using Mat = std::array<std::array<double, N>, N>;

template <std::size_t N>
double inf_norm(const Vec<N>& v) {
  double m = 0.0;
  for (double x : v) {
    if (!std::isfinite(x)) return std::numeric_limits<double>::infinity();
    m = std::max(m, std::abs(x));
  }
  return m;
}

/// Forward-difference Jacobian. `r_at_x` is residual(x), passed in to save
/// one evaluation.
template <std::size_t N, class Residual>
Mat<N> fd_jacobian(Residual&& residual, const Vec<N>& x, const Vec<N>& r_at_x,
                   const SolverConfig& cfg) {
  Mat<N> jac{};
  for (std::size_t k = 0; k < N; ++k) {
    Vec<N> xp = x;
    const double h = std::max(cfg.fd_rel_step * std::abs(x[k]), cfg.fd_abs_step);
    xp[k] += h;
    const double step = xp[k] - x[k];
    Vec<N> rp;
    try {
      rp = residual(xp);
    } catch (const std::exception& e) {
      throw EvaluationError(std::string("jacobian column evaluation failed: ") + e.what(),
                            static_cast<int>(k));
    }
    for (std::size_t i = 0; i < N; ++i) jac[i][k] = (rp[i] - r_at_x[i]) / step;
  }
  return jac;
}

template <std::size_t N, class Residual>
Mat<N> fd_jacobian(Residual&& residual, const Vec<N>& x, const SolverConfig& cfg) {
  return fd_jacobian<N>(residual, x, residual(x), cfg);
}

/// Solves A d = b by Gaussian elimination with partial pivoting.
/// Returns false if A is numerically singular.
template <std::size_t N>
bool solve_dense(Mat<N> a, Vec<N> b, Vec<N>& d) {
  for (std::size_t c = 0; c < N; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < N; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    if (!(std::abs(a[piv][c]) > 0.0) || !std::isfinite(a[piv][c])) return false;
    std::swap(a[piv], a[c]);
    std::swap(b[piv], b[c]);
    for (std::size_t r = c + 1; r < N; ++r) {
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < N; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  for (std::size_t c = N; c-- > 0;) {
    double s = b[c];
    for (std::size_t k = c + 1; k < N; ++k) s -= a[c][k] * d[k];
    d[c] = s / a[c][c];
  }
  return true;
}

template <std::size_t N>
struct NewtonResult {
  Vec<N> x{};
  double residual_norm = 0.0;
  int iterations = 0;
  int halvings = 0;
  int polish = 0;
};

/// Damped Newton iteration with a finite-difference Jacobian. A step is
/// accepted only if it lowers the residual norm; otherwise it is halved up to
/// cfg.max_halvings times. A residual that throws counts as a rejected step.
template <std::size_t N, class Residual>
NewtonResult<N> newton_solve(Residual&& residual, const Vec<N>& x0, const SolverConfig& cfg) {
  NewtonResult<N> res;
  res.x = x0;
  Vec<N> r = residual(res.x);
  res.residual_norm = inf_norm(r);

  auto diverge = [&](const std::string& why) {
    throw SolverDivergence("newton: " + why, std::vector<double>(res.x.begin(), res.x.end()),
                           res.residual_norm, res.iterations);
  };
  if (!std::isfinite(res.residual_norm)) diverge("non-finite residual at initial guess");

  while (res.residual_norm > cfg.tol_residual) {
    if (res.iterations >= cfg.max_iter) diverge("iteration budget exhausted");
    ++res.iterations;

    Mat<N> jac;
    try {
      jac = fd_jacobian<N>(residual, res.x, r, cfg);
    } catch (const EvaluationError& e) {
      diverge(e.what());
    }
    Vec<N> rhs;
    for (std::size_t i = 0; i < N; ++i) rhs[i] = -r[i];
    Vec<N> delta{};
    if (!solve_dense<N>(jac, rhs, delta)) diverge("singular jacobian");

    double scale = 1.0;
    bool accepted = false;
    for (int h = 0; h <= cfg.max_halvings; ++h) {
      Vec<N> trial = res.x;
      for (std::size_t i = 0; i < N; ++i) trial[i] += scale * delta[i];
      try {
        Vec<N> rt = residual(trial);
        const double nt = inf_norm(rt);
        if (nt < res.residual_norm) {
          res.x = trial;
          r = rt;
          res.residual_norm = nt;
          accepted = true;
          break;
        }
      } catch (const InvalidState&) {
      }
      scale *= 0.5;
      ++res.halvings;
    }
    if (!accepted) diverge("no decrease after step halving");
  }

  while (res.polish < cfg.polish_steps && res.residual_norm > 0.0) {
    try {
      const Mat<N> jac = fd_jacobian<N>(residual, res.x, r, cfg);
      Vec<N> rhs;
      for (std::size_t i = 0; i < N; ++i) rhs[i] = -r[i];
      Vec<N> delta{};
      if (!solve_dense<N>(jac, rhs, delta)) break;
      Vec<N> trial = res.x;
      for (std::size_t i = 0; i < N; ++i) trial[i] += delta[i];
      const Vec<N> rt = residual(trial);
      const double nt = inf_norm(rt);
      if (!(nt < res.residual_norm)) break;
      res.x = trial;
      r = rt;
      res.residual_norm = nt;
      ++res.polish;
    } catch (const std::exception&) {
      break;
    }
  }
  return res;
}

/// Scalar convenience wrapper around newton_solve.
template <class Residual>
NewtonResult<1> newton_solve_scalar(Residual&& residual, double x0, const SolverConfig& cfg) {
  auto wrapped = [&](const Vec<1>& x) { return Vec<1>{residual(x[0])}; };
  return newton_solve<1>(wrapped, Vec<1>{x0}, cfg);
}

/// Bisection on [lo, hi]; requires residual(lo) * residual(hi) <= 0.
/// Returns the midpoint once the interval is below 1e-13 * max(1, |root|).
template <class Residual>
double bisect_scalar(Residual&& residual, double lo, double hi, const SolverConfig& = {}) {
  if (lo > hi) std::swap(lo, hi);
  double flo = residual(lo);
  const double fhi = residual(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    throw NoBracket("bisect: residual has the same sign at both ends of [" +
                    std::to_string(lo) + ", " + std::to_string(hi) + "]");
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= 1e-13 * std::max(1.0, std::abs(mid))) return mid;
    if (mid <= lo || mid >= hi) return mid;
    const double fm = residual(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace stagger
