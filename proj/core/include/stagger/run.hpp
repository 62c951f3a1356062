#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include "stagger/diagnostics.hpp"
#include "stagger/field.hpp"
#include "stagger/model.hpp"
#include "stagger/scheme.hpp"

namespace stagger {

/// Per-step diagnostics.
struct StepRecord {
  int step = 0;
  double t = 0.0;
  double dt = 0.0;
  std::vector<double> totals;  // sum of u_k dx over interior cells
  /// |total_k(t) - total_k(0) + t (f_k(u_right) - f_k(u_left))| relative to
  /// the larger of sum |u_k(0)| dx and the boundary flux integral. Exact
  /// conservation statement while the boundary cells are quiescent.
  std::vector<double> conservation_drift;
  double entropy_total = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> total_variation;  // per conserved component
  bool boundary_quiescent = true;
  StepStats stats;
};

template <std::size_t M>
struct RunResult {
  FieldArray<M> final_field;
  std::vector<double> final_js;
  double t = 0.0;
  int steps = 0;
  std::vector<StepRecord> diagnostics;
};

/// Number of cells at each end checked for quiescence; covers the stencil
/// reach of one step.
inline constexpr int kQuiescentCells = 5;

/// Number of full steps and the length of the trailing partial step (0 if
/// t_end is a multiple of dt).
inline std::pair<int, double> step_plan(double t_end, double dt) {
  if (!(t_end > 0.0)) return {0, 0.0};
  const double ratio = t_end / dt;
  int full = static_cast<int>(std::floor(ratio + 1e-9));
  double rest = t_end - full * dt;
  if (rest < 1e-9 * dt) rest = 0.0;
  return {full, rest};
}

template <BalanceLaw Model>
StepRecord make_record(const Model& model, const FieldArray<Model::kSize>& ic,
                       const FieldArray<Model::kSize>& u, int step, double t, double dt,
                       double dx) {
  constexpr std::size_t M = Model::kSize;
  const int n = u.interior();
  StepRecord rec;
  rec.step = step;
  rec.t = t;
  rec.dt = dt;
  rec.totals.assign(M, 0.0);
  rec.total_variation.assign(M, 0.0);
  rec.conservation_drift.assign(M, 0.0);
  std::vector<double> abs0(M, 0.0), total0(M, 0.0);
  for (int j = 0; j < n; ++j)
    for (std::size_t k = 0; k < M; ++k) {
      rec.totals[k] += u[j][k] * dx;
      total0[k] += ic[j][k] * dx;
      abs0[k] += std::abs(ic[j][k]) * dx;
    }
  for (std::size_t k = 0; k < M; ++k) rec.total_variation[k] = total_variation(u.interior_component(k));

  const auto f_left = model.flux(ic[0]);
  const auto f_right = model.flux(ic[n - 1]);
  for (std::size_t k = 0; k < M; ++k) {
    const double boundary = t * (f_right[k] - f_left[k]);
    const double scale = std::max({abs0[k], std::abs(boundary), std::numeric_limits<double>::min()});
    rec.conservation_drift[k] = std::abs(rec.totals[k] - total0[k] + boundary) / scale;
  }

  auto same = [&](int j) {
    for (std::size_t k = 0; k < M; ++k)
      if (std::abs(u[j][k] - ic[j][k]) > 1e-12 * (1.0 + std::abs(ic[j][k]))) return false;
    return true;
  };
  for (int c = 0; c < std::min(kQuiescentCells, n); ++c)
    if (!same(c) || !same(n - 1 - c)) rec.boundary_quiescent = false;

  if constexpr (EntropicBalanceLaw<Model>) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += model.entropy_density(u[j]) * dx;
    rec.entropy_total = s;
  }
  return rec;
}

template <std::size_t M>
using StepObserver =
    std::function<void(int step, double t, const FieldArray<M>& u, const std::vector<double>& js)>;

/// Advances `ic` from t = 0 to grid.t_end with dt = lambda dx. The last step
/// is shortened when t_end is not a multiple of dt. `observer` is called after
/// every completed step.
template <BalanceLaw Model>
RunResult<Model::kSize> run(const FieldArray<Model::kSize>& ic, const GridConfig& grid,
                            CentralScheme<Model>& scheme,
                            const StepObserver<Model::kSize>& observer = {}) {
  grid.validate();
  const double dx = grid.dx();
  const double dt = grid.dt();
  RunResult<Model::kSize> res;
  res.final_field = fill_ghosts(ic);
  res.final_js.assign(static_cast<std::size_t>(ic.interior()), 0.0);
  res.diagnostics.push_back(make_record(scheme.model(), res.final_field, res.final_field, 0, 0.0, 0.0, dx));

  const auto [full, rest] = step_plan(grid.t_end, dt);
  const int total_steps = full + (rest > 0.0 ? 1 : 0);
  const FieldArray<Model::kSize> start = res.final_field;
  for (int s = 0; s < total_steps; ++s) {
    const double h = s < full ? dt : rest;
    scheme.set_time(res.t);
    res.final_field = scheme.step(res.final_field, h);
    res.t = s + 1 < total_steps || rest == 0.0 ? (s + 1) * dt : grid.t_end;
    res.steps = s + 1;
    StepRecord rec = make_record(scheme.model(), start, res.final_field, res.steps, res.t, h, dx);
    rec.stats = scheme.last_stats();
    res.diagnostics.push_back(std::move(rec));
    if (observer) observer(res.steps, res.t, res.final_field, scheme.js());
  }
  res.final_js = scheme.js();
  if (res.final_js.size() != static_cast<std::size_t>(ic.interior()))
    res.final_js.assign(static_cast<std::size_t>(ic.interior()), 0.0);
  return res;
}

}  // namespace stagger
