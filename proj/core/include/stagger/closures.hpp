#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

#include "stagger/errors.hpp"
#include "stagger/field.hpp"
#include "stagger/model.hpp"
#include "stagger/newton.hpp"

namespace stagger {

/// Treatment of the non-divergence remainder terms.
///   None           - remainder dropped (models without one)
///   Naive          - central difference of the potential, explicit at level n
///   EntropicFull   - J_s as sixth unknown, all six solved by Newton
///   EntropicScalar - u eliminated in closed form, scalar equation for J_s
enum class ClosureKind { None, Naive, EntropicFull, EntropicScalar };

std::string_view to_string(ClosureKind kind);
ClosureKind parse_closure(std::string_view name);

inline bool is_entropic(ClosureKind k) {
  return k == ClosureKind::EntropicFull || k == ClosureKind::EntropicScalar;
}

/// Implicit stage in increment form:
///   u = base + theta * g(u, J_s)
///   s(u) = entropy_base + theta * (g_s(u) - 3 J_s)
/// Predictors use base = u^n - alpha*lambda*f'_j, theta = alpha*dt; the
/// corrector collects every explicit term into base and uses theta = dt/4.
template <std::size_t M>
struct StageTarget {
  std::array<double, M> base{};
  double entropy_base = 0.0;
  double theta = 0.0;
};

template <std::size_t M>
struct StageUnknowns {
  std::array<double, M> u_star{};
  double js = 0.0;
};

template <std::size_t M>
struct StageSolution {
  StageUnknowns<M> unknowns;
  double residual_norm = 0.0;      // increment form, infinity norm over all equations
  double entropy_residual = 0.0;   // |R6| in increment form
  int iterations = 0;
  bool used_bisection = false;
};

/// Predictor target built from time-level-n data and its limited slopes.
template <EntropicBalanceLaw Model>
StageTarget<Model::kSize> predictor_target(const Model& model,
                                           const typename Model::State& u_n,
                                           const typename Model::State& flux_slope,
                                           double entropy_flux_slope, double alpha, double dt,
                                           double dx) {
  StageTarget<Model::kSize> t;
  const double lam = alpha * dt / dx;
  for (std::size_t k = 0; k < Model::kSize; ++k) t.base[k] = u_n[k] - lam * flux_slope[k];
  t.entropy_base = model.entropy_density(u_n) - lam * entropy_flux_slope;
  t.theta = alpha * dt;
  return t;
}

/// Residual of the augmented stage system in increment form (the rate form
/// multiplied by theta).
template <EntropicBalanceLaw Model>
std::array<double, Model::kSize + 1> entropic_increment_residual(
    const Model& model, const StageUnknowns<Model::kSize>& stage,
    const StageTarget<Model::kSize>& target) {
  constexpr std::size_t M = Model::kSize;
  std::array<double, M + 1> r{};
  const auto g = model.production(stage.u_star, stage.js);
  for (std::size_t k = 0; k < M; ++k)
    r[k] = stage.u_star[k] - target.base[k] - target.theta * g[k];
  r[M] = model.entropy_density(stage.u_star) - target.entropy_base -
         target.theta * (model.entropy_production(stage.u_star) -
                         Model::kEntropyJsFactor * stage.js);
  return r;
}

/// Rate-form residual of the modified predictor:
///   R_1..5 = (u* - u_n)/(alpha dt) + f'/dx - g(u*, J_s)
///   R_6    = (s(u*) - s(u_n))/(alpha dt) + f_s'/dx - g_s(u*) + 3 J_s
template <EntropicBalanceLaw Model>
std::array<double, Model::kSize + 1> entropic_residual(
    const StageUnknowns<Model::kSize>& stage, const typename Model::State& u_n,
    const typename Model::State& flux_slope, double entropy_flux_slope, double alpha, double dt,
    double dx, const Model& model) {
  constexpr std::size_t M = Model::kSize;
  std::array<double, M + 1> r{};
  const auto g = model.production(stage.u_star, stage.js);
  const double adt = alpha * dt;
  for (std::size_t k = 0; k < M; ++k)
    r[k] = (stage.u_star[k] - u_n[k]) / adt + flux_slope[k] / dx - g[k];
  r[M] = (model.entropy_density(stage.u_star) - model.entropy_density(u_n)) / adt +
         entropy_flux_slope / dx - model.entropy_production(stage.u_star) +
         Model::kEntropyJsFactor * stage.js;
  return r;
}

/// Newton on all M + 1 unknowns. Starts from u = target.base (the explicit
/// update) and J_s = js_guess.
template <EntropicBalanceLaw Model>
StageSolution<Model::kSize> solve_stage_entropic(const Model& model,
                                                 const StageTarget<Model::kSize>& target,
                                                 double js_guess, const SolverConfig& cfg) {
  constexpr std::size_t M = Model::kSize;
  auto residual = [&](const Vec<M + 1>& x) {
    StageUnknowns<M> s;
    std::copy_n(x.begin(), M, s.u_star.begin());
    s.js = x[M];
    if (!model.is_valid(s.u_star)) throw InvalidState("entropic stage: trial state invalid");
    return entropic_increment_residual(model, s, target);
  };
  Vec<M + 1> x0{};
  std::copy_n(target.base.begin(), M, x0.begin());
  x0[M] = js_guess;
  if (!model.is_valid(target.base)) {
    // The explicit update can leave the realizable set under strong
    // relaxation; start from the relaxed moments at the guessed J_s instead.
    if constexpr (ScalarEliminable<Model>) {
      const auto u = model.stage_state_for_js(target.base, target.theta, js_guess);
      std::copy_n(u.begin(), M, x0.begin());
    }
  }
  const auto res = newton_solve<M + 1>(residual, x0, cfg);

  StageSolution<M> out;
  std::copy_n(res.x.begin(), M, out.unknowns.u_star.begin());
  out.unknowns.js = res.x[M];
  out.residual_norm = res.residual_norm;
  out.entropy_residual = std::abs(entropic_increment_residual(model, out.unknowns, target)[M]);
  out.iterations = res.iterations;
  return out;
}

/// Scalar equation in J_s after eliminating u in closed form.
template <ScalarEliminable Model>
double scalar_stage_residual(const Model& model, const StageTarget<Model::kSize>& target,
                             double js) {
  const auto u = model.stage_state_for_js(target.base, target.theta, js);
  if (!model.is_valid(u)) throw InvalidState("scalar stage: eliminated state invalid");
  return model.entropy_density(u) - target.entropy_base -
         target.theta * (model.entropy_production(u) - Model::kEntropyJsFactor * js);
}

/// Bracketing interval for the scalar J_s equation: the lower end sits just
/// above the realizability bound (residual tends to -inf there), the upper end
/// is expanded until the residual turns positive, capped at js_cap.
template <ScalarEliminable Model>
std::optional<std::pair<double, double>> scalar_stage_bracket(
    const Model& model, const StageTarget<Model::kSize>& target, double js_cap = 1e6) {
  const double lb = model.stage_js_lower_bound(target.base, target.theta);
  if (std::isnan(lb)) return std::nullopt;
  double lo = std::max(-js_cap, lb + 1e-9 * std::max(1.0, std::abs(lb)));
  auto value = [&](double js) -> std::optional<double> {
    try {
      return scalar_stage_residual(model, target, js);
    } catch (const InvalidState&) {
      return std::nullopt;
    }
  };
  // Walk the lower end up until it is evaluable and negative.
  std::optional<double> flo = value(lo);
  for (int k = 0; k < 60 && !(flo && *flo < 0.0); ++k) {
    lo = lb + (lo - lb) * 4.0;
    if (lo >= js_cap) return std::nullopt;
    flo = value(lo);
  }
  if (!(flo && *flo < 0.0)) return std::nullopt;
  double hi = std::max(lo + 1.0, 1.0);
  for (;;) {
    const auto fhi = value(hi);
    if (fhi && *fhi > 0.0) return std::make_pair(lo, hi);
    if (hi >= js_cap) return std::nullopt;
    hi = std::min(js_cap, std::abs(hi) * 4.0);
  }
}

/// Solve for J_s from the scalar equation: damped Newton from js_guess,
/// bisection on the realizable bracket if Newton fails.
template <ScalarEliminable Model>
StageSolution<Model::kSize> solve_stage_scalar(const Model& model,
                                               const StageTarget<Model::kSize>& target,
                                               double js_guess, const SolverConfig& cfg) {
  constexpr std::size_t M = Model::kSize;
  auto f = [&](double js) { return scalar_stage_residual(model, target, js); };

  StageSolution<M> out;
  double js = js_guess;
  bool solved = false;
  try {
    const double lb = model.stage_js_lower_bound(target.base, target.theta);
    if (!std::isnan(lb) && js <= lb) js = lb + 1e-3 * std::max(1.0, std::abs(lb));
    const auto res = newton_solve_scalar(f, js, cfg);
    js = res.x[0];
    out.iterations = res.iterations;
    solved = true;
  } catch (const std::runtime_error&) {
  }
  if (!solved) {
    const auto bracket = scalar_stage_bracket(model, target);
    if (!bracket)
      throw SolverDivergence("scalar stage: no sign change of the J_s residual", {js_guess},
                             std::numeric_limits<double>::infinity(), cfg.max_iter);
    js = bisect_scalar(f, bracket->first, bracket->second, cfg);
    out.used_bisection = true;
  }
  out.unknowns.js = js;
  out.unknowns.u_star = model.stage_state_for_js(target.base, target.theta, js);
  const auto r = entropic_increment_residual(model, out.unknowns, target);
  out.residual_norm = inf_norm(r);
  out.entropy_residual = std::abs(r[M]);
  return out;
}

/// Implicit stage without J_s: u = base + theta * (g(u) + source), with
/// `source` held fixed.
template <BalanceLaw Model>
StageSolution<Model::kSize> solve_stage_plain(const Model& model,
                                              const typename Model::State& base, double theta,
                                              const typename Model::State& source,
                                              const SolverConfig& cfg) {
  constexpr std::size_t M = Model::kSize;
  auto residual = [&](const Vec<M>& u) {
    if (!model.is_valid(u)) throw InvalidState("stage: trial state invalid");
    const auto g = model.production(u);
    Vec<M> r;
    for (std::size_t k = 0; k < M; ++k) r[k] = u[k] - base[k] - theta * (g[k] + source[k]);
    return r;
  };
  const auto res = newton_solve<M>(residual, base, cfg);
  StageSolution<M> out;
  out.unknowns.u_star = res.x;
  out.residual_norm = res.residual_norm;
  out.iterations = res.iterations;
  return out;
}

/// Central-difference approximation of J_s at cell j from level-n data,
/// turned into the remainder vector h(u_j).
template <EntropicBalanceLaw Model>
typename Model::State naive_source(const FieldArray<Model::kSize>& field, int j,
                                   const Model& model, double dx) {
  const double js = (model.entropy_flux_potential(field[j + 1]) -
                     model.entropy_flux_potential(field[j - 1])) /
                    (2.0 * dx);
  return model.remainder(field[j], js);
}

}  // namespace stagger
