#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "stagger/closures.hpp"
#include "stagger/errors.hpp"
#include "stagger/field.hpp"
#include "stagger/limiters.hpp"
#include "stagger/model.hpp"
#include "stagger/newton.hpp"

namespace stagger {

enum class Projection {
  LimitedSlopes,  // second-order average interpolation
  Average,        // plain two-point average, first order
};

/// Level-n entropy used by the corrector's entropy equation at x_{j+1/2}.
enum class EntropyAverage {
  OfState,    // s of the reconstructed edge state 1/2(u_j + u_{j+1}) + 1/8(u'_j - u'_{j+1})
  OfEntropy,  // same reconstruction applied to the cell entropies s(u_j)
};

struct SchemeOptions {
  ClosureKind closure = ClosureKind::None;
  Projection projection = Projection::LimitedSlopes;
  EntropyAverage entropy_average = EntropyAverage::OfState;
  SolverConfig solver{};
  /// Solve every entropic stage with both strategies and throw
  /// DisagreementError if they differ by more than cross_check_tol.
  bool cross_check = false;
  double cross_check_tol = 1e-8;
};

/// Counters for the implicit solves of one step.
struct StepStats {
  long stage_solves = 0;
  long newton_iterations = 0;
  int max_newton_iterations = 0;
  long bisection_fallbacks = 0;
  double max_residual = 0.0;
  double max_entropy_residual = 0.0;  // increment form
  double min_entropy_production = std::numeric_limits<double>::infinity();
  double max_abs_js = 0.0;

  void merge(const StepStats& o) {
    stage_solves += o.stage_solves;
    newton_iterations += o.newton_iterations;
    max_newton_iterations = std::max(max_newton_iterations, o.max_newton_iterations);
    bisection_fallbacks += o.bisection_fallbacks;
    max_residual = std::max(max_residual, o.max_residual);
    max_entropy_residual = std::max(max_entropy_residual, o.max_entropy_residual);
    min_entropy_production = std::min(min_entropy_production, o.min_entropy_production);
    max_abs_js = std::max(max_abs_js, o.max_abs_js);
  }
};

/// Stage output: the field and, under an entropic closure, J_s per cell.
template <std::size_t M>
struct StageField {
  FieldArray<M> u;
  std::vector<double> js;
};

/// Staggered implicit predictor-corrector central scheme:
///   u^{n+a}_j = u^n_j + a dt (g(u^{n+a}_j) - f'_j/dx),   a = 1/3, 1/2
///   u^{n+1}_{j+1/2} = 1/2 (u_j + u_{j+1}) + 1/8 (u'_j - u'_{j+1})
///                     - lambda (f(u^{n+1/2}_{j+1}) - f(u^{n+1/2}_j))
///                     + dt (3/8 g^{n+1/3}_j + 3/8 g^{n+1/3}_{j+1} + 1/4 g^{n+1}_{j+1/2})
/// followed by average interpolation back to the primal grid.
template <BalanceLaw Model>
class CentralScheme {
public:
  static constexpr std::size_t M = Model::kSize;
  using State = typename Model::State;
  using Field = FieldArray<M>;

  CentralScheme(Model model, double dx, SchemeOptions options = {})
      : model_(std::move(model)), dx_(dx), options_(options) {
    if (!(dx > 0.0)) throw ConfigError("scheme: dx must be positive");
    if constexpr (!EntropicBalanceLaw<Model>) {
      if (options_.closure != ClosureKind::None)
        throw ConfigError("scheme: this model admits only closure 'none'");
    }
    if constexpr (!ScalarEliminable<Model>) {
      if (options_.closure == ClosureKind::EntropicScalar)
        throw ConfigError("scheme: model has no scalar J_s elimination");
    }
  }

  const Model& model() const { return model_; }
  const SchemeOptions& options() const { return options_; }
  double dx() const { return dx_; }

  /// J_s per primal cell after the last step (zero without a closure).
  const std::vector<double>& js() const { return js_cell_; }
  const StepStats& last_stats() const { return stats_; }

  /// Time level used in error messages.
  void set_time(double t) { time_ = t; }

  /// One implicit predictor at fraction alpha of dt. `field` must have its
  /// ghosts filled.
  StageField<M> predictor(const Field& field, double alpha, double dt) {
    prepare_level(field);
    return predictor_stage(field, alpha, dt, alpha < 0.4 ? "predictor 1/3" : "predictor 1/2");
  }

  /// Implicit staggered corrector; returns the N - 1 edge values.
  StageField<M> corrector(const Field& field_n, const StageField<M>& pred13,
                          const StageField<M>& pred12, double dt) {
    prepare_level(field_n);
    return corrector_stage(field_n, pred13, pred12, dt);
  }

  /// Average interpolation from edges back to cell centres.
  Field project_to_primal(const Field& staggered) const {
    Field stag = fill_ghosts(staggered);
    const int edges = stag.interior();
    const int n = edges + 1;
    Field out(n, Staggering::Primal);
    const auto storage = stag.storage();
    auto slope = [&](int e) -> State {
      if (options_.projection == Projection::Average) return State{};
      // Zero-gradient extension beyond the stored ghosts.
      std::array<State, 5> w;
      for (int o = -2; o <= 2; ++o) {
        const int idx = std::clamp(e + o + Field::kGhost, 0, static_cast<int>(storage.size()) - 1);
        w[static_cast<std::size_t>(o + 2)] = storage[static_cast<std::size_t>(idx)];
      }
      return limited_derivative<M>(std::span<const State>(w), 2);
    };
    State left_slope = slope(-1);
    for (int j = 0; j < n; ++j) {
      const State right_slope = slope(j);
      for (std::size_t k = 0; k < M; ++k)
        out[j][k] = 0.5 * (stag[j - 1][k] + stag[j][k]) - 0.125 * (right_slope[k] - left_slope[k]);
      left_slope = right_slope;
    }
    fill_ghosts_in_place(out);
    return out;
  }

  /// fill_ghosts -> predictor(1/3) -> predictor(1/2) -> corrector -> projection.
  Field step(const Field& input, double dt) {
    stats_ = StepStats{};
    const Field field = fill_ghosts(input);
    const int n = field.interior();
    if (static_cast<int>(js_cell_.size()) != n) js_cell_.assign(static_cast<std::size_t>(n), 0.0);
    prepare_level(field);
    const StageField<M> p13 = predictor_stage(field, 1.0 / 3.0, dt, "predictor 1/3");
    const StageField<M> p12 = predictor_stage(field, 0.5, dt, "predictor 1/2");
    StageField<M> corr = corrector_stage(field, p13, p12, dt);
    Field out = project_to_primal(corr.u);
    if (is_entropic(options_.closure)) {
      for (int j = 0; j < n; ++j) {
        const double jl = corr.js[static_cast<std::size_t>(std::max(j - 1, 0))];
        const double jr = corr.js[static_cast<std::size_t>(std::min(j, n - 2))];
        js_cell_[static_cast<std::size_t>(j)] = 0.5 * (jl + jr);
      }
    }
    for (int j = 0; j < n; ++j)
      if (!model_.is_valid(out[j])) fail_invalid("projection", j);
    return out;
  }

private:
  // Level-n quantities shared by all stages of one step.
  void prepare_level(const Field& field) {
    const auto storage = field.storage();
    const std::size_t size = storage.size();
    const int n = field.interior();
    if (static_cast<int>(js_cell_.size()) != n) js_cell_.assign(static_cast<std::size_t>(n), 0.0);
    flux_.resize(size);
    for (std::size_t i = 0; i < size; ++i) flux_[i] = model_.flux(storage[i]);
    flux_slope_.assign(static_cast<std::size_t>(n), State{});
    u_slope_.assign(static_cast<std::size_t>(n), State{});
    for (int j = 0; j < n; ++j) {
      const std::size_t i = static_cast<std::size_t>(j + Field::kGhost);
      flux_slope_[static_cast<std::size_t>(j)] = limited_derivative<M>(std::span<const State>(flux_), i);
      u_slope_[static_cast<std::size_t>(j)] = limited_derivative<M>(storage, i);
    }
    source_.assign(static_cast<std::size_t>(n), State{});
    if constexpr (EntropicBalanceLaw<Model>) {
      if (is_entropic(options_.closure)) {
        entropy_.resize(size);
        entropy_flux_.resize(size);
        for (std::size_t i = 0; i < size; ++i) {
          entropy_[i] = model_.entropy_density(storage[i]);
          entropy_flux_[i] = model_.entropy_flux(storage[i]);
        }
        entropy_slope_.assign(static_cast<std::size_t>(n), 0.0);
        entropy_flux_slope_.assign(static_cast<std::size_t>(n), 0.0);
        for (int j = 0; j < n; ++j) {
          const std::size_t i = static_cast<std::size_t>(j + Field::kGhost);
          entropy_slope_[static_cast<std::size_t>(j)] =
              limited_derivative(StencilWindow::around(entropy_, i));
          entropy_flux_slope_[static_cast<std::size_t>(j)] =
              limited_derivative(StencilWindow::around(entropy_flux_, i));
        }
      } else if (options_.closure == ClosureKind::Naive) {
        for (int j = 0; j < n; ++j) {
          source_[static_cast<std::size_t>(j)] = naive_source(field, j, model_, dx_);
          const double pot_l = model_.entropy_flux_potential(field[j - 1]);
          const double pot_r = model_.entropy_flux_potential(field[j + 1]);
          js_cell_[static_cast<std::size_t>(j)] = (pot_r - pot_l) / (2.0 * dx_);
        }
      }
    }
  }

  // Level-n entropy carried to the edge x_{j+1/2}.
  double corrector_entropy_average(const Field& field, int j) const {
    const std::size_t sj = static_cast<std::size_t>(j);
    if (options_.entropy_average == EntropyAverage::OfEntropy) {
      const std::size_t i = sj + Field::kGhost;
      return 0.5 * (entropy_[i] + entropy_[i + 1]) +
             0.125 * (entropy_slope_[sj] - entropy_slope_[sj + 1]);
    }
    State avg;
    for (std::size_t k = 0; k < M; ++k)
      avg[k] = 0.5 * (field[j][k] + field[j + 1][k]) +
               0.125 * (u_slope_[sj][k] - u_slope_[sj + 1][k]);
    if (!model_.is_valid(avg)) throw InvalidState("reconstructed edge state is not realizable");
    return model_.entropy_density(avg);
  }

  StageField<M> predictor_stage(const Field& field, double alpha, double dt, const char* name) {
    const int n = field.interior();
    const double lam = alpha * dt / dx_;
    StageField<M> out{Field(n, Staggering::Primal), std::vector<double>(static_cast<std::size_t>(n), 0.0)};
    for (int j = 0; j < n; ++j) {
      guarded(name, j, [&] {
        const std::size_t sj = static_cast<std::size_t>(j);
        State base;
        for (std::size_t k = 0; k < M; ++k) base[k] = field[j][k] - lam * flux_slope_[sj][k];
        if constexpr (EntropicBalanceLaw<Model>) {
          if (is_entropic(options_.closure)) {
            StageTarget<M> target{base,
                                  entropy_[sj + Field::kGhost] - lam * entropy_flux_slope_[sj],
                                  alpha * dt};
            const double guess =
                (alpha < 0.4 || js13_.size() != js_cell_.size()) ? js_cell_[sj] : js13_[sj];
            const auto sol = solve_entropic(target, guess);
            out.u[j] = sol.unknowns.u_star;
            out.js[sj] = sol.unknowns.js;
            return;
          }
        }
        out.u[j] = solve_plain(base, alpha * dt, source_[sj]).unknowns.u_star;
      });
    }
    if (alpha < 0.4) js13_ = out.js;
    fill_ghosts_in_place(out.u);
    return out;
  }

  StageField<M> corrector_stage(const Field& field, const StageField<M>& p13,
                                const StageField<M>& p12, double dt) {
    const int n = field.interior();
    const double lam = dt / dx_;
    StageField<M> out{Field(n - 1, Staggering::Staggered),
                      std::vector<double>(static_cast<std::size_t>(n - 1), 0.0)};
    for (int j = 0; j + 1 < n; ++j) {
      guarded("corrector", j, [&] { corrector_cell(field, p13, p12, dt, lam, j, out); });
    }
    fill_ghosts_in_place(out.u);
    return out;
  }

  void corrector_cell(const Field& field, const StageField<M>& p13, const StageField<M>& p12,
                      double dt, double lam, int j, StageField<M>& out) {
    const std::size_t sj = static_cast<std::size_t>(j);
    const State f12_l = model_.flux(p12.u[j]);
    const State f12_r = model_.flux(p12.u[j + 1]);
    State base;
    for (std::size_t k = 0; k < M; ++k)
      base[k] = 0.5 * (field[j][k] + field[j + 1][k]) +
                0.125 * (u_slope_[sj][k] - u_slope_[sj + 1][k]) - lam * (f12_r[k] - f12_l[k]);

    if constexpr (EntropicBalanceLaw<Model>) {
      if (is_entropic(options_.closure)) {
        const double js_l = p13.js[sj];
        const double js_r = p13.js[sj + 1];
        const State g_l = model_.production(p13.u[j], js_l);
        const State g_r = model_.production(p13.u[j + 1], js_r);
        for (std::size_t k = 0; k < M; ++k) base[k] += dt * 0.375 * (g_l[k] + g_r[k]);
        const double gs_l = model_.entropy_production(p13.u[j]) - Model::kEntropyJsFactor * js_l;
        const double gs_r =
            model_.entropy_production(p13.u[j + 1]) - Model::kEntropyJsFactor * js_r;
        const double s_base =
            corrector_entropy_average(field, j) -
            lam * (model_.entropy_flux(p12.u[j + 1]) - model_.entropy_flux(p12.u[j])) +
            dt * 0.375 * (gs_l + gs_r);
        StageTarget<M> target{base, s_base, 0.25 * dt};
        const double guess = 0.5 * (p12.js[sj] + p12.js[sj + 1]);
        const auto sol = solve_entropic(target, guess);
        out.u[j] = sol.unknowns.u_star;
        out.js[sj] = sol.unknowns.js;
        return;
      }
    }
    const State g_l = model_.production(p13.u[j]);
    const State g_r = model_.production(p13.u[j + 1]);
    State edge_source;
    for (std::size_t k = 0; k < M; ++k) {
      // 3/8 h_j + 3/8 h_{j+1} from the predictor terms, plus the 1/4
      // weight of the implicit term with h averaged onto the edge.
      base[k] += dt * 0.375 * (g_l[k] + source_[sj][k] + g_r[k] + source_[sj + 1][k]);
      edge_source[k] = 0.5 * (source_[sj][k] + source_[sj + 1][k]);
    }
    out.u[j] = solve_plain(base, 0.25 * dt, edge_source).unknowns.u_star;
  }

  // Runs one cell's stage work and attaches stage, cell and time to failures.
  template <class Body>
  void guarded(const char* stage, int cell, Body&& body) {
    try {
      body();
    } catch (const SolverDivergence& e) {
      throw SolverDivergence(context(stage, cell) + " (residual " + std::to_string(e.residual_norm()) +
                                 "): " + e.what(),
                             e.best_iterate(), e.residual_norm(), e.iterations());
    } catch (const NoBracket& e) {
      throw SolverDivergence(context(stage, cell) + ": " + e.what(), {}, 0.0, 0);
    } catch (const InvalidState& e) {
      throw InvalidState(context(stage, cell) + ": " + e.what());
    } catch (const DisagreementError& e) {
      throw DisagreementError(context(stage, cell) + ": " + e.what());
    }
  }

  std::string context(const char* stage, int cell) const {
    std::ostringstream os;
    os << stage << " at cell " << cell << ", t=" << time_;
    return os.str();
  }

  StageSolution<M> solve_plain(const State& base, double theta, const State& source) {
    auto sol = solve_stage_plain(model_, base, theta, source, options_.solver);
    record(sol, sol.unknowns.u_star);
    return sol;
  }

  StageSolution<M> solve_entropic(const StageTarget<M>& target, double guess) {
    StageSolution<M> sol;
    if constexpr (EntropicBalanceLaw<Model>) {
      if (options_.closure == ClosureKind::EntropicFull) {
        sol = solve_stage_entropic(model_, target, guess, options_.solver);
      } else {
        if constexpr (ScalarEliminable<Model>)
          sol = solve_stage_scalar(model_, target, guess, options_.solver);
      }
      if (options_.cross_check) cross_check(target, guess, sol);
      record(sol, sol.unknowns.u_star);
      stats_.max_abs_js = std::max(stats_.max_abs_js, std::abs(sol.unknowns.js));
      stats_.max_entropy_residual = std::max(stats_.max_entropy_residual, sol.entropy_residual);
      stats_.min_entropy_production =
          std::min(stats_.min_entropy_production, model_.entropy_production(sol.unknowns.u_star));
    } else {
      (void)target;
      (void)guess;
    }
    return sol;
  }

  void cross_check(const StageTarget<M>& target, double guess, const StageSolution<M>& sol) {
    if constexpr (ScalarEliminable<Model>) {
      const auto other = options_.closure == ClosureKind::EntropicFull
                             ? solve_stage_scalar(model_, target, guess, options_.solver)
                             : solve_stage_entropic(model_, target, guess, options_.solver);
      double diff = std::abs(other.unknowns.js - sol.unknowns.js);
      for (std::size_t k = 0; k < M; ++k)
        diff = std::max(diff, std::abs(other.unknowns.u_star[k] - sol.unknowns.u_star[k]));
      if (diff > options_.cross_check_tol) {
        throw DisagreementError("scalar and full entropic solvers differ by " + std::to_string(diff));
      }
    }
  }

  void record(const StageSolution<M>& sol, const State& u) {
    ++stats_.stage_solves;
    stats_.newton_iterations += sol.iterations;
    stats_.max_newton_iterations = std::max(stats_.max_newton_iterations, sol.iterations);
    if (sol.used_bisection) ++stats_.bisection_fallbacks;
    stats_.max_residual = std::max(stats_.max_residual, sol.residual_norm);
    if (!model_.is_valid(u)) throw InvalidState("stage produced an invalid state");
  }

  [[noreturn]] void fail_invalid(const char* stage, int cell) const {
    throw InvalidState("invalid state after " + context(stage, cell));
  }

  Model model_;
  double dx_;
  SchemeOptions options_;
  double time_ = 0.0;
  StepStats stats_;

  std::vector<State> flux_;
  std::vector<State> flux_slope_;
  std::vector<State> u_slope_;
  std::vector<State> source_;
  std::vector<double> entropy_;
  std::vector<double> entropy_flux_;
  std::vector<double> entropy_slope_;
  std::vector<double> entropy_flux_slope_;
  std::vector<double> js_cell_;
  std::vector<double> js13_;
};

}  // namespace stagger
