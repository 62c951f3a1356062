#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "stagger/closures.hpp"
#include "stagger/errors.hpp"
#include "stagger/field.hpp"
#include "stagger/moment13.hpp"
#include "stagger/scheme.hpp"
#include "support/stage_samples.hpp"

using namespace stagger;

namespace {

using State = Moment13Model::State;

State equilibrium(const Moment13Model& m, double rho, double v, double t) {
  return m.to_conserved(PhysicalState{rho, v, t, t, 0.0});
}

FieldArray<5> sine_field(const Moment13Model& m, int n, double amplitude) {
  FieldArray<5> f(n);
  for (int j = 0; j < n; ++j) {
    const double x = (j + 0.5) / n;
    const double s = amplitude * std::sin(2.0 * std::numbers::pi * x);
    f[j] = m.to_conserved(PhysicalState{1.0 + s, 0.2 + s, 1.5 + s, 1.5 - s, s});
  }
  return fill_ghosts(f);
}

double max_diff(const FieldArray<5>& a, const FieldArray<5>& b, int skip) {
  double d = 0.0;
  for (int j = skip; j < a.interior() - skip; ++j)
    for (std::size_t k = 0; k < 5; ++k) d = std::max(d, std::abs(a[j][k] - b[j][k]));
  return d;
}

}  // namespace

TEST_SUITE("closures") {
  const Moment13Model model{};

  TEST_CASE("closure names") {
    CHECK(parse_closure("naive") == ClosureKind::Naive);
    CHECK(parse_closure("entropic-full") == ClosureKind::EntropicFull);
    CHECK(parse_closure("entropic-scalar") == ClosureKind::EntropicScalar);
    CHECK(parse_closure("entropic") == ClosureKind::EntropicScalar);
    CHECK(parse_closure("none") == ClosureKind::None);
    for (auto k : {ClosureKind::None, ClosureKind::Naive, ClosureKind::EntropicFull,
                   ClosureKind::EntropicScalar})
      CHECK(parse_closure(to_string(k)) == k);
    CHECK_THROWS_AS(parse_closure("exact"), ConfigError);
  }

  TEST_CASE("naive source vanishes for uniform data and for q = 0") {
    FieldArray<5> f(12);
    for (int j = 0; j < 12; ++j) f[j] = model.to_conserved(PhysicalState{1.0, 0.1, 2.0, 1.0, 0.3});
    f = fill_ghosts(f);
    for (int j = 0; j < 12; ++j)
      for (double x : naive_source(f, j, model, 0.1)) CHECK(x == 0.0);
    for (int j = 0; j < 12; ++j)
      f[j] = model.to_conserved(PhysicalState{1.0 + 0.1 * j, 0.2 * j, 2.0 + j, 1.0, 0.0});
    f = fill_ghosts(f);
    for (int j = 0; j < 12; ++j)
      for (double x : naive_source(f, j, model, 0.1)) CHECK(x == 0.0);
  }

  TEST_CASE("naive source is exact for a linear potential") {
    // With rho = pi11 = 1 the potential is P = 2 F b q / (1 + 2 b q^2); pick
    // q so that P = p0 + a x exactly.
    const double F = model.params().F, b = model.params().b, a = 0.05, p0 = 0.01, dx = 0.1;
    FieldArray<5> f(10);
    for (int j = 0; j < 10; ++j) {
      const double P = p0 + a * dx * j;
      const double q = (F * b - std::sqrt(F * F * b * b - 2.0 * b * P * P)) / (2.0 * b * P);
      f[j] = model.to_conserved(PhysicalState{1.0, 0.0, 1.0, 0.7, q});
      CHECK(model.entropy_flux_potential(f[j]) == doctest::Approx(P).epsilon(1e-13));
    }
    f = fill_ghosts(f);
    for (int j = 1; j < 9; ++j) {
      const auto h = naive_source(f, j, model, dx);
      CHECK(h[3] == doctest::Approx(-0.7 * a).epsilon(1e-10));
      CHECK(h[0] == 0.0);
    }
  }

  TEST_CASE("uniform equilibrium is a fixed point of the stage residuals") {
    const State u = equilibrium(model, 0.75, 0.25, 1.25);
    const State zero{};
    const StageUnknowns<5> stage{u, 0.0};
    const auto r = entropic_residual(stage, u, zero, 0.0, 1.0 / 3.0, 1e-4, 1e-3, model);
    for (double x : r) CHECK(x == 0.0);
    const auto t = predictor_target(model, u, zero, 0.0, 0.5, 1e-4, 1e-3);
    for (double x : entropic_increment_residual(model, stage, t)) CHECK(x == 0.0);

    const auto full = solve_stage_entropic(model, t, 0.0, SolverConfig{});
    const auto scalar = solve_stage_scalar(model, t, 0.0, SolverConfig{});
    for (std::size_t k = 0; k < 5; ++k) {
      CHECK(full.unknowns.u_star[k] == u[k]);
      CHECK(scalar.unknowns.u_star[k] == doctest::Approx(u[k]).epsilon(1e-15));
    }
    CHECK(full.unknowns.js == 0.0);
    CHECK(std::abs(scalar.unknowns.js) < 1e-12);
  }

  TEST_CASE("without relaxation the first five residuals are the explicit update") {
    ModelParams p;
    p.epsilon = 1e30;
    const Moment13Model m(p);
    const State un = m.to_conserved(PhysicalState{1.1, 0.4, 2.0, 1.0, 0.0});
    const State us = m.to_conserved(PhysicalState{1.0, 0.3, 1.9, 1.1, 0.0});
    const State slope{0.01, -0.02, 0.03, 0.004, 0.0};
    const double adt = 0.5 * 1e-3, dx = 1e-2;
    const auto r = entropic_residual(StageUnknowns<5>{us, 0.0}, un, slope, 0.0, 0.5, 1e-3, dx, m);
    for (std::size_t k = 0; k < 5; ++k)
      CHECK(r[k] == doctest::Approx((us[k] - un[k]) / adt + slope[k] / dx).epsilon(1e-12));
  }

  TEST_CASE("sixth residual against an independent evaluation") {
    const PhysicalState wn{1.2, 0.3, 1.8, 1.4, 0.05};
    const PhysicalState ws{1.19, 0.31, 1.75, 1.42, 0.045};
    const State un = model.to_conserved(wn), us = model.to_conserved(ws);
    const double js = 0.37, fs_slope = 0.002, alpha = 1.0 / 3.0, dt = 1e-4, dx = 1e-3;
    auto s_of = [&](const PhysicalState& w) {
      return w.rho * (0.5 * std::log(w.pi11 * w.pi22 * w.pi22 / (w.rho * w.rho)) + 2.5 -
                      model.params().b * w.q1 * w.q1 / w.pi11);
    };
    const double eps = model.params().epsilon;
    const double gs = ws.rho / (6 * eps) * ((ws.pi11 + 2 * ws.pi22) * (1 / ws.pi11 + 2 / ws.pi22) - 9) +
                      ws.rho * model.params().b / eps * ws.q1 * ws.q1 * model.params().Dbar / ws.pi11;
    const double expect = (s_of(ws) - s_of(wn)) / (alpha * dt) + fs_slope / dx - gs + 3 * js;
    const auto r = entropic_residual(StageUnknowns<5>{us, js}, un, State{}, fs_slope, alpha, dt, dx, model);
    CHECK(r[5] == doctest::Approx(expect).epsilon(1e-10));
    // Increment form is the rate form times theta.
    const auto t = predictor_target(model, un, State{}, fs_slope, alpha, dt, dx);
    const auto ri = entropic_increment_residual(model, StageUnknowns<5>{us, js}, t);
    CHECK(ri[5] == doctest::Approx(r[5] * alpha * dt).epsilon(1e-9));
  }

  TEST_CASE("with q = 0 the converged J_s satisfies the rearranged entropy balance") {
    const State un = model.to_conserved(PhysicalState{1.0, 0.2, 1.6, 1.5, 0.0});
    const State slope{0.002, 0.001, -0.003, 0.0005, 0.0};
    const double fs_slope = 0.004, alpha = 0.5, dt = 1e-4, dx = 1.0 / 800;
    const auto t = predictor_target(model, un, slope, fs_slope, alpha, dt, dx);
    const auto sol = solve_stage_scalar(model, t, 0.0, SolverConfig{});
    const State& us = sol.unknowns.u_star;
    CHECK(us[4] == 0.0);
    const double rearranged = (model.entropy_production(us) -
                               (model.entropy_density(us) - model.entropy_density(un)) / (alpha * dt) -
                               fs_slope / dx) /
                              3.0;
    CHECK(sol.unknowns.js == doctest::Approx(rearranged).epsilon(1e-6));
  }

  TEST_CASE("scalar and full solvers agree on random stages") {
    std::mt19937 rng(1234);
    for (double eps : {1e-4, 1.0}) {
      ModelParams p;
      p.epsilon = eps;
      const Moment13Model m(p);
      for (int i = 0; i < 50; ++i) {
        const auto s = testing::random_stage(m, rng);
        const auto full = solve_stage_entropic(m, s.target, 0.0, SolverConfig{});
        const auto scalar = solve_stage_scalar(m, s.target, 0.0, SolverConfig{});
        CHECK(full.residual_norm <= 1e-12);
        CHECK(scalar.entropy_residual <= 1e-12);
        for (std::size_t k = 0; k < 5; ++k)
          CHECK(std::abs(full.unknowns.u_star[k] - scalar.unknowns.u_star[k]) <= 1e-10);
        CHECK(std::abs(full.unknowns.js - scalar.unknowns.js) <= 1e-10);
      }
    }
  }

  TEST_CASE("stages at the case 1 interface converge and the scalar residual is bracketed") {
    const double dx = 1.0 / 800, dt = dx / 9.0;
    const State l = equilibrium(model, 1.0, 0.0, 5.0 / 3.0);
    const State r = equilibrium(model, 0.125, 0.0, 4.0 / 3.0);
    FieldArray<5> f(16);
    for (int j = 0; j < 16; ++j) f[j] = j < 8 ? l : r;
    f = fill_ghosts(f);
    for (int j = 5; j < 11; ++j) {
      std::array<State, 5> fl;
      std::array<double, 5> fs{};
      for (int o = -2; o <= 2; ++o) {
        fl[static_cast<std::size_t>(o + 2)] = model.flux(f[j + o]);
        fs[static_cast<std::size_t>(o + 2)] = model.entropy_flux(f[j + o]);
      }
      const auto slope = limited_derivative<5>(std::span<const State>(fl), 2);
      for (double alpha : {1.0 / 3.0, 0.5}) {
        const auto t = predictor_target(model, f[j], slope, limited_derivative(StencilWindow{fs}),
                                        alpha, dt, dx);
        const auto sol = solve_stage_scalar(model, t, 0.0, SolverConfig{});
        CHECK(sol.residual_norm <= 1e-12);
        const auto full = solve_stage_entropic(model, t, 0.0, SolverConfig{});
        CHECK(full.residual_norm <= 1e-12);
        const auto bracket = scalar_stage_bracket(model, t, 1e6);
        REQUIRE(bracket.has_value());
        CHECK(bracket->first >= -1e6);
        CHECK(bracket->second <= 1e6);
        CHECK(scalar_stage_residual(model, t, bracket->first) < 0.0);
        CHECK(scalar_stage_residual(model, t, bracket->second) > 0.0);
        const double root = bisect_scalar([&](double js) { return scalar_stage_residual(model, t, js); },
                                          bracket->first, bracket->second);
        CHECK(root == doctest::Approx(sol.unknowns.js).epsilon(1e-9));
      }
    }
  }

  TEST_CASE("plain stage with a fixed source") {
    const State base = model.to_conserved(PhysicalState{1.0, 0.0, 2.0, 1.0, 0.1});
    const State src{0.0, 0.0, 0.0, -0.5, 0.2};
    const double theta = 1e-4;
    const auto sol = solve_stage_plain(model, base, theta, src, SolverConfig{});
    const auto g = model.production(sol.unknowns.u_star);
    for (std::size_t k = 0; k < 5; ++k)
      CHECK(std::abs(sol.unknowns.u_star[k] - base[k] - theta * (g[k] + src[k])) <= 1e-12);
  }

  TEST_CASE("J_s depends only on the five-cell stencil") {
    ModelParams p;
    p.epsilon = 1.0;
    const Moment13Model m(p);
    const int n = 40;
    FieldArray<5> f = sine_field(m, n, 1e-2);
    SchemeOptions opt;
    opt.closure = ClosureKind::EntropicScalar;
    CentralScheme<Moment13Model> a(m, 1.0 / n, opt), b(m, 1.0 / n, opt);
    const auto ref = a.predictor(f, 1.0 / 3.0, 1e-3);
    FieldArray<5> g = f;
    for (int j = 25; j < n; ++j) g[j] = m.to_conserved(PhysicalState{2.0, -0.1, 3.0, 2.5, 0.1});
    g = fill_ghosts(g);
    const auto out = b.predictor(g, 1.0 / 3.0, 1e-3);
    for (int j = 0; j < 22; ++j) {
      CHECK(out.js[static_cast<std::size_t>(j)] == ref.js[static_cast<std::size_t>(j)]);
      for (std::size_t k = 0; k < 5; ++k) CHECK(out.u[j][k] == ref.u[j][k]);
    }
  }

  TEST_CASE("naive and entropic closures agree to second order on smooth data") {
    ModelParams p;
    p.epsilon = 1.0;
    const Moment13Model m(p);
    double prev = 0.0;
    for (int n : {100, 200, 400}) {
      const FieldArray<5> f = sine_field(m, n, 1e-3);
      const double dx = 1.0 / n, dt = 0.05 * dx;
      SchemeOptions naive, entropic;
      naive.closure = ClosureKind::Naive;
      entropic.closure = ClosureKind::EntropicScalar;
      CentralScheme<Moment13Model> sn(m, dx, naive), se(m, dx, entropic);
      const double d = max_diff(sn.step(f, dt), se.step(f, dt), 3);
      MESSAGE("N=" << n << " closure difference " << d);
      if (prev > 0.0) CHECK(prev / d >= 3.5);
      prev = d;
    }
  }
}
