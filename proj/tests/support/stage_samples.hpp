#pragma once

// Random predictor stages built from smooth near-equilibrium data.

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "stagger/closures.hpp"
#include "stagger/limiters.hpp"
#include "stagger/moment13.hpp"

namespace stagger::testing {

struct StageSample {
  Moment13Model::State u_n;
  Moment13Model::State flux_slope;
  double entropy_flux_slope;
  double alpha;
  double dt;
  double dx;
  StageTarget<5> target;
};

inline StageSample random_stage(const Moment13Model& model, std::mt19937& rng, double dx = 1.0 / 800,
                                double lambda = 1.0 / 9) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  auto in = [&](double lo, double hi) { return lo + (hi - lo) * u01(rng); };
  const double rho = in(0.1, 2.0), v = in(-0.5, 0.5), temp = in(0.5, 3.0);
  const double a_rho = in(-1e-2, 1e-2), a_v = in(-1e-2, 1e-2), a_11 = in(-1e-2, 1e-2),
               a_22 = in(-1e-2, 1e-2), a_q = in(-1e-2, 1e-2);
  const double k = in(5.0, 40.0), phase = in(0.0, 6.283);
  const double aniso = in(-1e-3, 1e-3), q0 = in(-1e-3, 1e-3);

  std::array<Moment13Model::State, 5> cells;
  for (int i = 0; i < 5; ++i) {
    const double s = std::sin(k * (i - 2) * dx + phase);
    PhysicalState w;
    w.rho = rho * (1.0 + a_rho * s);
    w.v1 = v + a_v * s;
    w.pi11 = temp * (1.0 + aniso + a_11 * s);
    w.pi22 = temp * (1.0 - aniso + a_22 * s);
    w.q1 = temp * (q0 + a_q * s);
    cells[static_cast<std::size_t>(i)] = model.to_conserved(w);
  }
  std::array<Moment13Model::State, 5> flux;
  std::array<double, 5> fs{};
  for (std::size_t i = 0; i < 5; ++i) {
    flux[i] = model.flux(cells[i]);
    fs[i] = model.entropy_flux(cells[i]);
  }
  StageSample out;
  out.u_n = cells[2];
  out.flux_slope = limited_derivative<5>(std::span<const Moment13Model::State>(flux), 2);
  out.entropy_flux_slope = limited_derivative(StencilWindow{fs});
  out.alpha = u01(rng) < 0.5 ? 1.0 / 3.0 : 0.5;
  out.dx = dx;
  out.dt = lambda * dx;
  out.target = predictor_target(model, out.u_n, out.flux_slope, out.entropy_flux_slope, out.alpha,
                                out.dt, out.dx);
  return out;
}

}  // namespace stagger::testing
