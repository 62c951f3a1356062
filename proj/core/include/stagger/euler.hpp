#pragma once

#include <array>
#include <cstddef>

namespace stagger {

/// Primitive Euler state.
struct EulerPrimitive {
  double rho = 1.0;
  double v = 0.0;
  double p = 1.0;
};

/// One-dimensional Euler equations of an ideal gas, u = (rho, M1, E).
/// Homogeneous (g = 0); used to validate the scheme core.
class EulerModel {
public:
  static constexpr std::size_t kSize = 3;
  using State = std::array<double, kSize>;

  explicit EulerModel(double gamma = 5.0 / 3.0);

  double gamma() const { return gamma_; }

  State to_conserved(const EulerPrimitive& w) const;
  EulerPrimitive to_primitive(const State& u) const;
  double pressure(const State& u) const;
  bool is_valid(const State& u) const noexcept;

  State flux(const State& u) const;
  State production(const State&) const { return {0.0, 0.0, 0.0}; }

private:
  double gamma_;
};

/// Star region of the exact Riemann solution.
struct StarState {
  double p;
  double v;
};

/// Exact solver for the Euler Riemann problem (ideal gas). Star pressure by
/// Newton iteration on the pressure function; waves sampled analytically.
class ExactRiemannSolver {
public:
  ExactRiemannSolver(const EulerPrimitive& left, const EulerPrimitive& right,
                     double gamma = 5.0 / 3.0);

  const StarState& star() const { return star_; }
  /// Self-similar solution at x/t.
  EulerPrimitive sample(double x_over_t) const;

  /// Toro's pressure function f_K(p) and its derivative for one side.
  static double pressure_function(double p, const EulerPrimitive& side, double gamma,
                                  double* derivative = nullptr);

private:
  EulerPrimitive left_, right_;
  double gamma_;
  double c_left_, c_right_;
  StarState star_{};
};

/// Convenience wrapper: exact solution at x/t.
EulerPrimitive exact_riemann(const EulerPrimitive& left, const EulerPrimitive& right,
                             double x_over_t, double gamma = 5.0 / 3.0);

}  // namespace stagger
