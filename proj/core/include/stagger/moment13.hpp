#pragma once

#include <array>
#include <cstddef>

namespace stagger {

/// Constants of the reduced 13-moment shock-tube system in code units
/// (particle mass and Boltzmann constant equal to one).
struct ModelParams {
  double F = 5.0 / 3.0;
  double b = 1.0 / 20.0;
  double Dbar = 4.0 / 3.0;
  double epsilon = 1e-4;  // relaxation parameter, used as tau
  /// Constant multiplying det(pi)/rho^2 inside the entropy logarithm.
  double entropy_log_normalization = 1.0;

  void validate() const;
};

/// Physical fields of the one-dimensional reduction. The second-moment
/// tensor is diag(pi11, pi22, pi22).
struct PhysicalState {
  double rho = 1.0;
  double v1 = 0.0;
  double pi11 = 1.0;
  double pi22 = 1.0;
  double q1 = 0.0;

  double M1() const { return rho * v1; }
};

/// Skewness q . pi^{-1} . q of the 1D reduction.
double phi(const PhysicalState& w);

/// D_11 of D = Dbar + 1 - (tr pi / 3) pi^{-1}.
double d11(const PhysicalState& w, const ModelParams& p);

/// Reduced 13-moment system
///   u = (rho, M1, 1/2 rho v1^2 + 1/2 rho tr(pi), 1/2 rho pi22, q1),
/// with flux f(u), stiff production g(u) and the non-divergence remainder
/// h = (0, 0, 0, -pi22, -q1/rho) * J_s where J_s is the x-derivative of
/// entropy_flux_potential(u).
class Moment13Model {
public:
  static constexpr std::size_t kSize = 5;
  using State = std::array<double, kSize>;

  /// States with pi11, pi22 or 1 + 2 phi b below this are rejected.
  static constexpr double kValidityMargin = 1e-12;

  Moment13Model() = default;
  explicit Moment13Model(const ModelParams& params);

  const ModelParams& params() const { return params_; }

  State to_conserved(const PhysicalState& w) const;
  PhysicalState to_physical(const State& u) const;
  bool is_valid(const State& u) const noexcept;

  State flux(const State& u) const;
  State production(const State& u) const;
  /// Production with the entropic substitution of the remainder terms.
  State production(const State& u, double js) const;
  /// h(u) for a given value of J_s.
  State remainder(const State& u, double js) const;

  struct RemainderCoefficients {
    double c4;
    double c5;
  };
  RemainderCoefficients remainder_coefficients(const State& u) const;

  double entropy_flux_potential(const State& u) const;
  double entropy_density(const State& u) const;
  double entropy_flux(const State& u) const;
  double entropy_production(const State& u) const;
  /// Constant in front of J_s in the entropy balance (3 k_B / m^2).
  static constexpr double kEntropyJsFactor = 3.0;

  /// Closed-form solution of u = base + theta * g(u, js) for fixed js.
  /// Components 1-3 are explicit, u4 solves a linear relation and u5 a
  /// linear relation whose coefficient depends on u4.
  State stage_state_for_js(const State& base, double theta, double js) const;
  /// Infimum of the js values for which stage_state_for_js is realizable.
  double stage_js_lower_bound(const State& base, double theta) const;

private:
  PhysicalState checked_physical(const State& u) const;

  ModelParams params_{};
};

}  // namespace stagger
