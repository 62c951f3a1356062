#include "stagger/moment13.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "stagger/errors.hpp"

namespace stagger {

namespace {

std::string describe(const Moment13Model::State& u) {
  std::ostringstream os;
  os.precision(17);
  os << "u = (" << u[0] << ", " << u[1] << ", " << u[2] << ", " << u[3] << ", " << u[4] << ")";
  return os.str();
}

double closure_factor(const PhysicalState& w, const ModelParams& p) {
  return 2.0 * p.b / (1.0 + 2.0 * phi(w) * p.b);
}

}  // namespace

void ModelParams::validate() const {
  if (!(F > 0.0) || !(b > 0.0) || !(Dbar > 0.0) || !(epsilon > 0.0))
    throw ConfigError("model parameters F, b, Dbar and epsilon must be positive");
  if (!(entropy_log_normalization > 0.0))
    throw ConfigError("entropy_log_normalization must be positive");
}

double phi(const PhysicalState& w) { return w.q1 * w.q1 / w.pi11; }

double d11(const PhysicalState& w, const ModelParams& p) {
  return p.Dbar + 1.0 - (w.pi11 + 2.0 * w.pi22) / (3.0 * w.pi11);
}

Moment13Model::Moment13Model(const ModelParams& params) : params_(params) { params_.validate(); }

Moment13Model::State Moment13Model::to_conserved(const PhysicalState& w) const {
  if (!(w.rho > 0.0) || !(w.pi11 > 0.0) || !(w.pi22 > 0.0) ||
      !(1.0 + 2.0 * phi(w) * params_.b > 0.0))
    throw InvalidState("physical state violates rho > 0, pi > 0 or 1 + 2 phi b > 0");
  return {w.rho, w.rho * w.v1, 0.5 * w.rho * w.v1 * w.v1 + 0.5 * w.rho * (w.pi11 + 2.0 * w.pi22),
          0.5 * w.rho * w.pi22, w.q1};
}

PhysicalState Moment13Model::to_physical(const State& u) const {
  PhysicalState w;
  w.rho = u[0];
  w.v1 = u[1] / u[0];
  w.pi11 = (-u[1] * u[1] + 2.0 * u[0] * u[2] - 4.0 * u[0] * u[3]) / (u[0] * u[0]);
  w.pi22 = 2.0 * u[3] / u[0];
  w.q1 = u[4];
  if (!(u[0] > 0.0) || !(u[3] > 0.0) || !(w.pi11 > 0.0))
    throw InvalidState("conserved state is not realizable: " + describe(u));
  return w;
}

bool Moment13Model::is_valid(const State& u) const noexcept {
  for (double x : u)
    if (!std::isfinite(x)) return false;
  if (!(u[0] > 0.0)) return false;
  const double pi11 = (-u[1] * u[1] + 2.0 * u[0] * u[2] - 4.0 * u[0] * u[3]) / (u[0] * u[0]);
  const double pi22 = 2.0 * u[3] / u[0];
  if (!(pi11 >= kValidityMargin) || !(pi22 >= kValidityMargin)) return false;
  return 1.0 + 2.0 * params_.b * u[4] * u[4] / pi11 >= kValidityMargin;
}

PhysicalState Moment13Model::checked_physical(const State& u) const {
  if (!is_valid(u)) throw InvalidState("state outside the validity margin: " + describe(u));
  return to_physical(u);
}

Moment13Model::State Moment13Model::flux(const State& u) const {
  const PhysicalState w = checked_physical(u);
  const double tr = w.pi11 + 2.0 * w.pi22;
  const double v = w.v1;
  const double kappa = closure_factor(w, params_);
  return {
      u[1],
      v * u[1] + w.rho * w.pi11,
      0.5 * w.rho * v * v * v + 0.5 * w.rho * v * (3.0 * w.pi11 + 2.0 * w.pi22) +
          params_.F * kappa * w.rho * tr * w.q1,
      0.5 * w.rho * w.pi22 * v,
      v * w.q1 + params_.F * tr,
  };
}

Moment13Model::State Moment13Model::production(const State& u) const {
  const PhysicalState w = checked_physical(u);
  const double eps = params_.epsilon;
  return {0.0, 0.0, 0.0, -0.5 * w.rho / 3.0 / eps * (w.pi22 - w.pi11),
          -0.5 / eps * d11(w, params_) * w.q1};
}

Moment13Model::State Moment13Model::production(const State& u, double js) const {
  State g = production(u);
  const State h = remainder(u, js);
  g[3] += h[3];
  g[4] += h[4];
  return g;
}

Moment13Model::State Moment13Model::remainder(const State& u, double js) const {
  const auto c = remainder_coefficients(u);
  return {0.0, 0.0, 0.0, c.c4 * js, c.c5 * js};
}

Moment13Model::RemainderCoefficients Moment13Model::remainder_coefficients(const State& u) const {
  const PhysicalState w = checked_physical(u);
  return {-w.pi22, -w.q1 / w.rho};
}

double Moment13Model::entropy_flux_potential(const State& u) const {
  const PhysicalState w = checked_physical(u);
  return params_.F * closure_factor(w, params_) * w.rho * w.q1;
}

double Moment13Model::entropy_density(const State& u) const {
  const PhysicalState w = checked_physical(u);
  const double det = w.pi11 * w.pi22 * w.pi22;
  return w.rho * (0.5 * std::log(params_.entropy_log_normalization * det / (w.rho * w.rho)) +
                  2.5 - params_.b * phi(w));
}

double Moment13Model::entropy_flux(const State& u) const {
  return u[1] / u[0] * entropy_density(u);
}

double Moment13Model::entropy_production(const State& u) const {
  const PhysicalState w = checked_physical(u);
  const double eps = params_.epsilon;
  // (pi11 + 2 pi22)(1/pi11 + 2/pi22) - 9 = 2 (pi11 - pi22)^2 / (pi11 pi22),
  // written without the cancellation.
  const double d = w.pi11 - w.pi22;
  const double bracket = 2.0 * d * d / (w.pi11 * w.pi22);
  return w.rho / (6.0 * eps) * bracket +
         w.rho * params_.b / eps * w.q1 * params_.Dbar * w.q1 / w.pi11;
}

Moment13Model::State Moment13Model::stage_state_for_js(const State& base, double theta,
                                                       double js) const {
  const double eps = params_.epsilon;
  const double u1 = base[0];
  const double u2 = base[1];
  const double u3 = base[2];
  if (!(u1 > 0.0)) throw InvalidState("stage density is not positive: " + describe(base));
  const double a = 2.0 * u1 * u3 - u2 * u2;

  const double den4 = 1.0 + theta / eps + 2.0 * theta * js / u1;
  const double u4 = (base[3] + theta * a / (6.0 * eps * u1)) / den4;
  State u{u1, u2, u3, u4, 0.0};
  if (!(den4 > 0.0) || !(u4 > 0.0))
    throw InvalidState("stage u4 is not realizable for the given J_s");

  const double pi11 = (a - 4.0 * u1 * u4) / (u1 * u1);
  const double pi22 = 2.0 * u4 / u1;
  if (!(pi11 > 0.0)) throw InvalidState("stage pi11 is not positive for the given J_s");
  const double d = params_.Dbar + 1.0 - (pi11 + 2.0 * pi22) / (3.0 * pi11);
  const double den5 = 1.0 + theta * d / (2.0 * eps) + theta * js / u1;
  if (!(std::abs(den5) > 0.0)) throw InvalidState("singular q1 relation in stage solve");
  u[4] = base[4] / den5;
  return u;
}

double Moment13Model::stage_js_lower_bound(const State& base, double theta) const {
  const double eps = params_.epsilon;
  const double u1 = base[0];
  const double a = 2.0 * u1 * base[2] - base[1] * base[1];
  const double n4 = base[3] + theta * a / (6.0 * eps * u1);
  const double d0 = 1.0 + theta / eps;
  const double c = 2.0 * theta / u1;
  if (!(a > 0.0) || !(n4 > 0.0) || !(c > 0.0))
    return std::numeric_limits<double>::quiet_NaN();
  // pi11 > 0  <=>  d0 + c js > 4 u1 n4 / a ; this also implies u4 > 0.
  return (4.0 * u1 * n4 / a - d0) / c;
}

}  // namespace stagger
