#include "stagger/euler.hpp"

#include <algorithm>
#include <cmath>

#include "stagger/errors.hpp"

namespace stagger {

EulerModel::EulerModel(double gamma) : gamma_(gamma) {
  if (!(gamma > 1.0)) throw ConfigError("gamma must exceed 1");
}

EulerModel::State EulerModel::to_conserved(const EulerPrimitive& w) const {
  if (!(w.rho > 0.0) || !(w.p > 0.0)) throw InvalidState("euler: rho and p must be positive");
  return {w.rho, w.rho * w.v, w.p / (gamma_ - 1.0) + 0.5 * w.rho * w.v * w.v};
}

double EulerModel::pressure(const State& u) const {
  return (gamma_ - 1.0) * (u[2] - 0.5 * u[1] * u[1] / u[0]);
}

EulerPrimitive EulerModel::to_primitive(const State& u) const {
  if (!is_valid(u)) throw InvalidState("euler: state has non-positive density or pressure");
  return {u[0], u[1] / u[0], pressure(u)};
}

bool EulerModel::is_valid(const State& u) const noexcept {
  for (double x : u)
    if (!std::isfinite(x)) return false;
  return u[0] > 0.0 && pressure(u) > 0.0;
}

EulerModel::State EulerModel::flux(const State& u) const {
  const EulerPrimitive w = to_primitive(u);
  return {u[1], u[1] * w.v + w.p, w.v * (u[2] + w.p)};
}

double ExactRiemannSolver::pressure_function(double p, const EulerPrimitive& s, double gamma,
                                             double* derivative) {
  const double c = std::sqrt(gamma * s.p / s.rho);
  if (p > s.p) {
    const double a = 2.0 / ((gamma + 1.0) * s.rho);
    const double b = (gamma - 1.0) / (gamma + 1.0) * s.p;
    const double root = std::sqrt(a / (p + b));
    if (derivative) *derivative = root * (1.0 - 0.5 * (p - s.p) / (b + p));
    return (p - s.p) * root;
  }
  const double pr = p / s.p;
  if (derivative) *derivative = std::pow(pr, -0.5 * (gamma + 1.0) / gamma) / (s.rho * c);
  return 2.0 * c / (gamma - 1.0) * (std::pow(pr, 0.5 * (gamma - 1.0) / gamma) - 1.0);
}

ExactRiemannSolver::ExactRiemannSolver(const EulerPrimitive& left, const EulerPrimitive& right,
                                       double gamma)
    : left_(left), right_(right), gamma_(gamma) {
  if (!(left.rho > 0.0) || !(left.p > 0.0) || !(right.rho > 0.0) || !(right.p > 0.0))
    throw InvalidState("exact riemann: states must have positive rho and p");
  c_left_ = std::sqrt(gamma * left.p / left.rho);
  c_right_ = std::sqrt(gamma * right.p / right.rho);
  const double dv = right.v - left.v;
  if (2.0 / (gamma - 1.0) * (c_left_ + c_right_) <= dv)
    throw VacuumError("exact riemann: initial data generate vacuum");

  // Two-rarefaction guess, then Newton.
  const double z = 0.5 * (gamma - 1.0) / gamma;
  double p = std::pow((c_left_ + c_right_ - 0.5 * (gamma - 1.0) * dv) /
                          (c_left_ / std::pow(left.p, z) + c_right_ / std::pow(right.p, z)),
                      1.0 / z);
  p = std::max(p, 1e-14);
  for (int it = 0; it < 100; ++it) {
    double dl = 0.0;
    double dr = 0.0;
    const double f = pressure_function(p, left, gamma, &dl) +
                     pressure_function(p, right, gamma, &dr) + dv;
    double next = p - f / (dl + dr);
    if (next <= 0.0) next = 0.5 * p;
    const double change = 2.0 * std::abs(next - p) / (next + p);
    p = next;
    if (change < 1e-15) break;
  }
  const double fl = pressure_function(p, left, gamma);
  const double fr = pressure_function(p, right, gamma);
  star_ = {p, 0.5 * (left.v + right.v) + 0.5 * (fr - fl)};
}

EulerPrimitive ExactRiemannSolver::sample(double s) const {
  const double g = gamma_;
  const double gm = (g - 1.0) / (g + 1.0);
  const double ps = star_.p;
  const double vs = star_.v;

  if (s <= vs) {
    const EulerPrimitive& w = left_;
    const double c = c_left_;
    if (ps > w.p) {
      const double ratio = ps / w.p;
      const double speed = w.v - c * std::sqrt((g + 1.0) / (2.0 * g) * ratio + (g - 1.0) / (2.0 * g));
      if (s <= speed) return w;
      return {w.rho * (ratio + gm) / (gm * ratio + 1.0), vs, ps};
    }
    const double head = w.v - c;
    const double cs = c * std::pow(ps / w.p, (g - 1.0) / (2.0 * g));
    const double tail = vs - cs;
    if (s <= head) return w;
    if (s >= tail) return {w.rho * std::pow(ps / w.p, 1.0 / g), vs, ps};
    const double k = 2.0 / (g + 1.0) + gm / c * (w.v - s);
    return {w.rho * std::pow(k, 2.0 / (g - 1.0)), 2.0 / (g + 1.0) * (c + 0.5 * (g - 1.0) * w.v + s),
            w.p * std::pow(k, 2.0 * g / (g - 1.0))};
  }

  const EulerPrimitive& w = right_;
  const double c = c_right_;
  if (ps > w.p) {
    const double ratio = ps / w.p;
    const double speed = w.v + c * std::sqrt((g + 1.0) / (2.0 * g) * ratio + (g - 1.0) / (2.0 * g));
    if (s >= speed) return w;
    return {w.rho * (ratio + gm) / (gm * ratio + 1.0), vs, ps};
  }
  const double head = w.v + c;
  const double cs = c * std::pow(ps / w.p, (g - 1.0) / (2.0 * g));
  const double tail = vs + cs;
  if (s >= head) return w;
  if (s <= tail) return {w.rho * std::pow(ps / w.p, 1.0 / g), vs, ps};
  const double k = 2.0 / (g + 1.0) - gm / c * (w.v - s);
  return {w.rho * std::pow(k, 2.0 / (g - 1.0)), 2.0 / (g + 1.0) * (-c + 0.5 * (g - 1.0) * w.v + s),
          w.p * std::pow(k, 2.0 * g / (g - 1.0))};
}

EulerPrimitive exact_riemann(const EulerPrimitive& left, const EulerPrimitive& right,
                             double x_over_t, double gamma) {
  return ExactRiemannSolver(left, right, gamma).sample(x_over_t);
}

}  // namespace stagger
