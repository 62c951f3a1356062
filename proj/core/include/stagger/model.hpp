#pragma once

#include <concepts>
#include <cstddef>

namespace stagger {

/// du/dt + df(u)/dx = g(u) with a fixed-size conserved state.
template <class M>
concept BalanceLaw = requires(const M& m, const typename M::State& u) {
  { M::kSize } -> std::convertible_to<std::size_t>;
  { m.flux(u) } -> std::same_as<typename M::State>;
  { m.production(u) } -> std::same_as<typename M::State>;
  { m.is_valid(u) } -> std::same_as<bool>;
};

/// Balance law with an entropy and a remainder h(u) = c(u) * J_s where J_s is
/// the x-derivative of entropy_flux_potential(u).
template <class M>
concept EntropicBalanceLaw = BalanceLaw<M> && requires(const M& m, const typename M::State& u,
                                                       double js) {
  { m.production(u, js) } -> std::same_as<typename M::State>;
  { m.remainder(u, js) } -> std::same_as<typename M::State>;
  { m.entropy_density(u) } -> std::convertible_to<double>;
  { m.entropy_flux(u) } -> std::convertible_to<double>;
  { m.entropy_production(u) } -> std::convertible_to<double>;
  { m.entropy_flux_potential(u) } -> std::convertible_to<double>;
  { M::kEntropyJsFactor } -> std::convertible_to<double>;
};

/// Entropic model whose stage equations can be eliminated down to a scalar
/// equation in J_s.
template <class M>
concept ScalarEliminable = EntropicBalanceLaw<M> && requires(const M& m,
                                                             const typename M::State& u,
                                                             double theta, double js) {
  { m.stage_state_for_js(u, theta, js) } -> std::same_as<typename M::State>;
  { m.stage_js_lower_bound(u, theta) } -> std::convertible_to<double>;
};

}  // namespace stagger
