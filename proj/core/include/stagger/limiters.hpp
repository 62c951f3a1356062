#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>

namespace stagger {

/// Five consecutive samples f_{j-2} .. f_{j+2} around cell j.
struct StencilWindow {
  std::array<double, 5> f{};

  static StencilWindow around(std::span<const double> samples, std::size_t j) {
    return {{samples[j - 2], samples[j - 1], samples[j], samples[j + 1], samples[j + 2]}};
  }

  double operator[](int offset) const { return f[static_cast<std::size_t>(offset + 2)]; }
};

inline double minmod(double x, double y) {
  if (x > 0.0 && y > 0.0) return std::min(x, y);
  if (x < 0.0 && y < 0.0) return std::max(x, y);
  return 0.0;
}

/// D_{j+1/2} f: minmod of the two second differences centred on j and j+1.
inline double second_difference_limited(const StencilWindow& w) {
  return minmod(w[2] - 2.0 * w[1] + w[0], w[1] - 2.0 * w[0] + w[-1]);
}

/// D_{j-1/2} f, the index shift of second_difference_limited.
inline double second_difference_limited_left(const StencilWindow& w) {
  return minmod(w[1] - 2.0 * w[0] + w[-1], w[0] - 2.0 * w[-1] + w[-2]);
}

/// Limited undivided derivative f'_j; f'_j / dx approximates df/dx.
/// Exact on linear data.
inline double limited_derivative(const StencilWindow& w) {
  return minmod(w[1] - w[0] - 0.5 * second_difference_limited(w),
                w[0] - w[-1] + 0.5 * second_difference_limited_left(w));
}

/// Componentwise limited derivative of a sequence of vectors at index j.
template <std::size_t M>
std::array<double, M> limited_derivative(std::span<const std::array<double, M>> samples,
                                         std::size_t j) {
  std::array<double, M> out{};
  for (std::size_t k = 0; k < M; ++k) {
    StencilWindow w{{samples[j - 2][k], samples[j - 1][k], samples[j][k], samples[j + 1][k],
                     samples[j + 2][k]}};
    out[k] = limited_derivative(w);
  }
  return out;
}

}  // namespace stagger
