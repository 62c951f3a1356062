#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "stagger/errors.hpp"

namespace stagger {

struct GridConfig {
  int N = 800;
  double x_lo = 0.0;
  double x_hi = 1.0;
  double lambda = 1.0 / 9.0;  // dt / dx
  double t_end = 0.07;

  static constexpr int kGhostWidth = 2;

  double dx() const { return (x_hi - x_lo) / N; }
  double dt() const { return lambda * dx(); }
  double cell_center(int j) const { return x_lo + (j + 0.5) * dx(); }

  void validate() const {
    if (N < 8) throw ConfigError("grid: N must be at least 8");
    if (!(lambda > 0.0)) throw ConfigError("grid: lambda must be positive");
    if (!(t_end >= 0.0)) throw ConfigError("grid: t_end must be non-negative");
    if (!(x_hi > x_lo)) throw ConfigError("grid: x_hi must exceed x_lo");
  }
};

enum class Staggering { Primal, Staggered };

/// Cell values plus kGhostWidth ghost cells on each side. Interior index j
/// maps to storage index j + kGhostWidth. A staggered field holds the N - 1
/// values at the edges x_{j+1/2} between interior cells j and j + 1.
template <std::size_t M>
class FieldArray {
public:
  using State = std::array<double, M>;
  static constexpr int kGhost = GridConfig::kGhostWidth;

  FieldArray() = default;
  FieldArray(int interior, Staggering staggering = Staggering::Primal)
      : interior_(interior), staggering_(staggering),
        data_(static_cast<std::size_t>(interior + 2 * kGhost)) {}

  int interior() const { return interior_; }
  std::size_t storage_size() const { return data_.size(); }
  Staggering staggering() const { return staggering_; }

  /// Interior access, j in [-kGhost, interior + kGhost).
  State& operator[](int j) { return data_[static_cast<std::size_t>(j + kGhost)]; }
  const State& operator[](int j) const { return data_[static_cast<std::size_t>(j + kGhost)]; }

  std::span<State> storage() { return data_; }
  std::span<const State> storage() const { return data_; }

  /// Values of component k at storage positions.
  std::vector<double> component(std::size_t k) const {
    std::vector<double> out(data_.size());
    for (std::size_t i = 0; i < data_.size(); ++i) out[i] = data_[i][k];
    return out;
  }

  std::vector<double> interior_component(std::size_t k) const {
    std::vector<double> out(static_cast<std::size_t>(interior_));
    for (int j = 0; j < interior_; ++j) out[static_cast<std::size_t>(j)] = (*this)[j][k];
    return out;
  }

  bool all_finite() const {
    for (const auto& s : data_)
      for (double x : s)
        if (!std::isfinite(x)) return false;
    return true;
  }

private:
  int interior_ = 0;
  Staggering staggering_ = Staggering::Primal;
  std::vector<State> data_;
};

/// Zero-gradient extension: every ghost copies the nearest interior value.
template <std::size_t M>
FieldArray<M> fill_ghosts(FieldArray<M> field) {
  const int n = field.interior();
  for (int g = 1; g <= FieldArray<M>::kGhost; ++g) {
    field[-g] = field[0];
    field[n - 1 + g] = field[n - 1];
  }
  return field;
}

template <std::size_t M>
void fill_ghosts_in_place(FieldArray<M>& field) {
  const int n = field.interior();
  for (int g = 1; g <= FieldArray<M>::kGhost; ++g) {
    field[-g] = field[0];
    field[n - 1 + g] = field[n - 1];
  }
}

}  // namespace stagger
