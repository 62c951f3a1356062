#include "stagger/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stagger {

double total_variation(std::span<const double> f) {
  double tv = 0.0;
  for (std::size_t i = 1; i < f.size(); ++i) tv += std::abs(f[i] - f[i - 1]);
  return tv;
}

int spurious_extrema_count(std::span<const double> f) {
  if (f.size() < 3) return 0;
  const auto [lo, hi] = std::minmax_element(f.begin(), f.end());
  const double threshold = 1e-3 * (*hi - *lo);
  int count = 0;
  for (std::size_t i = 1; i + 1 < f.size(); ++i) {
    const double dl = f[i] - f[i - 1];
    const double dr = f[i] - f[i + 1];
    const bool peak = dl > 0.0 && dr > 0.0;
    const bool trough = dl < 0.0 && dr < 0.0;
    if ((peak || trough) && std::min(std::abs(dl), std::abs(dr)) > threshold) ++count;
  }
  return count;
}

int steepest_jump_index(std::span<const double> f) {
  int best = 0;
  double best_jump = -1.0;
  for (std::size_t i = 0; i + 1 < f.size(); ++i) {
    const double jump = std::abs(f[i + 1] - f[i]);
    if (jump > best_jump) {
      best_jump = jump;
      best = static_cast<int>(i);
    }
  }
  return best;
}

double l1_distance(std::span<const double> a, std::span<const double> b, double dx) {
  if (a.size() != b.size()) throw std::invalid_argument("l1_distance: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s * dx;
}

std::vector<double> restrict_by_two(std::span<const double> fine) {
  if (fine.size() % 2 != 0) throw std::invalid_argument("restrict_by_two: odd size");
  std::vector<double> coarse(fine.size() / 2);
  for (std::size_t i = 0; i < coarse.size(); ++i)
    coarse[i] = 0.5 * (fine[2 * i] + fine[2 * i + 1]);
  return coarse;
}

}  // namespace stagger
