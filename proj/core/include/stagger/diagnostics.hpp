#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace stagger {

/// Sum of |f_{i+1} - f_i|.
double total_variation(std::span<const double> profile);

/// Strict interior local extrema whose height above (or depth below) the
/// nearer neighbour exceeds 1e-3 of the global range.
int spurious_extrema_count(std::span<const double> profile);

/// Index i of the steepest jump |f_{i+1} - f_i|; ties go to the smaller i.
int steepest_jump_index(std::span<const double> profile);

/// L1 norm of the difference of two equally sized profiles, times dx.
double l1_distance(std::span<const double> a, std::span<const double> b, double dx);

/// Averages pairs of cells: a profile on 2N cells restricted to N cells.
std::vector<double> restrict_by_two(std::span<const double> fine);

}  // namespace stagger
