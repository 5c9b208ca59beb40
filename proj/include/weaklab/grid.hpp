#pragma once

#include <span>
#include <vector>

namespace weaklab {

/// Symmetric log-spaced node set: 0, ±min_scale·2^{j/n} up to ±window_X.
struct GridSpec {
  double window_X = 1048576.0;        // 2^20
  double min_scale = 1.0 / 1048576.0;  // 2^-20
  int nodes_per_octave = 8;
};

void validate(const GridSpec& g);

std::vector<double> log_grid(const GridSpec& g);

/// Positive half only: min_scale·2^{j/n} for min_scale ≤ x ≤ window_X, plus 0 when `with_zero`.
std::vector<double> positive_log_grid(const GridSpec& g, bool with_zero);

/// log_grid merged with `extra`, clipped to [-X, X].
std::vector<double> window_nodes(const GridSpec& g, std::span<const double> extra);

/// Inserts 2^r - 1 equally spaced nodes inside every gap.
std::vector<double> subdivide(std::span<const double> nodes, int r);

}  // namespace weaklab
