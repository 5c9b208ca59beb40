#include "weaklab/grid.hpp"

#include <algorithm>
#include <cmath>

#include "weaklab/error.hpp"
#include "weaklab/step_function.hpp"

namespace weaklab {

void validate(const GridSpec& g) {
  require(std::isfinite(g.window_X) && g.window_X > 0, Errc::invalid_argument, "window_X must be positive");
  require(g.min_scale > 0 && g.min_scale < g.window_X, Errc::invalid_argument,
          "min_scale must lie in (0, window_X)");
  require(g.nodes_per_octave >= 1 && g.nodes_per_octave <= 1024, Errc::invalid_argument,
          "nodes_per_octave must be in [1, 1024]");
}

std::vector<double> positive_log_grid(const GridSpec& g, bool with_zero) {
  validate(g);
  std::vector<double> out;
  if (with_zero) out.push_back(0.0);
  const double octaves = std::log2(g.window_X / g.min_scale);
  const long steps = static_cast<long>(std::floor(octaves * g.nodes_per_octave + 1e-9));
  for (long j = 0; j <= steps; ++j) {
    out.push_back(g.min_scale * std::exp2(static_cast<double>(j) / g.nodes_per_octave));
  }
  if (out.back() < g.window_X) out.push_back(g.window_X);
  else out.back() = g.window_X;
  return out;
}

std::vector<double> log_grid(const GridSpec& g) {
  const std::vector<double> pos = positive_log_grid(g, false);
  std::vector<double> out;
  out.reserve(2 * pos.size() + 1);
  for (auto it = pos.rbegin(); it != pos.rend(); ++it) out.push_back(-*it);
  out.push_back(0.0);
  out.insert(out.end(), pos.begin(), pos.end());
  return out;
}

std::vector<double> window_nodes(const GridSpec& g, std::span<const double> extra) {
  std::vector<double> clipped;
  for (double x : extra) {
    if (x >= -g.window_X && x <= g.window_X) clipped.push_back(x);
  }
  std::sort(clipped.begin(), clipped.end());
  return merge_nodes(log_grid(g), clipped);
}

std::vector<double> subdivide(std::span<const double> nodes, int r) {
  require(r >= 0 && r <= 20, Errc::invalid_argument, "subdivision level must be in [0, 20]");
  std::vector<double> out;
  if (nodes.empty()) return out;
  const long parts = 1L << r;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const double a = nodes[i];
    const double b = nodes[i + 1];
    out.push_back(a);
    for (long m = 1; m < parts; ++m) out.push_back(a + (b - a) * static_cast<double>(m) / parts);
  }
  out.push_back(nodes.back());
  return out;
}

}  // namespace weaklab
