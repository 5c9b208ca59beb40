#include "weaklab/norms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "weaklab/error.hpp"
#include "weaklab/operators.hpp"

namespace weaklab {

double DistributionFunction::operator()(double lambda) const {
  require(lambda >= 0, Errc::invalid_argument, "distribution needs lambda >= 0");
  double m = 0.0;
  for (std::size_t j = 0; j < thresholds.size() && thresholds[j] > lambda; ++j) m += level_masses[j];
  return m;
}

DistributionFunction distribution(const StepFunction& f, const Weight& w) {
  std::vector<std::pair<double, double>> cells;  // (|value|, w-measure)
  for (std::size_t i = 0; i < f.cells(); ++i) {
    const double v = std::fabs(f.values()[i]);
    if (v == 0.0) continue;
    const double m = w.measure(f.cell_lo(i), f.cell_hi(i));
    require(m >= 0, Errc::invalid_weight, "weight gives a negative measure");
    cells.emplace_back(v, m);
  }
  std::sort(cells.begin(), cells.end(), [](const auto& x, const auto& y) { return x.first > y.first; });

  DistributionFunction d;
  d.weight_id = w.id();
  double above = 0.0;
  for (const auto& [v, m] : cells) {
    if (d.thresholds.empty() || v != d.thresholds.back()) {
      if (!d.thresholds.empty()) above += d.level_masses.back();
      d.thresholds.push_back(v);
      d.measures.push_back(above);
      d.level_masses.push_back(0.0);
    }
    d.level_masses.back() += m;
  }
  return d;
}

StepFunction rearrange(const StepFunction& f) {
  std::vector<std::pair<double, double>> cells;  // (|value|, length)
  for (std::size_t i = 0; i < f.cells(); ++i) {
    const double v = std::fabs(f.values()[i]);
    if (v != 0.0) cells.emplace_back(v, f.cell_length(i));
  }
  if (cells.empty()) return StepFunction({0.0, 1.0}, {0.0});
  std::stable_sort(cells.begin(), cells.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
  std::vector<double> bp{0.0};
  std::vector<double> vals;
  double t = 0.0;
  for (std::size_t i = 0; i < cells.size();) {
    const double v = cells[i].first;
    double len = 0.0;
    for (; i < cells.size() && cells[i].first == v; ++i) len += cells[i].second;
    t += len;
    bp.push_back(t);
    vals.push_back(v);
  }
  return StepFunction(std::move(bp), std::move(vals));
}

double lorentz_norm(const StepFunction& f, const Weight& w, double p, NormKind kind) {
  require(p >= 1 && std::isfinite(p), Errc::invalid_argument, "Lorentz norm needs finite p >= 1");
  if (kind == NormKind::strong) {
    double s = 0.0;
    for (std::size_t i = 0; i < f.cells(); ++i) {
      const double v = std::fabs(f.values()[i]);
      if (v == 0.0) continue;
      s += std::pow(v, p) * w.measure(f.cell_lo(i), f.cell_hi(i));
    }
    return std::pow(s, 1 / p);
  }
  // Just below λ_j the super-level set is {|f| ≥ λ_j}.
  const DistributionFunction d = distribution(f, w);
  double best = 0.0;
  for (std::size_t j = 0; j < d.thresholds.size(); ++j) {
    const double m = d.measures[j] + d.level_masses[j];
    best = std::max(best, d.thresholds[j] * std::pow(m, 1 / p));
  }
  return best;
}

double weak_norm_from_rearrangement(const StepFunction& fstar, double p) {
  require(p >= 1 && std::isfinite(p), Errc::invalid_argument, "weak norm needs finite p >= 1");
  double best = 0.0;
  for (std::size_t i = 0; i < fstar.cells(); ++i) {
    const double v = std::fabs(fstar.values()[i]);
    if (v != 0.0) best = std::max(best, v * std::pow(fstar.cell_hi(i), 1 / p));
  }
  return best;
}

double bmo_norm_dyadic(const StepFunction& b, const DyadicLattice& lattice) {
  for (std::size_t i = 0; i < b.cells(); ++i) {
    if (b.values()[i] == 0.0) continue;
    require(lattice.covers(b.cell_lo(i), b.cell_hi(i)), Errc::invalid_argument,
            "lattice root does not cover the support of b");
  }
  const auto nodes = b.breakpoints();
  double best = 0.0;
  walk(lattice, [&](Cube, double lo, double hi) {
    // b is constant on a cube without interior nodes, and so on all its children
    if (!has_interior_node(nodes, lo, hi)) return false;
    best = std::max(best, oscillation(b, lo, hi, 1.0));
    return true;
  });
  return best;
}

}  // namespace weaklab
