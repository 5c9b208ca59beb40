#include "weaklab/weights.hpp"

#include <cmath>

#include "weaklab/error.hpp"
#include "weaklab/operators.hpp"

namespace weaklab {

double RdFParams::bound() const { return bound_Bp > 0 ? bound_Bp : 2 * p / (p - 1); }

void RdFParams::validate() const {
  require(p > 1 && std::isfinite(p), Errc::invalid_argument, "Rubio de Francia needs p > 1");
  require(bound() >= 1, Errc::invalid_argument, "bound_Bp must be >= 1");
  require(terms_K >= 1 && terms_K <= 200, Errc::invalid_argument, "terms_K must be in [1, 200]");
  weaklab::validate(grid);
}

Weight rubio_majorant(const StepFunction& h, const RdFParams& params) {
  params.validate();
  require(h.is_nonnegative(), Errc::invalid_argument, "Rubio de Francia seed must be nonnegative");
  require(!h.is_zero(), Errc::invalid_argument, "Rubio de Francia seed must not vanish");
  const double X = params.grid.window_X;
  for (std::size_t i = 0; i < h.cells(); ++i) {
    if (h.values()[i] != 0.0) {
      require(h.cell_lo(i) >= -X && h.cell_hi(i) <= X, Errc::invalid_argument, "seed support leaves the window");
    }
  }
  const std::vector<double> nodes = window_nodes(params.grid, h.breakpoints());
  std::vector<double> vals(nodes.size() - 1);
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) vals[i] = h(nodes[i]);
  StepFunction term(nodes, vals);

  std::vector<double> sum = vals;
  const double q = 1 / (2 * params.bound());
  double factor = 1.0;
  for (int k = 1; k <= params.terms_K; ++k) {
    term = maximal_on_nodes(term, nodes).upper;
    factor *= q;
    const auto tv = term.values();
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += factor * tv[i];
  }
  return Weight::step(StepFunction(nodes, std::move(sum)), "rdf:p=" + format_double(params.p));
}

ExtrapolationWeight extrapolation_weight(const StepFunction& seed, double p, double p0, Direction dir,
                                         const RdFParams& params) {
  require(p > 1 && p0 > 1 && std::isfinite(p) && std::isfinite(p0), Errc::invalid_argument,
          "extrapolation needs p, p0 > 1");
  if (dir == Direction::primal) {
    require(p <= p0, Errc::invalid_argument, "primal extrapolation needs p < p0");
  } else {
    require(p >= p0, Errc::invalid_argument, "dual extrapolation needs p > p0");
  }
  ExtrapolationWeight out{Weight::constant(), 0.0, 1.0, 1.0};
  if (p == p0) return out;

  RdFParams rp = params;
  rp.p = dir == Direction::primal ? p : p / (p - 1);
  const Weight R = rubio_majorant(seed, rp);
  out.majorant_a1 = ap_constant(R, 1.0, ApMode::dyadic).value;
  if (dir == Direction::primal) {
    out.exponent = -(p0 - p);
    out.expected_bound = std::pow(rp.bound(), p0 - p);
  } else {
    out.exponent = (p - p0) / (p - 1);
    out.expected_bound = std::pow(out.majorant_a1, out.exponent);
  }
  const std::string id = std::string(dir == Direction::primal ? "primal" : "dual") + ":p=" + format_double(p) +
                         ",p0=" + format_double(p0);
  out.weight = Weight::step(power(R.body(), out.exponent), id);
  return out;
}

}  // namespace weaklab
