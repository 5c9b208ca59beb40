#include <cmath>
#include <random>

#include "doctest.h"
#include "generators.hpp"
#include "weaklab/error.hpp"
#include "weaklab/norms.hpp"
#include "weaklab/operators.hpp"
#include "weaklab/weights.hpp"

using namespace weaklab;

namespace {

const GridSpec kGrid{1024.0, 1.0 / 1024, 6};

RdFParams params(double p) {
  RdFParams r;
  r.p = p;
  r.grid = kGrid;
  return r;
}

}  // namespace

TEST_CASE("Rubio de Francia: the three properties on seeded h") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> cells(1, 12);
  for (int trial = 0; trial < 12; ++trial) {
    StepFunction h = gen::random_step(rng, cells(rng), 0.0, 3.0, -4.0, 2.0);
    if (h.is_zero()) h = StepFunction::indicator(0, 1);
    for (double p : {1.25, 1.5, 2.0, 4.0}) {
      const RdFParams rp = params(p);
      const Weight R = rubio_majorant(h, rp);
      const StepFunction& body = R.body();
      for (std::size_t c = 0; c < body.cells(); ++c) CHECK(body.values()[c] >= h(body.cell_lo(c)));
      for (std::size_t c = 0; c < h.cells(); ++c) CHECK(R(h.cell_lo(c)) >= h.values()[c]);
      CHECK(lorentz_norm(body, p, NormKind::strong) <= 2 * lorentz_norm(h, p, NormKind::strong) + 1e-9);
      CHECK(ap_constant(R, 1.0, ApMode::dyadic).value <= 2 * rp.bound() * (1 + 1e-12));
      // the default bound really dominates M on this seed
      const StepFunction Mh = maximal_on_nodes(h, window_nodes(kGrid, h.breakpoints())).upper;
      CHECK(lorentz_norm(Mh, p, NormKind::strong) <= rp.bound() * lorentz_norm(h, p, NormKind::strong));
    }
  }
}

TEST_CASE("Rubio de Francia: indicator seed at p = 2") {
  const auto chi = StepFunction::indicator(0, 1);
  RdFParams rp;
  rp.p = 2;
  const Weight R = rubio_majorant(chi, rp);
  CHECK(R.window_lo() == -rp.grid.window_X);
  CHECK(R.window_hi() == rp.grid.window_X);
  CHECK(R(0.5) >= 1.0);
  CHECK(lorentz_norm(R.body(), 2.0, NormKind::strong) <= 2.0);
  CHECK(ap_constant(R, 1.0, ApMode::dyadic).value <= 2 * 4.0 * (1 + 1e-12));
}

TEST_CASE("Rubio de Francia: argument checks") {
  CHECK_THROWS_AS(rubio_majorant(StepFunction({0, 1}, {-1.0}), params(2)), Error);
  CHECK_THROWS_AS(rubio_majorant(StepFunction({0, 1}, {0.0}), params(2)), Error);
  CHECK_THROWS_AS(rubio_majorant(StepFunction::indicator(0, 1), params(1.0)), Error);
  CHECK_THROWS_AS(rubio_majorant(StepFunction::indicator(0, 4096), params(2)), Error);
}

TEST_CASE("extrapolation weights") {
  const auto chi = StepFunction::indicator(0, 1);
  const RdFParams rp = params(2);
  for (Direction d : {Direction::primal, Direction::dual}) {
    const auto e = extrapolation_weight(chi, 2.0, 2.0, d, rp);
    CHECK(e.weight.kind() == WeightKind::constant);
    CHECK(ap_constant(e.weight, 2.0, ApMode::dyadic).value == 1.0);
  }
  CHECK_THROWS_AS(extrapolation_weight(chi, 3.0, 2.0, Direction::primal, rp), Error);
  CHECK_THROWS_AS(extrapolation_weight(chi, 1.5, 2.0, Direction::dual, rp), Error);

  const auto primal = extrapolation_weight(chi, 1.5, 2.0, Direction::primal, rp);
  CHECK(primal.exponent == -0.5);
  CHECK(primal.expected_bound == doctest::Approx(std::sqrt(6.0)));
  const ApResult a2 = ap_constant(primal.weight, 2.0, ApMode::dyadic);
  CHECK(a2.finite);
  CHECK(a2.value >= 1.0);

  const auto dual = extrapolation_weight(chi, 4.0, 2.0, Direction::dual, rp);
  CHECK(dual.exponent == doctest::Approx(2.0 / 3));
  CHECK(ap_constant(dual.weight, 2.0, ApMode::dyadic).value <= std::pow(dual.majorant_a1, 2.0 / 3) * 1.02);
}
