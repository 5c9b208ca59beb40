#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "weaklab/error.hpp"
#include "weaklab/operators.hpp"

using namespace weaklab;

namespace {

StepFunction random_step(std::mt19937_64& rng, int cells, bool signed_values, double lo = -4, double hi = 4) {
  std::uniform_real_distribution<double> start(lo, hi);
  std::uniform_real_distribution<double> gap(0.05, 1.5);
  std::uniform_real_distribution<double> val(signed_values ? -2.0 : 0.0, 2.0);
  std::vector<double> bp{start(rng)};
  std::vector<double> vals;
  for (int i = 0; i < cells; ++i) {
    bp.push_back(bp.back() + gap(rng));
    vals.push_back(val(rng));
  }
  return StepFunction(bp, vals);
}

// Closed form of the uncentered maximal function of chi_(0,1).
double m_indicator(double x) {
  if (x < 0) return 1 / (1 - x);
  if (x <= 1) return 1;
  return 1 / x;
}

// Brute force: every interval [a, b] with a, b drawn from {0, 1, x} and a
// dense cloud around them, overlap computed by hand.
double m_indicator_bruteforce(double x) {
  std::vector<double> pts{0.0, 1.0, x};
  double best = 0;
  for (double a : pts) {
    for (double b : pts) {
      if (!(a <= x && x <= b && a < b)) continue;
      const double overlap = std::max(0.0, std::min(b, 1.0) - std::max(a, 0.0));
      best = std::max(best, overlap / (b - a));
    }
  }
  return best;
}

const GridSpec kSmallGrid{64.0, 1.0 / 64, 8};

}  // namespace

TEST_CASE("maximal of the indicator: examples and closed form") {
  const auto chi = StepFunction::indicator(0, 1);
  CHECK(maximal_at(chi, 2.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(maximal_at(chi, 0.5) == 1.0);
  CHECK(maximal_at(chi, 2.0, 0.5) == doctest::Approx(0.25).epsilon(1e-15));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-50, 50);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng);
    const double got = maximal_at(chi, x);
    CHECK(std::fabs(got - m_indicator(x)) <= 1e-9);
    CHECK(std::fabs(got - m_indicator_bruteforce(x)) <= 1e-9);
  }
}

TEST_CASE("staircases bracket the exact pointwise maximal function") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 30; ++trial) {
    const auto f = random_step(rng, 1 + trial % 7, true);
    const double eps = trial % 3 == 0 ? 0.5 : 1.0;
    const auto nodes = log_grid(kSmallGrid);
    const auto m = maximal_on_nodes(f, nodes, eps);
    std::uniform_real_distribution<double> u(-60, 60);
    for (int i = 0; i < 200; ++i) {
      const double x = u(rng);
      const double exact = maximal_at(f, x, eps);
      CHECK(m.lower(x) <= exact * (1 + 1e-12) + 1e-15);
      CHECK(m.upper(x) >= exact * (1 - 1e-12) - 1e-15);
    }
    const auto y = m.lower.breakpoints();
    for (std::size_t j = 0; j < y.size(); ++j) {
      CHECK(m.at_nodes[j] == doctest::Approx(maximal_at(f, y[j], eps)).epsilon(1e-12));
    }
  }
}

TEST_CASE("maximal invariants on random step functions") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const auto f = random_step(rng, 1 + trial % 6, true);
    const auto Mf = maximal(f, 1.0, kSmallGrid);
    // homogeneity
    const auto Mcf = maximal(scale(f, -3.0), 1.0, kSmallGrid);
    for (std::size_t c = 0; c < Mf.cells(); ++c) {
      CHECK(Mcf.values()[c] == doctest::Approx(3 * Mf.values()[c]).epsilon(1e-12));
    }
    // M f ≥ |f| at cell midpoints
    for (std::size_t c = 0; c < f.cells(); ++c) {
      const double mid = 0.5 * (f.cell_lo(c) + f.cell_hi(c));
      CHECK(Mf(mid) >= std::fabs(f(mid)) * (1 - 1e-12));
    }
    // eps-consistency
    const double eps = 0.37;
    const auto a = maximal(f, eps, kSmallGrid);
    const auto b = power(maximal(power(abs(f), eps), 1.0, kSmallGrid), 1 / eps);
    for (std::size_t c = 0; c < a.cells(); ++c) {
      CHECK(a.values()[c] == doctest::Approx(b.values()[c]).epsilon(1e-10));
    }
    // monotonicity: |f| ≤ |f| + |h|
    const auto g = add(abs(f), abs(random_step(rng, 3, true)));
    std::uniform_real_distribution<double> u(-60, 60);
    for (int i = 0; i < 50; ++i) {
      const double x = u(rng);
      CHECK(maximal_at(f, x) <= maximal_at(g, x) * (1 + 1e-12));
    }
  }
}

TEST_CASE("dyadic maximal is below the uncentered one") {
  std::mt19937_64 rng(4);
  const DyadicLattice L(-64, 64, 30);
  for (int trial = 0; trial < 30; ++trial) {
    const auto f = random_step(rng, 1 + trial % 6, true);
    const auto Md = maximal_dyadic(f, L);
    std::uniform_real_distribution<double> u(-64, 64);
    for (int i = 0; i < 200; ++i) {
      const double x = u(rng);
      CHECK(Md(x) <= maximal_at(f, x) * (1 + 1e-12) + 1e-15);
    }
  }
  // dyadic average oracle on [0, 2): chi_[0,1) has value 1 on [0,1) and 1/2 on [1,2)
  const auto Md = maximal_dyadic(StepFunction::indicator(0, 1), DyadicLattice(0, 2, 10));
  CHECK(Md(0.3) == 1.0);
  CHECK(Md(1.7) == 0.5);
}

TEST_CASE("maximal argument checks") {
  const auto chi = StepFunction::indicator(0, 1);
  CHECK_THROWS_AS(maximal_at(chi, 1.0, 0.0), Error);
  CHECK_THROWS_AS(maximal(chi, 1.5), Error);
  CHECK_THROWS_AS(iterate_maximal(chi, 0), Error);
  const StepFunction zero({0.0, 1.0}, {0.0});
  CHECK(maximal(zero, 1.0, kSmallGrid).is_zero());
}

TEST_CASE("iterated maximal of the indicator") {
  const auto chi = StepFunction::indicator(0, 1);
  const GridSpec grid;
  CHECK(iterate_maximal(chi, 1, grid) == maximal(chi, 1.0, grid));
  const auto M2 = iterate_maximal(chi, 2, grid);
  CHECK(M2(10.0) >= (1 + std::log(10.0)) / 10);
  // bracket against (ln x)^{k-1}/x on [e^2, 2^16]
  for (int k = 2; k <= 3; ++k) {
    const auto Mk = iterate_maximal(chi, k, grid);
    double lo = INFINITY, hi = 0;
    for (double x = std::exp(2.0); x <= 65536; x *= 1.01) {
      const double r = Mk(x) / (std::pow(std::log(x), k - 1) / x);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    const double fact = k == 2 ? 1.0 : 2.0;
    CHECK(lo >= 1 / fact);
    CHECK(hi <= std::pow(2.0, k));
  }
}

TEST_CASE("sharp maximal") {
  const auto nodes_of = [](const StepFunction& f) {
    return std::vector<double>(f.breakpoints().begin(), f.breakpoints().end());
  };
  const auto c = StepFunction::indicator(-1, 3, 2.5);
  CHECK(sharp_maximal(c, 0.5, nodes_of(c)).is_zero());
  CHECK(sharp_maximal_dyadic(c, 0.5, DyadicLattice(-1, 3, 8)).is_zero());

  const auto s = sharp_maximal_dyadic(StepFunction::indicator(0, 1), 1.0, DyadicLattice(0, 2, 6));
  CHECK(s(0.25) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(s(1.75) == doctest::Approx(0.5).epsilon(1e-15));

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = random_step(rng, 2 + trial % 6, true);
    for (double delta : {0.25, 0.5, 1.0}) {
      std::vector<double> nodes = subdivide(nodes_of(f), 1);
      nodes.insert(nodes.begin(), f.lo() - 3);
      nodes.push_back(f.hi() + 3);
      const auto sh = sharp_maximal(f, delta, nodes);
      const auto up = maximal_on_nodes(f, nodes, delta).upper;
      for (std::size_t c2 = 0; c2 < sh.cells(); ++c2) {
        const double x = 0.5 * (sh.cell_lo(c2) + sh.cell_hi(c2));
        CHECK(sh(x) <= std::pow(2.0, 1 / delta) * up(x) * (1 + 1e-12));
      }
      // f + const on the node span
      const auto shifted = add(f, StepFunction::indicator(nodes.front(), nodes.back(), 17.0));
      const auto sh2 = sharp_maximal(shifted, delta, nodes);
      REQUIRE(sh2.cells() == sh.cells());
      for (std::size_t c2 = 0; c2 < sh.cells(); ++c2) {
        CHECK(sh2.values()[c2] == doctest::Approx(sh.values()[c2]).epsilon(1e-12).scale(1e-12));
      }
    }
  }
}

TEST_CASE("oscillation by direct enumeration") {
  // chi_[0,1) on [0,2): mean 1/2, |f - 1/2| = 1/2 everywhere
  const auto chi = StepFunction::indicator(0, 1);
  CHECK(oscillation(chi, 0, 2, 1.0) == doctest::Approx(0.5));
  CHECK(oscillation(chi, 0, 2, 0.5) == doctest::Approx(0.5));
  // [0, 4): mean 1/4; (1 * 3/4 + 3 * 1/4)/4 = 3/8
  CHECK(oscillation(chi, 0, 4, 1.0) == doctest::Approx(0.375));
}

TEST_CASE("Hilbert transform of step functions") {
  const auto chi = StepFunction::indicator(0, 1);
  CHECK(hilbert_step(chi, 1.0, 2.0) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(hilbert_step(chi, 0.3, 0.5) == 0.0);
  const StepFunction f({0.0, 1.0, 2.0}, {1.0, -1.0});
  CHECK(hilbert_step(f, 1.0, 3.0) == doctest::Approx(std::log(0.75)).epsilon(1e-14));
  CHECK_THROWS_AS(hilbert_step(chi, 1.0, 1.0), Error);
  // no jump at 1 for a flat join
  const StepFunction flat({0.0, 1.0, 2.0}, {1.0, 1.0});
  CHECK(hilbert_step(flat, 1.0, 1.0) == 0.0);

  const double cH = 1 / std::numbers::pi;
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-30, 30);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng);
    CHECK(std::fabs(hilbert_step(chi, cH, x) - cH * std::log(std::fabs(x / (x - 1)))) <= 1e-12);
    CHECK(hilbert_step(StepFunction::indicator(-1, 0), cH, x) ==
          doctest::Approx(-hilbert_step(chi, cH, -x)).epsilon(1e-12));
  }
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = random_step(rng, 4, true);
    const double x = u(rng);
    CHECK(hilbert_step(scale(g, 4.0), cH, x) == 4.0 * hilbert_step(g, cH, x));
  }
}

TEST_CASE("commutator with log|x|") {
  const auto chi = StepFunction::indicator(0, 1);
  // (ln 1/x)^2 normalisation: the ratio tends to 1/2
  const double x = std::exp(-8.0);
  const double v = commutator_log_hilbert(chi, 1.0, x);
  CHECK(std::fabs(v / 64.0 - 0.5) <= 0.15 * 0.5);
  CHECK(commutator_log_hilbert(chi, 1.0, 10.0) >= std::log(10.0) / 10);
  CHECK_THROWS_AS(commutator_log_hilbert(chi, 1.0, 0.0), Error);
  // kernel against an independent midpoint sum away from singularities
  {
    const double x0 = 3.0;
    double s = 0;
    const int n = 2000000;
    for (int i = 0; i < n; ++i) {
      const double y = (i + 0.5) / n;
      s += (std::log(x0) - std::log(y)) / (x0 - y) / n;
    }
    CHECK(commutator_log_hilbert(chi, 1.0, x0) == doctest::Approx(s).epsilon(1e-6));
  }
  // constants are killed
  const auto g = StepFunction::indicator(1, 2);
  auto b = [](double y) { return std::log(std::fabs(y)); };
  auto b17 = [](double y) { return std::log(std::fabs(y)) + 17.0; };
  const double c0 = commutator_with(g, b, 1.0, 3.0);
  CHECK(commutator_with(g, b17, 1.0, 3.0) == doctest::Approx(c0).epsilon(1e-9));
  CHECK(commutator_log_hilbert(g, 1.0, 3.0) == doctest::Approx(c0).epsilon(1e-9));
}

TEST_CASE("commutator profiles are lower bounds") {
  const auto chi = StepFunction::indicator(0, 1);
  for (double x = 1e-6; x < 1; x *= 1.7) {
    const double l = std::log(1 / x);
    CHECK(std::fabs(commutator_log_hilbert(chi, 1.0, x)) >= 0.5 * l * l);
  }
  for (double x = std::exp(1.0) * 1.001; x < 1e6; x *= 1.9) {
    CHECK(std::fabs(commutator_log_hilbert(chi, 1.0, x)) >= std::log(x) / x);
    CHECK(std::fabs(commutator_log_hilbert(chi, 1.0, -x)) >= std::log(x) / x);
  }
}

TEST_CASE("adjoint Hardy operator") {
  const auto chi = StepFunction::indicator(0, 1);
  CHECK(adjoint_hardy(chi, 0.25) == doctest::Approx(std::log(4.0)).epsilon(1e-15));
  CHECK(adjoint_hardy(chi, 2.0) == 0.0);
  CHECK(adjoint_hardy(StepFunction::indicator(0, 2), 1.0) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK_THROWS_AS(adjoint_hardy(chi, 0.0), Error);
  CHECK_THROWS_AS(adjoint_hardy(StepFunction::indicator(-1, 1), 0.5), Error);

  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const auto g = random_step(rng, 1 + trial % 5, false, 0.0, 2.0);
    double prev = INFINITY;
    for (double x = 1e-3; x < 20; x *= 1.05) {
      const double s = adjoint_hardy(g, x);
      CHECK(s <= prev + 1e-15);
      prev = s;
    }
    for (double p : {1.5, 2.0, 4.0, 8.0}) {
      double brute = 0;
      std::vector<double> xs(g.breakpoints().begin(), g.breakpoints().end());
      for (double x = 1e-9; x < 20; x *= 1.0003) xs.push_back(x);
      for (double x : xs) {
        if (x > 0) brute = std::max(brute, std::pow(x, 1 / p) * adjoint_hardy(g, x));
      }
      const double exact = adjoint_hardy_weak_norm(g, p);
      CHECK(exact >= brute * (1 - 1e-12));
      CHECK(exact <= brute * (1 + 1e-6));
    }
  }
}

namespace {

// Dilogarithm by series plus the reflection, inversion and Landen identities.
double li2(double z) {
  const double pi2_6 = std::numbers::pi * std::numbers::pi / 6;
  if (z == 1.0) return pi2_6;
  if (z > 0.5) return pi2_6 - std::log(z) * std::log1p(-z) - li2(1 - z);
  if (z < -1.0) {
    const double l = std::log(-z);
    return -pi2_6 - 0.5 * l * l - li2(1 / z);
  }
  if (z < -0.5) {
    const double l = std::log1p(-z);
    return -li2(z / (z - 1)) - 0.5 * l * l;
  }
  double s = 0, term = z;
  for (int k = 1; k < 200; ++k) {
    s += term / (static_cast<double>(k) * k);
    term *= z;
  }
  return s;
}

// [log|x|, H] chi_(0,1)(x) with c_H = 1, from the antiderivatives
// -Li2(1 - t) of ln t/(t - 1) and ln s ln(1 + s) + Li2(-s) of ln s/(1 + s).
double commutator_indicator_closed(double x) {
  if (x > 0) return std::numbers::pi * std::numbers::pi / 6 - li2(1 - 1 / x);
  const double S = 1 / std::fabs(x);
  return std::log(S) * std::log1p(S) + li2(-S);
}

}  // namespace

TEST_CASE("commutator quadrature against the dilogarithm closed form") {
  const auto chi = StepFunction::indicator(0, 1);
  for (double x : {1e-9, 1e-5, 0.01, 0.3, 0.5, 0.999, 1.0, 1.5, 2.0, 10.0, 1e3, 1e7}) {
    CHECK(std::fabs(commutator_log_hilbert(chi, 1.0, x) - commutator_indicator_closed(x)) <= 1e-8);
    CHECK(std::fabs(commutator_log_hilbert(chi, 1.0, -x) - commutator_indicator_closed(-x)) <= 1e-8);
  }
}
