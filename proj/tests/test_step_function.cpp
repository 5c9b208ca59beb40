#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "weaklab/error.hpp"
#include "weaklab/step_function.hpp"

using namespace weaklab;

namespace {

StepFunction random_step(std::mt19937_64& rng, int cells, bool signed_values) {
  std::uniform_real_distribution<double> gap(0.01, 2.0);
  std::uniform_real_distribution<double> val(signed_values ? -3.0 : 0.0, 3.0);
  std::vector<double> bp{std::uniform_real_distribution<double>(-5, 5)(rng)};
  std::vector<double> vals;
  for (int i = 0; i < cells; ++i) {
    bp.push_back(bp.back() + gap(rng));
    vals.push_back(val(rng));
  }
  return StepFunction(bp, vals);
}

}  // namespace

TEST_CASE("construction rejects malformed input") {
  CHECK_THROWS_AS(StepFunction({0.0}, {}), Error);
  CHECK_THROWS_AS(StepFunction({0.0, 1.0}, {1.0, 2.0}), Error);
  CHECK_THROWS_AS(StepFunction({0.0, 0.0}, {1.0}), Error);
  CHECK_THROWS_AS(StepFunction({1.0, 0.0}, {1.0}), Error);
  CHECK_THROWS_AS(StepFunction({0.0, INFINITY}, {1.0}), Error);
  CHECK_THROWS_AS(StepFunction({0.0, 1.0}, {NAN}), Error);
}

TEST_CASE("evaluation is right-continuous and zero outside") {
  const StepFunction f({0.0, 1.0, 3.0}, {2.0, 1.0});
  CHECK(f(-0.5) == 0.0);
  CHECK(f(0.0) == 2.0);
  CHECK(f(0.999) == 2.0);
  CHECK(f(1.0) == 1.0);
  CHECK(f(3.0) == 0.0);
}

TEST_CASE("integrate examples") {
  const auto chi = StepFunction::indicator(0, 1);
  CHECK(chi.integrate(0, 1) == 1.0);
  CHECK(chi.integrate(0.5, 3) == 0.5);
  const StepFunction f({0.0, 1.0, 3.0}, {2.0, -1.0});
  CHECK(f.integrate(0, 3) == 0.0);
  CHECK(chi.integrate(1, 0) == -1.0);
  CHECK_THROWS_AS(chi.integrate(0, INFINITY), Error);
  try {
    chi.integrate(NAN, 1);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::invalid_argument);
  }
}

TEST_CASE("integrate is additive over abutting intervals") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-8, 12);
  for (int trial = 0; trial < 500; ++trial) {
    const auto f = random_step(rng, 1 + trial % 17, true);
    double a = u(rng), b = u(rng), c = u(rng);
    if (a > b) std::swap(a, b);
    if (b > c) std::swap(b, c);
    if (a > b) std::swap(a, b);
    const double whole = f.integrate(a, c);
    const double parts = f.integrate(a, b) + f.integrate(b, c);
    double scale = 0;
    for (std::size_t i = 0; i < f.cells(); ++i) scale += std::fabs(f.values()[i]) * f.cell_length(i);
    CHECK(std::fabs(whole - parts) <= 1e-12 * std::max(1.0, scale));
  }
}

TEST_CASE("transform examples") {
  const auto chi = StepFunction::indicator(0, 1);
  CHECK(power(chi, 3) == chi);
  CHECK(abs(StepFunction::indicator(0, 1, -2)) == StepFunction::indicator(0, 1, 2));
  const StepFunction f({0.0, 1.0, 2.0}, {2.0, 1.0});
  const auto inv = power(f, -1);
  CHECK(inv.values()[0] == 0.5);
  CHECK(inv.values()[1] == 1.0);
  CHECK(inv(5.0) == 0.0);
}

TEST_CASE("transform domain errors") {
  const StepFunction neg({0.0, 1.0}, {-2.0});
  try {
    power(neg, 0.5);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::domain_error);
  }
  CHECK(power(neg, 2).values()[0] == 4.0);
  const StepFunction holey({0.0, 1.0, 2.0}, {1.0, 0.0});
  try {
    power(holey, -1);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::domain_error);
  }
}

TEST_CASE("add merges breakpoints") {
  const auto s = add(StepFunction::indicator(0, 2, 2), StepFunction::indicator(1, 3, -1));
  CHECK(s.cells() == 3);
  CHECK(s(0.5) == 2.0);
  CHECK(s(1.5) == 1.0);
  CHECK(s(2.5) == -1.0);
  CHECK(s(3.5) == 0.0);
}

TEST_CASE("scale by c then 1/c reproduces f") {
  std::mt19937_64 rng(11);
  const double cs[] = {2.0, 0.5, -4.0, 0.25, 1024.0, -0.125};
  for (int trial = 0; trial < 50; ++trial) {
    const auto f = random_step(rng, 1 + trial % 9, true);
    for (double c : cs) CHECK(scale(scale(f, c), 1 / c) == f);
  }
}

TEST_CASE("refined and compacted preserve the function") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const auto f = random_step(rng, 1 + trial % 6, true);
    const std::vector<double> extra{-20.0, f.lo() + 0.001, 0.3, 20.0};
    const auto g = f.refined(extra);
    for (double x = -21; x < 21; x += 0.0137) CHECK(g(x) == f(x));
    const auto h = g.compacted();
    for (double x = -21; x < 21; x += 0.0137) CHECK(h(x) == f(x));
    CHECK(h.cells() <= g.cells());
  }
}

TEST_CASE("CSV round trip is bit exact") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto f = random_step(rng, 1 + trial % 13, true);
    std::stringstream ss;
    write_csv(ss, f);
    CHECK(read_csv(ss) == f);
  }
  const StepFunction tiny({1e-300, 0.1, 1.0 / 3.0}, {5e-324, -1.7976931348623157e308});
  std::stringstream ss;
  write_csv(ss, tiny);
  CHECK(read_csv(ss) == tiny);
}

TEST_CASE("CSV parse errors") {
  auto parse = [](const std::string& text) {
    std::stringstream ss(text);
    return read_csv(ss);
  };
  CHECK_THROWS_AS(parse(""), Error);
  CHECK_THROWS_AS(parse("x,y\n0,1\n1,\n"), Error);
  CHECK_THROWS_AS(parse("breakpoint,value\n0,1\n1,2\n"), Error);
  CHECK_THROWS_AS(parse("breakpoint,value\n0,abc\n1,\n"), Error);
  CHECK(parse("breakpoint,value\r\n0,1\r\n1,\r\n") == StepFunction::indicator(0, 1));
}
