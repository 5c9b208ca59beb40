#include <cmath>
#include <random>

#include "doctest.h"
#include "generators.hpp"
#include "weaklab/error.hpp"
#include "weaklab/sparse.hpp"

using namespace weaklab;

namespace {

const DyadicLattice kUnit(0, 1, 12);

// {[0,1), [0,1/2)} with E_[0,1) = [1/2,1), E_[0,1/2) = [0,1/4)
SparseFamily two_cubes() { return {kUnit, {{{0, 0}, {{1, 1}}}, {{1, 0}, {{2, 0}}}}, 0.5}; }

// ∫ f g over the union of breakpoints, by hand.
double pairing(const StepFunction& f, const StepFunction& g) {
  const auto nodes = merge_nodes(f.breakpoints(), g.breakpoints());
  double s = 0;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) s += f(nodes[i]) * g(nodes[i]) * (nodes[i + 1] - nodes[i]);
  return s;
}

StepFunction random_on_unit(std::mt19937_64& rng, int cells, double vmin = 0.0) {
  std::uniform_real_distribution<double> val(vmin, 2.0);
  std::vector<double> bp{0.0}, vals;
  std::uniform_real_distribution<double> cut(0.0, 1.0);
  std::vector<double> cuts;
  for (int i = 0; i + 1 < cells; ++i) cuts.push_back(cut(rng));
  std::sort(cuts.begin(), cuts.end());
  for (double c : cuts)
    if (c > bp.back()) bp.push_back(c);
  bp.push_back(1.0);
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) vals.push_back(val(rng));
  return {bp, vals};
}

}  // namespace

TEST_CASE("verify_sparse examples") {
  const SparseFamily whole{kUnit, {{{0, 0}, {{0, 0}}}}, 1.0};
  auto r = verify_sparse(whole);
  CHECK(r.ok);
  CHECK(r.worst_eta == 1.0);

  const SparseFamily nested{kUnit, {{{0, 0}, {{2, 1}, {2, 2}, {2, 3}}}, {{2, 0}, {{2, 0}}}}, 0.5};
  r = verify_sparse(nested);
  CHECK(r.ok);
  CHECK(r.worst_eta == 0.75);

  const SparseFamily overlap{kUnit, {{{0, 0}, {{1, 0}}}, {{1, 0}, {{2, 0}}}}, 0.5};
  r = verify_sparse(overlap);
  CHECK_FALSE(r.ok);
  CHECK_FALSE(r.violations.empty());

  const SparseFamily outside{kUnit, {{{1, 0}, {{1, 1}}}}, 0.5};
  CHECK_FALSE(verify_sparse(outside).ok);
  CHECK_THROWS_AS(verify_sparse(SparseFamily{kUnit, {{{1, 5}, {}}}, 0.5}), Error);
}

TEST_CASE("apply_sparse examples") {
  const SparseFamily one{kUnit, {{{0, 0}, {{0, 0}}}}, 1.0};
  CHECK(apply_sparse(one, StepFunction::indicator(0, 1)).compacted() == StepFunction::indicator(0, 1));
  const StepFunction out = apply_sparse(two_cubes(), StepFunction::indicator(0, 0.5));
  CHECK(out(0.25) == 1.5);
  CHECK(out(0.75) == 0.5);
  CHECK(out(1.5) == 0.0);
  const auto f = StepFunction::indicator(0, 0.5), g = StepFunction::indicator(0.5, 1);
  CHECK(pairing(apply_sparse(two_cubes(), f), g) == 0.25);
  CHECK(pairing(f, apply_sparse(two_cubes(), g)) == 0.25);
}

TEST_CASE("sparse commutator examples") {
  const SparseFamily one{kUnit, {{{0, 0}, {{0, 0}}}}, 1.0};
  const auto chi = StepFunction::indicator(0, 1);
  const StepFunction b({0, 0.5, 1}, {1.0, 0.0});
  for (auto v : {SparseVariant::direct, SparseVariant::star}) {
    const StepFunction out = apply_commutator_sparse(one, b, chi, v);
    CHECK(out(0.2) == 0.5);
    CHECK(out(0.7) == 0.5);
    CHECK(apply_commutator_sparse(two_cubes(), StepFunction({0, 1}, {0.3}), chi, v).is_zero());
  }
  CHECK_THROWS_AS(apply_commutator_sparse(one, StepFunction({0, 0.5}, {1.0}), chi, SparseVariant::direct), Error);
}

TEST_CASE("sparse invariants on random data") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const SparseFamily fam = random_family(kUnit, rng, 40, 0.5);
    REQUIRE(verify_sparse(fam).ok);
    const StepFunction f = random_on_unit(rng, 12), g = random_on_unit(rng, 9);
    const double lhs = pairing(apply_sparse(fam, f), g), rhs = pairing(f, apply_sparse(fam, g));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));

    // f ≤ f + g pointwise
    const StepFunction Af = apply_sparse(fam, f), Afg = apply_sparse(fam, add(f, g));
    for (std::size_t i = 0; i < Afg.cells(); ++i) {
      const double x = Afg.cell_lo(i);
      CHECK(Af(x) <= Afg(x) + 1e-12);
    }

    // dyadic values so that b + 17 rounds exactly
    std::uniform_int_distribution<int> q(-64, 64);
    std::vector<double> bp, vals;
    for (int i = 0; i <= 16; ++i) bp.push_back(i / 16.0);
    for (int i = 0; i < 16; ++i) vals.push_back(q(rng) / 32.0);
    const StepFunction b(bp, vals), b17 = add(b, StepFunction({0, 1}, {17.0}));
    for (auto v : {SparseVariant::direct, SparseVariant::star}) {
      CHECK(apply_commutator_sparse(fam, b, f, v) == apply_commutator_sparse(fam, b17, f, v));
    }
  }
}

TEST_CASE("standard families") {
  const auto tower = tower_family(kUnit, 8);
  const auto rep = verify_sparse(tower);
  CHECK(rep.ok);
  CHECK(rep.worst_eta == 0.5);
  CHECK(tower.cubes.size() == 9);
  CHECK_THROWS_AS(tower_family(kUnit, 12), Error);
  const auto flat = single_scale_family(kUnit, 4);
  CHECK(verify_sparse(flat).ok);
  CHECK(apply_sparse(flat, StepFunction::indicator(0, 1))(0.3) == 1.0);
}

TEST_CASE("sparse family JSON round trip") {
  std::mt19937_64 rng(9);
  const SparseFamily fam = random_family(kUnit, rng, 30, 0.5);
  const SparseFamily back = sparse_from_json(to_json(fam));
  CHECK(back.lattice.r0() == 0.0);
  CHECK(back.lattice.r1() == 1.0);
  CHECK(back.eta == 0.5);
  REQUIRE(back.cubes.size() == fam.cubes.size());
  for (std::size_t i = 0; i < fam.cubes.size(); ++i) {
    CHECK(back.cubes[i].cube == fam.cubes[i].cube);
    CHECK(back.cubes[i].portion == fam.cubes[i].portion);
  }
  CHECK_THROWS_AS(sparse_from_json("{\"root\": [0, 1]}"), Error);
  CHECK_THROWS_AS(sparse_from_json("not json"), Error);
}
