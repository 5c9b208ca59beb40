#include "weaklab/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "json.hpp"
#include "weaklab/error.hpp"

namespace weaklab {

namespace {

std::string describe(Cube q) { return "(" + std::to_string(q.depth) + "," + std::to_string(q.index) + ")"; }

std::vector<SparseCube> lattice_order(const SparseFamily& family) {
  std::vector<SparseCube> cubes = family.cubes;
  std::sort(cubes.begin(), cubes.end(), [](const auto& a, const auto& b) { return a.cube < b.cube; });
  return cubes;
}

void check_cubes(const SparseFamily& family) {
  for (const auto& sc : family.cubes) {
    require(family.lattice.contains(sc.cube), Errc::invalid_argument, "cube " + describe(sc.cube) + " outside lattice");
    for (Cube e : sc.portion) {
      require(family.lattice.contains(e), Errc::invalid_argument, "portion cell " + describe(e) + " outside lattice");
    }
  }
}

// Index range [first, last) of node cells inside [lo, hi); both are nodes.
std::pair<std::size_t, std::size_t> cell_range(const std::vector<double>& nodes, double lo, double hi) {
  const auto a = std::lower_bound(nodes.begin(), nodes.end(), lo);
  const auto b = std::lower_bound(nodes.begin(), nodes.end(), hi);
  return {static_cast<std::size_t>(a - nodes.begin()), static_cast<std::size_t>(b - nodes.begin())};
}

std::vector<double> cube_nodes(const SparseFamily& family) {
  std::vector<double> out;
  for (const auto& sc : family.cubes) {
    out.push_back(family.lattice.lo(sc.cube));
    out.push_back(family.lattice.hi(sc.cube));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

SparseReport verify_sparse(const SparseFamily& family) {
  check_cubes(family);
  const DyadicLattice& L = family.lattice;
  SparseReport rep;
  rep.worst_eta = family.cubes.empty() ? 1.0 : INFINITY;

  struct Piece {
    double lo, hi;
    std::size_t owner;
  };
  std::vector<Piece> pieces;
  for (std::size_t k = 0; k < family.cubes.size(); ++k) {
    const auto& sc = family.cubes[k];
    double measure = 0.0;
    for (Cube e : sc.portion) {
      if (!DyadicLattice::nests(sc.cube, e)) {
        rep.ok = false;
        rep.violations.push_back("portion cell " + describe(e) + " not inside cube " + describe(sc.cube));
      }
      measure += L.hi(e) - L.lo(e);
      pieces.push_back({L.lo(e), L.hi(e), k});
    }
    const double ratio = measure / (L.hi(sc.cube) - L.lo(sc.cube));
    rep.worst_eta = std::min(rep.worst_eta, ratio);
    if (ratio < family.eta) {
      rep.ok = false;
      rep.violations.push_back("cube " + describe(sc.cube) + " has |E|/|Q| = " + format_double(ratio) + " < eta");
    }
  }
  std::sort(pieces.begin(), pieces.end(), [](const Piece& a, const Piece& b) { return a.lo < b.lo; });
  for (std::size_t i = 1; i < pieces.size(); ++i) {
    if (pieces[i].lo < pieces[i - 1].hi) {
      rep.ok = false;
      rep.violations.push_back("portions of cubes " + describe(family.cubes[pieces[i - 1].owner].cube) + " and " +
                               describe(family.cubes[pieces[i].owner].cube) + " overlap");
    }
  }
  return rep;
}

StepFunction apply_sparse(const SparseFamily& family, const StepFunction& f) {
  check_cubes(family);
  if (family.cubes.empty()) return StepFunction({f.lo(), f.hi()}, {0.0});
  const std::vector<double> nodes = merge_nodes(f.breakpoints(), cube_nodes(family));
  std::vector<double> vals(nodes.size() - 1, 0.0);
  for (const auto& sc : lattice_order(family)) {
    const double lo = family.lattice.lo(sc.cube), hi = family.lattice.hi(sc.cube);
    const double avg = f.integrate(lo, hi) / (hi - lo);
    const auto [first, last] = cell_range(nodes, lo, hi);
    for (std::size_t i = first; i < last; ++i) vals[i] += avg;
  }
  return StepFunction(nodes, std::move(vals));
}

StepFunction apply_commutator_sparse(const SparseFamily& family, const StepFunction& b, const StepFunction& f,
                                     SparseVariant variant) {
  check_cubes(family);
  for (const auto& sc : family.cubes) {
    require(b.lo() <= family.lattice.lo(sc.cube) && b.hi() >= family.lattice.hi(sc.cube), Errc::invalid_argument,
            "b must be defined on every cube of the family");
  }
  if (family.cubes.empty()) return StepFunction({f.lo(), f.hi()}, {0.0});
  const std::vector<double> nodes =
      merge_nodes(merge_nodes(b.breakpoints(), f.breakpoints()), cube_nodes(family));
  const std::size_t n = nodes.size() - 1;
  std::vector<double> bv(n), fv(n), len(n);
  for (std::size_t i = 0; i < n; ++i) {
    bv[i] = b(nodes[i]);
    fv[i] = std::fabs(f(nodes[i]));
    len[i] = nodes[i + 1] - nodes[i];
  }
  std::vector<double> vals(n, 0.0);
  for (const auto& sc : lattice_order(family)) {
    const double lo = family.lattice.lo(sc.cube), hi = family.lattice.hi(sc.cube);
    const double size = hi - lo;
    const auto [first, last] = cell_range(nodes, lo, hi);
    // b - b_Q is formed from differences to the cube's first value, so that
    // constants cancel exactly
    const double ref = bv[first];
    double mean_diff = 0.0, f_mass = 0.0;
    for (std::size_t i = first; i < last; ++i) {
      mean_diff += (bv[i] - ref) * len[i];
      f_mass += fv[i] * len[i];
    }
    mean_diff /= size;
    if (variant == SparseVariant::direct) {
      const double avg_f = f_mass / size;
      for (std::size_t i = first; i < last; ++i) vals[i] += std::fabs((bv[i] - ref) - mean_diff) * avg_f;
    } else {
      double s = 0.0;
      for (std::size_t i = first; i < last; ++i) s += std::fabs((bv[i] - ref) - mean_diff) * fv[i] * len[i];
      const double avg = s / size;
      for (std::size_t i = first; i < last; ++i) vals[i] += avg;
    }
  }
  return StepFunction(nodes, std::move(vals));
}

SparseFamily single_scale_family(const DyadicLattice& lattice, int depth) {
  require(depth >= 0 && depth <= lattice.max_depth() && depth <= 24, Errc::invalid_argument,
          "single-scale depth out of range");
  SparseFamily fam{lattice, {}, 1.0};
  for (std::uint64_t i = 0; i < (std::uint64_t{1} << depth); ++i) {
    const Cube q{depth, i};
    fam.cubes.push_back({q, {q}});
  }
  return fam;
}

SparseFamily tower_family(const DyadicLattice& lattice, int depth) {
  require(depth >= 0 && depth + 1 <= lattice.max_depth(), Errc::invalid_argument,
          "tower depth must leave one lattice level for the portions");
  SparseFamily fam{lattice, {}, 0.5};
  for (int j = 0; j <= depth; ++j) fam.cubes.push_back({Cube{j, 0}, {Cube{j + 1, 1}}});
  return fam;
}

SparseFamily random_family(const DyadicLattice& lattice, std::mt19937_64& rng, int candidates, double eta,
                           int resolution) {
  require(eta > 0 && eta <= 1, Errc::invalid_argument, "eta must be in (0, 1]");
  require(resolution >= 0 && resolution <= 10 && resolution <= lattice.max_depth(), Errc::invalid_argument,
          "resolution out of range");
  SparseFamily fam{lattice, {}, eta};
  std::map<double, double> used;  // lo -> hi of occupied portion cells
  auto is_free = [&](double lo, double hi) {
    auto it = used.lower_bound(hi);
    if (it == used.begin()) return true;
    --it;
    return it->second <= lo;
  };
  std::uniform_int_distribution<int> depth_dist(0, lattice.max_depth() - resolution);
  std::vector<Cube> taken;
  for (int c = 0; c < candidates; ++c) {
    const int d = depth_dist(rng);
    std::uniform_int_distribution<std::uint64_t> index_dist(0, (std::uint64_t{1} << d) - 1);
    const Cube q{d, index_dist(rng)};
    if (std::find(taken.begin(), taken.end(), q) != taken.end()) continue;
    const int fine = d + resolution;
    const std::uint64_t first = q.index << resolution;
    std::vector<Cube> cells;
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << resolution); ++i) {
      const Cube e{fine, first + i};
      if (is_free(lattice.lo(e), lattice.hi(e))) cells.push_back(e);
    }
    std::shuffle(cells.begin(), cells.end(), rng);
    const std::size_t need = static_cast<std::size_t>(std::ceil(eta * std::ldexp(1.0, resolution) - 1e-12));
    if (cells.size() < need) continue;
    cells.resize(need);
    std::sort(cells.begin(), cells.end());
    for (Cube e : cells) used.emplace(lattice.lo(e), lattice.hi(e));
    taken.push_back(q);
    fam.cubes.push_back({q, std::move(cells)});
  }
  return fam;
}

std::string to_json(const SparseFamily& family) {
  nlohmann::ordered_json j;
  j["root"] = {family.lattice.r0(), family.lattice.r1()};
  j["max_depth"] = family.lattice.max_depth();
  j["eta"] = family.eta;
  j["cubes"] = nlohmann::ordered_json::array();
  for (const auto& sc : family.cubes) {
    nlohmann::ordered_json c;
    c["depth"] = sc.cube.depth;
    c["index"] = sc.cube.index;
    c["e_cells"] = nlohmann::ordered_json::array();
    for (Cube e : sc.portion) c["e_cells"].push_back({e.depth, e.index});
    j["cubes"].push_back(std::move(c));
  }
  return j.dump(2);
}

SparseFamily sparse_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    const auto& root = j.at("root");
    require(root.is_array() && root.size() == 2, Errc::parse_error, "root must be [r0, r1]");
    int max_depth = 0;
    std::vector<SparseCube> cubes;
    for (const auto& c : j.at("cubes")) {
      SparseCube sc{{c.at("depth").get<int>(), c.at("index").get<std::uint64_t>()}, {}};
      max_depth = std::max(max_depth, sc.cube.depth);
      for (const auto& e : c.at("e_cells")) {
        require(e.is_array() && e.size() == 2, Errc::parse_error, "e_cells entries must be [depth, index]");
        sc.portion.push_back({e[0].get<int>(), e[1].get<std::uint64_t>()});
        max_depth = std::max(max_depth, sc.portion.back().depth);
      }
      cubes.push_back(std::move(sc));
    }
    if (j.contains("max_depth")) max_depth = std::max(max_depth, j["max_depth"].get<int>());
    SparseFamily fam{DyadicLattice(root[0].get<double>(), root[1].get<double>(), std::max(max_depth, 1)),
                     std::move(cubes), j.value("eta", 1.0)};
    check_cubes(fam);
    return fam;
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::parse_error, std::string("sparse family JSON: ") + e.what());
  }
}

}  // namespace weaklab
