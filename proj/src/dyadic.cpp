#include "weaklab/dyadic.hpp"

#include <cmath>

#include "weaklab/error.hpp"

namespace weaklab {

DyadicLattice::DyadicLattice(double r0, double r1, int max_depth) : r0_(r0), r1_(r1), max_depth_(max_depth) {
  require(std::isfinite(r0) && std::isfinite(r1) && r0 < r1, Errc::invalid_argument,
          "lattice root needs finite r0 < r1");
  require(max_depth >= 0 && max_depth <= kMaxDepth, Errc::invalid_argument, "lattice depth must be in [0, 52]");
}

double DyadicLattice::length(int depth) const noexcept { return std::ldexp(r1_ - r0_, -depth); }

double DyadicLattice::lo(Cube q) const noexcept {
  return r0_ + std::ldexp((r1_ - r0_) * static_cast<double>(q.index), -q.depth);
}

double DyadicLattice::hi(Cube q) const noexcept {
  if (q.index + 1 == (std::uint64_t{1} << q.depth)) return r1_;
  return r0_ + std::ldexp((r1_ - r0_) * static_cast<double>(q.index + 1), -q.depth);
}

bool DyadicLattice::contains(Cube q) const noexcept {
  return q.depth >= 0 && q.depth <= max_depth_ && q.index < (std::uint64_t{1} << q.depth);
}

bool DyadicLattice::nests(Cube outer, Cube inner) noexcept {
  if (inner.depth < outer.depth) return false;
  return (inner.index >> (inner.depth - outer.depth)) == outer.index;
}

}  // namespace weaklab
