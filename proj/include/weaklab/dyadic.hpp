#pragma once

#include <algorithm>
#include <cstdint>
#include <span>

namespace weaklab {

struct Cube {
  int depth = 0;
  std::uint64_t index = 0;
  bool operator==(const Cube&) const = default;
  auto operator<=>(const Cube&) const = default;
};

/// Dyadic subdivisions of a root interval [r0, r1). Cube (d, i) is the i-th
/// of the 2^d equal subintervals. Depth is capped at 52 so that every cube
/// endpoint is an exactly representable double for dyadic roots.
class DyadicLattice {
 public:
  static constexpr int kMaxDepth = 52;

  DyadicLattice(double r0, double r1, int max_depth);

  double r0() const noexcept { return r0_; }
  double r1() const noexcept { return r1_; }
  int max_depth() const noexcept { return max_depth_; }

  double lo(Cube q) const noexcept;
  double hi(Cube q) const noexcept;
  double length(int depth) const noexcept;

  bool contains(Cube q) const noexcept;
  bool covers(double a, double b) const noexcept { return a >= r0_ && b <= r1_; }

  /// Does cube `outer` contain cube `inner` (possibly equal)?
  static bool nests(Cube outer, Cube inner) noexcept;

 private:
  double r0_;
  double r1_;
  int max_depth_;
};

inline Cube child(Cube q, int side) noexcept { return {q.depth + 1, 2 * q.index + static_cast<std::uint64_t>(side)}; }

/// True when a node of the sorted list lies strictly inside (lo, hi).
inline bool has_interior_node(std::span<const double> sorted, double lo, double hi) {
  auto it = std::upper_bound(sorted.begin(), sorted.end(), lo);
  return it != sorted.end() && *it < hi;
}

/// Depth-first walk from the root in left-to-right order. `visit(q, lo, hi)`
/// returns true to descend into the children of q (ignored at max depth).
template <class Visit>
void walk(const DyadicLattice& lattice, Cube q, Visit&& visit) {
  if (!visit(q, lattice.lo(q), lattice.hi(q))) return;
  if (q.depth >= lattice.max_depth()) return;
  walk(lattice, child(q, 0), visit);
  walk(lattice, child(q, 1), visit);
}

template <class Visit>
void walk(const DyadicLattice& lattice, Visit&& visit) {
  walk(lattice, Cube{}, visit);
}

}  // namespace weaklab
