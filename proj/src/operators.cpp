#include "weaklab/operators.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <limits>

#include "weaklab/error.hpp"

namespace weaklab {

namespace {

void check_exponent(double e, const char* name) {
  require(e > 0 && e <= 1, Errc::invalid_argument, std::string(name) + " must lie in (0, 1]");
}

// Cell values of |f|^eps on the (sorted) node cells.
std::vector<double> powered_cells(const StepFunction& f, std::span<const double> nodes, double eps) {
  std::vector<double> g(nodes.size() - 1);
  for (std::size_t c = 0; c + 1 < nodes.size(); ++c) {
    const double v = std::fabs(f(nodes[c]));
    g[c] = eps == 1.0 ? v : std::pow(v, eps);
  }
  return g;
}

std::vector<double> node_set(const StepFunction& f, std::span<const double> nodes) {
  require(std::is_sorted(nodes.begin(), nodes.end()), Errc::invalid_argument, "nodes must be sorted");
  std::vector<double> out = merge_nodes(nodes, f.breakpoints());
  require(out.size() >= 2, Errc::invalid_argument, "need at least two nodes");
  return out;
}

// For each left node i, row(i, vals) fills vals[k] (k > i) with the interval
// functional on [y_i, y_k]. Returns the per-cell sup over intervals covering
// the cell, and the per-node sup over intervals containing the node.
template <class Row>
void interval_sups(std::size_t n, Row&& row, std::vector<double>& cell_sup, std::vector<double>& node_sup) {
  cell_sup.assign(n - 1, 0.0);
  node_sup.assign(n, 0.0);
  std::vector<double> vals(n, 0.0);
  std::vector<double> suf(n + 1, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    row(i, vals);
    suf[n] = 0.0;
    for (std::size_t k = n - 1; k > i; --k) suf[k] = std::max(vals[k], suf[k + 1]);
    for (std::size_t c = i; c + 1 < n; ++c) cell_sup[c] = std::max(cell_sup[c], suf[c + 1]);
    for (std::size_t j = i; j < n; ++j) node_sup[j] = std::max(node_sup[j], suf[std::max(j, i + 1)]);
  }
}

}  // namespace

AverageSups average_sups(std::span<const double> y, std::span<const double> mass) {
  const std::size_t n = y.size();
  require(n >= 2 && mass.size() + 1 == n, Errc::invalid_argument, "average_sups needs one mass per node cell");
  AverageSups out;
  interval_sups(
      n,
      [&](std::size_t i, std::vector<double>& vals) {
        double s = 0.0;
        for (std::size_t k = i + 1; k < n; ++k) {
          s += mass[k - 1];
          vals[k] = s / (y[k] - y[i]);
        }
      },
      out.cell_lower, out.at_nodes);
  return out;
}

MaximalOnNodes maximal_on_nodes(const StepFunction& f, std::span<const double> nodes_in, double eps) {
  check_exponent(eps, "eps");
  const std::vector<double> y = node_set(f, nodes_in);
  const std::size_t n = y.size();
  const std::vector<double> g = powered_cells(f, y, eps);
  std::vector<double> mass(n - 1);
  for (std::size_t c = 0; c + 1 < n; ++c) mass[c] = g[c] * (y[c + 1] - y[c]);

  AverageSups sups = average_sups(y, mass);
  std::vector<double> lower = std::move(sups.cell_lower);
  std::vector<double> at_nodes = std::move(sups.at_nodes);

  std::vector<double> upper(n - 1);
  for (std::size_t c = 0; c + 1 < n; ++c) upper[c] = std::max(at_nodes[c], at_nodes[c + 1]);
  if (eps != 1.0) {
    for (double& v : lower) v = std::pow(v, 1 / eps);
    for (double& v : upper) v = std::pow(v, 1 / eps);
    for (double& v : at_nodes) v = std::pow(v, 1 / eps);
  }
  return {StepFunction(y, std::move(lower)), StepFunction(y, std::move(upper)), std::move(at_nodes)};
}

StepFunction maximal(const StepFunction& f, double eps, const GridSpec& grid) {
  return maximal_on_nodes(f, log_grid(grid), eps).lower;
}

StepFunction maximal_upper(const StepFunction& f, double eps, const GridSpec& grid) {
  return maximal_on_nodes(f, log_grid(grid), eps).upper;
}

double maximal_at(const StepFunction& f, double x, double eps) {
  check_exponent(eps, "eps");
  require(std::isfinite(x), Errc::invalid_argument, "x must be finite");
  const StepFunction g = eps == 1.0 ? abs(f) : power(abs(f), eps);
  const auto bp = g.breakpoints();
  std::vector<double> left, right;
  for (double e : bp) {
    if (e <= x) left.push_back(e);
    if (e >= x) right.push_back(e);
  }
  left.push_back(x);
  right.push_back(x);
  double best = 0.0;
  for (double a : left) {
    for (double b : right) {
      if (!(a < b)) continue;
      best = std::max(best, g.integrate(a, b) / (b - a));
    }
  }
  return eps == 1.0 ? best : std::pow(best, 1 / eps);
}

namespace {

struct CellSink {
  std::vector<double> bp;
  std::vector<double> vals;
  void emit(double lo, double hi, double v) {
    if (bp.empty()) bp.push_back(lo);
    vals.push_back(v);
    bp.push_back(hi);
  }
  StepFunction finish(const DyadicLattice& lattice) {
    if (vals.empty()) return StepFunction({lattice.r0(), lattice.r1()}, {0.0});
    return StepFunction(std::move(bp), std::move(vals)).compacted();
  }
};

// Splits [lo, hi) at the nodes strictly inside and emits max(floor, g) per piece.
void emit_pieces(CellSink& sink, const StepFunction& g, std::span<const double> nodes, double lo, double hi,
                 double floor) {
  double a = lo;
  auto it = std::upper_bound(nodes.begin(), nodes.end(), lo);
  for (; it != nodes.end() && *it < hi; ++it) {
    sink.emit(a, *it, std::max(floor, g(a)));
    a = *it;
  }
  sink.emit(a, hi, std::max(floor, g(a)));
}

void dyadic_max(const DyadicLattice& L, const StepFunction& g, std::span<const double> nodes, Cube q,
                double running, CellSink& sink) {
  const double lo = L.lo(q), hi = L.hi(q);
  running = std::max(running, g.integrate(lo, hi) / (hi - lo));
  if (!has_interior_node(nodes, lo, hi)) {
    sink.emit(lo, hi, running);
    return;
  }
  if (q.depth >= L.max_depth()) {
    emit_pieces(sink, g, nodes, lo, hi, running);
    return;
  }
  dyadic_max(L, g, nodes, child(q, 0), running, sink);
  dyadic_max(L, g, nodes, child(q, 1), running, sink);
}

}  // namespace

StepFunction maximal_dyadic(const StepFunction& f, const DyadicLattice& lattice, double eps) {
  check_exponent(eps, "eps");
  const StepFunction g = eps == 1.0 ? abs(f) : power(abs(f), eps);
  CellSink sink;
  dyadic_max(lattice, g, g.breakpoints(), Cube{}, 0.0, sink);
  StepFunction out = sink.finish(lattice);
  return eps == 1.0 ? out : power(out, 1 / eps);
}

StepFunction iterate_maximal(const StepFunction& f, int k, const GridSpec& grid) {
  require(k >= 1, Errc::invalid_argument, "iteration count k must be >= 1");
  StepFunction out = f;
  const std::vector<double> nodes = log_grid(grid);
  for (int i = 0; i < k; ++i) out = maximal_on_nodes(out, nodes, 1.0).lower;
  return out;
}

StepFunction iterate_maximal_dyadic(const StepFunction& f, int k, const DyadicLattice& lattice) {
  require(k >= 1, Errc::invalid_argument, "iteration count k must be >= 1");
  StepFunction out = f;
  for (int i = 0; i < k; ++i) out = maximal_dyadic(out, lattice, 1.0);
  return out;
}

double oscillation(const StepFunction& f, double a, double b, double delta) {
  check_exponent(delta, "delta");
  require(a < b, Errc::invalid_argument, "oscillation needs a < b");
  const double len = b - a;
  const double avg = f.integrate(a, b) / len;
  double covered = 0.0;
  double s = 0.0;
  const auto bp = f.breakpoints();
  std::size_t first = static_cast<std::size_t>(std::upper_bound(bp.begin(), bp.end(), a) - bp.begin());
  first = first == 0 ? 0 : first - 1;
  for (std::size_t i = first; i < f.cells() && f.cell_lo(i) < b; ++i) {
    const double l = std::max(a, f.cell_lo(i));
    const double r = std::min(b, f.cell_hi(i));
    if (!(r > l)) continue;
    covered += r - l;
    s += std::pow(std::fabs(f.values()[i] - avg), delta) * (r - l);
  }
  s += std::pow(std::fabs(avg), delta) * std::max(0.0, len - covered);
  return std::pow(s / len, 1 / delta);
}

StepFunction sharp_maximal(const StepFunction& f, double delta, std::span<const double> nodes_in) {
  check_exponent(delta, "delta");
  const std::vector<double> y = node_set(f, nodes_in);
  const std::size_t n = y.size();
  std::vector<double> v(n - 1);
  for (std::size_t c = 0; c + 1 < n; ++c) v[c] = f(y[c]);
  std::vector<double> lower, at_nodes;
  interval_sups(
      n,
      [&](std::size_t i, std::vector<double>& vals) {
        // Differences against the first cell keep f + const bit-stable.
        const double ref = v[i];
        double s = 0.0;
        for (std::size_t k = i + 1; k < n; ++k) {
          s += (v[k - 1] - ref) * (y[k] - y[k - 1]);
          const double avg = s / (y[k] - y[i]);
          double o = 0.0;
          for (std::size_t c = i; c < k; ++c) o += std::pow(std::fabs(v[c] - ref - avg), delta) * (y[c + 1] - y[c]);
          vals[k] = o / (y[k] - y[i]);
        }
      },
      lower, at_nodes);
  for (double& x : lower) x = std::pow(x, 1 / delta);
  return StepFunction(y, std::move(lower));
}

namespace {

void dyadic_sharp(const DyadicLattice& L, const StepFunction& f, std::span<const double> nodes, double delta, Cube q,
                  double running, CellSink& sink) {
  const double lo = L.lo(q), hi = L.hi(q);
  if (!has_interior_node(nodes, lo, hi)) {
    sink.emit(lo, hi, running);
    return;
  }
  running = std::max(running, std::pow(oscillation(f, lo, hi, delta), delta));
  if (q.depth >= L.max_depth()) {
    sink.emit(lo, hi, running);
    return;
  }
  dyadic_sharp(L, f, nodes, delta, child(q, 0), running, sink);
  dyadic_sharp(L, f, nodes, delta, child(q, 1), running, sink);
}

}  // namespace

StepFunction sharp_maximal_dyadic(const StepFunction& f, double delta, const DyadicLattice& lattice) {
  check_exponent(delta, "delta");
  CellSink sink;
  dyadic_sharp(lattice, f, f.breakpoints(), delta, Cube{}, 0.0, sink);
  StepFunction out = sink.finish(lattice);
  return power(out, 1 / delta);
}

double hilbert_step(const StepFunction& f, double c_H, double x) {
  require(c_H > 0, Errc::invalid_argument, "c_H must be positive");
  require(std::isfinite(x), Errc::invalid_argument, "x must be finite");
  // Cell form v ln(|x-a|/|x-b|) with log1p away from the cell: no
  // cancellation between large neighbouring values. When x is a
  // breakpoint the ln 0 parts are collected in `hit` and must cancel.
  const auto bp = f.breakpoints();
  const auto v = f.values();
  double s = 0.0;
  double hit = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0.0) continue;
    const double a = bp[i], b = bp[i + 1];
    if (x > b) {
      s += v[i] * std::log1p((b - a) / (x - b));
    } else if (x < a) {
      s += v[i] * std::log1p(-(b - a) / (b - x));
    } else if (x == a) {
      s -= v[i] * std::log(b - a);
      hit += v[i];
    } else if (x == b) {
      s += v[i] * std::log(b - a);
      hit -= v[i];
    } else {
      s += v[i] * std::log((x - a) / (b - x));
    }
  }
  if (hit != 0.0) fail(Errc::singular_point, "Hilbert transform evaluated at a jump");
  return c_H * s;
}

namespace {

// ln|t|/(t - 1), bounded across t = 1.
double scaled_log_kernel(double t) {
  if (t == 0.0) return 0.0;  // integrable log singularity; only hit by underflowing abscissae
  const double u = t - 1.0;
  if (u == 0.0) return 1.0;
  if (std::fabs(u) < 0.5) return std::log1p(u) / u;
  return std::log(std::fabs(t)) / u;
}

struct Piece {
  double a;
  double b;
  double weight;
};

double integrate_checked(const std::vector<Piece>& pieces, const std::function<double(double)>& k,
                         const QuadratureOptions& q, double x, bool log_at_zero) {
  require(q.abs_tol > 0, Errc::invalid_argument, "quadrature tolerance must be positive");
  boost::math::quadrature::tanh_sinh<double> ts;
  double total = 0.0;
  double err_total = 0.0;
  for (const Piece& p : pieces) {
    if (p.weight == 0.0) continue;
    double err = 0.0;
    double val;
    if (log_at_zero && (p.a == 0.0 || p.b == 0.0)) {
      double l1 = 0.0;
      val = ts.integrate(k, p.a, p.b, 1e-12, &err, &l1);
    } else {
      val = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(k, p.a, p.b, q.max_depth, 1e-11, &err);
    }
    total += p.weight * val;
    err_total += std::fabs(p.weight) * err;
  }
  if (!(err_total <= q.abs_tol) || !std::isfinite(total)) {
    throw ToleranceError("commutator quadrature did not reach tolerance at x = " + format_double(x), total,
                         err_total);
  }
  return total;
}

}  // namespace

double commutator_log_hilbert(const StepFunction& f, double c_H, double x, const QuadratureOptions& q) {
  require(c_H > 0, Errc::invalid_argument, "c_H must be positive");
  require(std::isfinite(x), Errc::invalid_argument, "x must be finite");
  if (x == 0.0) fail(Errc::singular_point, "commutator with log|x| is singular at x = 0");
  // y = x t turns the kernel into ln|t|/(t - 1) dt, free of the scale of x.
  std::vector<double> cuts;
  for (double e : f.breakpoints()) cuts.push_back(e / x);
  std::sort(cuts.begin(), cuts.end());
  const double t_lo = cuts.front(), t_hi = cuts.back();
  std::vector<double> extra{0.0, 1.0};
  // Geometric cuts for |t| >= 1/4; the piece next to t = 0 goes to tanh-sinh.
  for (int j = -1; j <= 40; ++j) {
    const double r = std::ldexp(1.0, 2 * j);
    extra.push_back(r);
    extra.push_back(-r);
  }
  std::sort(extra.begin(), extra.end());
  std::vector<double> inside;
  for (double c : extra) {
    if (c > t_lo && c < t_hi) inside.push_back(c);
  }
  cuts = merge_nodes(cuts, inside);
  std::vector<Piece> pieces;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    pieces.push_back({a, b, f(x * (0.5 * (a + b)))});
  }
  const double sign = x > 0 ? 1.0 : -1.0;
  return sign * c_H * integrate_checked(pieces, scaled_log_kernel, q, x, true);
}

double commutator_with(const StepFunction& f, const std::function<double(double)>& b, double c_H, double x,
                       const QuadratureOptions& q) {
  require(c_H > 0, Errc::invalid_argument, "c_H must be positive");
  require(std::isfinite(x), Errc::invalid_argument, "x must be finite");
  const double bx = b(x);
  const std::vector<double> xs{x};
  const std::vector<double> cuts = merge_nodes(f.breakpoints(), xs);
  std::vector<Piece> pieces;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] <= f.lo() || cuts[i] >= f.hi()) continue;
    pieces.push_back({cuts[i], cuts[i + 1], f(cuts[i])});
  }
  auto k = [&](double y) { return (bx - b(y)) / (x - y); };
  return c_H * integrate_checked(pieces, k, q, x, false);
}

namespace {

void check_positive_support(const StepFunction& g) {
  for (std::size_t i = 0; i < g.cells(); ++i) {
    if (g.values()[i] != 0.0 && g.cell_lo(i) < 0.0) {
      fail(Errc::invalid_argument, "adjoint Hardy operator needs g supported in [0, inf)");
    }
  }
}

}  // namespace

double adjoint_hardy(const StepFunction& g, double x) {
  require(x > 0 && std::isfinite(x), Errc::invalid_argument, "adjoint Hardy operator needs x > 0");
  check_positive_support(g);
  double s = 0.0;
  for (std::size_t i = 0; i < g.cells(); ++i) {
    const double v = g.values()[i];
    if (v == 0.0 || g.cell_hi(i) <= x) continue;
    s += v * std::log(g.cell_hi(i) / std::max(g.cell_lo(i), x));
  }
  return s;
}

double adjoint_hardy_weak_norm(const StepFunction& g, double p) {
  require(p >= 1, Errc::invalid_argument, "weak norm needs p >= 1");
  check_positive_support(g);
  require(g.is_nonnegative(), Errc::invalid_argument, "adjoint Hardy weak norm needs g >= 0");
  const double inv_p = 1 / p;
  double best = 0.0;
  double C = 0.0;  // S g at the right end of the current cell
  for (std::size_t idx = g.cells(); idx-- > 0;) {
    const double lo = std::max(0.0, g.cell_lo(idx));
    const double hi = g.cell_hi(idx);
    const double v = g.values()[idx];
    if (hi <= 0.0) break;
    auto phi = [&](double x) { return std::pow(x, inv_p) * (C + v * std::log(hi / x)); };
    best = std::max(best, phi(hi));
    if (lo > 0) best = std::max(best, phi(lo));
    if (v > 0) {
      const double xs = hi * std::exp(C / v - p);
      if (xs > lo && xs < hi) best = std::max(best, phi(xs));
    }
    if (v != 0.0 && lo > 0) C += v * std::log(hi / lo);
    else if (v != 0.0) C = std::numeric_limits<double>::infinity();
  }
  return best;
}

}  // namespace weaklab
