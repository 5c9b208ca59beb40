#include "weaklab/weight.hpp"

#include <algorithm>
#include <cmath>

#include "weaklab/dyadic.hpp"
#include "weaklab/error.hpp"
#include "weaklab/operators.hpp"

namespace weaklab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// ∫_a^b |x|^s dx for a < b.
double power_integral(double a, double b, double s) {
  if (a <= 0.0 && b >= 0.0) {
    if (s <= -1.0) return kInf;
    return (std::pow(-a, s + 1) + std::pow(b, s + 1)) / (s + 1);
  }
  const double lo = std::min(std::fabs(a), std::fabs(b));
  const double hi = std::max(std::fabs(a), std::fabs(b));
  if (s == -1.0) return std::log(hi / lo);
  if (s == 0.0) return hi - lo;
  // hi^{s+1} - lo^{s+1} without cancellation when the interval is short
  const double e = s + 1;
  return std::pow(lo, e) * std::expm1(e * std::log1p((hi - lo) / lo)) / e;
}

// ∫ body^r over [a, b]; body values are positive.
double body_integral(const StepFunction& body, double a, double b, double r) {
  if (r == 1.0) return body.integrate(a, b);
  const auto bp = body.breakpoints();
  const auto v = body.values();
  std::size_t i = static_cast<std::size_t>(std::upper_bound(bp.begin(), bp.end(), a) - bp.begin());
  i = i == 0 ? 0 : i - 1;
  double s = 0.0;
  for (; i < v.size() && bp[i] < b; ++i) {
    const double l = std::max(a, bp[i]);
    const double h = std::min(b, bp[i + 1]);
    if (h > l) s += std::pow(v[i], r) * (h - l);
  }
  return s;
}

double body_min(const StepFunction& body, double a, double b) {
  const auto bp = body.breakpoints();
  const auto v = body.values();
  std::size_t i = static_cast<std::size_t>(std::upper_bound(bp.begin(), bp.end(), a) - bp.begin());
  i = i == 0 ? 0 : i - 1;
  double m = kInf;
  for (; i < v.size() && bp[i] < b; ++i) {
    if (std::min(b, bp[i + 1]) > std::max(a, bp[i])) m = std::min(m, v[i]);
  }
  return m;
}

}  // namespace

Weight Weight::constant(double c) {
  require(c > 0 && std::isfinite(c), Errc::invalid_weight, "constant weight must be positive");
  Weight w;
  w.kind_ = WeightKind::constant;
  w.c_ = c;
  w.id_ = "const:" + format_double(c);
  w.cache_ = std::make_shared<ApCache>();
  return w;
}

Weight Weight::step(StepFunction body, std::string id) {
  for (double v : body.values()) {
    require(v > 0, Errc::invalid_weight, "step weight must be strictly positive on its window");
  }
  Weight w;
  w.kind_ = WeightKind::step;
  w.lo_ = body.lo();
  w.hi_ = body.hi();
  w.id_ = std::move(id);
  w.body_ = std::make_shared<const StepFunction>(std::move(body));
  w.cache_ = std::make_shared<ApCache>();
  return w;
}

Weight Weight::power(double a, double window_X) {
  require(a > -1 && std::isfinite(a), Errc::invalid_argument, "power weight needs exponent a > -1");
  require(window_X > 0 && std::isfinite(window_X), Errc::invalid_argument, "window must be positive");
  Weight w;
  w.kind_ = WeightKind::power;
  w.a_ = a;
  w.lo_ = -window_X;
  w.hi_ = window_X;
  w.id_ = "power:a=" + format_double(a);
  w.cache_ = std::make_shared<ApCache>();
  return w;
}

const StepFunction& Weight::body() const {
  require(kind_ == WeightKind::step, Errc::invalid_argument, "weight has no step body");
  return *body_;
}

double Weight::operator()(double x) const {
  if (!(x >= lo_ && x <= hi_)) return 0.0;
  switch (kind_) {
    case WeightKind::constant:
      return c_;
    case WeightKind::step:
      return (*body_)(x);
    case WeightKind::power:
      return std::pow(std::fabs(x), a_);
  }
  return 0.0;
}

double Weight::integral(double a, double b, double r) const {
  require(!std::isnan(a) && !std::isnan(b), Errc::invalid_argument, "integration limits must not be NaN");
  if (a > b) return -integral(b, a, r);
  a = std::max(a, lo_);
  b = std::min(b, hi_);
  if (!(a < b)) return 0.0;
  switch (kind_) {
    case WeightKind::constant:
      return std::pow(c_, r) * (b - a);
    case WeightKind::step:
      return body_integral(*body_, a, b, r);
    case WeightKind::power:
      return power_integral(a, b, a_ * r);
  }
  return 0.0;
}

std::vector<double> Weight::nodes(const GridSpec& grid) const {
  switch (kind_) {
    case WeightKind::constant:
      return {};
    case WeightKind::step:
      return {body_->breakpoints().begin(), body_->breakpoints().end()};
    case WeightKind::power: {
      GridSpec g = grid;
      g.window_X = hi_;
      g.min_scale = std::min(g.min_scale, hi_ / 2);
      return window_nodes(g, {});
    }
  }
  return {};
}

double Weight::origin_candidate(double p) const {
  require(p > 1, Errc::invalid_argument, "origin candidate needs p > 1");
  const double a = kind_ == WeightKind::power ? a_ : 0.0;
  if (a >= p - 1) return kInf;
  return std::pow((p - 1) / (p - 1 - a), p - 1) / (a + 1);
}

Weight power_weight(double a, double p_hint, double window_X) {
  require(p_hint >= 1, Errc::invalid_argument, "p_hint must be >= 1");
  return Weight::power(a, window_X);
}

namespace {

ApResult finish(double best) {
  // Every interval contributes ≥ 1 by Jensen; only round-off can land below.
  if (best < 1.0 && best > 1.0 - 1e-12) best = 1.0;
  return {best, std::isfinite(best)};
}

ApResult brute_p(const Weight& w, double p, const std::vector<double>& y) {
  const double s = -1 / (p - 1);
  const std::size_t n = y.size();
  std::vector<double> mw(n - 1), ms(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    mw[i] = w.integral(y[i], y[i + 1]);
    ms[i] = w.integral(y[i], y[i + 1], s);
    if (!std::isfinite(ms[i])) return {kInf, false};
  }
  double best = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double W = 0.0, S = 0.0;
    for (std::size_t k = i + 1; k < n; ++k) {
      W += mw[k - 1];
      S += ms[k - 1];
      const double len = y[k] - y[i];
      best = std::max(best, (W / len) * std::pow(S / len, p - 1));
    }
  }
  return finish(best);
}

ApResult brute_1(const Weight& w, const std::vector<double>& y) {
  if (w.kind() == WeightKind::step) {
    const StepFunction up = maximal_on_nodes(w.body(), y, 1.0).upper;
    double best = 0.0;
    for (std::size_t c = 0; c < up.cells(); ++c) {
      const double x = up.cell_lo(c);
      best = std::max(best, up.values()[c] / w(x));
    }
    return finish(best);
  }
  if (w.exponent() > 0) return {kInf, false};
  std::vector<double> mass(y.size() - 1);
  for (std::size_t i = 0; i + 1 < y.size(); ++i) mass[i] = w.integral(y[i], y[i + 1]);
  const AverageSups sups = average_sups(y, mass);
  double best = 0.0;
  for (std::size_t j = 0; j < y.size(); ++j) {
    if (y[j] == 0.0) continue;
    best = std::max(best, sups.at_nodes[j] / w(y[j]));
  }
  return finish(best);
}

ApResult dyadic(const Weight& w, double p, const ApOptions& opts, const std::vector<double>& nodes) {
  const DyadicLattice lattice(w.window_lo(), w.window_hi(), opts.dyadic_depth);
  const bool is_power = w.kind() == WeightKind::power;
  const double a = w.exponent();
  const double s = p > 1 ? -1 / (p - 1) : 0.0;
  double best = 0.0;
  bool finite = true;
  walk(lattice, [&](Cube, double lo, double hi) {
    if (!finite) return false;
    const double len = hi - lo;
    const bool at_origin = is_power && lo <= 0.0 && hi >= 0.0;
    if (p == 1.0) {
      double inf_w;
      if (is_power) {
        if (at_origin && a > 0) {
          finite = false;
          return false;
        }
        const double near = at_origin ? 0.0 : std::min(std::fabs(lo), std::fabs(hi));
        const double far = std::max(std::fabs(lo), std::fabs(hi));
        inf_w = a >= 0 ? std::pow(near, a) : std::pow(far, a);
      } else {
        inf_w = body_min(w.body(), lo, hi);
      }
      best = std::max(best, w.integral(lo, hi) / len / inf_w);
    } else {
      const double S = w.integral(lo, hi, s);
      if (!std::isfinite(S)) {
        finite = false;
        return false;
      }
      best = std::max(best, (w.integral(lo, hi) / len) * std::pow(S / len, p - 1));
    }
    return at_origin || has_interior_node(nodes, lo, hi);
  });
  if (!finite) return {kInf, false};
  return finish(best);
}

}  // namespace

ApResult ap_constant(const Weight& w, double p, ApMode mode, const ApOptions& opts) {
  require(p >= 1 && std::isfinite(p), Errc::invalid_argument, "A_p needs finite p >= 1");
  require(opts.subdivide >= 0 && opts.subdivide <= 16, Errc::invalid_argument, "subdivide must be in [0, 16]");
  require(opts.dyadic_depth >= 0 && opts.dyadic_depth <= DyadicLattice::kMaxDepth, Errc::invalid_argument,
          "dyadic depth out of range");
  if (w.kind() == WeightKind::constant) return {1.0, true};

  const Weight::ApCache::Key key{p,
                                 static_cast<int>(mode),
                                 opts.subdivide,
                                 opts.dyadic_depth,
                                 opts.grid.min_scale,
                                 opts.grid.nodes_per_octave,
                                 opts.grid.window_X};
  auto& cache = w.cache();
  {
    std::lock_guard lock(cache.mutex);
    if (auto it = cache.values.find(key); it != cache.values.end()) return it->second;
  }

  ApResult r;
  if (w.kind() == WeightKind::power && w.exponent() == 0.0) {
    r = {1.0, true};
  } else if (w.kind() == WeightKind::power && p > 1 && w.exponent() >= p - 1) {
    r = {kInf, false};
  } else {
    const std::vector<double> nodes = w.nodes(opts.grid);
    if (mode == ApMode::dyadic) {
      r = dyadic(w, p, opts, nodes);
    } else {
      const std::vector<double> y = subdivide(nodes, opts.subdivide);
      r = p == 1.0 ? brute_1(w, y) : brute_p(w, p, y);
    }
  }

  std::lock_guard lock(cache.mutex);
  cache.values.emplace(key, r);
  return r;
}

}  // namespace weaklab
