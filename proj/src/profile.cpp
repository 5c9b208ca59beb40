#include "weaklab/profile.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>

#include "weaklab/error.hpp"
#include "weaklab/step_function.hpp"

namespace weaklab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// ln sinh(s) for s > 0 without overflow.
double log_sinh(double s) {
  if (s > 1.0) return s + std::log1p(-std::exp(-2.0 * s)) - std::log(2.0);
  return std::log(std::sinh(s));
}

// Root of an increasing or decreasing function on [lo, hi] with a sign change.
template <class F>
double solve(F f, double lo, double hi) {
  boost::math::tools::eps_tolerance<double> tol(50);
  std::uintmax_t iters = 300;
  auto r = boost::math::tools::toms748_solve(f, lo, hi, tol, iters);
  return 0.5 * (r.first + r.second);
}

// Level set of (ln x)^{m}/x on (e, inf) in u = ln x, where h(u) = m ln u - u.
// Returns log |{h(ln x) > L}| (measure in x).
double log_tail_measure(int m, double L) {
  auto h = [m](double u) { return m * std::log(u) - u; };
  const double u_peak = std::max(1.0, static_cast<double>(m));
  const double h_peak = h(u_peak);
  if (!(L < h_peak)) return -kInf;
  // Decreasing branch.
  double hi = u_peak + 1.0;
  while (h(hi) > L) hi *= 2.0;
  const double u2 = solve([&](double u) { return h(u) - L; }, u_peak, hi);
  double u1 = 1.0;
  if (h(1.0) <= L) u1 = solve([&](double u) { return h(u) - L; }, 1.0, u_peak);
  return u2 + std::log1p(-std::exp(u1 - u2));
}

}  // namespace

Profile Profile::hilbert_indicator(double a, double b, double c_H) {
  require(a < b, Errc::invalid_argument, "Hilbert profile needs a < b");
  require(c_H > 0, Errc::invalid_argument, "c_H must be positive");
  return Profile(ProfileKind::hilbert_indicator, a, b, c_H);
}

Profile Profile::cz_phi(double c_H) {
  require(c_H > 0, Errc::invalid_argument, "c_H must be positive");
  return Profile(ProfileKind::cz_phi, 0, 0.5, c_H);
}

Profile Profile::commutator_tail() { return Profile(ProfileKind::commutator_tail, 0, 0, 1); }

Profile Profile::maximal_tail(int k) {
  require(k >= 1, Errc::invalid_argument, "maximal tail needs k >= 1");
  return Profile(ProfileKind::maximal_tail, k, 0, 1);
}

Profile Profile::commutator_small_x(double kappa, double x0) {
  require(kappa > 0, Errc::invalid_argument, "kappa must be positive");
  require(x0 > 0 && x0 <= 1, Errc::invalid_argument, "x0 must lie in (0, 1]");
  return Profile(ProfileKind::commutator_small_x, 0, x0, kappa);
}

Profile Profile::adjoint_hardy_indicator(double a, double b) {
  require(a >= 0 && a < b, Errc::invalid_argument, "adjoint Hardy profile needs 0 <= a < b");
  return Profile(ProfileKind::adjoint_hardy_indicator, a, b, 1);
}

std::string Profile::describe() const {
  switch (kind_) {
    case ProfileKind::hilbert_indicator:
      return "hilbert-indicator(" + format_double(a_) + "," + format_double(b_) + ",c_H=" + format_double(c_) + ")";
    case ProfileKind::cz_phi:
      return "cz-phi(c_H=" + format_double(c_) + ")";
    case ProfileKind::commutator_tail:
      return "commutator-tail";
    case ProfileKind::maximal_tail:
      return "maximal-tail(k=" + std::to_string(static_cast<int>(a_)) + ")";
    case ProfileKind::commutator_small_x:
      return "commutator-small-x(kappa=" + format_double(c_) + ",x0=" + format_double(b_) + ")";
    case ProfileKind::adjoint_hardy_indicator:
      return "adjoint-hardy-indicator(" + format_double(a_) + "," + format_double(b_) + ")";
  }
  return "?";
}

double Profile::operator()(double x) const {
  switch (kind_) {
    case ProfileKind::hilbert_indicator:
      if (x == a_ || x == b_) fail(Errc::singular_point, "Hilbert profile evaluated at an endpoint");
      return c_ * std::log(std::fabs(x - a_) / std::fabs(x - b_));
    case ProfileKind::cz_phi:
      return (x > 0 && x < 0.5) ? -c_ * std::log(x / (1 - x)) : 0.0;
    case ProfileKind::commutator_tail:
      return x > std::exp(1.0) ? std::log(x) / x : 0.0;
    case ProfileKind::maximal_tail:
      return x > std::exp(1.0) ? std::pow(std::log(x), a_ - 1) / x : 0.0;
    case ProfileKind::commutator_small_x: {
      if (!(x > 0 && x < b_)) return 0.0;
      const double l = std::log(1 / x);
      return c_ * l * l;
    }
    case ProfileKind::adjoint_hardy_indicator:
      if (!(x > 0 && x < b_)) return 0.0;
      return std::log(b_ / std::max(a_, x));
  }
  return 0.0;
}

double Profile::log_level_measure(double log_t) const {
  if (std::isnan(log_t)) fail(Errc::invalid_argument, "level is NaN");
  if (log_t == -kInf) {
    // Measure of the whole support.
    switch (kind_) {
      case ProfileKind::cz_phi: return std::log(0.5);
      case ProfileKind::commutator_small_x: return std::log(b_);
      case ProfileKind::adjoint_hardy_indicator: return std::log(b_);
      default: return kInf;
    }
  }
  const double t = std::exp(log_t);
  switch (kind_) {
    case ProfileKind::hilbert_indicator: {
      const double log_s = log_t - std::log(c_);
      if (log_s < -20) return std::log(2 * (b_ - a_)) - log_s;  // sinh s = s (1 + O(s^2))
      const double s = t / c_;
      if (!std::isfinite(s)) return -kInf;
      return std::log(2 * (b_ - a_)) - log_sinh(s);
    }
    case ProfileKind::cz_phi: {
      const double s = t / c_;
      if (!std::isfinite(s)) return -kInf;
      return -(s + std::log1p(std::exp(-s)));
    }
    case ProfileKind::commutator_tail:
      return log_tail_measure(1, log_t);
    case ProfileKind::maximal_tail: {
      const int m = static_cast<int>(a_) - 1;
      if (m == 0) {
        // 1/x on (e, inf): level set (e, 1/t).
        const double u2 = -log_t;
        if (u2 <= 1) return -kInf;
        return u2 + std::log1p(-std::exp(1 - u2));
      }
      return log_tail_measure(m, log_t);
    }
    case ProfileKind::commutator_small_x:
      if (!std::isfinite(t)) return -kInf;
      return std::min(std::log(b_), -std::sqrt(t / c_));
    case ProfileKind::adjoint_hardy_indicator:
      if (a_ > 0 && t >= std::log(b_ / a_)) return -kInf;
      if (!std::isfinite(t)) return -kInf;
      return std::log(b_) - t;
  }
  return -kInf;
}

double Profile::log_sup() const {
  switch (kind_) {
    case ProfileKind::hilbert_indicator:
    case ProfileKind::cz_phi:
    case ProfileKind::commutator_small_x:
      return kInf;
    case ProfileKind::commutator_tail:
      return -1.0;
    case ProfileKind::maximal_tail: {
      const double m = a_ - 1;
      const double u = std::max(1.0, m);
      return m * std::log(u) - u;
    }
    case ProfileKind::adjoint_hardy_indicator:
      return a_ > 0 ? std::log(std::log(b_ / a_)) : kInf;
  }
  return kInf;
}

double log_level_measure(const ProfileSet& set, double log_t) {
  double best = -kInf;
  std::vector<double> logs;
  logs.reserve(set.size());
  for (const auto& term : set) {
    require(term.multiplicity > 0 && term.scale > 0, Errc::invalid_argument,
            "profile terms need positive multiplicity and scale");
    const double l = std::log(term.multiplicity) + term.profile.log_level_measure(log_t - std::log(term.scale));
    logs.push_back(l);
    best = std::max(best, l);
  }
  if (!std::isfinite(best)) return best;
  double s = 0;
  for (double l : logs) s += std::exp(l - best);
  return best + std::log(s);
}

double log_profile_weak_norm(const ProfileSet& set, double p) {
  require(p >= 1, Errc::invalid_argument, "weak norm needs p >= 1");
  require(!set.empty(), Errc::invalid_argument, "empty profile set");
  double hi = -kInf;
  for (const auto& term : set) hi = std::max(hi, term.profile.log_sup() + std::log(term.scale));
  if (!std::isfinite(hi)) hi = 1e6;
  const double lo = -1e7;
  auto F = [&](double z) {
    const double L = std::sinh(z);
    const double m = log_level_measure(set, L);
    return m == -kInf ? -kInf : L + m / p;
  };
  const double z0 = std::asinh(lo);
  const double z1 = std::asinh(hi);
  const int n = 20000;
  int best_i = 0;
  double best = -kInf;
  for (int i = 0; i <= n; ++i) {
    const double v = F(z0 + (z1 - z0) * i / n);
    if (v > best) {
      best = v;
      best_i = i;
    }
  }
  if (best == -kInf) return best;
  const double a = z0 + (z1 - z0) * std::max(0, best_i - 1) / n;
  const double b = z0 + (z1 - z0) * std::min(n, best_i + 1) / n;
  std::uintmax_t iters = 200;
  auto r = boost::math::tools::brent_find_minima([&](double z) { return -F(z); }, a, b, 52, iters);
  return std::max(best, -r.second);
}

double profile_weak_norm(const ProfileSet& set, double p) { return std::exp(log_profile_weak_norm(set, p)); }

}  // namespace weaklab
