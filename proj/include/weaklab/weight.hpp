#pragma once

#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

#include "weaklab/grid.hpp"
#include "weaklab/step_function.hpp"

namespace weaklab {

enum class WeightKind { constant, step, power };

/// A weight on its window. Outside the window the weight has no mass; the
/// constant weight's window is all of R.
class Weight {
 public:
  static Weight constant(double c = 1.0);
  /// Strictly positive step body; the window is [body.lo(), body.hi()].
  static Weight step(StepFunction body, std::string id = "step");
  /// |x|^a on [-X, X], a > -1.
  static Weight power(double a, double window_X = GridSpec{}.window_X);

  WeightKind kind() const noexcept { return kind_; }
  const std::string& id() const noexcept { return id_; }
  double window_lo() const noexcept { return lo_; }
  double window_hi() const noexcept { return hi_; }
  double exponent() const noexcept { return a_; }         // power only
  double constant_value() const noexcept { return c_; }   // constant only
  const StepFunction& body() const;                        // step only

  double operator()(double x) const;

  /// ∫_a^b w^r over [a, b] ∩ window. +inf when the integral diverges.
  double integral(double a, double b, double r = 1.0) const;
  double measure(double a, double b) const { return integral(a, b, 1.0); }

  /// Nodes on which A_p suprema are searched: the body's breakpoints, or the
  /// log grid of the window for power weights. Empty for constants.
  std::vector<double> nodes(const GridSpec& grid = {}) const;

  /// Value of the origin-centred interval family for power weights:
  /// (1/(a+1))((p-1)/(p-1-a))^{p-1}; +inf once a ≥ p-1.
  double origin_candidate(double p) const;

  struct ApCache;
  ApCache& cache() const noexcept { return *cache_; }

 private:
  Weight() = default;
  WeightKind kind_ = WeightKind::constant;
  std::string id_;
  double lo_ = -std::numeric_limits<double>::infinity();
  double hi_ = std::numeric_limits<double>::infinity();
  double a_ = 0.0;
  double c_ = 1.0;
  std::shared_ptr<const StepFunction> body_;
  std::shared_ptr<ApCache> cache_;
};

Weight power_weight(double a, double p_hint, double window_X = GridSpec{}.window_X);

enum class ApMode { bruteforce, dyadic };

struct ApOptions {
  int subdivide = 0;      // bruteforce: extra 2^r - 1 nodes per gap
  int dyadic_depth = 52;  // dyadic: lattice depth over the window
  GridSpec grid{};        // node set for power weights
};

struct ApResult {
  double value = 1.0;
  bool finite = true;  // false: w^{-1/(p-1)} (or 1/w for p = 1) not integrable
};

/// [w]_{A_p} with the standard exponent -1/(p-1); p = 1 gives sup Mw/w.
/// Intervals range over node pairs (bruteforce) or lattice cubes of the
/// window (dyadic). Results are cached per weight.
ApResult ap_constant(const Weight& w, double p, ApMode mode = ApMode::bruteforce, const ApOptions& opts = {});

struct Weight::ApCache {
  using Key = std::tuple<double, int, int, int, double, int, double>;
  std::mutex mutex;
  std::map<Key, ApResult> values;
};

}  // namespace weaklab
