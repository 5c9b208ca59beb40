#pragma once

#include <string>
#include <vector>

#include "weaklab/dyadic.hpp"
#include "weaklab/step_function.hpp"
#include "weaklab/weight.hpp"

namespace weaklab {

/// w({|f| > λ}) at the distinct nonzero values λ_j of |f|, largest first.
/// `level_masses[j]` is w({|f| = λ_j}).
struct DistributionFunction {
  std::vector<double> thresholds;
  std::vector<double> measures;
  std::vector<double> level_masses;
  std::string weight_id;

  /// w({|f| > λ}) for any λ ≥ 0.
  double operator()(double lambda) const;
};

DistributionFunction distribution(const StepFunction& f, const Weight& w = Weight::constant());

/// Nonincreasing rearrangement f* on [0, |supp f|); the zero function maps to 0 on [0, 1).
StepFunction rearrange(const StepFunction& f);

enum class NormKind { weak, strong };

/// Weak: sup_λ λ w({|f| > λ})^{1/p}. Strong: (∫|f|^p w)^{1/p}.
double lorentz_norm(const StepFunction& f, const Weight& w, double p, NormKind kind);
inline double lorentz_norm(const StepFunction& f, double p, NormKind kind) {
  return lorentz_norm(f, Weight::constant(), p, kind);
}

/// sup_t t^{1/p} g(t) for a nonincreasing g on [0, ∞), i.e. the weak norm read off f*.
double weak_norm_from_rearrangement(const StepFunction& fstar, double p);

/// sup over lattice cubes of the mean oscillation of b.
double bmo_norm_dyadic(const StepFunction& b, const DyadicLattice& lattice);

}  // namespace weaklab
