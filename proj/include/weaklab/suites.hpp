#pragma once

#include <string>
#include <utility>
#include <vector>

#include "weaklab/config.hpp"

namespace weaklab {

struct Check {
  std::string name;
  bool pass = true;
  double measured = 0.0;
  double bound = 0.0;
  double margin = 0.0;  // ≥ 0 exactly when the check passes
};

struct SuiteReport {
  std::string suite;
  std::vector<Check> checks;
  std::vector<std::pair<std::string, double>> records;  // informational values, never asserted
  std::string fingerprint;

  bool pass() const;
  std::string to_json() const;
};

const std::vector<std::string>& suite_names();

/// Unknown names are parse errors (a usage error for the CLI).
SuiteReport verify_suite(const std::string& name, const RunConfig& cfg);

// Seeded corpora shared by the suites and the acceptance run.
std::vector<StepFunction> rubio_corpus(std::uint64_t seed, int n);           // h ≥ 0 on [-4, 4]
std::vector<StepFunction> hardy_corpus(std::uint64_t seed, int n);           // g ≥ 0 on (0, 16)
std::vector<StepFunction> signed_corpus(std::uint64_t seed, int n);          // signed f on [-4, 4]
std::vector<StepFunction> aligned_weight_corpus(std::uint64_t seed, int n);  // 2^m cells on [-1, 1)

/// sup_t [f*(t) - f*(2t)]₊ / (M^♯_δ f)*(γ t) with M^♯ over intervals with
/// endpoints in `nodes`.
double rearrangement_ratio(const StepFunction& f, double delta, double gamma, std::span<const double> nodes);

/// ‖f‖_{p,∞} / (p ‖M^{♯,d}_δ f‖_{p,∞}) on the given lattice.
double sharp_maximal_ratio(const StepFunction& f, double delta, double p, const DyadicLattice& lattice);

}  // namespace weaklab
