#pragma once

#include <cstdint>
#include <string>

#include "weaklab/asymptotics.hpp"
#include "weaklab/grid.hpp"
#include "weaklab/operators.hpp"
#include "weaklab/weight.hpp"
#include "weaklab/weights.hpp"

namespace weaklab {

/// Every knob that can change a numerical output. `jobs` and `out_dir` are
/// excluded from the fingerprint: they never change the bytes written.
struct RunConfig {
  GridSpec grid{};
  QuadratureOptions quad{};
  double c_H = std::numbers::inv_pi;
  double delta = 0.5;
  double bound_Bp = 0.0;  // 0: the 2p/(p-1) rule
  int terms_K = 40;
  std::uint64_t seed = 1;
  int corpus = 20;        // seeded functions per suite
  std::string out_dir = ".";
  int jobs = 1;

  void validate() const;
  std::string to_json() const;
  /// Strict: unknown keys are parse errors.
  static RunConfig from_json(const std::string& text);
  static RunConfig load(const std::string& path);
  /// FNV-1a over the canonical JSON of the numerical fields, 16 hex digits.
  std::string fingerprint() const;

  EvalOptions eval() const;
  RdFParams rdf(double p) const;
};

/// `const:c`, `power:a=..`, `step:file=..`, `rdf:seed=indicator,p=..`,
/// `primal:p=..,p0=..`, `dual:p=..,p0=..` (seed=indicator|file=.. optional).
Weight parse_weight(const std::string& text, const RunConfig& cfg);

std::uint64_t fnv1a(const std::string& bytes);

}  // namespace weaklab
