#pragma once

#include <cstdint>
#include <iosfwd>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "weaklab/grid.hpp"
#include "weaklab/operators.hpp"
#include "weaklab/profile.hpp"
#include "weaklab/step_function.hpp"
#include "weaklab/weight.hpp"

namespace weaklab {

/// Operator tag with its parameters; `parse`/`str` implement the CLI syntax
/// (`maximal:uncentered`, `iterated-maximal:k=3`, `hilbert:c_H=1`,
/// `sharp:delta=0.5,dyadic`, `sparse:tower,depth=8`, `identity`, ...).
struct OperatorId {
  enum class Tag { maximal, iterated_maximal, hilbert, commutator_log_hilbert, adjoint_hardy, sharp_maximal, sparse,
                   identity };
  Tag tag = Tag::identity;
  bool dyadic = false;
  double eps = 1.0;
  int k = 1;
  double c_H = std::numbers::inv_pi;
  double delta = 0.5;
  std::string sparse_kind = "tower";  // tower | single
  int sparse_depth = 8;

  static OperatorId parse(const std::string& text);
  std::string str() const;
};

/// Shared numerical settings for operator application and curve sampling.
struct EvalOptions {
  GridSpec grid{};
  QuadratureOptions quad{};
  int jobs = 1;
  std::uint64_t seed = 1;
  bool use_profiles = true;
  std::string fingerprint;
};

/// T f as a step function on the window (pointwise operators are sampled at
/// cell midpoints of the window nodes).
StepFunction apply_operator(const OperatorId& op, const StepFunction& f, const EvalOptions& opts = {});

/// Closed-form level-set data for T χ_(0,1): exact for hilbert and
/// adjoint-hardy, a proven pointwise lower bound for iterated-maximal (k ≥ 2)
/// and the commutator. Empty when no profile applies.
std::optional<ProfileSet> indicator_profile(const OperatorId& op);

struct FamilyMember {
  std::string id;
  StepFunction f;
};

/// Families: `indicator` ({χ_(0,1)}, profile-backed when possible),
/// `indicator-grid` (same member, always on the grid), `steps:n=<N>`
/// (seeded nonnegative step functions on (0, 1)).
std::vector<FamilyMember> make_family(const std::string& family, std::uint64_t seed);

struct NormCurve {
  std::string op;
  std::string family;
  std::string weight;
  std::vector<double> p;
  std::vector<double> norm;
  std::vector<std::string> member;  // maximizing member per sample
  std::string method;               // profile | grid
  std::string fingerprint;
};

NormCurve sample_norm_curve(const OperatorId& op, const std::string& family, const Weight& w,
                            const std::vector<double>& p_grid, const EvalOptions& opts = {});

void write_curves_csv(std::ostream& out, const std::vector<NormCurve>& curves);
std::vector<NormCurve> read_curves_csv(std::istream& in);

enum class Endpoint { one_plus, infinity };
Endpoint parse_endpoint(const std::string& text);
std::string to_string(Endpoint e);

struct ExponentFit {
  std::string op;
  Endpoint endpoint = Endpoint::infinity;
  double exponent = 0.0;
  double intercept = 0.0;
  double residual = 0.0;
  int points_used = 0;
  bool clamped = false;  // least-squares slope was negative
};

/// Least-squares slope of log N against -log(p-1) (one_plus) or log p
/// (infinity) over the `tail` samples nearest the endpoint; tail ≤ 0 uses all.
ExponentFit fit_exponent(const NormCurve& curve, Endpoint endpoint, int tail = 0);

/// Plain log-log fit of y against x (both positive), no clamping.
ExponentFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

struct BetaBound {
  double p0 = 2.0;
  double alpha = 0.0;
  double gamma = 0.0;
  double beta_min = 0.0;
};
BetaBound beta_lower(double alpha, double gamma, double p0);

/// p grids: `geometric:lo:hi:n`, `list:a,b,...`, `one-plus:j0:j1` (1 + 2^-j),
/// `pow2:j0:j1` (2^j).
std::vector<double> parse_p_grid(const std::string& text);
std::vector<double> default_one_plus_grid();
std::vector<double> default_infinity_grid();

struct SharpnessOptions {
  std::vector<double> deltas{0.5, 0.35, 0.25, 0.18, 0.125, 0.09, 0.0625};
  double min_scale = 0x1p-240;
  int nodes_per_octave = 4;
  double window_X = 0x1p20;
  ApOptions ap{};
  EvalOptions eval{};
};

struct SharpnessPoint {
  double delta = 0.0;
  double ap = 1.0;
  double ratio = 0.0;
};

struct SharpnessResult {
  std::string op;
  double p = 2.0;
  ExponentFit fit;
  std::vector<SharpnessPoint> pairs;
};

/// Test functions f_δ = |x|^{δ-1}χ_(0,1) as exact cell averages on a log grid.
StepFunction sharpness_test_function(double delta, double min_scale, int nodes_per_octave);

/// w_δ = |x|^{(1-δ)(p-1)}, f_δ as above; fits log(‖T f_δ‖_{p,∞,w}/‖f_δ‖_{p,w})
/// against log [w_δ]_{A_p}.
SharpnessResult sharpness_probe(const OperatorId& op, double p, const SharpnessOptions& opts = {});

}  // namespace weaklab
