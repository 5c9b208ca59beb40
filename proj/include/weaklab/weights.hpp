#pragma once

#include "weaklab/grid.hpp"
#include "weaklab/step_function.hpp"
#include "weaklab/weight.hpp"

namespace weaklab {

/// Rubio de Francia parameters. bound_Bp ≤ 0 selects the default 2p/(p-1).
struct RdFParams {
  double p = 2.0;
  double bound_Bp = 0.0;
  int terms_K = 40;
  GridSpec grid{};

  double bound() const;
  void validate() const;
};

/// R_p h = Σ_{k≤K} M^k h/(2B)^k on the window nodes of params.grid. Each M^k
/// is the upper staircase of M on the node cells, so every term dominates
/// the exact M^k h restricted to the window.
Weight rubio_majorant(const StepFunction& h, const RdFParams& params);

enum class Direction { primal, dual };

struct ExtrapolationWeight {
  Weight weight;
  double exponent = 0.0;          // primal: -(p0 - p); dual: (p - p0)/(p - 1)
  double expected_bound = 1.0;    // primal: B_p^{p0-p}; dual: [R_{p'} seed]_{A_1,dyadic}^{exponent}
  double majorant_a1 = 1.0;       // dyadic [R seed]_{A_1}
};

/// primal: (R_p seed)^{-(p0-p)} for 1 < p < p0; dual: (R_{p'} seed)^{(p-p0)/(p-1)}
/// for p > p0. p = p0 yields the constant weight. params.p is ignored; the
/// exponent of the majorant comes from the direction.
ExtrapolationWeight extrapolation_weight(const StepFunction& seed, double p, double p0, Direction dir,
                                         const RdFParams& params = {});

}  // namespace weaklab
