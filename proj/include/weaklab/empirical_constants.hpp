#pragma once

// Frozen corpus constants. These are measurements, not theorem constants:
// a suite fails when a fresh measurement exceeds the frozen value by more
// than 10%, which flags a numerical regression.

namespace weaklab::empirical {

// max over signed_corpus(seed 1, 20) of sup_t [f*(t) - f*(2t)]₊ / (M^♯_{1/2} f)*(t/2),
// M^♯ over node intervals of window_nodes({64, 1/64, 4}) ∪ breakpoints of f.
inline constexpr double kRearrangementRatio = 2.001;  // measured 2.00096 (doubled grid 2.00057)

// max over signed_corpus(seed 1, 20) and p ∈ {1.5, 2, 4, 8} of
// ‖f‖_{p,∞} / (p ‖M^{♯,d}_{1/2} f‖_{p,∞}), lattice [-64, 64) at depth 24.
inline constexpr double kSharpMaximalRatio = 0.8625;  // measured 0.862424 (depth 25 identical)

}  // namespace weaklab::empirical
