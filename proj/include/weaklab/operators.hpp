#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "weaklab/dyadic.hpp"
#include "weaklab/grid.hpp"
#include "weaklab/step_function.hpp"

namespace weaklab {

// ---- maximal functions ---------------------------------------------------

/// M_eps on a node set (merged with f's breakpoints). Values come from
/// averages of |f|^eps over intervals whose endpoints are nodes.
///   lower: per cell, sup over intervals containing the whole cell; a lower
///          bound for M_eps on the cell; this is what `maximal` returns.
///   upper: per cell, the larger of the two endpoint values; an upper bound
///          for M_eps on the cell.
///   at_nodes: M_eps at each node, exact.
struct MaximalOnNodes {
  StepFunction lower;
  StepFunction upper;
  std::vector<double> at_nodes;
};
MaximalOnNodes maximal_on_nodes(const StepFunction& f, std::span<const double> nodes, double eps = 1.0);

/// Interval-average sups from per-cell masses on sorted nodes: `cell_lower[c]`
/// is the sup over node intervals covering cell c, `at_nodes[j]` the sup over
/// node intervals containing node j.
struct AverageSups {
  std::vector<double> cell_lower;
  std::vector<double> at_nodes;
};
AverageSups average_sups(std::span<const double> nodes, std::span<const double> masses);

/// Uncentered M_eps f as a step function on window nodes ∪ breakpoints (lower staircase).
StepFunction maximal(const StepFunction& f, double eps = 1.0, const GridSpec& grid = {});

/// Same, but the upper staircase: pointwise ≥ M_eps f on the window.
StepFunction maximal_upper(const StepFunction& f, double eps = 1.0, const GridSpec& grid = {});

/// Exact uncentered M_eps f(x) by enumerating intervals with endpoints in
/// breakpoints ∪ {x}.
double maximal_at(const StepFunction& f, double x, double eps = 1.0);

/// Dyadic M_eps over the lattice; zero outside the root.
StepFunction maximal_dyadic(const StepFunction& f, const DyadicLattice& lattice, double eps = 1.0);

StepFunction iterate_maximal(const StepFunction& f, int k, const GridSpec& grid = {});
StepFunction iterate_maximal_dyadic(const StepFunction& f, int k, const DyadicLattice& lattice);

// ---- sharp maximal functions ---------------------------------------------

/// (avg_I |f - f_I|^delta)^{1/delta}
double oscillation(const StepFunction& f, double a, double b, double delta);

/// Uncentered M^#_delta with interval endpoints restricted to `nodes`
/// (merged with f's breakpoints); lower staircase on the node cells.
StepFunction sharp_maximal(const StepFunction& f, double delta, std::span<const double> nodes);

StepFunction sharp_maximal_dyadic(const StepFunction& f, double delta, const DyadicLattice& lattice);

// ---- singular integrals -------------------------------------------------

/// c_H pv∫ f(y)/(x - y) dy in closed form. Throws singular-point at a jump.
double hilbert_step(const StepFunction& f, double c_H, double x);

struct QuadratureOptions {
  double abs_tol = 1e-8;
  unsigned max_depth = 12;
};

/// c_H pv∫ (ln|x| - ln|y|) f(y)/(x - y) dy by adaptive Gauss-Kronrod.
double commutator_log_hilbert(const StepFunction& f, double c_H, double x, const QuadratureOptions& q = {});

/// c_H ∫ (b(x) - b(y)) f(y)/(x - y) dy for a smooth symbol b.
double commutator_with(const StepFunction& f, const std::function<double(double)>& b, double c_H, double x,
                       const QuadratureOptions& q = {});

// ---- adjoint Hardy operator -----------------------------------------------

/// S g(x) = ∫_x^∞ g(s)/s ds, x > 0, g supported in [0, ∞).
double adjoint_hardy(const StepFunction& g, double x);

/// sup_t t |{S g > t}|^{1/p} for g ≥ 0, exact.
double adjoint_hardy_weak_norm(const StepFunction& g, double p);

}  // namespace weaklab
