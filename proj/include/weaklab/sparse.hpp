#pragma once

#include <random>
#include <string>
#include <vector>

#include "weaklab/dyadic.hpp"
#include "weaklab/step_function.hpp"

namespace weaklab {

/// A cube of the family together with its portion E_Q, a union of lattice cells.
struct SparseCube {
  Cube cube;
  std::vector<Cube> portion;
};

struct SparseFamily {
  DyadicLattice lattice{0.0, 1.0, 1};
  std::vector<SparseCube> cubes;
  double eta = 1.0;
};

struct SparseReport {
  bool ok = true;
  double worst_eta = 1.0;
  std::vector<std::string> violations;
};

SparseReport verify_sparse(const SparseFamily& family);

/// A_S f = Σ_Q avg_Q(f) χ_Q.
StepFunction apply_sparse(const SparseFamily& family, const StepFunction& f);

enum class SparseVariant { direct, star };

/// direct: Σ_Q |b - b_Q| avg_Q|f| χ_Q; star: Σ_Q avg_Q(|b - b_Q||f|) χ_Q.
StepFunction apply_commutator_sparse(const SparseFamily& family, const StepFunction& b, const StepFunction& f,
                                     SparseVariant variant);

/// All cubes of one depth, E_Q = Q.
SparseFamily single_scale_family(const DyadicLattice& lattice, int depth);

/// {(j, 0) : j ≤ depth} (the cubes [r0, r0 + 2^-j |root|)) with E = right halves; eta = 1/2.
SparseFamily tower_family(const DyadicLattice& lattice, int depth);

/// Greedy random family: candidate cubes are drawn at random and receive
/// free lattice cells `resolution` levels below them until |E_Q| ≥ eta|Q|;
/// candidates that cannot be served are rejected.
SparseFamily random_family(const DyadicLattice& lattice, std::mt19937_64& rng, int candidates, double eta,
                           int resolution = 3);

std::string to_json(const SparseFamily& family);
SparseFamily sparse_from_json(const std::string& text);

}  // namespace weaklab
