// Bending deformation inside SO(n,2), parametrized by a rational q = e^t so
// every bent matrix stays exact. The direction X spans the centralizer of
// the embedded so(n-1,1) (modulo its own contribution), is semisimple with
// integer eigenvalues {1, 0, -1} in a rational eigenbasis, and a_q is
// assembled as frame * diag(q, 1/q, 1, ..., 1) * frame^{-1} -- no matrix
// exponentials anywhere.

#pragma once

#include "conelab/generators.hpp"

#include <string>
#include <vector>

namespace conelab {

struct bending_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BendingParam {
    int n = 0;
    long d = 1;
    ExactMat X;         // normalized centralizer direction, X in so(Q)
    ExactMat frame;     // columns: u+, u-, then a basis of the fixed space W
    ExactMat frame_inv;
};

/// Solve { X^T J + J X = 0, [X, h] = 0 for all h in so(n-1,1) } exactly,
/// quotient out so(n-1,1)'s own contribution, and normalize eigenvalues to
/// {1, 0, -1}. Throws bending_error if the solution space has unexpected
/// dimension (model mismatch).
BendingParam centralizer_generator(int n, long d = 1);

/// a_q = exp((log q) X), exact for rational q > 0.
ExactMat bending_one_param(const BendingParam& bp, const QuadRational& q);

/// Amalgam rule: gamma1 and delta letters unchanged (delta letters verified
/// to commute with a_q exactly), gamma2 letters conjugated by a_q.
/// HNN rule: gamma1 letters unchanged, stable letters s -> a_q s.
GeneratorSystem bend(const GeneratorSystem& sys, const QuadRational& q);

std::vector<GeneratorSystem> bend_sweep(const GeneratorSystem& sys,
                                        const std::vector<QuadRational>& qs);

/// Parse "21/20" or "1" into an exact rational scalar of the session field.
QuadRational parse_rational(const std::string& text, long d);

} // namespace conelab
