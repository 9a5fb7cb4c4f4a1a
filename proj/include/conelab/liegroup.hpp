// Explicit model of G = SO°(n,2) and H = SO°(n,1): the Gram form
//
//   Q(x) = x_1 x_{n+2} + x_2 x_{n+1} + sum_{i=3..n} x_i^2
//
// with its diagonal torus, chamber coordinates (v1, v2), simple roots,
// Cartan/Jordan projections, the H -> G extension and the adjoint
// representation.
//
// The Cartan projection is an ordinary SVD after the exact rational
// congruence Pdiag (columns e1 +- e_{n+2}, e2 +- e_{n+1}) taking J to
// diag(1,...,1,-1,-1); in that basis the maximal compact really is the
// orthogonal intersection and exp(a+) embeds as SPD boost blocks. Accuracy
// for deep ball elements comes from exact exterior-square minors: only top
// singular values of the matrix and its compounds are read off floating
// point, and those carry eps-level relative error at any scale.

#pragma once

#include "conelab/exact_matrix.hpp"
#include "conelab/bigfloat.hpp"

#include <optional>
#include <string>
#include <vector>

namespace conelab {

struct ChamberVec {
    double v1 = 0.0;
    double v2 = 0.0;
    double norm() const;           // Euclidean norm on (v1, v2)
    double angle() const;          // atan2(v2, v1), in [0, pi/4] on the chamber
};

/// Linear functional c1*v1 + c2*v2 on the chamber coordinates.
struct LinearForm {
    double c1 = 0.0;
    double c2 = 0.0;
    double operator()(const ChamberVec& v) const { return c1 * v.v1 + c2 * v.v2; }
};

LinearForm alpha1_form();              // v1 - v2
LinearForm alpha2_form();              // v2
LinearForm rho_form(int n);            // (n*v1 + (n-2)*v2) / 2
LinearForm property_T_form(int n);     // (n-1)*v1 + (n-2)*v2  (= 2 rho - theta)

/// The Gram data of the model for a given n (and scalar field d).
struct GramForm {
    int n = 0;
    long d = 1;
    ExactMat J;        // (n+2) x (n+2), Gram matrix of Q
    ExactMat Jinv;
    ExactMat J0;       // (n+1) x (n+1), Gram matrix of Q restricted to V = {x1 = x_{n+2}}
    ExactMat PV;       // adapted basis of R^{n+2}: (e1+e_{n+2}, e2, ..., e_{n+1}, e1-e_{n+2}) as columns
    ExactMat PVinv;
    ExactMat Pdiag;    // congruence to diag(1,..,1,-1,-1): columns
                       // (e1+e_{n+2}, e2+e_{n+1}, e3, ..., en, e2-e_{n+1}, e1-e_{n+2})
    ExactMat Pdiaginv;
    int dim() const { return n + 2; }
    int dim_so() const { return (n + 2) * (n + 1) / 2; }
};

/// Build the Gram data; n >= 2 required.
GramForm gram_form(int n, long d = 1);

/// Exact test g^T J g == J.
bool preserves_form(const ExactMat& g, const ExactMat& J);
/// Exact membership test for SO(Q): form preservation and det = 1.
bool in_so_q(const GramForm& gf, const ExactMat& g);
/// Exact inverse through the form: J^{-1} g^T J.
ExactMat so_inverse(const GramForm& gf, const ExactMat& g);
/// Sparse left-multiplication by J and J^{-1}.
ExactMat jmul(const GramForm& gf, const ExactMat& x);
ExactMat jinv_mul(const GramForm& gf, const ExactMat& x);

// ---- projections -----------------------------------------------------------

enum class ProjStatus {
    ok,
    chamber_violation,   // v1 >= v2 >= 0 fails beyond tolerance
    pairing_violation,   // singular/eigenvalue pairing {s, 1/s} fails
    eigen_failure,       // float eigensolver did not converge / polish failed
};

const char* to_string(ProjStatus s);

struct Projection {
    ChamberVec v;
    ProjStatus status = ProjStatus::ok;
    double residual = 0.0;     // worst violated check, log scale
    bool used_bigfloat = false;
    bool ok() const { return status == ProjStatus::ok; }
};

struct ProjectionOptions {
    double chamber_tol = 1e-8;          // absolute, log scale
    double bigfloat_threshold = 1e14;   // recompute float copy above this singular value
    bool full_pairing = false;          // verify the whole spectrum through all compounds
};

/// Cartan projection mu(g) = (log s1, log s2) of an exact group element.
Projection cartan_projection(const GramForm& gf, const ExactMat& g,
                             const ProjectionOptions& opt = {});

/// Cartan projection of a plain float matrix (used by synthesized-element
/// oracles; accuracy degrades with scale since minors are not exact here).
Projection cartan_projection_numeric(const Eigen::MatrixXd& g,
                                     const ProjectionOptions& opt = {});

/// Jordan projection lambda(g) = top two log eigenvalue moduli. Falls back to
/// Newton refinement on the exact characteristic polynomial (evaluated in
/// 128-bit floats) when the float eigenproblem looks ill-conditioned.
Projection jordan_projection(const GramForm& gf, const ExactMat& g,
                             const ProjectionOptions& opt = {});

// ---- subgroup embedding and adjoint ----------------------------------------

/// Extend h in SO(Q0) (exact, (n+1) x (n+1), acting on V in the adapted
/// basis) to an element of SO(Q) acting trivially on the line {x1 = -x_{n+2}}.
/// Throws if h does not preserve J0 exactly or det(h) != 1.
ExactMat embed_h(const GramForm& gf, const ExactMat& h);

/// Ordered basis of so(Q): X_{ij} = J^{-1} (E_ij - E_ji), pairs (i,j), i < j,
/// in lexicographic order. Coordinates of Y in this basis read off as the
/// upper triangle of J*Y.
std::vector<ExactMat> so_basis(const GramForm& gf);

/// Matrix of Ad(g): X -> g X g^{-1} in the so_basis ordering, exact.
ExactMat adjoint_exact(const GramForm& gf, const ExactMat& g);
/// Same, embedded to doubles.
Eigen::MatrixXd adjoint(const GramForm& gf, const ExactMat& g);

/// Characteristic polynomial coefficients of an exact matrix
/// (monic: x^m + c[0] x^{m-1} + ... + c[m-1]), Faddeev-LeVerrier.
std::vector<QuadRational> char_poly(const ExactMat& a);

/// Singular values of a matrix embedded at 128-bit precision, one-sided
/// Jacobi, sorted descending. Exposed for tests.
std::vector<BigFloat> singular_values_bigfloat(const ExactMat& g, mpfr_prec_t prec = 128);

} // namespace conelab
