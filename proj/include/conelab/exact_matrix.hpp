// Dense matrices over Q(sqrt(d)) with exact linear algebra: products,
// Gaussian elimination (det, inverse, rank, nullspace), compound matrices
// and congruence diagonalization. Sizes here are tiny ((n+2) <= 7 for the
// group model, ~hundreds of rows for rank oracles); clarity over blocking.

#pragma once

#include "conelab/quadfield.hpp"

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace conelab {

class ExactMat {
public:
    ExactMat() : rows_(0), cols_(0), d_(1) {}
    ExactMat(int rows, int cols, long d)
        : rows_(rows), cols_(cols), d_(d),
          e_(static_cast<size_t>(rows) * cols, QuadRational::integer(0, d)) {}

    static ExactMat identity(int n, long d);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    long disc() const { return d_; }

    QuadRational& at(int i, int j) { return e_[static_cast<size_t>(i) * cols_ + j]; }
    const QuadRational& at(int i, int j) const { return e_[static_cast<size_t>(i) * cols_ + j]; }

    bool operator==(const ExactMat& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_; }
    bool operator!=(const ExactMat& o) const { return !(*this == o); }

    ExactMat operator*(const ExactMat& o) const;
    ExactMat operator+(const ExactMat& o) const;
    ExactMat operator-(const ExactMat& o) const;
    ExactMat scaled(const QuadRational& c) const;
    ExactMat transpose() const;

    /// Exact determinant (fraction Gaussian elimination).
    QuadRational det() const;
    /// Exact inverse; throws if singular.
    ExactMat inverse() const;
    /// Row rank over the field.
    int rank() const;
    /// Basis of the right nullspace (columns x with Ax = 0).
    std::vector<std::vector<QuadRational>> nullspace() const;

    /// k-th compound matrix: entries are k x k minors, index sets in
    /// lexicographic order. compound(1) == *this.
    ExactMat compound(int k) const;

    bool is_identity() const;
    bool is_zero() const;

    /// Double embedding of every entry.
    Eigen::MatrixXd embed() const;
    /// Largest |entry| as a rough double-overflow guard (bits of numerator).
    size_t max_numerator_bits() const;

    /// Canonical serialization: entries row-major as "a b den" joined by ';'.
    std::string serialize() const;
    static ExactMat deserialize(const std::string& s, int rows, int cols, long d);

private:
    int rows_, cols_;
    long d_;
    std::vector<QuadRational> e_;
};

/// Signature (positives, negatives, zeros) of an exact symmetric matrix,
/// by congruence diagonalization.
struct Signature {
    int pos = 0, neg = 0, zero = 0;
};
Signature symmetric_signature(const ExactMat& s);

/// Solve A x = b exactly; throws if singular.
std::vector<QuadRational> solve_linear(const ExactMat& a, const std::vector<QuadRational>& b);

} // namespace conelab
