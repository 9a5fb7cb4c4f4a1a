#include "conelab/exact_matrix.hpp"

#include <sstream>

namespace conelab {

ExactMat ExactMat::identity(int n, long d) {
    ExactMat m(n, n, d);
    for (int i = 0; i < n; ++i) m.at(i, i) = QuadRational::integer(1, d);
    return m;
}

ExactMat ExactMat::operator*(const ExactMat& o) const {
    if (cols_ != o.rows_ || d_ != o.d_) throw quadfield_error("ExactMat: shape/field mismatch in product");
    ExactMat r(rows_, o.cols_, d_);
    for (int i = 0; i < rows_; ++i) {
        for (int j = 0; j < o.cols_; ++j) {
            QuadRational acc = QuadRational::integer(0, d_);
            for (int k = 0; k < cols_; ++k) {
                const QuadRational& x = at(i, k);
                const QuadRational& y = o.at(k, j);
                if (x.is_zero() || y.is_zero()) continue;
                acc = acc + x * y;
            }
            r.at(i, j) = acc;
        }
    }
    return r;
}

ExactMat ExactMat::operator+(const ExactMat& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw quadfield_error("ExactMat: shape mismatch in sum");
    ExactMat r(rows_, cols_, d_);
    for (size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i] + o.e_[i];
    return r;
}

ExactMat ExactMat::operator-(const ExactMat& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw quadfield_error("ExactMat: shape mismatch in difference");
    ExactMat r(rows_, cols_, d_);
    for (size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i] - o.e_[i];
    return r;
}

ExactMat ExactMat::scaled(const QuadRational& c) const {
    ExactMat r(rows_, cols_, d_);
    for (size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i] * c;
    return r;
}

ExactMat ExactMat::transpose() const {
    ExactMat r(cols_, rows_, d_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
    return r;
}

QuadRational ExactMat::det() const {
    if (rows_ != cols_) throw quadfield_error("ExactMat: det of non-square");
    ExactMat m(*this);
    QuadRational det = QuadRational::integer(1, d_);
    int n = rows_;
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int r = col; r < n; ++r) {
            if (!m.at(r, col).is_zero()) { piv = r; break; }
        }
        if (piv < 0) return QuadRational::integer(0, d_);
        if (piv != col) {
            for (int j = 0; j < n; ++j) std::swap(m.at(piv, j), m.at(col, j));
            det = -det;
        }
        det = det * m.at(col, col);
        QuadRational inv = m.at(col, col).inverse();
        for (int r = col + 1; r < n; ++r) {
            if (m.at(r, col).is_zero()) continue;
            QuadRational f = m.at(r, col) * inv;
            for (int j = col; j < n; ++j) m.at(r, j) = m.at(r, j) - f * m.at(col, j);
        }
    }
    return det;
}

ExactMat ExactMat::inverse() const {
    if (rows_ != cols_) throw quadfield_error("ExactMat: inverse of non-square");
    int n = rows_;
    ExactMat m(*this);
    ExactMat inv = ExactMat::identity(n, d_);
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int r = col; r < n; ++r) {
            if (!m.at(r, col).is_zero()) { piv = r; break; }
        }
        if (piv < 0) throw quadfield_error("ExactMat: singular matrix");
        if (piv != col) {
            for (int j = 0; j < n; ++j) {
                std::swap(m.at(piv, j), m.at(col, j));
                std::swap(inv.at(piv, j), inv.at(col, j));
            }
        }
        QuadRational pi = m.at(col, col).inverse();
        for (int j = 0; j < n; ++j) {
            m.at(col, j) = m.at(col, j) * pi;
            inv.at(col, j) = inv.at(col, j) * pi;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col || m.at(r, col).is_zero()) continue;
            QuadRational f = m.at(r, col);
            for (int j = 0; j < n; ++j) {
                m.at(r, j) = m.at(r, j) - f * m.at(col, j);
                inv.at(r, j) = inv.at(r, j) - f * inv.at(col, j);
            }
        }
    }
    return inv;
}

namespace {
// Row echelon reduction in place; returns pivot columns.
std::vector<int> echelon(ExactMat& m) {
    std::vector<int> pivots;
    int row = 0;
    for (int col = 0; col < m.cols() && row < m.rows(); ++col) {
        int piv = -1;
        for (int r = row; r < m.rows(); ++r) {
            if (!m.at(r, col).is_zero()) { piv = r; break; }
        }
        if (piv < 0) continue;
        if (piv != row)
            for (int j = 0; j < m.cols(); ++j) std::swap(m.at(piv, j), m.at(row, j));
        QuadRational pi = m.at(row, col).inverse();
        for (int j = col; j < m.cols(); ++j) m.at(row, j) = m.at(row, j) * pi;
        for (int r = 0; r < m.rows(); ++r) {
            if (r == row || m.at(r, col).is_zero()) continue;
            QuadRational f = m.at(r, col);
            for (int j = col; j < m.cols(); ++j) m.at(r, j) = m.at(r, j) - f * m.at(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}
} // namespace

int ExactMat::rank() const {
    ExactMat m(*this);
    return static_cast<int>(echelon(m).size());
}

std::vector<std::vector<QuadRational>> ExactMat::nullspace() const {
    ExactMat m(*this);
    std::vector<int> pivots = echelon(m);
    std::vector<bool> is_pivot(cols_, false);
    for (int c : pivots) is_pivot[c] = true;
    std::vector<std::vector<QuadRational>> basis;
    for (int free = 0; free < cols_; ++free) {
        if (is_pivot[free]) continue;
        std::vector<QuadRational> v(cols_, QuadRational::integer(0, d_));
        v[free] = QuadRational::integer(1, d_);
        for (size_t pr = 0; pr < pivots.size(); ++pr) {
            // row pr has leading 1 at pivots[pr]
            v[pivots[pr]] = -m.at(static_cast<int>(pr), free);
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

namespace {
void combinations(int n, int k, std::vector<std::vector<int>>& out) {
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        out.push_back(idx);
        int i = k - 1;
        while (i >= 0 && idx[i] == n - k + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}
} // namespace

ExactMat ExactMat::compound(int k) const {
    if (rows_ != cols_) throw quadfield_error("ExactMat: compound of non-square");
    if (k == 1) return *this;
    std::vector<std::vector<int>> sets;
    combinations(rows_, k, sets);
    int m = static_cast<int>(sets.size());
    ExactMat r(m, m, d_);
    ExactMat minor(k, k, d_);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            for (int a = 0; a < k; ++a)
                for (int b = 0; b < k; ++b) minor.at(a, b) = at(sets[i][a], sets[j][b]);
            r.at(i, j) = minor.det();
        }
    }
    return r;
}

bool ExactMat::is_identity() const {
    if (rows_ != cols_) return false;
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) {
            if (i == j ? !at(i, j).is_one() : !at(i, j).is_zero()) return false;
        }
    return true;
}

bool ExactMat::is_zero() const {
    for (const auto& x : e_)
        if (!x.is_zero()) return false;
    return true;
}

Eigen::MatrixXd ExactMat::embed() const {
    Eigen::MatrixXd m(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) m(i, j) = at(i, j).embed().value;
    return m;
}

size_t ExactMat::max_numerator_bits() const {
    size_t bits = 0;
    for (const auto& x : e_) {
        bits = std::max(bits, mpz_sizeinbase(x.num_a().get_mpz_t(), 2));
        bits = std::max(bits, mpz_sizeinbase(x.num_b().get_mpz_t(), 2));
    }
    return bits;
}

std::string ExactMat::serialize() const {
    std::ostringstream os;
    for (size_t i = 0; i < e_.size(); ++i) {
        if (i) os << ';';
        os << e_[i].to_string();
    }
    return os.str();
}

ExactMat ExactMat::deserialize(const std::string& s, int rows, int cols, long d) {
    ExactMat m(rows, cols, d);
    size_t pos = 0;
    for (int i = 0; i < rows * cols; ++i) {
        size_t end = s.find(';', pos);
        std::string tok = s.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
        m.e_[static_cast<size_t>(i)] = QuadRational::from_string(tok, d);
        if (end == std::string::npos && i + 1 < rows * cols)
            throw quadfield_error("ExactMat: truncated serialization");
        pos = end + 1;
    }
    return m;
}

Signature symmetric_signature(const ExactMat& s) {
    if (s.rows() != s.cols()) throw quadfield_error("signature: non-square");
    int n = s.rows();
    long d = s.disc();
    ExactMat m(s);
    Signature sig;
    std::vector<bool> done(n, false);
    for (int step = 0; step < n; ++step) {
        // pick a nonzero diagonal entry among unprocessed coordinates
        int p = -1;
        for (int i = 0; i < n; ++i)
            if (!done[i] && !m.at(i, i).is_zero()) { p = i; break; }
        if (p < 0) {
            // all remaining diagonals vanish; find an off-diagonal hyperbolic
            // pair and regenerate a diagonal entry by a shear x_i += x_j
            int a = -1, b = -1;
            for (int i = 0; i < n && a < 0; ++i) {
                if (done[i]) continue;
                for (int j = i + 1; j < n; ++j) {
                    if (done[j]) continue;
                    if (!m.at(i, j).is_zero()) { a = i; b = j; break; }
                }
            }
            if (a < 0) {
                for (int i = 0; i < n; ++i)
                    if (!done[i]) ++sig.zero;
                return sig;
            }
            // congruence by E = I + e_{ab}: row/col a gains row/col b
            for (int j = 0; j < n; ++j) m.at(a, j) = m.at(a, j) + m.at(b, j);
            for (int i = 0; i < n; ++i) m.at(i, a) = m.at(i, a) + m.at(i, b);
            p = a;
        }
        QuadRational piv = m.at(p, p);
        (piv.sign() > 0 ? sig.pos : sig.neg)++;
        QuadRational inv = piv.inverse();
        // clear row/col p against remaining coordinates
        for (int i = 0; i < n; ++i) {
            if (i == p || done[i] || m.at(i, p).is_zero()) continue;
            QuadRational f = m.at(i, p) * inv;
            for (int j = 0; j < n; ++j) m.at(i, j) = m.at(i, j) - f * m.at(p, j);
            for (int j = 0; j < n; ++j) m.at(j, i) = m.at(j, i) - f * m.at(j, p);
        }
        done[p] = true;
    }
    return sig;
}

std::vector<QuadRational> solve_linear(const ExactMat& a, const std::vector<QuadRational>& b) {
    if (a.rows() != static_cast<int>(b.size())) throw quadfield_error("solve_linear: size mismatch");
    ExactMat aug(a.rows(), a.cols() + 1, a.disc());
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) aug.at(i, j) = a.at(i, j);
        aug.at(i, a.cols()) = b[static_cast<size_t>(i)];
    }
    std::vector<int> pivots = echelon(aug);
    std::vector<QuadRational> x(a.cols(), QuadRational::integer(0, a.disc()));
    for (size_t pr = 0; pr < pivots.size(); ++pr) {
        if (pivots[pr] == a.cols()) throw quadfield_error("solve_linear: inconsistent system");
        x[pivots[pr]] = aug.at(static_cast<int>(pr), a.cols());
    }
    // verify (guards underdetermined systems: any solution is acceptable there
    // only if it actually solves)
    for (int i = 0; i < a.rows(); ++i) {
        QuadRational acc = QuadRational::integer(0, a.disc());
        for (int j = 0; j < a.cols(); ++j) acc = acc + a.at(i, j) * x[static_cast<size_t>(j)];
        if (!(acc == b[static_cast<size_t>(i)])) throw quadfield_error("solve_linear: no solution");
    }
    return x;
}

} // namespace conelab
