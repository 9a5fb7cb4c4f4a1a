// Shared independent oracles for the test binaries: exact nilpotent
// generators (exp is a finite sum, so random exact group elements come for
// free), numeric K-factor synthesis, and a direct SL2 word enumerator used
// to certify ball layer counts. None of this code calls the enumeration or
// projection paths it is used to check, beyond plain matrix products.

#pragma once

#include "conelab/liegroup.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>
#include <map>
#include <random>
#include <vector>

namespace oracles {

using conelab::ExactMat;
using conelab::GramForm;
using conelab::QuadRational;

// Basis of the strictly triangular part of so(Q) (upper = positive root
// spaces, lower = negative): solve the membership condition exactly on the
// triangular unknowns.
inline std::vector<ExactMat> nilpotent_basis(const GramForm& gf, bool upper = true) {
    int m = gf.dim();
    std::vector<std::pair<int, int>> slots;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) slots.push_back(upper ? std::make_pair(i, j) : std::make_pair(j, i));
    int u = static_cast<int>(slots.size());
    // rows: equations (X^T J + J X)_{rs} = 0; cols: unknown slot values
    ExactMat sys(m * m, u, gf.d);
    for (int k = 0; k < u; ++k) {
        ExactMat x(m, m, gf.d);
        x.at(slots[k].first, slots[k].second) = QuadRational::integer(1, gf.d);
        ExactMat cond = x.transpose() * gf.J + gf.J * x;
        for (int r = 0; r < m; ++r)
            for (int s = 0; s < m; ++s) sys.at(r * m + s, k) = cond.at(r, s);
    }
    std::vector<ExactMat> basis;
    for (const auto& vec : sys.nullspace()) {
        ExactMat x(m, m, gf.d);
        for (int k = 0; k < u; ++k) x.at(slots[k].first, slots[k].second) = vec[k];
        basis.push_back(x);
    }
    return basis;
}

inline ExactMat exp_nilpotent(const ExactMat& n) {
    int m = n.rows();
    ExactMat term = ExactMat::identity(m, n.disc());
    ExactMat sum = term;
    for (int k = 1; k < m; ++k) {
        term = term * n;
        term = term.scaled(QuadRational::fraction(1, k, n.disc()));
        sum = sum + term;
    }
    return sum;
}

// Random exact element of SO(Q): alternating products of upper and lower
// unipotents with small rational coefficients.
inline ExactMat random_so_element(const GramForm& gf, std::mt19937_64& rng, int factors = 3) {
    static std::map<std::pair<int, long>, std::pair<std::vector<ExactMat>, std::vector<ExactMat>>> cache;
    auto key = std::make_pair(gf.n, gf.d);
    if (!cache.count(key)) cache[key] = {nilpotent_basis(gf, true), nilpotent_basis(gf, false)};
    const auto& [ub, lb] = cache[key];
    std::uniform_int_distribution<int> coef(-2, 2), dens(1, 3);
    auto random_nilpotent = [&](const std::vector<ExactMat>& nb) {
        ExactMat n(gf.dim(), gf.dim(), gf.d);
        for (const auto& b : nb) n = n + b.scaled(QuadRational::fraction(coef(rng), dens(rng), gf.d));
        return n;
    };
    ExactMat g = ExactMat::identity(gf.dim(), gf.d);
    for (int f = 0; f < factors; ++f) {
        g = g * exp_nilpotent(random_nilpotent(ub));
        g = g * exp_nilpotent(random_nilpotent(lb));
    }
    return g;
}

// ---- numeric K synthesis ----------------------------------------------------

// Basis of the maximal compact subalgebra, solved in the diagonal-form basis
// (where it is antisymmetric matrices commuting with diag(1,..,1,-1,-1), so
// so(n) + so(2)) and conjugated back. Embedded to doubles.
inline std::vector<Eigen::MatrixXd> k_algebra_basis(const GramForm& gf) {
    int m = gf.dim();
    ExactMat jd = gf.Pdiag.transpose() * gf.J * gf.Pdiag;
    std::vector<std::pair<int, int>> slots;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) slots.push_back({i, j});
    int u = static_cast<int>(slots.size());
    ExactMat sys(m * m, u, gf.d);
    for (int k = 0; k < u; ++k) {
        ExactMat x(m, m, gf.d);
        x.at(slots[k].first, slots[k].second) = QuadRational::integer(1, gf.d);
        x.at(slots[k].second, slots[k].first) = QuadRational::integer(-1, gf.d);
        ExactMat comm = x * jd - jd * x;
        for (int r = 0; r < m; ++r)
            for (int s = 0; s < m; ++s) sys.at(r * m + s, k) = comm.at(r, s);
    }
    std::vector<Eigen::MatrixXd> basis;
    for (const auto& vec : sys.nullspace()) {
        ExactMat x(m, m, gf.d);
        for (int k = 0; k < u; ++k) {
            x.at(slots[k].first, slots[k].second) = vec[k];
            x.at(slots[k].second, slots[k].first) = -vec[k];
        }
        basis.push_back((gf.Pdiag * x * gf.Pdiaginv).embed());
    }
    return basis;
}

/// Random element of K = SO(Q) ∩ SO(n+2), by exponentiating the theta-fixed
/// part of the Lie algebra numerically.
inline Eigen::MatrixXd random_k(const std::vector<Eigen::MatrixXd>& kbasis, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(kbasis[0].rows(), kbasis[0].cols());
    for (const auto& b : kbasis) x += gauss(rng) * b;
    return x.exp();
}

/// k * exp(diag(v1, v2, 0, ..., -v2, -v1)) * k'.
inline Eigen::MatrixXd synthesize_kak(const GramForm& gf, const std::vector<Eigen::MatrixXd>& kbasis,
                                      double v1, double v2, std::mt19937_64& rng) {
    int m = gf.dim();
    Eigen::VectorXd diag = Eigen::VectorXd::Ones(m);
    diag(0) = std::exp(v1);
    diag(1) = std::exp(v2);
    diag(m - 2) = std::exp(-v2);
    diag(m - 1) = std::exp(-v1);
    return random_k(kbasis, rng) * diag.asDiagonal() * random_k(kbasis, rng);
}

// ---- direct SL2 word enumeration ---------------------------------------------

/// Layer sizes of the word ball in PSL2(Z) = <S, T> enumerated directly on
/// 2x2 integer matrices modulo +-1. Generators: S, T, T^{-1}.
inline std::vector<size_t> psl2z_layer_counts(int radius) {
    using M = std::array<long long, 4>;
    auto mul = [](const M& a, const M& b) {
        return M{a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
                 a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
    };
    auto canon = [](M a) {
        // representative of {m, -m}: first nonzero entry positive
        for (int i = 0; i < 4; ++i) {
            if (a[i] > 0) break;
            if (a[i] < 0) {
                for (int j = 0; j < 4; ++j) a[j] = -a[j];
                break;
            }
        }
        return a;
    };
    std::vector<M> gens = {{0, -1, 1, 0}, {1, 1, 0, 1}, {1, -1, 0, 1}};
    std::map<M, int> seen;
    M id{1, 0, 0, 1};
    seen[canon(id)] = 0;
    std::vector<M> frontier = {id};
    std::vector<size_t> layers = {1};
    for (int r = 1; r <= radius; ++r) {
        std::vector<M> next;
        for (const auto& g : gens) {
            for (const auto& f : frontier) {
                M h = canon(mul(f, g));
                if (seen.emplace(h, r).second) next.push_back(h);
            }
        }
        layers.push_back(next.size());
        frontier = std::move(next);
    }
    return layers;
}

} // namespace oracles
