#include "conelab/liegroup.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <map>

namespace conelab {

double ChamberVec::norm() const { return std::hypot(v1, v2); }
double ChamberVec::angle() const { return std::atan2(v2, v1); }

LinearForm alpha1_form() { return {1.0, -1.0}; }
LinearForm alpha2_form() { return {0.0, 1.0}; }

LinearForm rho_form(int n) {
    if (n < 2) throw quadfield_error("rho_form: n >= 2 required");
    return {n / 2.0, (n - 2) / 2.0};
}

LinearForm property_T_form(int n) {
    // The growth-bound reading needs higher rank with property (T), n >= 3;
    // the form itself (2 rho - theta) is well-defined from n = 2 on.
    if (n < 2) throw quadfield_error("property_T_form: n >= 2 required");
    return {double(n - 1), double(n - 2)};
}

GramForm gram_form(int n, long d) {
    if (n < 2) throw quadfield_error("gram_form: n >= 2 required");
    GramForm gf;
    gf.n = n;
    gf.d = d;
    int m = n + 2;
    auto half = QuadRational::fraction(1, 2, d);
    auto one = QuadRational::integer(1, d);
    gf.J = ExactMat(m, m, d);
    gf.J.at(0, m - 1) = half;
    gf.J.at(m - 1, 0) = half;
    gf.J.at(1, m - 2) = half;
    gf.J.at(m - 2, 1) = half;
    for (int i = 2; i <= n - 1; ++i) gf.J.at(i, i) = one;
    gf.Jinv = gf.J.inverse();

    // adapted basis of R^{n+2}: V = {x1 = x_{n+2}} spanned by the first n+1
    // columns, the J-orthogonal complement line e1 - e_{n+2} last
    gf.PV = ExactMat(m, m, d);
    gf.PV.at(0, 0) = one;
    gf.PV.at(m - 1, 0) = one;
    for (int i = 1; i <= m - 2; ++i) gf.PV.at(i, i) = one;
    gf.PV.at(0, m - 1) = one;
    gf.PV.at(m - 1, m - 1) = -one;
    gf.PVinv = gf.PV.inverse();

    ExactMat full = gf.PV.transpose() * gf.J * gf.PV;
    gf.J0 = ExactMat(m - 1, m - 1, d);
    for (int i = 0; i < m - 1; ++i)
        for (int j = 0; j < m - 1; ++j) gf.J0.at(i, j) = full.at(i, j);

    // congruence to the diagonal form, signature (n, 2)
    gf.Pdiag = ExactMat(m, m, d);
    gf.Pdiag.at(0, 0) = one;
    gf.Pdiag.at(m - 1, 0) = one;
    gf.Pdiag.at(1, 1) = one;
    gf.Pdiag.at(m - 2, 1) = one;
    for (int i = 2; i <= n - 1; ++i) gf.Pdiag.at(i, i) = one;
    gf.Pdiag.at(1, m - 2) = one;
    gf.Pdiag.at(m - 2, m - 2) = -one;
    gf.Pdiag.at(0, m - 1) = one;
    gf.Pdiag.at(m - 1, m - 1) = -one;
    gf.Pdiaginv = gf.Pdiag.inverse();
    return gf;
}

ExactMat jmul(const GramForm& gf, const ExactMat& x) {
    int m = gf.dim();
    ExactMat r(m, x.cols(), gf.d);
    auto half = QuadRational::fraction(1, 2, gf.d);
    for (int j = 0; j < x.cols(); ++j) {
        r.at(0, j) = half * x.at(m - 1, j);
        r.at(1, j) = half * x.at(m - 2, j);
        for (int i = 2; i <= m - 3; ++i) r.at(i, j) = x.at(i, j);
        r.at(m - 2, j) = half * x.at(1, j);
        r.at(m - 1, j) = half * x.at(0, j);
    }
    return r;
}

ExactMat jinv_mul(const GramForm& gf, const ExactMat& x) {
    int m = gf.dim();
    ExactMat r(m, x.cols(), gf.d);
    auto two = QuadRational::integer(2, gf.d);
    for (int j = 0; j < x.cols(); ++j) {
        r.at(0, j) = two * x.at(m - 1, j);
        r.at(1, j) = two * x.at(m - 2, j);
        for (int i = 2; i <= m - 3; ++i) r.at(i, j) = x.at(i, j);
        r.at(m - 2, j) = two * x.at(1, j);
        r.at(m - 1, j) = two * x.at(0, j);
    }
    return r;
}

bool preserves_form(const ExactMat& g, const ExactMat& J) {
    ExactMat lhs = g.transpose() * (J * g);
    return lhs == J;
}

bool in_so_q(const GramForm& gf, const ExactMat& g) {
    if (g.rows() != gf.dim() || g.cols() != gf.dim()) return false;
    if (!preserves_form(g, gf.J)) return false;
    return g.det().is_one();
}

ExactMat so_inverse(const GramForm& gf, const ExactMat& g) {
    return jinv_mul(gf, jmul(gf, g).transpose());
}

// ---- projections -----------------------------------------------------------

const char* to_string(ProjStatus s) {
    switch (s) {
        case ProjStatus::ok: return "ok";
        case ProjStatus::chamber_violation: return "chamber_violation";
        case ProjStatus::pairing_violation: return "pairing_violation";
        case ProjStatus::eigen_failure: return "eigen_failure";
    }
    return "?";
}

namespace {

double top_singular_value(const Eigen::MatrixXd& m) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    return svd.singularValues()(0);
}

Eigen::VectorXd all_singular_values(const Eigen::MatrixXd& m) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    return svd.singularValues();
}

// Embedded diagonalizing conjugators for each compound order, cached per n.
// Entries of Pdiag and its compounds are small integers / halves, so the
// float conjugation costs only eps-level rounding.
struct DiagConjugators {
    std::vector<Eigen::MatrixXd> p;    // p[k-1] = embed(compound_k(Pdiag))
    std::vector<Eigen::MatrixXd> pinv;
};

const DiagConjugators& diag_conjugators(const GramForm& gf) {
    thread_local std::map<int, DiagConjugators> cache;
    auto it = cache.find(gf.n);
    if (it != cache.end()) return it->second;
    DiagConjugators c;
    int m = gf.dim();
    for (int k = 1; k <= m; ++k) {
        c.p.push_back(gf.Pdiag.compound(k).embed());
        c.pinv.push_back(gf.Pdiaginv.compound(k).embed());
    }
    return cache.emplace(gf.n, std::move(c)).first->second;
}

// Build the double Pdiag / Pdiag^{-1} for a bare float matrix of size m.
Eigen::MatrixXd pdiag_numeric(int m) {
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(m, m);
    p(0, 0) = 1;
    p(m - 1, 0) = 1;
    p(1, 1) = 1;
    p(m - 2, 1) = 1;
    for (int i = 2; i <= m - 3; ++i) p(i, i) = 1;
    p(1, m - 2) = 1;
    p(m - 2, m - 2) = -1;
    p(0, m - 1) = 1;
    p(m - 1, m - 1) = -1;
    return p;
}

// One-sided Jacobi on columns; relative accuracy for the small singular
// values costs ~2 log2(kappa) mantissa bits of rotation cancellation, so
// callers must size prec to the dynamic range.
std::vector<BigFloat> jacobi_svd_big(std::vector<std::vector<BigFloat>>& cols, mpfr_prec_t prec) {
    const int m = static_cast<int>(cols.size());
    const int rows = static_cast<int>(cols[0].size());
    BigFloat tiny(1.0, prec);
    for (mpfr_prec_t i = 0; i < prec - 16; ++i) tiny = tiny * BigFloat(0.5, prec);
    for (int sweep = 0; sweep < 60; ++sweep) {
        bool rotated = false;
        for (int p = 0; p < m - 1; ++p) {
            for (int q = p + 1; q < m; ++q) {
                BigFloat app(0.0, prec), aqq(0.0, prec), apq(0.0, prec);
                for (int i = 0; i < rows; ++i) {
                    app = fma_add(app, cols[p][i], cols[p][i]);
                    aqq = fma_add(aqq, cols[q][i], cols[q][i]);
                    apq = fma_add(apq, cols[p][i], cols[q][i]);
                }
                if (app.is_zero() || aqq.is_zero()) continue;
                BigFloat bound = (app * aqq).sqrt() * tiny;
                if (!(apq.abs() > bound)) continue;
                rotated = true;
                // Rutishauser rotation
                BigFloat zeta = (aqq - app) / (apq + apq);
                BigFloat one(1.0, prec);
                BigFloat t = one / (zeta.abs() + (one + zeta * zeta).sqrt());
                if (zeta.sign() < 0) t = -t;
                BigFloat c = one / (one + t * t).sqrt();
                BigFloat s = c * t;
                for (int i = 0; i < rows; ++i) {
                    BigFloat xp = cols[p][i], xq = cols[q][i];
                    cols[p][i] = c * xp - s * xq;
                    cols[q][i] = s * xp + c * xq;
                }
            }
        }
        if (!rotated) break;
    }
    std::vector<BigFloat> sv;
    sv.reserve(m);
    for (int p = 0; p < m; ++p) {
        BigFloat nrm(0.0, prec);
        for (int i = 0; i < rows; ++i) nrm = fma_add(nrm, cols[p][i], cols[p][i]);
        sv.push_back(nrm.sqrt());
    }
    std::sort(sv.begin(), sv.end(), [](const BigFloat& a, const BigFloat& b) { return b < a; });
    return sv;
}

std::vector<std::vector<BigFloat>> embed_columns_big(const ExactMat& g, mpfr_prec_t prec) {
    std::vector<std::vector<BigFloat>> cols(g.cols(), std::vector<BigFloat>(g.rows(), BigFloat(0.0, prec)));
    for (int j = 0; j < g.cols(); ++j) {
        for (int i = 0; i < g.rows(); ++i) {
            const QuadRational& x = g.at(i, j);
            BigFloat v(x.num_a(), prec);
            if (x.disc() > 1 && x.num_b() != 0)
                v += BigFloat(x.num_b(), prec) * BigFloat(double(x.disc()), prec).sqrt();
            cols[j][i] = v / BigFloat(x.den(), prec);
        }
    }
    return cols;
}

Projection cartan_via_bigfloat(const GramForm& gf, const ExactMat& g, const ProjectionOptions& opt,
                               double log2s1_hint = -1.0) {
    Projection out;
    out.used_bigfloat = true;
    ExactMat gc = gf.Pdiaginv * g * gf.Pdiag;
    // kappa = s1^2 for group elements; keep 128 bits of headroom past the
    // rotation cancellation (operator norm bounded by m * max entry)
    double log2s1 = log2s1_hint > 0 ? log2s1_hint : static_cast<double>(gc.max_numerator_bits()) + 3.0;
    mpfr_prec_t prec = static_cast<mpfr_prec_t>(std::min(4096.0, 128.0 + 4.0 * log2s1));
    auto cols = embed_columns_big(gc, prec);
    std::vector<BigFloat> sv = jacobi_svd_big(cols, prec);
    int m = static_cast<int>(sv.size());
    out.v.v1 = sv[0].log().to_double();
    out.v.v2 = sv[1].log().to_double();
    double worst = 0.0;
    for (int i = 0; i < m; ++i) {
        double pair_log = (sv[static_cast<size_t>(i)] * sv[static_cast<size_t>(m - 1 - i)]).log().to_double();
        worst = std::max(worst, std::fabs(pair_log));
    }
    for (int i = 2; i <= m - 3; ++i) worst = std::max(worst, std::fabs(sv[static_cast<size_t>(i)].log().to_double()));
    out.residual = worst;
    if (worst > opt.chamber_tol) {
        out.status = ProjStatus::pairing_violation;
        return out;
    }
    if (out.v.v2 < -opt.chamber_tol || out.v.v1 - out.v.v2 < -opt.chamber_tol) {
        out.status = ProjStatus::chamber_violation;
        out.residual = std::max(-out.v.v2, out.v.v2 - out.v.v1);
    }
    return out;
}

} // namespace

std::vector<BigFloat> singular_values_bigfloat(const ExactMat& g, mpfr_prec_t prec) {
    auto cols = embed_columns_big(g, prec);
    return jacobi_svd_big(cols, prec);
}

Projection cartan_projection(const GramForm& gf, const ExactMat& g, const ProjectionOptions& opt) {
    // double-range guard: entries beyond ~2^960 cannot be embedded
    if (g.max_numerator_bits() > 960) return cartan_via_bigfloat(gf, g, opt);

    const DiagConjugators& dc = diag_conjugators(gf);
    Eigen::MatrixXd gd = dc.pinv[0] * g.embed() * dc.p[0];
    Eigen::VectorXd sv = all_singular_values(gd);
    double s1 = sv(0);
    if (s1 > opt.bigfloat_threshold) return cartan_via_bigfloat(gf, g, opt, std::log2(s1) + 2.0);

    Projection out;
    double v1 = std::log(s1);
    // top singular value of the exact exterior square: s1*s2 with eps-level
    // relative error regardless of the spread between s1 and s2
    ExactMat c2 = g.compound(2);
    double s12 = top_singular_value(dc.pinv[1] * c2.embed() * dc.p[1]);
    double v2 = std::log(s12) - v1;
    out.v = {v1, v2};

    int m = g.rows();
    double worst = 0.0;
    if (opt.full_pairing) {
        // walk all compounds: log s_k = log sigma1(L^k) - log sigma1(L^{k-1})
        std::vector<double> logs(static_cast<size_t>(m) + 1, 0.0);
        logs[1] = v1;
        double acc = v1;
        for (int k = 2; k <= m; ++k) {
            ExactMat ck = (k == 2) ? c2 : g.compound(k);
            size_t ki = static_cast<size_t>(k) - 1;
            double top = std::log(top_singular_value(dc.pinv[ki] * ck.embed() * dc.p[ki]));
            logs[static_cast<size_t>(k)] = top - acc; // log s_k
            acc = top;
        }
        for (int k = 1; k <= m; ++k) {
            worst = std::max(worst, std::fabs(logs[static_cast<size_t>(k)] + logs[static_cast<size_t>(m + 1 - k)]));
            if (k >= 3 && k <= m - 2) worst = std::max(worst, std::fabs(logs[static_cast<size_t>(k)]));
        }
    } else if (s1 * s1 * 4.4e-16 < opt.chamber_tol * 0.5) {
        // the smallest singular value carries absolute error ~eps*s1, so the
        // pairing products are meaningful only while eps*s1^2 stays below tol
        for (int i = 0; i < m; ++i) {
            double p = sv(i) * sv(m - 1 - i);
            worst = std::max(worst, std::fabs(std::log(p)));
        }
        for (int i = 2; i <= m - 3; ++i) worst = std::max(worst, std::fabs(std::log(sv(i))));
    } else {
        // deep element: check the top two pairs through the exact inverse
        // (s1 s_m = 1 and s1 s2 * s_{m-1} s_m = 1); the middle values then
        // sit at 1 automatically because det = 1 exactly
        ExactMat ginv = jinv_mul(gf, jmul(gf, g).transpose());
        double s1i = top_singular_value(dc.pinv[0] * ginv.embed() * dc.p[0]);
        worst = std::max(worst, std::fabs(v1 - std::log(s1i)));
        double s12i = top_singular_value(dc.pinv[1] * ginv.compound(2).embed() * dc.p[1]);
        worst = std::max(worst, std::fabs(std::log(s12) - std::log(s12i)));
    }
    out.residual = worst;
    if (worst > opt.chamber_tol) {
        out.status = ProjStatus::pairing_violation;
        return out;
    }
    if (out.v.v2 < -opt.chamber_tol || out.v.v1 - out.v.v2 < -opt.chamber_tol) {
        out.status = ProjStatus::chamber_violation;
        out.residual = std::max(-out.v.v2, out.v.v2 - out.v.v1);
    }
    return out;
}

Projection cartan_projection_numeric(const Eigen::MatrixXd& g, const ProjectionOptions& opt) {
    Projection out;
    int mm = static_cast<int>(g.rows());
    Eigen::MatrixXd p = pdiag_numeric(mm);
    Eigen::MatrixXd gd = p.inverse() * g * p;
    Eigen::VectorXd sv = all_singular_values(gd);
    int m = static_cast<int>(sv.size());
    out.v.v1 = std::log(sv(0));
    out.v.v2 = std::log(sv(1));
    double worst = 0.0;
    for (int i = 0; i < m; ++i) worst = std::max(worst, std::fabs(std::log(sv(i) * sv(m - 1 - i))));
    for (int i = 2; i <= m - 3; ++i) worst = std::max(worst, std::fabs(std::log(sv(i))));
    out.residual = worst;
    if (worst > opt.chamber_tol) {
        out.status = ProjStatus::pairing_violation;
        return out;
    }
    if (out.v.v2 < -opt.chamber_tol || out.v.v1 - out.v.v2 < -opt.chamber_tol)
        out.status = ProjStatus::chamber_violation;
    return out;
}

// ---- Jordan projection ------------------------------------------------------

std::vector<QuadRational> char_poly(const ExactMat& a) {
    // Faddeev-LeVerrier: M_1 = A, c_k = -tr(A M_k)/k, M_{k+1} = A M_k + c_k I
    int n = a.rows();
    long d = a.disc();
    std::vector<QuadRational> c;
    ExactMat mk = a;
    for (int k = 1; k <= n; ++k) {
        QuadRational tr = QuadRational::integer(0, d);
        for (int i = 0; i < n; ++i) tr = tr + mk.at(i, i);
        QuadRational ck = -(tr * QuadRational::fraction(1, k, d));
        c.push_back(ck);
        if (k == n) break;
        for (int i = 0; i < n; ++i) mk.at(i, i) = mk.at(i, i) + ck;
        mk = a * mk;
    }
    return c;
}

namespace {

double spectral_radius(const Eigen::MatrixXd& m, bool& converged) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(m, /*computeEigenvectors=*/false);
    converged = (es.info() == Eigen::Success);
    double r = 0.0;
    for (int i = 0; i < m.rows(); ++i) r = std::max(r, std::abs(es.eigenvalues()(i)));
    return r;
}

// Newton refinement of a real root of the exact characteristic polynomial,
// evaluated at 128 bits. Returns nullopt if it fails to converge.
std::optional<double> newton_log_root(const ExactMat& a, double seed_log) {
    std::vector<QuadRational> cs = char_poly(a);
    const mpfr_prec_t prec = 128;
    int n = a.rows();
    std::vector<BigFloat> coef; // monic: [1, c0, ..., c_{n-1}]
    coef.emplace_back(1.0, prec);
    for (auto& c : cs) {
        BigFloat v(c.num_a(), prec);
        if (c.disc() > 1 && c.num_b() != 0)
            v += BigFloat(c.num_b(), prec) * BigFloat(double(c.disc()), prec).sqrt();
        coef.push_back(v / BigFloat(c.den(), prec));
    }
    BigFloat x(std::exp(seed_log), prec);
    if (!std::isfinite(std::exp(seed_log))) return std::nullopt;
    for (int it = 0; it < 80; ++it) {
        BigFloat p(0.0, prec), dp(0.0, prec);
        for (int k = 0; k <= n; ++k) {
            dp = dp * x + p;
            p = p * x + coef[static_cast<size_t>(k)];
        }
        if (dp.is_zero()) return std::nullopt;
        BigFloat step = p / dp;
        x -= step;
        if (x.sign() <= 0) return std::nullopt;
        if (step.abs() < x.abs() * BigFloat(1e-35, prec)) {
            return x.log().to_double();
        }
    }
    return std::nullopt;
}

} // namespace

Projection jordan_projection(const GramForm& gf, const ExactMat& g, const ProjectionOptions& opt) {
    Projection out;
    if (g.max_numerator_bits() > 960) {
        out.status = ProjStatus::eigen_failure;
        out.residual = std::numeric_limits<double>::infinity();
        return out;
    }
    ExactMat c2 = g.compound(2);
    bool ok1 = false, ok2 = false;
    double r1 = spectral_radius(g.embed(), ok1);
    double r12 = spectral_radius(c2.embed(), ok2);
    if (!ok1 || !ok2 || r1 <= 0.0 || r12 <= 0.0) {
        out.status = ProjStatus::eigen_failure;
        return out;
    }
    double l1 = std::log(r1);
    double l2 = std::log(r12) - l1;

    // pairing evidence through the exact inverse: specrad(g^{-1}) = specrad(g)
    ExactMat ginv = jinv_mul(gf, jmul(gf, g).transpose());
    bool ok3 = false, ok4 = false;
    double r1i = spectral_radius(ginv.embed(), ok3);
    double r12i = spectral_radius(ginv.compound(2).embed(), ok4);
    double worst = std::max(std::fabs(l1 - std::log(r1i)), std::fabs(std::log(r12) - std::log(r12i)));
    if (!ok3 || !ok4) worst = std::numeric_limits<double>::infinity();

    if (worst > opt.chamber_tol) {
        // refine top moduli on the exact characteristic polynomials
        auto p1 = newton_log_root(g, l1);
        auto p2 = newton_log_root(c2, l1 + l2);
        if (p1 && p2) {
            l1 = *p1;
            l2 = *p2 - l1;
            auto q1 = newton_log_root(ginv, std::log(r1i));
            double res = q1 ? std::fabs(l1 - *q1) : std::numeric_limits<double>::infinity();
            worst = res;
        }
        if (worst > opt.chamber_tol) {
            out.v = {l1, l2};
            out.status = ProjStatus::pairing_violation;
            out.residual = worst;
            return out;
        }
    }
    out.v = {l1, l2};
    out.residual = worst;
    if (l2 < -opt.chamber_tol || l1 - l2 < -opt.chamber_tol) out.status = ProjStatus::chamber_violation;
    return out;
}

// ---- embedding and adjoint --------------------------------------------------

ExactMat embed_h(const GramForm& gf, const ExactMat& h) {
    int m = gf.dim();
    if (h.rows() != m - 1 || h.cols() != m - 1)
        throw quadfield_error("embed_h: expected (n+1) x (n+1) input");
    if (!preserves_form(h, gf.J0)) throw quadfield_error("embed_h: input does not preserve J0");
    if (!h.det().is_one()) throw quadfield_error("embed_h: input determinant is not 1");
    ExactMat block = ExactMat::identity(m, gf.d);
    for (int i = 0; i < m - 1; ++i)
        for (int j = 0; j < m - 1; ++j) block.at(i, j) = h.at(i, j);
    ExactMat g = gf.PV * block * gf.PVinv;
    if (!in_so_q(gf, g)) throw quadfield_error("embed_h: extension failed SO(Q) certification");
    return g;
}

std::vector<ExactMat> so_basis(const GramForm& gf) {
    int m = gf.dim();
    std::vector<ExactMat> basis;
    basis.reserve(static_cast<size_t>(gf.dim_so()));
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            ExactMat s(m, m, gf.d);
            s.at(i, j) = QuadRational::integer(1, gf.d);
            s.at(j, i) = QuadRational::integer(-1, gf.d);
            basis.push_back(jinv_mul(gf, s));
        }
    }
    return basis;
}

ExactMat adjoint_exact(const GramForm& gf, const ExactMat& g) {
    int m = gf.dim();
    int D = gf.dim_so();
    ExactMat ginv = jinv_mul(gf, jmul(gf, g).transpose());
    ExactMat a = g * gf.Jinv;
    ExactMat ad(D, D, gf.d);
    int col = 0;
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j, ++col) {
            // Y = g J^{-1}(E_ij - E_ji) g^{-1}; coordinates = upper half of J Y
            // (A e_i)(e_j^T B) - (A e_j)(e_i^T B) with A = g J^{-1}, B = g^{-1}
            ExactMat y(m, m, gf.d);
            for (int r = 0; r < m; ++r)
                for (int s = 0; s < m; ++s)
                    y.at(r, s) = a.at(r, i) * ginv.at(j, s) - a.at(r, j) * ginv.at(i, s);
            ExactMat jy = jmul(gf, y);
            int row = 0;
            for (int p = 0; p < m; ++p)
                for (int q = p + 1; q < m; ++q, ++row) ad.at(row, col) = jy.at(p, q);
        }
    }
    return ad;
}

Eigen::MatrixXd adjoint(const GramForm& gf, const ExactMat& g) {
    return adjoint_exact(gf, g).embed();
}

} // namespace conelab
