#include "conelab/bending.hpp"

#include <map>
#include <mutex>

namespace conelab {

namespace {

// Frame of the bending geometry: W = span(e1+e_m, e2-e_{m-1}, e3, ..., en)
// is the fixed space of the embedded SO(n-1,1); its Q-orthogonal complement
// P = span(e2+e_{m-1}, e1-e_m) has signature (1,1) with null directions
// u+- = (e2+e_{m-1}) +- (e1-e_m).
struct BendFrame {
    std::vector<std::vector<QuadRational>> w; // n columns
    std::vector<QuadRational> p1, p2;         // e2+e_{m-1}, e1-e_m
};

BendFrame bend_frame(const GramForm& gf) {
    int m = gf.dim();
    long d = gf.d;
    auto zero = [&] { return std::vector<QuadRational>(static_cast<size_t>(m), QuadRational::integer(0, d)); };
    BendFrame f;
    auto one = QuadRational::integer(1, d);
    {
        auto w1 = zero();
        w1[0] = one;
        w1[static_cast<size_t>(m - 1)] = one;
        f.w.push_back(w1);
        auto w2 = zero();
        w2[1] = one;
        w2[static_cast<size_t>(m - 2)] = -one;
        f.w.push_back(w2);
        for (int i = 2; i <= m - 3; ++i) {
            auto wi = zero();
            wi[static_cast<size_t>(i)] = one;
            f.w.push_back(wi);
        }
    }
    f.p1 = zero();
    f.p1[1] = one;
    f.p1[static_cast<size_t>(m - 2)] = one;
    f.p2 = zero();
    f.p2[0] = one;
    f.p2[static_cast<size_t>(m - 1)] = -one;
    return f;
}

ExactMat columns_matrix(const GramForm& gf, const std::vector<std::vector<QuadRational>>& cols) {
    int m = gf.dim();
    ExactMat c(m, static_cast<int>(cols.size()), gf.d);
    for (size_t j = 0; j < cols.size(); ++j)
        for (int i = 0; i < m; ++i) c.at(i, static_cast<int>(j)) = cols[j][static_cast<size_t>(i)];
    return c;
}

// Basis of the embedded so(n-1,1): so of the W-restricted form, pushed to
// the ambient space through the full frame (zero on P).
std::vector<ExactMat> embedded_h_basis(const GramForm& gf, const BendFrame& f) {
    int m = gf.dim();
    int nw = static_cast<int>(f.w.size());
    long d = gf.d;
    auto cols = f.w;
    cols.push_back(f.p1);
    cols.push_back(f.p2);
    ExactMat frame = columns_matrix(gf, cols);
    ExactMat frame_inv = frame.inverse();
    ExactMat wmat = columns_matrix(gf, f.w);
    ExactMat gw = wmat.transpose() * gf.J * wmat; // W-restricted Gram, nw x nw
    ExactMat gwinv = gw.inverse();
    std::vector<ExactMat> basis;
    for (int a = 0; a < nw; ++a) {
        for (int b = a + 1; b < nw; ++b) {
            ExactMat s(nw, nw, d);
            s.at(a, b) = QuadRational::integer(1, d);
            s.at(b, a) = QuadRational::integer(-1, d);
            ExactMat xi = gwinv * s; // in so(Q_W)
            ExactMat big(m, m, d);
            for (int i = 0; i < nw; ++i)
                for (int j = 0; j < nw; ++j) big.at(i, j) = xi.at(i, j);
            basis.push_back(frame * big * frame_inv);
        }
    }
    return basis;
}

std::vector<QuadRational> mat_vec(const ExactMat& a, const std::vector<QuadRational>& v) {
    std::vector<QuadRational> r(static_cast<size_t>(a.rows()), QuadRational::integer(0, a.disc()));
    for (int i = 0; i < a.rows(); ++i) {
        QuadRational acc = QuadRational::integer(0, a.disc());
        for (int j = 0; j < a.cols(); ++j) {
            if (a.at(i, j).is_zero() || v[static_cast<size_t>(j)].is_zero()) continue;
            acc = acc + a.at(i, j) * v[static_cast<size_t>(j)];
        }
        r[static_cast<size_t>(i)] = acc;
    }
    return r;
}

// coordinates of y in the so_basis ordering: upper triangle of J y
std::vector<QuadRational> so_coords(const GramForm& gf, const ExactMat& y) {
    ExactMat jy = jmul(gf, y);
    std::vector<QuadRational> c;
    int m = gf.dim();
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) c.push_back(jy.at(i, j));
    return c;
}

} // namespace

BendingParam centralizer_generator(int n, long d) {
    GramForm gf = gram_form(n, d);
    BendFrame f = bend_frame(gf);
    std::vector<ExactMat> sob = so_basis(gf);
    std::vector<ExactMat> hb = embedded_h_basis(gf, f);
    int m = gf.dim();
    int D = gf.dim_so();

    // rows: [X_k, h_i] = 0 entrywise, for every h_i
    ExactMat sys(static_cast<int>(hb.size()) * m * m, D, d);
    for (int k = 0; k < D; ++k) {
        for (size_t hi = 0; hi < hb.size(); ++hi) {
            ExactMat comm = sob[static_cast<size_t>(k)] * hb[hi] - hb[hi] * sob[static_cast<size_t>(k)];
            for (int r = 0; r < m; ++r)
                for (int s = 0; s < m; ++s)
                    sys.at(static_cast<int>(hi) * m * m + r * m + s, k) = comm.at(r, s);
        }
    }
    auto solutions = sys.nullspace();

    // quotient out the embedded subalgebra's own contribution: stack the
    // h-coordinates first and keep solution vectors that raise the rank
    std::vector<std::vector<QuadRational>> hcoords;
    for (const auto& h : hb) hcoords.push_back(so_coords(gf, h));
    std::vector<std::vector<QuadRational>> kept;
    {
        auto rank_of = [&](const std::vector<std::vector<QuadRational>>& rows) {
            ExactMat a(static_cast<int>(rows.size()), D, d);
            for (size_t i = 0; i < rows.size(); ++i)
                for (int j = 0; j < D; ++j) a.at(static_cast<int>(i), j) = rows[i][static_cast<size_t>(j)];
            return a.rank();
        };
        std::vector<std::vector<QuadRational>> stack = hcoords;
        int base = rank_of(stack);
        for (const auto& s : solutions) {
            stack.push_back(s);
            int r = rank_of(stack);
            if (r > base) {
                kept.push_back(s);
                base = r;
            } else {
                stack.pop_back();
            }
        }
    }
    if (kept.size() != 1)
        throw bending_error("centralizer of so(n-1,1): expected a 1-dimensional complement, found " +
                            std::to_string(kept.size()));

    ExactMat x0(m, m, d);
    {
        int idx = 0;
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j, ++idx) {
                if (kept[0][static_cast<size_t>(idx)].is_zero()) continue;
                ExactMat term = sob[static_cast<size_t>(idx)].scaled(kept[0][static_cast<size_t>(idx)]);
                x0 = x0 + term;
            }
    }

    // the nullspace vector is only a coset representative; strip the
    // embedded-subalgebra component so the direction vanishes on W
    // (for n = 2 the abelian so(1,1) is its own center and shows up here)
    if (!hb.empty()) {
        int nw = static_cast<int>(f.w.size());
        ExactMat lhs(m * nw, static_cast<int>(hb.size()), d);
        std::vector<QuadRational> rhs;
        for (int j = 0; j < nw; ++j) {
            auto xw = mat_vec(x0, f.w[static_cast<size_t>(j)]);
            for (int r = 0; r < m; ++r) rhs.push_back(xw[static_cast<size_t>(r)]);
            for (size_t hi = 0; hi < hb.size(); ++hi) {
                auto hw = mat_vec(hb[hi], f.w[static_cast<size_t>(j)]);
                for (int r = 0; r < m; ++r) lhs.at(j * m + r, static_cast<int>(hi)) = hw[static_cast<size_t>(r)];
            }
        }
        std::vector<QuadRational> alpha = solve_linear(lhs, rhs);
        for (size_t hi = 0; hi < hb.size(); ++hi) {
            if (alpha[hi].is_zero()) continue;
            x0 = x0 - hb[hi].scaled(alpha[hi]);
        }
    }

    // normalize: u+ must be an eigenvector with eigenvalue 1
    std::vector<QuadRational> uplus(f.p1), uminus(f.p1);
    for (size_t i = 0; i < uplus.size(); ++i) {
        uplus[i] = f.p1[i] + f.p2[i];
        uminus[i] = f.p1[i] - f.p2[i];
    }
    auto xu = mat_vec(x0, uplus);
    QuadRational c = QuadRational::integer(0, d);
    for (size_t i = 0; i < xu.size(); ++i) {
        if (!uplus[i].is_zero()) {
            c = xu[i] * uplus[i].inverse();
            break;
        }
    }
    if (c.is_zero()) throw bending_error("centralizer direction fixes the J-orthogonal line of V");
    for (size_t i = 0; i < xu.size(); ++i)
        if (!(xu[i] == c * uplus[i]))
            throw bending_error("centralizer direction: u+ is not an eigenvector");
    BendingParam bp;
    bp.n = n;
    bp.d = d;
    bp.X = x0.scaled(c.inverse());

    // verify the full eigenstructure exactly
    auto xup = mat_vec(bp.X, uplus);
    auto xum = mat_vec(bp.X, uminus);
    for (size_t i = 0; i < xup.size(); ++i) {
        if (!(xup[i] == uplus[i])) throw bending_error("normalization failed on u+");
        if (!(xum[i] == -uminus[i])) throw bending_error("eigenvalue -1 failed on u-");
    }
    for (const auto& w : f.w) {
        auto xw = mat_vec(bp.X, w);
        for (const auto& e : xw)
            if (!e.is_zero()) throw bending_error("centralizer direction does not vanish on W");
    }
    if (!(bp.X.transpose() * gf.J + gf.J * bp.X).is_zero())
        throw bending_error("centralizer direction left so(Q)");
    for (const auto& h : hb)
        if (!(bp.X * h - h * bp.X).is_zero()) throw bending_error("centralizer direction does not commute");

    std::vector<std::vector<QuadRational>> cols = {uplus, uminus};
    for (const auto& w : f.w) cols.push_back(w);
    bp.frame = columns_matrix(gf, cols);
    bp.frame_inv = bp.frame.inverse();
    return bp;
}

ExactMat bending_one_param(const BendingParam& bp, const QuadRational& q) {
    if (q.sign() <= 0) throw bending_error("bending parameter q must be positive");
    if (q.num_b() != 0) throw bending_error("bending parameter q must be rational");
    int m = bp.n + 2;
    ExactMat diag = ExactMat::identity(m, bp.d);
    diag.at(0, 0) = q;
    diag.at(1, 1) = q.inverse();
    return bp.frame * diag * bp.frame_inv;
}

QuadRational parse_rational(const std::string& text, long d) {
    size_t slash = text.find('/');
    try {
        if (slash == std::string::npos) return QuadRational(mpz_class(text), 0, 1, d);
        return QuadRational(mpz_class(text.substr(0, slash)), 0, mpz_class(text.substr(slash + 1)), d);
    } catch (const std::invalid_argument&) {
        throw bending_error("cannot parse rational '" + text + "'");
    }
}

GeneratorSystem bend(const GeneratorSystem& sys, const QuadRational& q) {
    if (sys.coloring == Coloring::untagged)
        throw bending_error("bend requires an amalgam or HNN coloring");
    static std::mutex cache_mutex;
    static std::map<std::pair<int, long>, BendingParam> cache;
    const BendingParam* bpp;
    {
        std::lock_guard<std::mutex> lock(cache_mutex);
        auto key = std::make_pair(sys.n, sys.d);
        if (!cache.count(key)) cache.emplace(key, centralizer_generator(sys.n, sys.d));
        bpp = &cache.at(key);
    }
    const BendingParam& bp = *bpp;

    ExactMat a = bending_one_param(bp, q);
    ExactMat ainv = bending_one_param(bp, q.inverse());
    if (!(a * ainv).is_identity()) throw bending_error("a_q a_{1/q} != identity");

    std::vector<std::pair<std::string, ExactMat>> labeled;
    std::vector<Tag> tags;
    for (size_t i = 0; i < sys.size(); ++i) {
        const Generator& g = sys.gens[i];
        ExactMat out = g.mat;
        switch (g.tag) {
            case Tag::gamma1:
                break;
            case Tag::delta:
                if (!((a * g.mat) == (g.mat * a)))
                    throw bending_error("delta generator '" + g.label + "' does not commute with a_q");
                break;
            case Tag::gamma2:
                out = a * g.mat * ainv;
                break;
            case Tag::stable: {
                // the smaller index of each pair is the positive letter; the
                // other becomes its exact inverse. An involution has no
                // consistent image under s -> a_q s.
                if (g.inverse == static_cast<int>(i))
                    throw bending_error("stable letter '" + g.label + "' is an involution");
                if (g.inverse > static_cast<int>(i))
                    out = a * g.mat;
                else
                    out = so_inverse(sys.gram, a * sys.gens[static_cast<size_t>(g.inverse)].mat);
                break;
            }
            case Tag::none:
                throw bending_error("untagged generator '" + g.label + "' in a colored system");
        }
        labeled.emplace_back(g.label, std::move(out));
        tags.push_back(g.tag);
    }
    GeneratorSystem out = make_system(sys.n, sys.d, std::move(labeled), std::move(tags));
    return out;
}

std::vector<GeneratorSystem> bend_sweep(const GeneratorSystem& sys, const std::vector<QuadRational>& qs) {
    std::vector<GeneratorSystem> out;
    out.reserve(qs.size());
    for (const auto& q : qs) out.push_back(bend(sys, q));
    return out;
}

} // namespace conelab
