#include "conelab/liegroup.hpp"
#include "oracles.hpp"
#include "testkit.hpp"

#include <random>

using namespace conelab;
using namespace testkit;

namespace {

void test_gram_form() {
    GramForm g3 = gram_form(3);
    check(g3.J.rows() == 5, "n=3: J is 5x5");
    auto half = QuadRational::fraction(1, 2, 1);
    check(g3.J.at(0, 4) == half && g3.J.at(4, 0) == half && g3.J.at(1, 3) == half &&
              g3.J.at(3, 1) == half && g3.J.at(2, 2).is_one(),
          "n=3: anti-diagonal halves and middle 1");
    int zeros = 0;
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j)
            if (g3.J.at(i, j).is_zero()) ++zeros;
    check(zeros == 20, "n=3: no stray entries");

    GramForm g2 = gram_form(2);
    check(g2.J.rows() == 4, "n=2: J is 4x4");
    for (int i = 0; i < 4; ++i) check(g2.J.at(i, i).is_zero(), "n=2: empty middle block");

    Signature sig = symmetric_signature(g3.J0);
    check(sig.pos == 3 && sig.neg == 1 && sig.zero == 0, "n=3: Q0 signature (3,1)");
    Signature sig2 = symmetric_signature(g2.J0);
    check(sig2.pos == 2 && sig2.neg == 1, "n=2: Q0 signature (2,1)");
    Signature sigJ = symmetric_signature(g3.J);
    check(sigJ.pos == 3 && sigJ.neg == 2, "n=3: Q signature (3,2)");
    check_throws([] { gram_form(1); }, "n < 2 rejected");
}

void test_forms() {
    check_close(rho_form(3)({1, 0}), 1.5, 0, "rho n=3 (1,0)");
    // (n v1 + (n-2) v2)/2 at (1,1) is n-1
    check_close(rho_form(3)({1, 1}), 2.0, 0, "rho n=3 (1,1)");
    check_close(rho_form(2)({1, 1}), 1.0, 0, "rho n=2 (1,1)");
    check_close(property_T_form(3)({1, 0}), 2.0, 0, "propT n=3 (1,0)");
    check_close(property_T_form(3)({1, 1}), 3.0, 0, "propT n=3 (1,1)");
    check_close(property_T_form(4)({1, 1}), 5.0, 0, "propT n=4 (1,1)");
    for (int n = 2; n <= 5; ++n) {
        check_close(rho_form(n)({1, 0}), n / 2.0, 0, "rho(1,0) = n/2");
        check_close(rho_form(n)({1, 1}), n - 1.0, 0, "rho(1,1) = n-1");
        check_close(rho_form(n)({2, 1}), n + (n - 2) / 2.0, 0, "rho(2,1)");
        check_close(property_T_form(n)({2, 1}), 2.0 * (n - 1) + (n - 2), 0, "propT(2,1)");
    }
    check_close(alpha1_form()({3, 1}), 2.0, 0, "alpha1");
    check_close(alpha2_form()({3, 1}), 1.0, 0, "alpha2");
}

void test_cartan_basics() {
    GramForm gf = gram_form(3);
    Projection id = cartan_projection(gf, ExactMat::identity(5, 1));
    check(id.ok() && std::fabs(id.v.v1) < 1e-12 && std::fabs(id.v.v2) < 1e-12, "mu(identity) = (0,0)");

    Eigen::MatrixXd dg = Eigen::MatrixXd::Zero(5, 5);
    dg.diagonal() << std::exp(2.0), std::exp(1.0), 1.0, std::exp(-1.0), std::exp(-2.0);
    Projection pd = cartan_projection_numeric(dg);
    check(pd.ok(), "diag projection ok");
    check_close(pd.v.v1, 2.0, 1e-12, "mu(diag) v1");
    check_close(pd.v.v2, 1.0, 1e-12, "mu(diag) v2");
}

void test_cartan_synthesized() {
    GramForm gf = gram_form(3);
    auto kb = oracles::k_algebra_basis(gf);
    check_eq_u64(kb.size(), 4, "dim k = dim so(3) + dim so(2) = 4");
    std::mt19937_64 rng(5);
    double worst = 0.0;
    for (int it = 0; it < 100; ++it) {
        double v1 = 3.0 * (it % 10) / 10.0 + 0.3, v2 = v1 * (it % 7) / 7.0;
        Eigen::MatrixXd g = oracles::synthesize_kak(gf, kb, v1, v2, rng);
        Projection p = cartan_projection_numeric(g);
        check(p.ok(), "synthesized projection ok");
        worst = std::max({worst, std::fabs(p.v.v1 - v1), std::fabs(p.v.v2 - v2)});
    }
    check(worst < 1e-9, "k exp(v) k' recovers v within 1e-9 (worst " + std::to_string(worst) + ")");
}

void test_exact_products_and_mu_inverse() {
    GramForm gf = gram_form(3);
    std::mt19937_64 rng(17);
    ProjectionOptions opt;
    int bad_form = 0;
    double worst_mu = 0.0, worst_rho = 0.0;
    for (int it = 0; it < 300; ++it) {
        ExactMat g = oracles::random_so_element(gf, rng);
        if (!in_so_q(gf, g)) { ++bad_form; continue; }
        ExactMat gi = so_inverse(gf, g);
        check(( g * gi).is_identity(), "exact inverse");
        Projection p = cartan_projection(gf, g, opt);
        Projection pi = cartan_projection(gf, gi, opt);
        if (p.ok() && pi.ok()) {
            worst_mu = std::max({worst_mu, std::fabs(p.v.v1 - pi.v.v1), std::fabs(p.v.v2 - pi.v.v2)});
        }
        Projection lam = jordan_projection(gf, g, opt);
        if (p.ok() && lam.ok()) {
            LinearForm rho = rho_form(3);
            worst_rho = std::max(worst_rho, rho(lam.v) - rho(p.v));
        }
    }
    check_eq_u64(bad_form, 0, "random products preserve the form exactly");
    check(worst_mu < 1e-9, "mu(g) = mu(g^{-1}) within 1e-9");
    check(worst_rho < 1e-9, "rho(lambda(g)) <= rho(mu(g)) + 1e-9");
}

void test_jordan() {
    GramForm gf = gram_form(3);
    Projection id = jordan_projection(gf, ExactMat::identity(5, 1));
    check(id.ok() && std::fabs(id.v.v1) < 1e-10 && std::fabs(id.v.v2) < 1e-10, "lambda(identity)");

    // conjugation invariance on a proximal element
    std::mt19937_64 rng(29);
    ExactMat h(4, 4, 1);
    h.at(0, 0) = QuadRational::integer(1, 1);
    h.at(1, 1) = QuadRational::fraction(5, 2, 1);
    h.at(2, 2) = QuadRational::integer(1, 1);
    h.at(3, 3) = QuadRational::fraction(2, 5, 1);
    ExactMat g = embed_h(gf, h);
    double worst = 0.0;
    for (int it = 0; it < 20; ++it) {
        ExactMat c = oracles::random_so_element(gf, rng, 2);
        ExactMat conj = c * g * so_inverse(gf, c);
        Projection a = jordan_projection(gf, g);
        Projection b = jordan_projection(gf, conj);
        check(a.ok() && b.ok(), "jordan ok on conjugates");
        worst = std::max({worst, std::fabs(a.v.v1 - b.v.v1), std::fabs(a.v.v2 - b.v.v2)});
    }
    check(worst < 1e-9, "lambda conjugation-invariant within 1e-9");
}

void test_embed_h() {
    GramForm gf = gram_form(3);
    ExactMat id4 = ExactMat::identity(4, 1);
    check(embed_h(gf, id4).is_identity(), "embed_h(identity) = identity");

    // hyperbolic translation with rational length: diag boost in the y2 y4 plane
    ExactMat h(4, 4, 1);
    h.at(0, 0) = QuadRational::integer(1, 1);
    h.at(1, 1) = QuadRational::fraction(3, 2, 1);
    h.at(2, 2) = QuadRational::integer(1, 1);
    h.at(3, 3) = QuadRational::fraction(2, 3, 1);
    check(preserves_form(h, gf.J0), "boost preserves J0");
    ExactMat g = embed_h(gf, h);
    Projection p = cartan_projection(gf, g);
    check(p.ok(), "embedded boost projects ok");
    // translation length from the eigenvalues of h: log(3/2)
    check_close(p.v.v1, std::log(1.5), 1e-12, "mu(embed(h)) = (l, 0), l from eigenvalues");
    check_close(p.v.v2, 0.0, 1e-12, "alpha2(mu(embed(h))) = 0");

    // alpha2 vanishes for random exact h as well
    std::mt19937_64 rng(31);
    double worst = 0.0;
    for (int it = 0; it < 50; ++it) {
        // random products of the boost and exact unipotents of SO(Q0):
        // exp of t(y1 d/dy2 - 2 y2 d/dy4)-style shears
        ExactMat acc = ExactMat::identity(4, 1);
        for (int f = 0; f < 3; ++f) {
            acc = acc * h;
            ExactMat n(4, 4, 1);
            long t = static_cast<long>(rng() % 5) - 2;
            n.at(0, 1) = QuadRational::integer(t, 1);
            n.at(3, 0) = QuadRational::integer(-2 * t, 1);
            acc = acc * oracles::exp_nilpotent(n);
        }
        if (!preserves_form(acc, gf.J0)) {
            check(false, "random h preserves J0");
            return;
        }
        Projection q = cartan_projection(gf, embed_h(gf, acc));
        if (q.ok()) worst = std::max(worst, std::fabs(alpha2_form()(q.v)));
    }
    check(worst < 1e-9, "alpha2(mu(embed_h(h))) ~ 0 for random h");

    // validation errors
    ExactMat badh = ExactMat::identity(4, 1);
    badh.at(0, 1) = QuadRational::integer(1, 1);
    check_throws([&] { embed_h(gf, badh); }, "non-form-preserving input rejected");
}

void test_adjoint() {
    GramForm gf = gram_form(3);
    check(adjoint_exact(gf, ExactMat::identity(5, 1)).is_identity(), "Ad(identity) = identity");
    check_eq_u64(static_cast<unsigned long long>(gf.dim_so()), 10, "D = 10 for n=3");

    std::mt19937_64 rng(41);
    double worst = 0.0;
    for (int it = 0; it < 25; ++it) {
        ExactMat a = oracles::random_so_element(gf, rng, 2);
        ExactMat b = oracles::random_so_element(gf, rng, 2);
        ExactMat lhs = adjoint_exact(gf, a * b);
        ExactMat rhs = adjoint_exact(gf, a) * adjoint_exact(gf, b);
        check(lhs == rhs, "Ad(gg') = Ad(g)Ad(g') exactly");
        worst = std::max(worst, (adjoint(gf, a * b) - adjoint(gf, a) * adjoint(gf, b)).cwiseAbs().maxCoeff());
    }
    check(worst < 1e-9, "embedded adjoint homomorphism within 1e-9");

    // so(Q) basis sanity: every basis element satisfies the defining relation
    for (const auto& x : so_basis(gf)) {
        if (!(x.transpose() * gf.J + gf.J * x).is_zero()) {
            check(false, "so_basis elements satisfy X^T J + J X = 0");
            return;
        }
    }
    check(true, "so_basis verified");
}

void test_bigfloat_path() {
    GramForm gf = gram_form(2);
    // boost^k with singular values past the double comfort zone
    ExactMat h(3, 3, 1);
    h.at(0, 0) = QuadRational::integer(1, 1);
    h.at(1, 1) = QuadRational::integer(9, 1);
    h.at(2, 2) = QuadRational::fraction(1, 9, 1);
    ExactMat g = embed_h(gf, h);
    ExactMat acc = ExactMat::identity(4, 1);
    for (int k = 0; k < 18; ++k) acc = acc * g; // 9^18 ~ 1.5e17 > 1e14
    ProjectionOptions opt;
    Projection p = cartan_projection(gf, acc, opt);
    check(p.ok(), "deep boost projects ok");
    check(p.used_bigfloat, "bigfloat recompute path triggered above threshold");
    check_close(p.v.v1, 18.0 * std::log(9.0), 1e-9, "deep boost v1");
    check_close(p.v.v2, 0.0, 1e-9, "deep boost v2");

    auto sv = singular_values_bigfloat(acc);
    check_close(sv[0].log().to_double(), 18.0 * std::log(9.0), 1e-12, "bigfloat SVD top value");
}

void test_full_pairing_option() {
    GramForm gf = gram_form(3);
    std::mt19937_64 rng(43);
    ProjectionOptions opt;
    opt.full_pairing = true;
    for (int it = 0; it < 10; ++it) {
        ExactMat g = oracles::random_so_element(gf, rng, 2);
        Projection p = cartan_projection(gf, g, opt);
        check(p.ok(), "full spectrum pairing holds on exact elements");
    }
}

} // namespace

int main() {
    return run({
        {"gram form", test_gram_form},
        {"rho and bound forms", test_forms},
        {"cartan basics", test_cartan_basics},
        {"cartan synthesized oracle", test_cartan_synthesized},
        {"exact products, mu-inverse, rho sandwich", test_exact_products_and_mu_inverse},
        {"jordan projection", test_jordan},
        {"embed_h", test_embed_h},
        {"adjoint", test_adjoint},
        {"bigfloat path", test_bigfloat_path},
        {"full pairing option", test_full_pairing_option},
    });
}
