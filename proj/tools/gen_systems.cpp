// Generates the bundled generator systems under data/. Everything is exact:
// SL2(Z) and Schottky systems go through the symmetric-square action on
// binary quadratic forms, SL2(Z[i]) through the action on Hermitian 2x2
// matrices, and the amalgam/HNN Delta letters are boosts of the W-plane
// (the fixed plane of the embedded SO(n-1,1)) over Q(sqrt 2).
//
//   gen_systems [outdir]     write all bundled JSON systems
//   gen_systems --check      also enumerate small balls and print layer counts

#include "conelab/ball.hpp"
#include "conelab/generators.hpp"

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

using namespace conelab;

namespace {

using I2 = std::array<std::array<long, 2>, 2>; // integer SL2 matrix

I2 mul(const I2& a, const I2& b) {
    return {{{a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]},
             {a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]}}};
}

I2 conj(const I2& c, const I2& a) { // c a c^{-1}, det c = 1
    I2 cinv = {{{c[1][1], -c[0][1]}, {-c[1][0], c[0][0]}}};
    return mul(mul(c, a), cinv);
}

// symmetric-square action S -> g S g^T on binary quadratic forms (a, b, c)
ExactMat sym2_form_action(const I2& g, long d) {
    long p = g[0][0], q = g[0][1], r = g[1][0], s = g[1][1];
    ExactMat m(3, 3, d);
    auto set = [&](int i, int j, long v) { m.at(i, j) = QuadRational::integer(v, d); };
    set(0, 0, p * p); set(0, 1, p * q); set(0, 2, q * q);
    set(1, 0, 2 * p * r); set(1, 1, p * s + q * r); set(1, 2, 2 * q * s);
    set(2, 0, r * r); set(2, 1, r * s); set(2, 2, s * s);
    return m;
}

// congruence from disc-form coordinates (a,b,c) to the Q0 coordinates of the
// n=2 model: (y1, y2, y3) = (b, 2a, -2c), so y1^2 + y2 y3 = b^2 - 4ac
ExactMat form_to_q0(long d) {
    ExactMat t(3, 3, d);
    t.at(0, 1) = QuadRational::integer(1, d);
    t.at(1, 0) = QuadRational::integer(2, d);
    t.at(2, 2) = QuadRational::integer(-2, d);
    return t;
}

ExactMat sl2_to_h2(const I2& g, long d) {
    ExactMat t = form_to_q0(d);
    return t * sym2_form_action(g, d) * t.inverse();
}

// ---- SL2(Z[i]) on Hermitian matrices ----------------------------------------

struct Zi {
    mpz_class re, im;
    Zi(long r = 0, long i = 0) : re(r), im(i) {}
    Zi(mpz_class r, mpz_class i) : re(std::move(r)), im(std::move(i)) {}
    Zi operator*(const Zi& o) const { return {re * o.re - im * o.im, re * o.im + im * o.re}; }
    Zi operator+(const Zi& o) const { return {re + o.re, im + o.im}; }
    Zi operator-(const Zi& o) const { return {re - o.re, im - o.im}; }
    Zi bar() const { return {re, -im}; }
};

using C2 = std::array<std::array<Zi, 2>, 2>;

C2 cmul(const C2& a, const C2& b) {
    return {{{a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]},
             {a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]}}};
}

C2 cconj(const C2& c, const C2& a) { // c a c^{-1}, det c = 1
    C2 cinv = {{{c[1][1], Zi() - c[0][1]}, {Zi() - c[1][0], c[0][0]}}};
    return cmul(cmul(c, a), cinv);
}

// action X -> g X g^* on Hermitian X in coordinates (x, w, zr, zi) where
// X = [[x, z],[conj z, w]], z = zr + i zi
ExactMat herm_action(const C2& g, long d) {
    ExactMat m(4, 4, d);
    const Zi& al = g[0][0];
    const Zi& be = g[0][1];
    const Zi& ga = g[1][0];
    const Zi& de = g[1][1];
    auto col = [&](int j, const Zi& x, const Zi& w, const Zi& z) {
        // all of x, w must be real here
        m.at(0, j) = QuadRational(x.re, 0, 1, d);
        m.at(1, j) = QuadRational(w.re, 0, 1, d);
        m.at(2, j) = QuadRational(z.re, 0, 1, d);
        m.at(3, j) = QuadRational(z.im, 0, 1, d);
    };
    // basis E_x, E_w, E_zr, E_zi
    col(0, al * al.bar(), ga * ga.bar(), al * ga.bar());
    col(1, be * be.bar(), de * de.bar(), be * de.bar());
    col(2, al * be.bar() + be * al.bar(), ga * de.bar() + de * ga.bar(), be * ga.bar() + al * de.bar());
    {
        Zi i01(0, 1);
        Zi x = i01 * (al * be.bar() - be * al.bar());
        Zi w = i01 * (ga * de.bar() - de * ga.bar());
        Zi z = i01 * (al * de.bar() - be * ga.bar());
        col(3, x, w, z);
    }
    return m;
}

// congruence from (x, w, zr, zi) to the Q0 coordinates of the n=3 model:
// (y1, y2, y3, y4) = (zr, x, zi, -w), so y1^2 + y2 y4 + y3^2 = |z|^2 - x w
ExactMat herm_to_q0(long d) {
    ExactMat t(4, 4, d);
    t.at(0, 2) = QuadRational::integer(1, d);
    t.at(1, 0) = QuadRational::integer(1, d);
    t.at(2, 3) = QuadRational::integer(1, d);
    t.at(3, 1) = QuadRational::integer(-1, d);
    return t;
}

ExactMat sl2zi_to_h3(const C2& g, long d) {
    ExactMat t = herm_to_q0(d);
    return t * herm_action(g, d) * t.inverse();
}

// ---- boosts of the W-plane ---------------------------------------------------

// W = span(e1+e_{n+2}, e2-e_{n+1}, e3, ..., en) is the fixed space of the
// embedded SO(n-1,1); a boost of its (w1, w2) hyperbolic plane lies in the
// embedded SO(n-1,1)-side torus and commutes with the bending subgroup a_q.
// cosh = 3, sinh = 2 sqrt 2 keeps everything in Z[sqrt 2].
ExactMat w_plane_boost(const GramForm& gf, long cosh_int, long sinh_b) {
    int m = gf.dim();
    long d = gf.d;
    ExactMat frame(m, m, d);
    auto one = QuadRational::integer(1, d);
    // columns: w1 = e1+e_m, w2 = e2-e_{m-1}, e3..en, p1 = e1-e_m, p2 = e2+e_{m-1}
    frame.at(0, 0) = one; frame.at(m - 1, 0) = one;
    frame.at(1, 1) = one; frame.at(m - 2, 1) = -one;
    for (int i = 2; i <= m - 3; ++i) frame.at(i, i) = one;
    frame.at(0, m - 2) = one; frame.at(m - 1, m - 2) = -one;
    frame.at(1, m - 1) = one; frame.at(m - 2, m - 1) = one;
    ExactMat block = ExactMat::identity(m, d);
    block.at(0, 0) = QuadRational::integer(cosh_int, d);
    block.at(0, 1) = QuadRational(0, sinh_b, 1, d);
    block.at(1, 0) = QuadRational(0, sinh_b, 1, d);
    block.at(1, 1) = QuadRational::integer(cosh_int, d);
    return frame * block * frame.inverse();
}

// ---- bundled systems ---------------------------------------------------------

const I2 kA2 = {{{5, 3}, {3, 2}}};          // [[2,1],[1,1]]^2, hyperbolic, tr 7
const I2 kT = {{{1, 1}, {0, 1}}};
const I2 kS = {{{0, -1}, {1, 0}}};

I2 tpow(int k) {
    I2 t = {{{1, 0}, {0, 1}}};
    for (int i = 0; i < std::abs(k); ++i) t = mul(t, kT);
    if (k < 0) { t[0][1] = -t[0][1]; }
    return t;
}

GeneratorSystem schottky_n2() {
    GramForm gf = gram_form(2, 1);
    ExactMat g1 = embed_h(gf, sl2_to_h2(conj(tpow(2), kA2), 1));
    ExactMat g2 = embed_h(gf, sl2_to_h2(conj(tpow(-2), kA2), 1));
    return make_system(2, 1, {{"a", g1}, {"b", g2}});
}

GeneratorSystem sl2z_n2() {
    GramForm gf = gram_form(2, 1);
    return make_system(2, 1, {{"s", embed_h(gf, sl2_to_h2(kS, 1))},
                              {"t", embed_h(gf, sl2_to_h2(kT, 1))}});
}

GeneratorSystem cyclic_n2() {
    GramForm gf = gram_form(2, 1);
    return make_system(2, 1, {{"a", embed_h(gf, sl2_to_h2(kA2, 1))}});
}

GeneratorSystem sl2zi_n3() {
    GramForm gf = gram_form(3, 1);
    C2 s = {{{Zi(0, 0), Zi(-1, 0)}, {Zi(1, 0), Zi(0, 0)}}};
    C2 t = {{{Zi(1, 0), Zi(1, 0)}, {Zi(0, 0), Zi(1, 0)}}};
    C2 u = {{{Zi(1, 0), Zi(0, 1)}, {Zi(0, 0), Zi(1, 0)}}};
    return make_system(3, 1, {{"s", embed_h(gf, sl2zi_to_h3(s, 1))},
                              {"t", embed_h(gf, sl2zi_to_h3(t, 1))},
                              {"u", embed_h(gf, sl2zi_to_h3(u, 1))}});
}

GeneratorSystem amalgam_n2() {
    GramForm gf = gram_form(2, 2);
    ExactMat delta = w_plane_boost(gf, 3, 2);
    ExactMat g1 = embed_h(gf, sl2_to_h2(conj(tpow(3), kA2), 2));
    ExactMat g2 = embed_h(gf, sl2_to_h2(conj(tpow(-3), kA2), 2));
    return make_system(2, 2, {{"delta", delta}, {"g1", g1}, {"g2", g2}},
                       {Tag::delta, Tag::gamma1, Tag::gamma2});
}

GeneratorSystem amalgam_n3() {
    GramForm gf = gram_form(3, 2);
    ExactMat delta = w_plane_boost(gf, 3, 2);
    C2 core = {{{Zi(5, 0), Zi(3, 0)}, {Zi(3, 0), Zi(2, 0)}}};
    C2 c1 = {{{Zi(1, 0), Zi(2, 2)}, {Zi(0, 0), Zi(1, 0)}}};
    C2 c2 = {{{Zi(1, 0), Zi(-2, -2)}, {Zi(0, 0), Zi(1, 0)}}};
    ExactMat g1 = embed_h(gf, sl2zi_to_h3(cconj(c1, core), 2));
    ExactMat g2 = embed_h(gf, sl2zi_to_h3(cconj(c2, core), 2));
    return make_system(3, 2, {{"delta", delta}, {"g1", g1}, {"g2", g2}},
                       {Tag::delta, Tag::gamma1, Tag::gamma2});
}

GeneratorSystem hnn_n3() {
    GramForm gf = gram_form(3, 2);
    ExactMat delta = w_plane_boost(gf, 3, 2);
    C2 core = {{{Zi(5, 0), Zi(3, 0)}, {Zi(3, 0), Zi(2, 0)}}};
    C2 c1 = {{{Zi(1, 0), Zi(2, 2)}, {Zi(0, 0), Zi(1, 0)}}};
    ExactMat s = embed_h(gf, sl2zi_to_h3(cconj(c1, core), 2));
    return make_system(3, 2, {{"delta", delta}, {"s", s}}, {Tag::gamma1, Tag::stable});
}

} // namespace

int main(int argc, char** argv) {
    bool check = false;
    std::string outdir = "data";
    for (int i = 1; i < argc; ++i) {
        std::string a = argv[i];
        if (a == "--check")
            check = true;
        else
            outdir = a;
    }
    std::filesystem::create_directories(outdir);

    std::vector<std::pair<std::string, GeneratorSystem>> systems;
    systems.emplace_back("schottky_n2", schottky_n2());
    systems.emplace_back("sl2z_n2", sl2z_n2());
    systems.emplace_back("cyclic_n2", cyclic_n2());
    systems.emplace_back("sl2zi_n3", sl2zi_n3());
    systems.emplace_back("amalgam_n2", amalgam_n2());
    systems.emplace_back("amalgam_n3", amalgam_n3());
    systems.emplace_back("hnn_n3", hnn_n3());

    for (auto& [name, sys] : systems) {
        std::string path = outdir + "/" + name + ".json";
        save_generators(sys, path);
        std::printf("%-14s n=%d d=%ld letters=%zu coloring=%d -> %s\n", name.c_str(), sys.n, sys.d,
                    sys.size(), static_cast<int>(sys.coloring), path.c_str());
        if (check) {
            GeneratorSystem loaded = load_generators(path);
            int radius = loaded.size() > 5 ? 5 : 7;
            WordBall b = ball(loaded, radius);
            std::printf("   layers:");
            for (uint64_t c : b.layer_counts) std::printf(" %llu", static_cast<unsigned long long>(c));
            std::printf("\n");
        }
    }
    return 0;
}
