#include "conelab/asymptotics.hpp"
#include "conelab/bending.hpp"
#include "testkit.hpp"

#include <cmath>
#include <filesystem>

using namespace conelab;
using namespace testkit;

namespace {

std::string data_path(const std::string& name) {
    for (const char* prefix : {"data/", "../data/", "../../data/"}) {
        std::string p = prefix + name;
        if (std::filesystem::exists(p)) return p;
    }
    throw std::runtime_error("bundled data not found: " + name + " (run gen_systems)");
}

// synthetic cloud with #{|mu| <= T} = floor(exp(rate*T)) along direction v,
// out to |mu| = t_max; every point at layer = ceil(|mu|), radius = max layer
CartanCloud synthetic_cloud(double rate, const ChamberVec& v, double t_max) {
    CartanCloud c;
    c.n = 2;
    double nv = v.norm();
    long count = static_cast<long>(std::floor(std::exp(rate * t_max)));
    for (long j = 1; j <= count; ++j) {
        double t = std::log(static_cast<double>(j)) / rate;
        if (t <= 0) t = 1e-6;
        CloudPoint p;
        p.v1 = t * v.v1 / nv;
        p.v2 = t * v.v2 / nv;
        p.len = static_cast<uint32_t>(std::ceil(t));
        c.points.push_back(p);
    }
    c.radius = 0;
    for (const auto& p : c.points) c.radius = std::max(c.radius, static_cast<int>(p.len));
    c.ball_size = c.points.size() + 1;
    return c;
}

void test_limit_cone() {
    CartanCloud c;
    c.n = 2;
    c.radius = 3;
    for (int k = 1; k <= 30; ++k) {
        c.points.push_back({0.5 * k, 0.0, 3});
        c.points.push_back({0.4 * k, 0.1 * k, 3});  // ratio 0.25
        c.points.push_back({0.35 * k, 0.14 * k, 3}); // ratio 0.4
    }
    ConeEstimate est = limit_cone(c, 1.0);
    check_close(est.c_hat, 0.4, 1e-12, "c_hat is the max ratio beyond t_min");
    check(est.points_used > 0 && !est.extremal.empty(), "cone reports support");
    check_close(est.extremal[0].v2 / est.extremal[0].v1, 0.4, 1e-12, "extremal direction ordering");
    // invariant: every counted point obeys v2 <= (c_hat + slack) v1
    for (const auto& p : c.points)
        if (ChamberVec{p.v1, p.v2}.norm() >= 1.0)
            check(p.v2 <= (est.c_hat + 1e-12) * p.v1, "cone invariant");

    CartanCloud empty;
    empty.n = 2;
    empty.radius = 0;
    check_throws([&] { limit_cone(empty, 1.0); }, "identity-only cloud raises");
}

void test_directional_growth_synthetic() {
    CartanCloud c = synthetic_cloud(1.0, {1, 0}, 12.0);
    DirectionalGrowth g = directional_growth(c, {1, 0});
    check(!g.insufficient, "synthetic e^T cloud is adequate");
    check_close(g.psi_hat, 1.0, 0.05, "recovers unit growth rate");
    check(g.chosen_aperture == 0.1, "smallest adequate aperture chosen");

    // aperture monotonicity is exact on the count tables
    for (size_t i = 1; i < g.tables.size(); ++i) {
        check(g.tables[i].aperture < g.tables[i - 1].aperture, "tables ordered by aperture");
        for (size_t k = 0; k < g.tables[i].counts.size(); ++k)
            if (g.tables[i].counts[k] > g.tables[i - 1].counts[k]) {
                check(false, "aperture monotonicity violated");
                return;
            }
    }
    check(true, "aperture monotonicity exact on count tables");

    // direction far away from the cloud: insufficient data
    DirectionalGrowth far = directional_growth(c, {1, 1});
    check(far.insufficient, "off-cone direction reports insufficient data");
}

void test_critical_exponent_synthetic() {
    CartanCloud c = synthetic_cloud(1.5, {1, 0}, 9.0);
    ExponentFit f = critical_exponent(c, rho_form(2)); // rho(v) = v1 for n=2
    check(!f.insufficient, "synthetic exponent fit runs");
    check_close(f.delta, 1.5, 0.08, "recovers the abscissa");
    check(f.fit.r2 > 0.99, "clean exponential fits cleanly");
    check(f.fit_tolerance < 0.2, "fit tolerance bounded");

    check_throws([&] { critical_exponent(c, LinearForm{-1.0, 0.0}); },
                 "non-positive form on the cone rejected");
}

void test_verdicts() {
    ExponentFit f;
    f.delta = 1.0;
    f.fit.stderr_slope = 0.01;
    check(temperedness_verdict(f).verdict == "inconclusive", "delta = 1 exactly is inconclusive");

    f.delta = 1.3333;
    f.fit.stderr_slope = 0.02;
    Verdict v = temperedness_verdict(f);
    check(v.verdict == "non-tempered", "delta = 4/3 is non-tempered");
    check_close(v.p_hat, 2.0 / (1.0 - 0.3333), 1e-9, "p_hat = 2/(1-eta)");

    f.delta = 0.9;
    f.fit.stderr_slope = 0.02;
    v = temperedness_verdict(f);
    check(v.verdict == "tempered", "delta = 0.9 is tempered");
    check_close(v.p_hat, 2.0, 0, "p_hat = 2 below the threshold");
}

void test_bounds_check() {
    std::vector<DirectionalGrowth> dirs;
    DirectionalGrowth a;
    a.v = {1, 0};
    a.insufficient = false;
    a.psi_hat = 1.9;
    a.fit_tolerance = 0.05;
    dirs.push_back(a);
    DirectionalGrowth b;
    b.v = {1 / std::sqrt(2.0), 1 / std::sqrt(2.0)};
    b.insufficient = true; // must be skipped, not failed
    dirs.push_back(b);
    BoundsReport rep = bounds_check(dirs, 3);
    check(rep.entries.size() == 2 && rep.entries[1].skipped, "insufficient direction skipped");
    check(rep.entries[0].pass, "psi_hat below (n-1)v1+(n-2)v2 passes");
    check(rep.all_pass, "report aggregates passes");
    check(rep.have_v_sigma && rep.entries[0].ratio_rho == rep.max_ratio, "v_sigma located");
    check_close(rep.max_ratio, 1.9 / 1.5, 1e-12, "ratio to rho for n=3");
}

void test_anosov_synthetic() {
    CartanCloud lin;
    lin.n = 2;
    lin.radius = 12;
    for (int k = 1; k <= 12; ++k) {
        lin.points.push_back({0.7 * k + 0.03, 0.0, static_cast<uint32_t>(k)});
        lin.points.push_back({0.7 * k + 0.5, 0.0, static_cast<uint32_t>(k)}); // non-minimal
    }
    AnosovFit f = anosov_gap(lin);
    check(!f.insufficient && !f.degenerate, "linear minima are non-degenerate");
    check_close(f.fit.slope, 0.7, 1e-6, "slope recovered from layer minima");

    CartanCloud logc;
    logc.n = 2;
    logc.radius = 16;
    for (int k = 1; k <= 16; ++k)
        logc.points.push_back({2.0 * std::log(static_cast<double>(k)) + 0.1, 0.0,
                               static_cast<uint32_t>(k)});
    AnosovFit g = anosov_gap(logc);
    check(g.degenerate, "logarithmic minima flagged as gap-degenerate");

    CartanCloud tiny;
    tiny.n = 2;
    tiny.radius = 3;
    for (int k = 1; k <= 3; ++k) tiny.points.push_back({1.0 * k, 0.0, static_cast<uint32_t>(k)});
    check(anosov_gap(tiny).insufficient, "fewer than 5 layers is insufficient");
}

void test_anosov_cyclic_closed_form() {
    GeneratorSystem sys = load_generators(data_path("cyclic_n2.json"));
    WordBall b = ball(sys, 40);
    CartanCloud c = cartan_cloud(sys.gram, b);
    AnosovFit f = anosov_gap(c);
    check(!f.insufficient && !f.degenerate, "cyclic hyperbolic group has a clean gap");
    // translation rate: top eigenvalue of the symmetric square of [[5,3],[3,2]]
    double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    check_close(f.fit.slope, 8.0 * std::log(phi), 1e-3, "slope equals the translation length rate");

    DirectionalGrowth g = directional_growth(c, {1, 0});
    if (!g.insufficient) check(std::fabs(g.psi_hat) < 0.05, "cyclic group: psi_hat ~ 0 (linear growth)");
}

void test_zariski_ranks() {
    GeneratorSystem sys = load_generators(data_path("amalgam_n3.json"));
    WordBall trivial = ball(sys, 0);
    ZariskiRank r0 = zariski_span_rank(sys.gram, trivial, 10, 7);
    check_eq_u64(static_cast<unsigned long long>(r0.rank), 1, "identity ball spans rank 1");

    WordBall b = ball(sys, 4);
    ZariskiRank unbent = zariski_span_rank(sys.gram, b, 320, 7);
    int exact = zariski_rank_exact(sys.gram, b, 90, 7);
    check_eq_u64(static_cast<unsigned long long>(unbent.rank), static_cast<unsigned long long>(exact),
                 "numeric rank agrees with the exact-rank oracle");
    check(unbent.rank < unbent.full_dim, "embedded subgroup spans strictly less than D^2");

    ZariskiRank reseeded = zariski_span_rank(sys.gram, b, 320, 12345);
    check_eq_u64(static_cast<unsigned long long>(reseeded.rank),
                 static_cast<unsigned long long>(unbent.rank), "rank verdict is seed-stable");

    GeneratorSystem bent = bend(sys, parse_rational("11/10", sys.d));
    WordBall bb = ball(bent, 4);
    ZariskiRank full = zariski_span_rank(sys.gram, bb, 320, 7);
    check_eq_u64(static_cast<unsigned long long>(full.rank), 100, "bent system spans D^2 = 100");
    check(full.rank > unbent.rank, "bending strictly increases the adjoint span rank");

    int ambient = ambient_full_span_rank(sys.gram);
    check_eq_u64(static_cast<unsigned long long>(ambient), 100,
                 "ambient Burnside reference rank is D^2 for n=3");
}

void test_embedded_cone_and_completeness() {
    GeneratorSystem sys = load_generators(data_path("schottky_n2.json"));
    WordBall b = ball(sys, 7);
    CartanCloud c = cartan_cloud(sys.gram, b);
    double tc = completeness_radius_norm(c);
    check(tc > 0, "completeness radius positive");
    ConeEstimate est = limit_cone(c, tc / 2);
    check(est.c_hat < 1e-8, "embedded SO(n,1) cloud has c_hat < 1e-8");
}

} // namespace

int main() {
    return run({
        {"limit cone", test_limit_cone},
        {"directional growth (synthetic oracle)", test_directional_growth_synthetic},
        {"critical exponent (synthetic oracle)", test_critical_exponent_synthetic},
        {"temperedness verdicts", test_verdicts},
        {"bounds check", test_bounds_check},
        {"anosov gap (synthetic)", test_anosov_synthetic},
        {"anosov gap (cyclic closed form)", test_anosov_cyclic_closed_form},
        {"zariski span ranks", test_zariski_ranks},
        {"embedded cone and completeness", test_embedded_cone_and_completeness},
    });
}
