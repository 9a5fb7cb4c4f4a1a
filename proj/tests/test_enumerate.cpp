#include "conelab/ball.hpp"
#include "conelab/cloud.hpp"
#include "oracles.hpp"
#include "testkit.hpp"

#include <cstdio>
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

void test_load() {
    GeneratorSystem schottky = load_generators(data_path("schottky_n2.json"));
    check_eq_u64(schottky.size(), 4, "schottky pair loads as 4 labeled matrices");
    check(schottky.coloring == Coloring::untagged, "schottky untagged");
    for (const auto& g : schottky.gens) {
        check(in_so_q(schottky.gram, g.mat), "generator '" + g.label + "' certified in SO(Q)");
        check((g.mat * schottky.gens[static_cast<size_t>(g.inverse)].mat).is_identity(),
              "inverse pairing of '" + g.label + "'");
    }

    GeneratorSystem lattice = load_generators(data_path("sl2z_n2.json"));
    check(lattice.n == 2 && lattice.d == 1, "sl2z system header");
    check_eq_u64(lattice.size(), 3, "s is an involution, t gets an auto inverse");

    GeneratorSystem amalgam = load_generators(data_path("amalgam_n3.json"));
    check(amalgam.coloring == Coloring::amalgam, "amalgam coloring detected");
}

void test_load_errors() {
    // a matrix that does not preserve the form: identity with one extra entry
    std::string bad = R"({"n":2,"d":1,"generators":[{"label":"broken","matrix":[
        [1,0,1],[1,0,1],[0,0,1],[0,0,1],
        [0,0,1],[1,0,1],[0,0,1],[0,0,1],
        [0,0,1],[0,0,1],[1,0,1],[0,0,1],
        [0,0,1],[0,0,1],[0,0,1],[1,0,1]]}]})";
    try {
        generators_from_json(bad, "");
        check(false, "non-form-preserving matrix rejected");
    } catch (const generator_error& e) {
        check(std::string(e.what()).find("broken") != std::string::npos,
              "error names the offending matrix");
    }
    check_throws([] { generators_from_json("{ not json", ""); }, "parse error reported");
    check_throws([] { generators_from_json(R"({"n":2,"d":1,"generators":[]})", ""); }, "empty system rejected");
}

void test_ball_basics() {
    GeneratorSystem sys = load_generators(data_path("schottky_n2.json"));
    WordBall b0 = ball(sys, 0);
    check_eq_u64(b0.size(), 1, "R=0 ball is the identity");
    check_eq_u64(b0.layer_counts[0], 1, "R=0 layer count");

    WordBall b = ball(sys, 6);
    check_eq_u64(b.layer_counts[1], 4, "free layer 1");
    for (int k = 1; k <= 6; ++k) {
        uint64_t expect = 4;
        for (int i = 1; i < k; ++i) expect *= 3;
        check_eq_u64(b.layer_counts[static_cast<size_t>(k)], expect,
                     "free group layer " + std::to_string(k) + " = 4*3^(k-1)");
    }
}

void test_sl2z_against_oracle() {
    GeneratorSystem sys = load_generators(data_path("sl2z_n2.json"));
    WordBall b = ball(sys, 9);
    std::vector<size_t> want = oracles::psl2z_layer_counts(9);
    for (size_t k = 0; k < want.size(); ++k)
        check_eq_u64(b.layer_counts[k], want[k], "psl2z layer " + std::to_string(k) + " matches 2x2 oracle");
    // relations appear: strictly below the free bound 3 * 2^(k-1) from layer 3
    check(b.layer_counts[3] < 12, "relations reduce layer 3 below the free bound");
}

void test_determinism() {
    GeneratorSystem sys = load_generators(data_path("sl2z_n2.json"));
    BallOptions one;
    one.threads = 1;
    BallOptions four;
    four.threads = 4;
    WordBall a = ball(sys, 7, one);
    WordBall b = ball(sys, 7, four);
    check_eq_u64(a.size(), b.size(), "same ball size across thread counts");
    bool same = true;
    for (const auto& [k, e] : a.elems) {
        auto it = b.elems.find(k);
        if (it == b.elems.end() || it->second.len != e.len || it->second.word != e.word) {
            same = false;
            break;
        }
    }
    check(same, "identical key set, lengths, and witnesses across thread counts");
}

void test_group_closure() {
    GeneratorSystem sys = load_generators(data_path("sl2z_n2.json"));
    WordBall half = ball(sys, 4);
    WordBall full = ball(sys, 8);
    std::mt19937_64 rng(3);
    auto keys = half.sorted_keys();
    int m = sys.n + 2;
    for (int it = 0; it < 50; ++it) {
        const std::string& k1 = *keys[rng() % keys.size()];
        const std::string& k2 = *keys[rng() % keys.size()];
        ExactMat p = ExactMat::deserialize(k1, m, m, sys.d) * ExactMat::deserialize(k2, m, m, sys.d);
        auto it2 = full.elems.find(p.serialize());
        if (it2 == full.elems.end()) {
            check(false, "product of ball(R/2) elements lies in ball(R)");
            return;
        }
        uint32_t l1 = half.elems.find(k1)->second.len, l2 = half.elems.find(k2)->second.len;
        if (it2->second.len > l1 + l2) {
            check(false, "recorded length minimal: len(gh) <= len(g)+len(h)");
            return;
        }
    }
    check(true, "group closure and length subadditivity on random pairs");
}

void test_budget() {
    GeneratorSystem sys = load_generators(data_path("schottky_n2.json"));
    BallOptions opt;
    opt.memory_budget = 4096; // absurdly small
    check_throws([&] { ball(sys, 4, opt); }, "memory budget exceeded raises (no silent truncation)");
}

void test_ball_file_roundtrip() {
    GeneratorSystem sys = load_generators(data_path("sl2z_n2.json"));
    WordBall b = ball(sys, 5);
    std::string path = "/tmp/conelab_test_ball.txt";
    save_ball(b, path);
    WordBall r = load_ball(path);
    check_eq_u64(r.size(), b.size(), "ball file round trip size");
    check(r.radius == b.radius && r.n == b.n && r.d == b.d && r.gen_hash == b.gen_hash,
          "ball file round trip header");
    bool same = true;
    for (const auto& [k, e] : b.elems) {
        auto it = r.elems.find(k);
        if (it == r.elems.end() || it->second.len != e.len || it->second.word != e.word) same = false;
    }
    check(same, "ball file round trip content");
}

void test_cloud() {
    GeneratorSystem sys = load_generators(data_path("schottky_n2.json"));
    WordBall b0 = ball(sys, 0);
    CartanCloud c0 = cartan_cloud(sys.gram, b0);
    check_eq_u64(c0.points.size(), 0, "R=0 cloud has empty statistics");
    check_eq_u64(c0.ball_size, 1, "R=0 cloud metadata retains the identity");

    WordBall b = ball(sys, 5);
    CartanCloud c = cartan_cloud(sys.gram, b);
    check_eq_u64(c.points.size(), b.size() - 1, "#cloud = #ball - 1");
    check_eq_u64(c.failures.size(), 0, "no projection failures");
    double worst = 0.0;
    for (const auto& p : c.points) worst = std::max(worst, std::fabs(p.v2));
    check(worst < 1e-8, "embedded SO(n,1) system: |alpha2(mu)| < 1e-8 over the cloud");

    std::string path = "/tmp/conelab_test_cloud.csv";
    save_cloud_csv(c, path);
    CartanCloud r = load_cloud_csv(path);
    check_eq_u64(r.points.size(), c.points.size(), "cloud csv round trip points");
    check(r.radius == c.radius && r.ball_size == c.ball_size && r.gen_hash == c.gen_hash,
          "cloud csv round trip metadata");
    check_close(r.points[7].v1, c.points[7].v1, 0, "cloud csv exact double round trip");
}

} // namespace

int main() {
    return run({
        {"load bundled systems", test_load},
        {"load error paths", test_load_errors},
        {"ball basics and free counts", test_ball_basics},
        {"sl2z layers vs direct oracle", test_sl2z_against_oracle},
        {"thread determinism", test_determinism},
        {"group closure", test_group_closure},
        {"memory budget", test_budget},
        {"ball file round trip", test_ball_file_roundtrip},
        {"cartan cloud", test_cloud},
    });
}
