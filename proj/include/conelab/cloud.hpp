// Cartan clouds: the multiset of (mu(gamma), |gamma|) harvested from a word
// ball, plus session metadata. This is the input to every asymptotic
// estimator. The identity is excluded from the statistics but counted in
// the metadata.

#pragma once

#include "conelab/ball.hpp"

#include <string>
#include <vector>

namespace conelab {

struct CloudPoint {
    double v1 = 0.0;
    double v2 = 0.0;
    uint32_t len = 0;
};

struct CartanCloud {
    std::vector<CloudPoint> points;      // deterministic order, identity excluded
    std::vector<std::string> failures;   // per-element projection diagnostics
    int n = 0;
    long d = 1;
    int radius = 0;
    uint64_t ball_size = 0;              // including the identity
    std::vector<uint64_t> layer_counts;
    std::string gen_hash;
};

struct CloudOptions {
    int threads = 0;
    ProjectionOptions projection;
    int full_pairing_stride = 64; // every k-th element gets the full spectrum check
};

CartanCloud cartan_cloud(const GramForm& gf, const WordBall& b, const CloudOptions& opt = {});

/// CSV with columns v1,v2,wordlen; metadata in leading '#' comment lines.
void save_cloud_csv(const CartanCloud& c, const std::string& path);
CartanCloud load_cloud_csv(const std::string& path);

/// CSV with columns layer,count.
void save_layer_csv(const std::vector<uint64_t>& layer_counts, const std::string& path);

} // namespace conelab
