#include "conelab/cloud.hpp"

#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <thread>

namespace conelab {

CartanCloud cartan_cloud(const GramForm& gf, const WordBall& b, const CloudOptions& opt) {
    CartanCloud c;
    c.n = b.n;
    c.d = b.d;
    c.radius = b.radius;
    c.ball_size = b.size();
    c.layer_counts = b.layer_counts;
    c.gen_hash = b.gen_hash;

    std::vector<const std::string*> keys = b.sorted_keys();
    const int m = gf.dim();
    struct Slot {
        CloudPoint p;
        uint8_t ok = 0;
        std::string diag;
    };
    std::vector<Slot> slots(keys.size());

    int threads = opt.threads > 0 ? opt.threads : static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;
    auto worker = [&](int t) {
        for (size_t i = static_cast<size_t>(t); i < keys.size(); i += static_cast<size_t>(threads)) {
            const auto& entry = b.elems.find(*keys[i])->second;
            if (entry.len == 0) {
                slots[i].ok = 2; // identity: metadata only
                continue;
            }
            ExactMat g = ExactMat::deserialize(*keys[i], m, m, b.d);
            ProjectionOptions po = opt.projection;
            if (opt.full_pairing_stride > 0 && i % static_cast<size_t>(opt.full_pairing_stride) == 0)
                po.full_pairing = true;
            Projection pr = cartan_projection(gf, g, po);
            if (pr.ok()) {
                slots[i].ok = 1;
                slots[i].p = {pr.v.v1, pr.v.v2, entry.len};
            } else {
                char buf[160];
                std::snprintf(buf, sizeof(buf), "len=%u status=%s residual=%.3g", entry.len,
                              to_string(pr.status), pr.residual);
                slots[i].diag = buf;
            }
        }
    };
    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t);
        for (auto& th : pool) th.join();
    }

    c.points.reserve(keys.size());
    for (size_t i = 0; i < slots.size(); ++i) {
        if (slots[i].ok == 1)
            c.points.push_back(slots[i].p);
        else if (slots[i].ok == 0)
            c.failures.push_back(slots[i].diag);
    }
    return c;
}

void save_cloud_csv(const CartanCloud& c, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw generator_error("cannot write cloud file: " + path);
    std::fprintf(f, "# conelab-cloud v1\n");
    std::fprintf(f, "# n %d d %ld radius %d ball %" PRIu64 " generators %s\n", c.n, c.d, c.radius,
                 c.ball_size, c.gen_hash.empty() ? "-" : c.gen_hash.c_str());
    for (size_t k = 0; k < c.layer_counts.size(); ++k)
        std::fprintf(f, "# layer %zu %" PRIu64 "\n", k, c.layer_counts[k]);
    std::fprintf(f, "# failures %zu\n", c.failures.size());
    std::fprintf(f, "v1,v2,wordlen\n");
    for (const auto& p : c.points) std::fprintf(f, "%.17g,%.17g,%u\n", p.v1, p.v2, p.len);
    std::fclose(f);
}

CartanCloud load_cloud_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw generator_error("cannot open cloud file: " + path);
    CartanCloud c;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream is(line.substr(1));
            std::string key;
            is >> key;
            if (key == "n") {
                std::string tok;
                is.clear();
                is.str(line.substr(1));
                is >> tok >> c.n >> tok >> c.d >> tok >> c.radius >> tok >> c.ball_size >> tok >> c.gen_hash;
                if (c.gen_hash == "-") c.gen_hash.clear();
            } else if (key == "layer") {
                size_t idx;
                uint64_t cnt;
                is >> idx >> cnt;
                if (c.layer_counts.size() <= idx) c.layer_counts.resize(idx + 1, 0);
                c.layer_counts[idx] = cnt;
            }
            continue;
        }
        if (!header_seen) { // column header
            header_seen = true;
            continue;
        }
        CloudPoint p;
        if (std::sscanf(line.c_str(), "%lg,%lg,%u", &p.v1, &p.v2, &p.len) == 3) c.points.push_back(p);
    }
    return c;
}

void save_layer_csv(const std::vector<uint64_t>& layer_counts, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw generator_error("cannot write layer file: " + path);
    std::fprintf(f, "layer,count\n");
    for (size_t k = 0; k < layer_counts.size(); ++k)
        std::fprintf(f, "%zu,%" PRIu64 "\n", k, layer_counts[k]);
    std::fclose(f);
}

} // namespace conelab
