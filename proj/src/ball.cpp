#include "conelab/ball.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <thread>

namespace conelab {

std::vector<const std::string*> WordBall::sorted_keys() const {
    std::vector<const std::string*> keys;
    keys.reserve(elems.size());
    for (const auto& kv : elems) keys.push_back(&kv.first);
    std::sort(keys.begin(), keys.end(), [](const std::string* a, const std::string* b) { return *a < *b; });
    return keys;
}

namespace {

struct Candidate {
    std::string key;
    std::string word;
    bool operator<(const Candidate& o) const {
        if (key != o.key) return key < o.key;
        return word < o.word;
    }
};

} // namespace

WordBall ball(const GeneratorSystem& sys, int radius, const BallOptions& opt) {
    if (radius < 0) throw generator_error("ball: radius must be >= 0");
    int threads = opt.threads > 0 ? opt.threads : static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;
    const int m = sys.n + 2;

    WordBall b;
    b.radius = radius;
    b.n = sys.n;
    b.d = sys.d;
    b.gen_hash = sys.source_hash;

    size_t bytes = 0;
    auto account = [&](size_t key_bytes, size_t word_bytes) {
        bytes += key_bytes + word_bytes + 96; // map node + entry overhead
        if (bytes > opt.memory_budget)
            throw ball_budget_error("ball: memory budget exceeded at " + std::to_string(bytes) +
                                    " bytes; partial result unusable for counting");
    };

    std::string id_key = ExactMat::identity(m, sys.d).serialize();
    account(id_key.size(), 0);
    b.elems.emplace(id_key, WordBall::Entry{0, ""});
    b.layer_counts.push_back(1);

    // frontier keys of the current layer, in deterministic order
    std::vector<std::string> frontier = {id_key};

    const size_t gcount = sys.size();
    for (int layer = 1; layer <= radius; ++layer) {
        std::vector<std::vector<Candidate>> parts(static_cast<size_t>(threads));
        auto worker = [&](int t) {
            std::vector<Candidate>& out = parts[static_cast<size_t>(t)];
            for (size_t i = static_cast<size_t>(t); i < frontier.size(); i += static_cast<size_t>(threads)) {
                const std::string& pkey = frontier[i];
                const WordBall::Entry& pe = b.elems.find(pkey)->second;
                ExactMat pm = ExactMat::deserialize(pkey, m, m, sys.d);
                int last_inverse = -1;
                if (!pe.word.empty()) {
                    size_t dot = pe.word.rfind('.');
                    int last = std::stoi(pe.word.substr(dot == std::string::npos ? 0 : dot + 1));
                    last_inverse = sys.gens[static_cast<size_t>(last)].inverse;
                }
                for (size_t s = 0; s < gcount; ++s) {
                    if (static_cast<int>(s) == last_inverse) continue; // product is the parent
                    ExactMat prod = pm * sys.gens[s].mat;
                    Candidate c;
                    c.key = prod.serialize();
                    c.word = pe.word.empty() ? std::to_string(s) : pe.word + "." + std::to_string(s);
                    out.push_back(std::move(c));
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

        std::vector<Candidate> cands;
        size_t total = 0;
        for (auto& p : parts) total += p.size();
        cands.reserve(total);
        for (auto& p : parts) {
            std::move(p.begin(), p.end(), std::back_inserter(cands));
            p.clear();
            p.shrink_to_fit();
        }
        std::sort(cands.begin(), cands.end());

        std::vector<std::string> next;
        uint64_t added = 0;
        for (size_t i = 0; i < cands.size(); ++i) {
            if (i > 0 && cands[i].key == cands[i - 1].key) continue; // same layer duplicate
            if (b.elems.count(cands[i].key)) continue;               // seen in an earlier layer
            account(cands[i].key.size(), cands[i].word.size());
            next.push_back(cands[i].key);
            b.elems.emplace(std::move(cands[i].key),
                            WordBall::Entry{static_cast<uint32_t>(layer), std::move(cands[i].word)});
            ++added;
        }
        b.layer_counts.push_back(added);
        frontier = std::move(next);
        if (frontier.empty()) break; // finite group exhausted
    }
    while (static_cast<int>(b.layer_counts.size()) <= radius) b.layer_counts.push_back(0);
    return b;
}

void save_ball(const WordBall& b, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw generator_error("cannot write ball file: " + path);
    out << "conelab-ball v1\n";
    out << "n " << b.n << " d " << b.d << " radius " << b.radius << "\n";
    out << "generators " << (b.gen_hash.empty() ? "-" : b.gen_hash) << "\n";
    out << "count " << b.elems.size() << "\n";
    // deterministic order: by (len, key)
    std::vector<std::pair<uint32_t, const std::string*>> order;
    order.reserve(b.elems.size());
    for (const auto& kv : b.elems) order.push_back({kv.second.len, &kv.first});
    std::sort(order.begin(), order.end(), [](const auto& a, const auto& b2) {
        if (a.first != b2.first) return a.first < b2.first;
        return *a.second < *b2.second;
    });
    for (const auto& [len, key] : order) {
        const auto& e = b.elems.find(*key)->second;
        out << len << '\t' << e.word << '\t' << *key << '\n';
    }
}

WordBall load_ball(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw generator_error("cannot open ball file: " + path);
    std::string line;
    if (!std::getline(in, line) || line != "conelab-ball v1")
        throw generator_error("ball file: bad header in " + path);
    WordBall b;
    std::string tok;
    size_t count = 0;
    {
        std::getline(in, line);
        std::istringstream is(line);
        is >> tok >> b.n >> tok >> b.d >> tok >> b.radius;
    }
    {
        std::getline(in, line);
        std::istringstream is(line);
        is >> tok >> b.gen_hash;
        if (b.gen_hash == "-") b.gen_hash.clear();
    }
    {
        std::getline(in, line);
        std::istringstream is(line);
        is >> tok >> count;
    }
    b.layer_counts.assign(static_cast<size_t>(b.radius) + 1, 0);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        size_t t1 = line.find('\t');
        size_t t2 = line.find('\t', t1 + 1);
        if (t1 == std::string::npos || t2 == std::string::npos)
            throw generator_error("ball file: malformed line");
        WordBall::Entry e;
        e.len = static_cast<uint32_t>(std::stoul(line.substr(0, t1)));
        e.word = line.substr(t1 + 1, t2 - t1 - 1);
        if (e.len >= b.layer_counts.size()) b.layer_counts.resize(e.len + 1, 0);
        b.layer_counts[e.len]++;
        b.elems.emplace(line.substr(t2 + 1), std::move(e));
    }
    if (b.elems.size() != count) throw generator_error("ball file: element count mismatch");
    return b;
}

} // namespace conelab
