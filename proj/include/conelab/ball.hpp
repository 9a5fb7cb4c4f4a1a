// Word-ball enumeration: breadth-first over the generating set with exact
// deduplication. The canonical serialization of an element doubles as its
// dedup key and as the stored matrix, so interior elements cost one string.
// Layer barriers make recorded lengths minimal, and the merge step is
// order-independent, so ball content does not depend on the thread count.

#pragma once

#include "conelab/generators.hpp"

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace conelab {

struct ball_budget_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BallOptions {
    int threads = 0;                                 // 0 = hardware concurrency
    size_t memory_budget = size_t(8) << 30;          // bytes; exceeded -> ball_budget_error
};

struct WordBall {
    struct Entry {
        uint32_t len = 0;
        std::string word; // letter indices joined by '.', empty for the identity
    };
    // canonical exact serialization -> entry
    std::unordered_map<std::string, Entry> elems;
    std::vector<uint64_t> layer_counts; // layer_counts[k] = #elements of length k
    int radius = 0;
    int n = 0;
    long d = 1;
    std::string gen_hash;

    size_t size() const { return elems.size(); }
    /// Keys in deterministic (sorted) order.
    std::vector<const std::string*> sorted_keys() const;
};

WordBall ball(const GeneratorSystem& sys, int radius, const BallOptions& opt = {});

void save_ball(const WordBall& b, const std::string& path);
WordBall load_ball(const std::string& path);

} // namespace conelab
