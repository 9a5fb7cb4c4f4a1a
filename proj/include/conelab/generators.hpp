// Labeled symmetric generating sets of subgroups of SO(Q), with the
// amalgam / HNN coloring used by the bending deformation.
//
// File format (JSON):
//   { "n": 2, "d": 1,
//     "generators": [ {"label": "a", "tag": "gamma1",
//                      "matrix": [[a, b, den], ...]}, ... ] }
// Matrices are row-major lists of (n+2)^2 scalar triples; triple components
// may be JSON integers or decimal strings (entries of deep systems overflow
// int64). Inverses are auto-completed when absent; every matrix must
// preserve the form exactly and have determinant 1.

#pragma once

#include "conelab/liegroup.hpp"

#include <string>
#include <vector>

namespace conelab {

enum class Tag { none, gamma1, gamma2, delta, stable };

const char* tag_name(Tag t);
Tag tag_from_string(const std::string& s);

enum class Coloring { untagged, amalgam, hnn };

struct Generator {
    std::string label;
    Tag tag = Tag::none;
    ExactMat mat;
    int inverse = -1; // index of the inverse letter (may be self)
};

struct GeneratorSystem {
    int n = 0;
    long d = 1;
    GramForm gram;
    std::vector<Generator> gens;
    Coloring coloring = Coloring::untagged;
    std::string source_hash; // sha256 of the originating file; empty if built in-process

    const Generator& operator[](size_t i) const { return gens[i]; }
    size_t size() const { return gens.size(); }
};

struct generator_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Validate matrices, pair or complete inverses, classify the coloring.
GeneratorSystem make_system(int n, long d,
                            std::vector<std::pair<std::string, ExactMat>> labeled,
                            std::vector<Tag> tags = {});

GeneratorSystem load_generators(const std::string& path);
void save_generators(const GeneratorSystem& sys, const std::string& path);
/// Canonical JSON serialization (what save_generators writes).
std::string generators_to_json(const GeneratorSystem& sys);
GeneratorSystem generators_from_json(const std::string& text, const std::string& hash);

} // namespace conelab
