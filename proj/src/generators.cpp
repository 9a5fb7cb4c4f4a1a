#include "conelab/generators.hpp"
#include "conelab/sha256.hpp"

#include <json.hpp>
#include <fstream>
#include <sstream>

namespace conelab {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

const char* tag_name(Tag t) {
    switch (t) {
        case Tag::none: return "";
        case Tag::gamma1: return "gamma1";
        case Tag::gamma2: return "gamma2";
        case Tag::delta: return "delta";
        case Tag::stable: return "stable";
    }
    return "";
}

Tag tag_from_string(const std::string& s) {
    if (s.empty()) return Tag::none;
    if (s == "gamma1") return Tag::gamma1;
    if (s == "gamma2") return Tag::gamma2;
    if (s == "delta") return Tag::delta;
    if (s == "stable") return Tag::stable;
    throw generator_error("unknown generator tag '" + s + "'");
}

namespace {

Coloring classify(const std::vector<Generator>& gens) {
    bool g1 = false, g2 = false, del = false, st = false, none = false;
    for (const auto& g : gens) {
        switch (g.tag) {
            case Tag::none: none = true; break;
            case Tag::gamma1: g1 = true; break;
            case Tag::gamma2: g2 = true; break;
            case Tag::delta: del = true; break;
            case Tag::stable: st = true; break;
        }
    }
    if (!g1 && !g2 && !del && !st) return Coloring::untagged;
    if (none) throw generator_error("coloring: mixed tagged and untagged generators");
    if (st) {
        if (g2 || del) throw generator_error("coloring: HNN systems use tags gamma1/stable only");
        if (!g1) throw generator_error("coloring: HNN system without gamma1 generators");
        return Coloring::hnn;
    }
    if (!g1 || !g2) throw generator_error("coloring: amalgam needs both gamma1 and gamma2 generators");
    return Coloring::amalgam;
}

} // namespace

GeneratorSystem make_system(int n, long d,
                            std::vector<std::pair<std::string, ExactMat>> labeled,
                            std::vector<Tag> tags) {
    GeneratorSystem sys;
    sys.n = n;
    sys.d = d;
    sys.gram = gram_form(n, d);
    if (!tags.empty() && tags.size() != labeled.size())
        throw generator_error("make_system: tags/labels size mismatch");

    for (size_t i = 0; i < labeled.size(); ++i) {
        auto& [label, mat] = labeled[i];
        if (label.empty()) throw generator_error("generator with empty label");
        if (mat.rows() != n + 2 || mat.cols() != n + 2)
            throw generator_error("matrix '" + label + "' has wrong dimensions");
        if (!preserves_form(mat, sys.gram.J))
            throw generator_error("matrix '" + label + "' does not preserve the form");
        if (!mat.det().is_one())
            throw generator_error("matrix '" + label + "' has determinant != 1");
        for (const auto& g : sys.gens) {
            if (g.label == label) throw generator_error("duplicate label '" + label + "'");
            if (g.mat == mat) throw generator_error("duplicate matrix for '" + label + "' (same as '" + g.label + "')");
        }
        Generator g;
        g.label = label;
        g.tag = tags.empty() ? Tag::none : tags[i];
        g.mat = std::move(mat);
        sys.gens.push_back(std::move(g));
    }
    if (sys.gens.empty()) throw generator_error("no generators");

    // pair inverses, appending missing ones
    for (size_t i = 0; i < sys.gens.size(); ++i) {
        if (sys.gens[i].inverse >= 0) continue;
        ExactMat inv = so_inverse(sys.gram, sys.gens[i].mat);
        if (inv == sys.gens[i].mat) {
            sys.gens[i].inverse = static_cast<int>(i); // involution
            continue;
        }
        bool found = false;
        for (size_t j = 0; j < sys.gens.size(); ++j) {
            if (j == i || sys.gens[j].inverse >= 0) continue;
            if (sys.gens[j].mat == inv) {
                if (sys.gens[j].tag != sys.gens[i].tag)
                    throw generator_error("inverse pair '" + sys.gens[i].label + "'/'" + sys.gens[j].label +
                                          "' carries mismatched tags");
                sys.gens[i].inverse = static_cast<int>(j);
                sys.gens[j].inverse = static_cast<int>(i);
                found = true;
                break;
            }
        }
        if (!found) {
            Generator g;
            g.label = sys.gens[i].label + "_inv";
            g.tag = sys.gens[i].tag;
            g.mat = std::move(inv);
            g.inverse = static_cast<int>(i);
            sys.gens.push_back(std::move(g));
            sys.gens[i].inverse = static_cast<int>(sys.gens.size() - 1);
        }
    }
    sys.coloring = classify(sys.gens);
    return sys;
}

namespace {

mpz_class json_to_mpz(const json& v, const std::string& where) {
    if (v.is_number_integer()) return mpz_class(static_cast<long>(v.get<int64_t>()));
    if (v.is_string()) return mpz_class(v.get<std::string>());
    throw generator_error("matrix entry component must be integer or string (" + where + ")");
}

} // namespace

GeneratorSystem generators_from_json(const std::string& text, const std::string& hash) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const std::exception& e) {
        throw generator_error(std::string("generator file parse error: ") + e.what());
    }
    if (!doc.contains("n") || !doc.contains("d") || !doc.contains("generators"))
        throw generator_error("generator file missing n / d / generators");
    int n = doc["n"].get<int>();
    long d = doc["d"].get<long>();
    int m = n + 2;
    std::vector<std::pair<std::string, ExactMat>> labeled;
    std::vector<Tag> tags;
    for (const auto& item : doc["generators"]) {
        std::string label = item.at("label").get<std::string>();
        Tag tag = Tag::none;
        if (item.contains("tag")) tag = tag_from_string(item["tag"].get<std::string>());
        const auto& entries = item.at("matrix");
        if (!entries.is_array() || entries.size() != static_cast<size_t>(m * m))
            throw generator_error("matrix '" + label + "': expected " + std::to_string(m * m) + " triples");
        ExactMat mat(m, m, d);
        for (int k = 0; k < m * m; ++k) {
            const auto& t = entries[static_cast<size_t>(k)];
            if (!t.is_array() || t.size() != 3)
                throw generator_error("matrix '" + label + "': entry " + std::to_string(k) + " is not a triple");
            std::string where = label + "[" + std::to_string(k) + "]";
            mat.at(k / m, k % m) = QuadRational(json_to_mpz(t[0], where), json_to_mpz(t[1], where),
                                                json_to_mpz(t[2], where), d);
        }
        labeled.emplace_back(std::move(label), std::move(mat));
        tags.push_back(tag);
    }
    bool any_tag = false;
    for (Tag t : tags) any_tag |= (t != Tag::none);
    GeneratorSystem sys = make_system(n, d, std::move(labeled), any_tag ? tags : std::vector<Tag>{});
    sys.source_hash = hash;
    return sys;
}

GeneratorSystem load_generators(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw generator_error("cannot open generator file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return generators_from_json(ss.str(), sha256_hex(ss.str()));
}

std::string generators_to_json(const GeneratorSystem& sys) {
    ordered_json doc;
    doc["n"] = sys.n;
    doc["d"] = sys.d;
    doc["generators"] = ordered_json::array();
    int m = sys.n + 2;
    for (const auto& g : sys.gens) {
        ordered_json item;
        item["label"] = g.label;
        if (g.tag != Tag::none) item["tag"] = tag_name(g.tag);
        ordered_json entries = ordered_json::array();
        for (int k = 0; k < m * m; ++k) {
            const QuadRational& q = g.mat.at(k / m, k % m);
            entries.push_back({q.num_a().get_str(), q.num_b().get_str(), q.den().get_str()});
        }
        item["matrix"] = std::move(entries);
        doc["generators"].push_back(std::move(item));
    }
    return doc.dump(1);
}

void save_generators(const GeneratorSystem& sys, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw generator_error("cannot write generator file: " + path);
    out << generators_to_json(sys) << '\n';
}

} // namespace conelab
