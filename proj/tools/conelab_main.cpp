// conelab command line: stage subcommands over files, plus the full
// config-driven pipeline under `report` (alias `run`). Every failure is
// tagged with its pipeline stage and mapped to a distinct exit code.

#include "conelab/pipeline.hpp"
#include "conelab/sha256.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace conelab;
using ordered_json = nlohmann::ordered_json;

namespace {

int stage_code(const std::string& stage) {
    if (stage == "config") return 2;
    if (stage == "load") return 3;
    if (stage == "bend") return 4;
    if (stage == "ball") return 5;
    if (stage == "project") return 6;
    if (stage == "growth") return 7;
    if (stage == "anosov") return 8;
    if (stage == "zariski") return 9;
    return 10; // report / io
}

[[noreturn]] void fail(const std::string& stage, const std::string& msg) {
    std::fprintf(stderr, "error [stage:%s]: %s\n", stage.c_str(), msg.c_str());
    std::exit(stage_code(stage));
}

GrowthOptions growth_defaults() { return {}; }

void write_file(const std::string& path, const std::string& text, const char* stage) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(stage, "cannot write " + path);
    out << text;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"desk-scale estimators for discrete subgroups of SO(n,2)"};
    app.require_subcommand(1);

    // common options, mirrored on each subcommand where they apply
    std::string config_path, out_path, system_path, ball_path, cloud_path;
    int radius = 6, threads = 0;
    uint64_t seed = 7;
    size_t budget = size_t(8) << 30, sample = 300;
    std::vector<std::string> q_values;

    auto* enumerate = app.add_subcommand("enumerate", "word ball of a generator system");
    enumerate->add_option("--system", system_path, "generator file")->required();
    enumerate->add_option("--radius", radius, "ball radius")->required();
    enumerate->add_option("--out", out_path, "ball file to write")->required();
    enumerate->add_option("--threads", threads, "worker threads (0 = auto)");
    enumerate->add_option("--budget", budget, "memory budget in bytes");

    auto* project = app.add_subcommand("project", "Cartan cloud of a ball file");
    project->add_option("--ball", ball_path, "ball file")->required();
    project->add_option("--out", out_path, "cloud csv to write")->required();
    project->add_option("--threads", threads, "worker threads (0 = auto)");

    auto* growth = app.add_subcommand("growth", "growth report from a cloud csv");
    growth->add_option("--cloud", cloud_path, "cloud csv")->required();
    growth->add_option("--out", out_path, "growth json to write")->required();

    auto* bend_cmd = app.add_subcommand("bend", "bend a colored generator system");
    bend_cmd->add_option("--system", system_path, "generator file")->required();
    bend_cmd->add_option("--q", q_values, "rational bending parameter (repeatable)")->required();
    bend_cmd->add_option("--out", out_path, "output directory")->required();

    auto* anosov_cmd = app.add_subcommand("anosov", "word-length gap fit from a cloud csv");
    anosov_cmd->add_option("--cloud", cloud_path, "cloud csv")->required();
    anosov_cmd->add_option("--out", out_path, "gap json to write")->required();

    auto* zariski_cmd = app.add_subcommand("zariski", "adjoint span rank from a ball file");
    zariski_cmd->add_option("--ball", ball_path, "ball file")->required();
    zariski_cmd->add_option("--out", out_path, "rank json to write")->required();
    zariski_cmd->add_option("--sample", sample, "sample size");
    zariski_cmd->add_option("--seed", seed, "sampling seed");

    auto* report = app.add_subcommand("report", "full pipeline from a config file");
    report->add_option("--config", config_path, "experiment config json")->required();
    report->add_option("--out", out_path, "override output directory");
    report->add_option("--threads", threads, "override worker threads");
    auto* run_alias = app.add_subcommand("run", "alias of report");
    run_alias->add_option("--config", config_path, "experiment config json")->required();
    run_alias->add_option("--out", out_path, "override output directory");
    run_alias->add_option("--threads", threads, "override worker threads");

    CLI11_PARSE(app, argc, argv);

    try {
        if (enumerate->parsed()) {
            GeneratorSystem sys = [&] {
                try {
                    return load_generators(system_path);
                } catch (const std::exception& e) {
                    fail("load", e.what());
                }
            }();
            try {
                BallOptions bo;
                bo.threads = threads;
                bo.memory_budget = budget;
                WordBall b = ball(sys, radius, bo);
                save_ball(b, out_path);
                for (size_t k = 0; k < b.layer_counts.size(); ++k)
                    std::printf("layer %zu: %" PRIu64 "\n", k, b.layer_counts[k]);
                std::printf("total %zu -> %s\n", b.size(), out_path.c_str());
            } catch (const std::exception& e) {
                fail("ball", e.what());
            }
        } else if (project->parsed()) {
            try {
                WordBall b = load_ball(ball_path);
                GramForm gf = gram_form(b.n, b.d);
                CloudOptions co;
                co.threads = threads;
                CartanCloud c = cartan_cloud(gf, b, co);
                save_cloud_csv(c, out_path);
                if (!c.failures.empty())
                    fail("project", std::to_string(c.failures.size()) + " projection failures (first: " +
                                        c.failures[0] + ")");
                std::printf("cloud %zu points -> %s\n", c.points.size(), out_path.c_str());
            } catch (const std::exception& e) {
                fail("project", e.what());
            }
        } else if (growth->parsed()) {
            try {
                CartanCloud c = load_cloud_csv(cloud_path);
                GrowthOptions opt = growth_defaults();
                ordered_json j;
                j["cloud"] = cloud_path;
                j["n"] = c.n;
                ExponentFit rho = critical_exponent(c, rho_form(c.n), opt);
                Verdict v = temperedness_verdict(rho);
                j["delta_rho"] = rho.delta;
                j["stderr"] = rho.fit.stderr_slope;
                j["r2"] = rho.fit.r2;
                j["t_comp"] = rho.t_comp;
                j["fit_tolerance"] = rho.fit_tolerance;
                j["verdict"] = v.verdict;
                j["p_hat"] = std::isfinite(v.p_hat) ? ordered_json(v.p_hat) : ordered_json("inf");
                double tnorm = completeness_radius_norm(c);
                ConeEstimate cone = limit_cone(c, tnorm / 2);
                j["c_hat"] = cone.c_hat;
                write_file(out_path, j.dump(1) + "\n", "growth");
                std::printf("delta_rho = %.4f (%s) -> %s\n", rho.delta, v.verdict.c_str(), out_path.c_str());
            } catch (const std::exception& e) {
                fail("growth", e.what());
            }
        } else if (bend_cmd->parsed()) {
            GeneratorSystem sys = [&] {
                try {
                    return load_generators(system_path);
                } catch (const std::exception& e) {
                    fail("load", e.what());
                }
            }();
            try {
                std::filesystem::create_directories(out_path);
                ordered_json manifest;
                manifest["system"] = system_path;
                manifest["system_sha256"] = sys.source_hash;
                ordered_json entries = ordered_json::array();
                for (const auto& qs : q_values) {
                    QuadRational q = parse_rational(qs, sys.d);
                    GeneratorSystem bent = q.is_one() ? sys : bend(sys, q);
                    std::string name = "bent_q_" + qs;
                    for (char& ch : name)
                        if (ch == '/') ch = '_';
                    name += ".json";
                    save_generators(bent, out_path + "/" + name);
                    ordered_json e;
                    e["q"] = qs;
                    e["file"] = name;
                    e["sha256"] = sha256_file_hex(out_path + "/" + name);
                    entries.push_back(e);
                    std::printf("q = %s -> %s\n", qs.c_str(), name.c_str());
                }
                manifest["outputs"] = entries;
                write_file(out_path + "/bend_manifest.json", manifest.dump(1) + "\n", "bend");
            } catch (const std::exception& e) {
                fail("bend", e.what());
            }
        } else if (anosov_cmd->parsed()) {
            try {
                CartanCloud c = load_cloud_csv(cloud_path);
                AnosovFit f = anosov_gap(c);
                ordered_json j;
                j["cloud"] = cloud_path;
                j["insufficient"] = f.insufficient;
                if (!f.insufficient) {
                    j["slope"] = f.fit.slope;
                    j["intercept"] = f.fit.intercept;
                    j["r2"] = f.fit.r2;
                    j["degenerate"] = f.degenerate;
                    j["half_slope_ratio"] = f.half_slope_ratio;
                }
                write_file(out_path, j.dump(1) + "\n", "anosov");
                if (!f.insufficient)
                    std::printf("slope = %.4f r2 = %.3f%s -> %s\n", f.fit.slope, f.fit.r2,
                                f.degenerate ? " (gap-degenerate)" : "", out_path.c_str());
            } catch (const std::exception& e) {
                fail("anosov", e.what());
            }
        } else if (zariski_cmd->parsed()) {
            try {
                WordBall b = load_ball(ball_path);
                GramForm gf = gram_form(b.n, b.d);
                ZariskiRank r = zariski_span_rank(gf, b, sample, seed);
                ordered_json j;
                j["ball"] = ball_path;
                j["rank"] = r.rank;
                j["full_dim"] = r.full_dim;
                j["samples"] = r.samples;
                j["seed"] = r.seed;
                write_file(out_path, j.dump(1) + "\n", "zariski");
                std::printf("rank = %d / %d -> %s\n", r.rank, r.full_dim, out_path.c_str());
            } catch (const std::exception& e) {
                fail("zariski", e.what());
            }
        } else { // report / run
            ExperimentConfig cfg = [&] {
                try {
                    return ExperimentConfig::from_file(config_path);
                } catch (const std::exception& e) {
                    fail("config", e.what());
                }
            }();
            if (!out_path.empty()) cfg.out_dir = out_path;
            if (threads > 0) cfg.threads = threads;
            RunResult res = run_experiment(cfg);
            std::ifstream sum(res.out_dir + "/summary.txt");
            std::printf("%s", std::string(std::istreambuf_iterator<char>(sum), {}).c_str());
        }
    } catch (const stage_error& e) {
        std::fprintf(stderr, "error %s\n", e.what());
        return stage_code(e.stage);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
