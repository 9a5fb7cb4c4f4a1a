#include "conelab/pipeline.hpp"
#include "conelab/sha256.hpp"

#include <json.hpp>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace conelab {

using ordered_json = nlohmann::ordered_json;

// ---- config --------------------------------------------------------------------

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw config_error(std::string("config parse error: ") + e.what());
    }
    ExperimentConfig cfg;
    try {
        cfg.system_path = doc.at("system").get<std::string>();
        cfg.radius = doc.at("radius").get<int>();
        if (doc.contains("q_sweep"))
            for (const auto& q : doc["q_sweep"]) cfg.q_sweep.push_back(q.get<std::string>());
        if (doc.contains("directions_deg"))
            for (const auto& a : doc["directions_deg"]) cfg.directions_deg.push_back(a.get<double>());
        if (doc.contains("apertures")) {
            cfg.growth.apertures.clear();
            for (const auto& a : doc["apertures"]) cfg.growth.apertures.push_back(a.get<double>());
        }
        if (doc.contains("grid_points")) cfg.growth.grid_points = doc["grid_points"].get<int>();
        if (doc.contains("min_grid_points")) cfg.growth.min_grid_points = doc["min_grid_points"].get<int>();
        if (doc.contains("min_cone_points")) cfg.growth.min_cone_points = doc["min_cone_points"].get<size_t>();
        if (doc.contains("chamber_tol")) cfg.projection.chamber_tol = doc["chamber_tol"].get<double>();
        if (doc.contains("bigfloat_threshold"))
            cfg.projection.bigfloat_threshold = doc["bigfloat_threshold"].get<double>();
        if (doc.contains("full_pairing_stride")) cfg.full_pairing_stride = doc["full_pairing_stride"].get<int>();
        if (doc.contains("zariski_sample")) cfg.zariski_sample = doc["zariski_sample"].get<size_t>();
        if (doc.contains("memory_budget_bytes")) cfg.memory_budget = doc["memory_budget_bytes"].get<size_t>();
        if (doc.contains("seed")) cfg.seed = doc["seed"].get<uint64_t>();
        if (doc.contains("threads")) cfg.threads = doc["threads"].get<int>();
        if (doc.contains("out")) cfg.out_dir = doc["out"].get<std::string>();
        if (doc.contains("exponent_forms")) {
            for (const auto& f : doc["exponent_forms"]) {
                if (f.is_string())
                    cfg.exponent_forms.push_back({f.get<std::string>(), {}});
                else
                    cfg.exponent_forms.push_back(
                        {"custom", {f.at(0).get<double>(), f.at(1).get<double>()}});
            }
        }
    } catch (const config_error&) {
        throw;
    } catch (const std::exception& e) {
        throw config_error(std::string("config field error: ") + e.what());
    }
    if (cfg.exponent_forms.empty()) cfg.exponent_forms.push_back({"rho", {}});
    bool has_rho = false;
    for (const auto& [name, c] : cfg.exponent_forms) has_rho |= (name == "rho");
    if (!has_rho) cfg.exponent_forms.insert(cfg.exponent_forms.begin(), {"rho", {}});
    if (cfg.directions_deg.empty())
        for (int k = 0; k <= 8; ++k) cfg.directions_deg.push_back(45.0 * k / 8.0);

    if (cfg.radius < 1) throw config_error("config: radius must be >= 1");
    for (const auto& q : cfg.q_sweep) {
        QuadRational v = parse_rational(q, 1);
        if (v.sign() <= 0) throw config_error("config: q values must be positive");
    }
    return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error("cannot open config: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    ExperimentConfig cfg = from_json_text(ss.str());
    if (!std::filesystem::exists(cfg.system_path))
        throw config_error("config: system file does not exist: " + cfg.system_path);
    return cfg;
}

std::string ExperimentConfig::echo_json() const {
    ordered_json doc;
    doc["system"] = system_path;
    doc["radius"] = radius;
    doc["q_sweep"] = q_sweep;
    doc["directions_deg"] = directions_deg;
    doc["apertures"] = growth.apertures;
    doc["grid_points"] = growth.grid_points;
    doc["min_grid_points"] = growth.min_grid_points;
    doc["min_cone_points"] = growth.min_cone_points;
    doc["chamber_tol"] = projection.chamber_tol;
    doc["bigfloat_threshold"] = projection.bigfloat_threshold;
    doc["full_pairing_stride"] = full_pairing_stride;
    doc["zariski_sample"] = zariski_sample;
    doc["memory_budget_bytes"] = memory_budget;
    doc["seed"] = seed;
    doc["threads"] = threads;
    doc["out"] = out_dir;
    ordered_json forms = ordered_json::array();
    for (const auto& [name, c] : exponent_forms) {
        if (name == "rho")
            forms.push_back("rho");
        else
            forms.push_back(c);
    }
    doc["exponent_forms"] = forms;
    return doc.dump(1);
}

// ---- report writing ---------------------------------------------------------------

namespace {

std::string q_prefix(const std::string& q) {
    std::string s = "q_" + q;
    for (char& ch : s)
        if (ch == '/') ch = '_';
    return s;
}

ordered_json fit_json(const LineFit& f) {
    ordered_json j;
    j["slope"] = f.slope;
    j["intercept"] = f.intercept;
    j["stderr"] = f.stderr_slope;
    j["r2"] = f.r2;
    j["points"] = f.points;
    return j;
}

ordered_json report_json(const SystemReport& rep, const CartanCloud& cloud) {
    ordered_json j;
    j["version"] = "conelab-growth v1";
    j["q"] = rep.q_label;
    j["n"] = cloud.n;
    j["d"] = cloud.d;
    j["radius"] = cloud.radius;
    j["ball_size"] = cloud.ball_size;
    j["generators"] = cloud.gen_hash;
    j["projection_failures"] = rep.projection_failures;

    ordered_json cone;
    cone["c_hat"] = rep.cone.c_hat;
    cone["t_min"] = rep.cone.t_min;
    cone["points_used"] = rep.cone.points_used;
    ordered_json ext = ordered_json::array();
    for (const auto& v : rep.cone.extremal) ext.push_back({v.v1, v.v2});
    cone["extremal"] = ext;
    j["cone"] = cone;

    ordered_json dirs = ordered_json::array();
    for (const auto& d : rep.directions) {
        ordered_json dj;
        dj["v"] = {d.v.v1, d.v.v2};
        dj["angle_deg"] = d.v.angle() * 180.0 / M_PI;
        dj["insufficient"] = d.insufficient;
        if (!d.insufficient) {
            dj["psi_hat"] = d.psi_hat;
            dj["aperture"] = d.chosen_aperture;
            dj["fit"] = fit_json(d.fit);
            dj["fit_tolerance"] = d.fit_tolerance;
        }
        ordered_json tables = ordered_json::array();
        for (const auto& t : d.tables) {
            ordered_json tj;
            tj["aperture"] = t.aperture;
            tj["adequate"] = t.adequate;
            tj["points_at_t_comp"] = t.counts.empty() ? 0 : t.counts.back();
            if (t.fit.ok) tj["fit"] = fit_json(t.fit);
            tables.push_back(tj);
        }
        dj["tables"] = tables;
        dirs.push_back(dj);
    }
    j["directions"] = dirs;

    ordered_json exps = ordered_json::array();
    for (const auto& [name, e] : rep.exponents) {
        ordered_json ej;
        ej["form"] = name;
        ej["insufficient"] = e.insufficient;
        ej["t_comp"] = e.t_comp;
        if (!e.insufficient) {
            ej["delta"] = e.delta;
            ej["fit"] = fit_json(e.fit);
            ej["fit_tolerance"] = e.fit_tolerance;
        }
        exps.push_back(ej);
    }
    j["exponents"] = exps;

    ordered_json v;
    v["temperedness"] = rep.verdict.verdict;
    v["margin"] = rep.verdict.margin;
    v["p_hat"] = std::isfinite(rep.verdict.p_hat) ? ordered_json(rep.verdict.p_hat) : ordered_json("inf");
    j["verdict"] = v;

    ordered_json b;
    b["all_pass"] = rep.bounds.all_pass;
    b["max_ratio_to_rho"] = rep.bounds.max_ratio;
    if (rep.bounds.have_v_sigma) b["v_sigma"] = {rep.bounds.v_sigma.v1, rep.bounds.v_sigma.v2};
    ordered_json be = ordered_json::array();
    for (const auto& e : rep.bounds.entries) {
        ordered_json ej;
        ej["v"] = {e.v.v1, e.v.v2};
        ej["skipped"] = e.skipped;
        if (!e.skipped) {
            ej["psi_hat"] = e.psi_hat;
            ej["bound"] = e.bound;
            ej["pass"] = e.pass;
            ej["ratio_to_rho"] = e.ratio_rho;
            ej["tolerance"] = e.tolerance;
        }
        be.push_back(ej);
    }
    b["entries"] = be;
    j["bounds"] = b;

    ordered_json kmo;
    kmo["ok"] = rep.kmo_ok;
    kmo["combined_tolerance"] = rep.kmo_combined_tol;
    j["kmo"] = kmo;

    ordered_json an;
    an["insufficient"] = rep.anosov.insufficient;
    if (!rep.anosov.insufficient) {
        an["fit"] = fit_json(rep.anosov.fit);
        an["degenerate"] = rep.anosov.degenerate;
        an["half_slope_ratio"] = rep.anosov.half_slope_ratio;
    }
    j["anosov"] = an;

    ordered_json z;
    z["rank"] = rep.zariski.rank;
    z["full_dim"] = rep.zariski.full_dim;
    z["samples"] = rep.zariski.samples;
    z["seed"] = rep.zariski.seed;
    j["zariski"] = z;
    return j;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw stage_error("report", "cannot write " + path);
    out << text;
}

void write_directions_csv(const std::string& path, const std::vector<DirectionalGrowth>& dirs) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw stage_error("report", "cannot write " + path);
    std::fprintf(f, "angle_deg,aperture,T,count\n");
    for (const auto& d : dirs) {
        double deg = d.v.angle() * 180.0 / M_PI;
        for (const auto& t : d.tables)
            for (size_t i = 0; i < t.t_grid.size(); ++i)
                std::fprintf(f, "%.17g,%.17g,%.17g,%" PRIu64 "\n", deg, t.aperture, t.t_grid[i],
                             t.counts[i]);
    }
    std::fclose(f);
}

void write_gap_csv(const std::string& path, const CartanCloud& cloud) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw stage_error("report", "cannot write " + path);
    std::fprintf(f, "layer,min_alpha1\n");
    LinearForm a1 = alpha1_form();
    std::vector<double> minima(static_cast<size_t>(cloud.radius) + 1,
                               std::numeric_limits<double>::infinity());
    for (const auto& p : cloud.points) minima[p.len] = std::min(minima[p.len], a1({p.v1, p.v2}));
    for (size_t k = 1; k < minima.size(); ++k)
        if (std::isfinite(minima[k])) std::fprintf(f, "%zu,%.17g\n", k, minima[k]);
    std::fclose(f);
}

} // namespace

RunResult run_experiment(const ExperimentConfig& cfg) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    std::vector<std::pair<std::string, std::string>> outputs; // path, sha256
    auto emit = [&](const std::string& name) {
        std::string path = cfg.out_dir + "/" + name;
        outputs.push_back({name, sha256_file_hex(path)});
    };

    auto write_manifest = [&](const std::string& status, const std::string& failed_stage,
                              const std::string& error, const std::string& input_hash) {
        ordered_json m;
        m["tool"] = "conelab";
        m["version"] = "0.1.0";
        m["status"] = status;
        if (!failed_stage.empty()) {
            m["failed_stage"] = failed_stage;
            m["error"] = error;
        }
        ordered_json inputs = ordered_json::array();
        {
            ordered_json in;
            in["path"] = cfg.system_path;
            in["sha256"] = input_hash;
            inputs.push_back(in);
        }
        m["inputs"] = inputs;
        m["config"] = ordered_json::parse(cfg.echo_json());
        ordered_json outs = ordered_json::array();
        for (const auto& [p, h] : outputs) {
            ordered_json o;
            o["path"] = p;
            o["sha256"] = h;
            outs.push_back(o);
        }
        m["outputs"] = outs;
        write_text(cfg.out_dir + "/manifest.json", m.dump(1) + "\n");
    };

    RunResult result;
    result.out_dir = cfg.out_dir;
    std::string input_hash;
    std::string current_stage = "load";
    try {
        GeneratorSystem base = [&] {
            try {
                return load_generators(cfg.system_path);
            } catch (const std::exception& e) {
                throw stage_error("load", e.what());
            }
        }();
        input_hash = base.source_hash;

        // sweep entries
        std::vector<std::pair<std::string, GeneratorSystem>> entries;
        if (cfg.q_sweep.empty()) {
            entries.push_back({"1", base});
        } else {
            current_stage = "bend";
            for (const auto& qs : cfg.q_sweep) {
                try {
                    QuadRational q = parse_rational(qs, base.d);
                    entries.push_back({qs, q.is_one() ? base : bend(base, q)});
                } catch (const std::exception& e) {
                    throw stage_error("bend", std::string("q = ") + qs + ": " + e.what());
                }
            }
        }

        std::ostringstream summary;
        summary << "system " << cfg.system_path << " (n=" << base.n << ", d=" << base.d
                << ")  radius " << cfg.radius << "\n";

        ordered_json sweep_rows = ordered_json::array();
        std::ostringstream sweep_csv;
        sweep_csv << "q,ball,c_hat,delta_rho,delta_stderr,verdict,p_hat,anosov_slope,anosov_r2,"
                     "gap_degenerate,zariski_rank,zariski_full\n";

        for (auto& [qlab, sys] : entries) {
            std::string prefix = q_prefix(qlab);
            if (!cfg.q_sweep.empty()) {
                current_stage = "bend";
                save_generators(sys, cfg.out_dir + "/" + prefix + "_generators.json");
                emit(prefix + "_generators.json");
            }

            current_stage = "ball";
            WordBall wb = [&] {
                try {
                    BallOptions bo;
                    bo.threads = cfg.threads;
                    bo.memory_budget = cfg.memory_budget;
                    return ball(sys, cfg.radius, bo);
                } catch (const std::exception& e) {
                    throw stage_error("ball", e.what());
                }
            }();
            save_layer_csv(wb.layer_counts, cfg.out_dir + "/" + prefix + "_layers.csv");
            emit(prefix + "_layers.csv");

            current_stage = "project";
            CloudOptions co;
            co.threads = cfg.threads;
            co.projection = cfg.projection;
            co.full_pairing_stride = cfg.full_pairing_stride;
            CartanCloud cloud = cartan_cloud(sys.gram, wb, co);
            save_cloud_csv(cloud, cfg.out_dir + "/" + prefix + "_cloud.csv");
            emit(prefix + "_cloud.csv");
            if (!cloud.failures.empty())
                throw stage_error("project", std::to_string(cloud.failures.size()) +
                                                 " projection failures (first: " + cloud.failures[0] + ")");

            current_stage = "growth";
            SystemReport rep;
            rep.q_label = qlab;
            rep.ball_size = wb.size();
            rep.projection_failures = cloud.failures.size();
            try {
                double tnorm = completeness_radius_norm(cloud);
                rep.cone = limit_cone(cloud, tnorm / 2);
                for (double deg : cfg.directions_deg) {
                    double rad = deg * M_PI / 180.0;
                    rep.directions.push_back(
                        directional_growth(cloud, {std::cos(rad), std::sin(rad)}, cfg.growth));
                }
                for (const auto& [name, coeffs] : cfg.exponent_forms) {
                    LinearForm form = name == "rho" ? rho_form(sys.n)
                                                    : LinearForm{coeffs[0], coeffs[1]};
                    rep.exponents.push_back({name, critical_exponent(cloud, form, cfg.growth)});
                }
                rep.verdict = temperedness_verdict(rep.exponents.front().second);
                rep.bounds = bounds_check(rep.directions, sys.n);
                const ExponentFit& rho_fit = rep.exponents.front().second;
                double max_dir_tol = 0.0;
                for (const auto& d : rep.directions)
                    if (!d.insufficient) max_dir_tol = std::max(max_dir_tol, d.fit_tolerance);
                rep.kmo_combined_tol = rho_fit.fit_tolerance + max_dir_tol;
                rep.kmo_ok =
                    !rep.bounds.have_v_sigma || rep.bounds.max_ratio <= rho_fit.delta + rep.kmo_combined_tol;
            } catch (const stage_error&) {
                throw;
            } catch (const std::exception& e) {
                throw stage_error("growth", e.what());
            }

            current_stage = "anosov";
            rep.anosov = anosov_gap(cloud);
            write_gap_csv(cfg.out_dir + "/" + prefix + "_gap.csv", cloud);
            emit(prefix + "_gap.csv");

            current_stage = "zariski";
            rep.zariski = zariski_span_rank(sys.gram, wb, cfg.zariski_sample, cfg.seed);

            current_stage = "report";
            write_directions_csv(cfg.out_dir + "/" + prefix + "_directions.csv", rep.directions);
            emit(prefix + "_directions.csv");
            write_text(cfg.out_dir + "/" + prefix + "_growth.json",
                       report_json(rep, cloud).dump(1) + "\n");
            emit(prefix + "_growth.json");

            const ExponentFit& rf = rep.exponents.front().second;
            char line[512];
            std::snprintf(line, sizeof(line),
                          "q = %s: ball %" PRIu64 "  delta_rho = %.4f +- %.4f  verdict: %s  p_hat = %.3g"
                          "  c_hat = %.3g  anosov slope = %.4f (r2 %.3f%s)  zariski rank = %d/%d\n",
                          qlab.c_str(), static_cast<uint64_t>(wb.size()), rf.delta,
                          rf.fit.stderr_slope, rep.verdict.verdict.c_str(), rep.verdict.p_hat,
                          rep.cone.c_hat, rep.anosov.fit.slope, rep.anosov.fit.r2,
                          rep.anosov.degenerate ? ", gap-degenerate" : "", rep.zariski.rank,
                          rep.zariski.full_dim);
            summary << line;

            char row[512];
            std::snprintf(row, sizeof(row), "%s,%" PRIu64 ",%.17g,%.17g,%.17g,%s,%.17g,%.17g,%.17g,%d,%d,%d\n",
                          qlab.c_str(), static_cast<uint64_t>(wb.size()), rep.cone.c_hat, rf.delta,
                          rf.fit.stderr_slope, rep.verdict.verdict.c_str(), rep.verdict.p_hat,
                          rep.anosov.fit.slope, rep.anosov.fit.r2, rep.anosov.degenerate ? 1 : 0,
                          rep.zariski.rank, rep.zariski.full_dim);
            sweep_csv << row;

            result.systems.push_back(std::move(rep));
        }

        current_stage = "report";
        if (entries.size() > 1) {
            write_text(cfg.out_dir + "/sweep.csv", sweep_csv.str());
            emit("sweep.csv");
        }
        write_text(cfg.out_dir + "/summary.txt", summary.str());
        emit("summary.txt");
        write_manifest("complete", "", "", input_hash);
    } catch (const stage_error& e) {
        write_manifest("invalid", e.stage, e.what(), input_hash);
        throw;
    } catch (const std::exception& e) {
        write_manifest("invalid", current_stage, e.what(), input_hash);
        throw stage_error(current_stage, e.what());
    }
    return result;
}

} // namespace conelab
