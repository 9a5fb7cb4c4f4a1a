#include "conelab/asymptotics.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

namespace conelab {

// ---- limit cone --------------------------------------------------------------

ConeEstimate limit_cone(const CartanCloud& cloud, double t_min) {
    if (t_min <= 0) throw asymptotics_error("limit_cone: t_min must be positive");
    ConeEstimate est;
    est.t_min = t_min;
    std::vector<std::pair<double, ChamberVec>> ratios;
    for (const auto& p : cloud.points) {
        ChamberVec v{p.v1, p.v2};
        if (v.norm() < t_min) continue;
        if (v.v1 <= 0) continue; // chamber: norm >= t_min > 0 forces v1 > 0
        ++est.points_used;
        double r = v.v2 / v.v1;
        est.c_hat = std::max(est.c_hat, r);
        ratios.push_back({r, {v.v1 / v.norm(), v.v2 / v.norm()}});
    }
    if (est.points_used == 0)
        throw asymptotics_error("limit_cone: no points with |mu| >= t_min; enlarge the ball");
    std::sort(ratios.begin(), ratios.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    for (size_t i = 0; i < std::min<size_t>(8, ratios.size()); ++i) est.extremal.push_back(ratios[i].second);
    return est;
}

// ---- completeness radii --------------------------------------------------------

namespace {

double completeness_of(const CartanCloud& cloud, const std::function<double(const CloudPoint&)>& f) {
    bool found = false;
    double t = 0.0;
    for (const auto& p : cloud.points) {
        if (static_cast<int>(p.len) != cloud.radius) continue;
        double v = f(p);
        if (!found || v < t) t = v, found = true;
    }
    if (!found) throw asymptotics_error("completeness radius: no elements in the outermost layer");
    return t;
}

} // namespace

double completeness_radius(const CartanCloud& cloud, const LinearForm& form) {
    return completeness_of(cloud, [&](const CloudPoint& p) { return form({p.v1, p.v2}); });
}

double completeness_radius_norm(const CartanCloud& cloud) {
    return completeness_of(cloud, [](const CloudPoint& p) { return ChamberVec{p.v1, p.v2}.norm(); });
}

// ---- directional growth --------------------------------------------------------

namespace {

// cumulative counts of values <= each grid point
std::vector<uint64_t> cumulative_counts(std::vector<double>& values, const std::vector<double>& grid) {
    std::sort(values.begin(), values.end());
    std::vector<uint64_t> counts;
    counts.reserve(grid.size());
    for (double t : grid) {
        auto it = std::upper_bound(values.begin(), values.end(), t);
        counts.push_back(static_cast<uint64_t>(it - values.begin()));
    }
    return counts;
}

std::vector<double> make_grid(double lo, double hi, int k) {
    std::vector<double> g;
    g.reserve(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i) g.push_back(lo + (hi - lo) * i / (k - 1));
    return g;
}

LineFit fit_log_counts(const std::vector<double>& grid, const std::vector<uint64_t>& counts,
                       int min_points) {
    std::vector<double> xs, ys;
    for (size_t i = 0; i < grid.size(); ++i) {
        if (counts[i] == 0) continue;
        xs.push_back(grid[i]);
        ys.push_back(std::log(static_cast<double>(counts[i])));
    }
    LineFit f = fit_line(xs, ys);
    if (static_cast<int>(xs.size()) < min_points) f.ok = false;
    return f;
}

// window-sensitivity spread: refit on [0.4 T, T] and [0.6 T, T]
double window_spread(const std::vector<double>& values_sorted, double t_comp, int grid_points,
                     int min_points, double main_slope) {
    double spread = 0.0;
    for (double frac : {0.4, 0.6}) {
        std::vector<double> grid = make_grid(frac * t_comp, t_comp, grid_points);
        std::vector<uint64_t> counts;
        for (double t : grid) {
            auto it = std::upper_bound(values_sorted.begin(), values_sorted.end(), t);
            counts.push_back(static_cast<uint64_t>(it - values_sorted.begin()));
        }
        LineFit f = fit_log_counts(grid, counts, min_points);
        if (f.ok) spread = std::max(spread, std::fabs(f.slope - main_slope));
    }
    return spread;
}

} // namespace

DirectionalGrowth directional_growth(const CartanCloud& cloud, const ChamberVec& v,
                                     const GrowthOptions& opt) {
    DirectionalGrowth out;
    double nv = v.norm();
    if (nv <= 0) throw asymptotics_error("directional_growth: zero direction");
    out.v = {v.v1 / nv, v.v2 / nv};
    double theta = out.v.angle();

    double t_comp = completeness_radius_norm(cloud);
    if (t_comp <= 0) {
        out.insufficient = true;
        return out;
    }

    std::vector<double> apertures = opt.apertures;
    std::sort(apertures.begin(), apertures.end(), std::greater<double>());
    std::vector<double> grid = make_grid(t_comp / 2, t_comp, opt.grid_points);

    for (double ap : apertures) {
        CountTable table;
        table.aperture = ap;
        table.t_grid = grid;
        std::vector<double> norms;
        for (const auto& p : cloud.points) {
            ChamberVec w{p.v1, p.v2};
            if (std::fabs(w.angle() - theta) >= ap) continue;
            norms.push_back(w.norm());
        }
        table.counts = cumulative_counts(norms, grid);
        table.fit = fit_log_counts(grid, table.counts, opt.min_grid_points);
        table.adequate = table.fit.ok && !table.counts.empty() &&
                         table.counts.back() >= opt.min_cone_points;
        if (table.adequate) {
            // smallest adequately populated aperture wins (descending order)
            out.insufficient = false;
            out.psi_hat = table.fit.slope;
            out.chosen_aperture = ap;
            out.fit = table.fit;
            std::sort(norms.begin(), norms.end());
            out.fit_tolerance = 2 * table.fit.stderr_slope +
                                window_spread(norms, t_comp, opt.grid_points, opt.min_grid_points,
                                              table.fit.slope);
        }
        out.tables.push_back(std::move(table));
    }
    return out;
}

// ---- critical exponent ----------------------------------------------------------

ExponentFit critical_exponent(const CartanCloud& cloud, const LinearForm& form,
                              const GrowthOptions& opt) {
    ExponentFit out;
    // positivity of the form on the observed cone
    for (const auto& p : cloud.points) {
        ChamberVec w{p.v1, p.v2};
        double nw = w.norm();
        if (nw < 1e-12) continue;
        if (form({w.v1 / nw, w.v2 / nw}) <= 0)
            throw asymptotics_error("critical_exponent: form is not positive on the limit cone");
    }
    out.t_comp = completeness_radius(cloud, form);
    if (out.t_comp <= 0) {
        out.insufficient = true;
        return out;
    }
    std::vector<double> values;
    values.reserve(cloud.points.size());
    for (const auto& p : cloud.points) values.push_back(form({p.v1, p.v2}));
    out.t_grid = make_grid(out.t_comp / 2, out.t_comp, opt.grid_points);
    out.counts = cumulative_counts(values, out.t_grid);
    out.fit = fit_log_counts(out.t_grid, out.counts, opt.min_grid_points);
    if (!out.fit.ok) {
        out.insufficient = true;
        return out;
    }
    out.delta = std::max(0.0, out.fit.slope);
    out.fit_tolerance = 2 * out.fit.stderr_slope +
                        window_spread(values, out.t_comp, opt.grid_points, opt.min_grid_points,
                                      out.fit.slope);
    return out;
}

// ---- verdicts --------------------------------------------------------------------

Verdict temperedness_verdict(const ExponentFit& delta_rho) {
    Verdict v;
    double d = delta_rho.delta;
    v.margin = std::fabs(d - 1.0);
    if (v.margin < 2 * delta_rho.fit.stderr_slope)
        v.verdict = "inconclusive";
    else
        v.verdict = d <= 1.0 ? "tempered" : "non-tempered";
    double eta = std::max(d - 1.0, 0.0);
    v.p_hat = eta >= 1.0 ? std::numeric_limits<double>::infinity() : 2.0 / (1.0 - eta);
    return v;
}

BoundsReport bounds_check(const std::vector<DirectionalGrowth>& dirs, int n, double tolerance_floor) {
    BoundsReport rep;
    LinearForm bound = property_T_form(n);
    LinearForm rho = rho_form(n);
    for (const auto& d : dirs) {
        BoundsEntry e;
        e.v = d.v;
        if (d.insufficient) {
            rep.entries.push_back(e);
            continue;
        }
        e.skipped = false;
        e.psi_hat = d.psi_hat;
        e.bound = bound(d.v);
        e.tolerance = std::max(d.fit_tolerance, tolerance_floor);
        e.pass = e.psi_hat <= e.bound + e.tolerance;
        e.ratio_rho = e.psi_hat / rho(d.v);
        rep.all_pass = rep.all_pass && e.pass;
        if (!rep.have_v_sigma || e.ratio_rho > rep.max_ratio) {
            rep.have_v_sigma = true;
            rep.max_ratio = e.ratio_rho;
            rep.v_sigma = d.v;
        }
        rep.entries.push_back(e);
    }
    return rep;
}

// ---- word-length gap ----------------------------------------------------------

AnosovFit anosov_gap(const CartanCloud& cloud) {
    AnosovFit out;
    LinearForm a1 = alpha1_form();
    std::vector<double> minima(static_cast<size_t>(cloud.radius) + 1,
                               std::numeric_limits<double>::infinity());
    for (const auto& p : cloud.points) {
        double v = a1({p.v1, p.v2});
        minima[p.len] = std::min(minima[p.len], v);
    }
    std::vector<double> xs, ys;
    for (size_t k = 1; k < minima.size(); ++k) {
        if (!std::isfinite(minima[k])) continue;
        xs.push_back(static_cast<double>(k));
        ys.push_back(minima[k]);
    }
    out.layer_minima = ys;
    if (xs.size() < 5) {
        out.insufficient = true;
        return out;
    }
    out.fit = fit_line(xs, ys);

    // sublinearity probe: slope of the late half against the early half
    size_t half = xs.size() / 2;
    std::vector<double> xa(xs.begin(), xs.begin() + half), ya(ys.begin(), ys.begin() + half);
    std::vector<double> xb(xs.begin() + half, xs.end()), yb(ys.begin() + half, ys.end());
    LineFit fa = fit_line(xa, ya), fb = fit_line(xb, yb);
    if (fa.ok && fb.ok && fa.slope > 0)
        out.half_slope_ratio = fb.slope / fa.slope;
    else
        out.half_slope_ratio = 0.0;

    out.degenerate = out.fit.slope <= 0 || out.fit.r2 < 0.9 || out.half_slope_ratio < 0.6;
    return out;
}

// ---- Zariski span rank ----------------------------------------------------------

namespace {

std::vector<const std::string*> sample_keys(const WordBall& b, size_t sample_size, uint64_t seed) {
    std::vector<const std::string*> keys = b.sorted_keys();
    if (keys.size() <= sample_size) return keys;
    std::mt19937_64 rng(seed);
    // deterministic partial Fisher-Yates over the sorted key list
    for (size_t i = 0; i < sample_size; ++i) {
        size_t j = i + static_cast<size_t>(rng() % (keys.size() - i));
        std::swap(keys[i], keys[j]);
    }
    keys.resize(sample_size);
    std::sort(keys.begin(), keys.end(), [](const std::string* a, const std::string* b2) { return *a < *b2; });
    return keys;
}

int numeric_rank(const Eigen::MatrixXd& rows, double rel_threshold) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(rows);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) <= 0) return 0;
    int r = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > rel_threshold * sv(0)) ++r;
    return r;
}

} // namespace

ZariskiRank zariski_span_rank(const GramForm& gf, const WordBall& b, size_t sample_size, uint64_t seed,
                              double rel_threshold) {
    ZariskiRank out;
    int D = gf.dim_so();
    out.full_dim = D * D;
    out.seed = seed;
    auto keys = sample_keys(b, sample_size, seed);
    out.samples = keys.size();
    Eigen::MatrixXd rows(static_cast<Eigen::Index>(keys.size()), D * D);
    int m = gf.dim();
    for (size_t i = 0; i < keys.size(); ++i) {
        ExactMat g = ExactMat::deserialize(*keys[i], m, m, b.d);
        Eigen::MatrixXd ad = adjoint(gf, g);
        Eigen::Map<Eigen::VectorXd> flat(ad.data(), D * D);
        double nrm = flat.norm();
        Eigen::VectorXd unit = nrm > 0 ? Eigen::VectorXd(flat / nrm) : Eigen::VectorXd(flat);
        rows.row(static_cast<Eigen::Index>(i)) = unit.transpose();
    }
    out.rank = numeric_rank(rows, rel_threshold);
    return out;
}

int zariski_rank_exact(const GramForm& gf, const WordBall& b, size_t sample_size, uint64_t seed) {
    auto keys = sample_keys(b, sample_size, seed);
    int D = gf.dim_so();
    int m = gf.dim();
    ExactMat rows(static_cast<int>(keys.size()), D * D, gf.d);
    for (size_t i = 0; i < keys.size(); ++i) {
        ExactMat g = ExactMat::deserialize(*keys[i], m, m, b.d);
        ExactMat ad = adjoint_exact(gf, g);
        for (int r = 0; r < D; ++r)
            for (int c = 0; c < D; ++c) rows.at(static_cast<int>(i), r * D + c) = ad.at(r, c);
    }
    return rows.rank();
}

int ambient_full_span_rank(const GramForm& gf, uint64_t seed, double rel_threshold) {
    // products of exponentials of random so(Q) elements saturate the span of
    // Ad(G); the resulting dimension is the Burnside reference value
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 0.5);
    int D = gf.dim_so();
    std::vector<Eigen::MatrixXd> sob;
    for (const auto& x : so_basis(gf)) sob.push_back(x.embed());
    auto random_g = [&] {
        Eigen::MatrixXd x = Eigen::MatrixXd::Zero(gf.dim(), gf.dim());
        for (const auto& bmat : sob) x += gauss(rng) * bmat;
        // scaling-and-squaring exponential
        int s = 6;
        Eigen::MatrixXd y = x / std::pow(2.0, s);
        Eigen::MatrixXd e = Eigen::MatrixXd::Identity(gf.dim(), gf.dim());
        Eigen::MatrixXd term = e;
        for (int k = 1; k <= 12; ++k) {
            term = term * y / k;
            e += term;
        }
        for (int i = 0; i < s; ++i) e = e * e;
        return e;
    };
    size_t samples = static_cast<size_t>(3 * D * D);
    Eigen::MatrixXd rows(static_cast<Eigen::Index>(samples), D * D);
    for (size_t i = 0; i < samples; ++i) {
        Eigen::MatrixXd g = random_g() * random_g();
        Eigen::MatrixXd ginv = g.inverse();
        Eigen::MatrixXd ad(D, D);
        // numeric adjoint in the same basis as adjoint_exact
        int m = gf.dim();
        Eigen::MatrixXd jd = gf.J.embed();
        Eigen::MatrixXd jinv = gf.Jinv.embed();
        int col = 0;
        Eigen::MatrixXd a = g * jinv;
        for (int p = 0; p < m; ++p)
            for (int q = p + 1; q < m; ++q, ++col) {
                Eigen::MatrixXd y = a.col(p) * ginv.row(q) - a.col(q) * ginv.row(p);
                Eigen::MatrixXd jy = jd * y;
                int row = 0;
                for (int r = 0; r < m; ++r)
                    for (int c = r + 1; c < m; ++c, ++row) ad(row, col) = jy(r, c);
            }
        Eigen::Map<Eigen::VectorXd> flat(ad.data(), D * D);
        double nrm = flat.norm();
        Eigen::VectorXd unit = nrm > 0 ? Eigen::VectorXd(flat / nrm) : Eigen::VectorXd(flat);
        rows.row(static_cast<Eigen::Index>(i)) = unit.transpose();
    }
    return numeric_rank(rows, rel_threshold);
}

} // namespace conelab
