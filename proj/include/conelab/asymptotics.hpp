// Asymptotic estimators over Cartan clouds: limit cone, directional growth
// indicator, critical exponents, temperedness / growth-bound verdicts, the
// word-length gap fit, and the adjoint span rank proxy for Zariski density.
//
// Counting beyond the completeness radius T_comp = min{ psi(mu(gamma)) :
// |gamma| = R } undercounts systematically (the ball is a word ball, not a
// norm ball), so every fit lives in [T_comp/2, T_comp]. This guard is exact
// under a uniform lower word-length gap and a heuristic otherwise.

#pragma once

#include "conelab/ball.hpp"
#include "conelab/cloud.hpp"
#include "conelab/fitting.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace conelab {

struct asymptotics_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GrowthOptions {
    std::vector<double> apertures = {0.3, 0.2, 0.1}; // radians, descending
    int grid_points = 12;
    int min_grid_points = 8;     // nonzero counts required for a fit
    size_t min_cone_points = 50; // population needed to trust an aperture
    double cone_slack = 1e-12;   // ConeEstimate invariant slack
};

// ---- limit cone --------------------------------------------------------------

struct ConeEstimate {
    double c_hat = 0.0;                // max v2/v1 beyond t_min
    std::vector<ChamberVec> extremal;  // unit directions of the top ratios
    double t_min = 0.0;
    size_t points_used = 0;
};

/// c_hat = max{ v2/v1 : |mu| >= t_min }; throws if nothing survives the cut.
ConeEstimate limit_cone(const CartanCloud& cloud, double t_min);

// ---- directional growth ------------------------------------------------------

struct CountTable {
    double aperture = 0.0;
    std::vector<double> t_grid;
    std::vector<uint64_t> counts;
    LineFit fit;           // log counts vs T over nonzero entries
    bool adequate = false; // enough population and grid coverage
};

struct DirectionalGrowth {
    ChamberVec v;
    std::vector<CountTable> tables; // one per aperture, descending
    bool insufficient = true;
    double psi_hat = 0.0;
    double chosen_aperture = 0.0;
    LineFit fit;
    double fit_tolerance = 0.0; // 2 stderr + window sensitivity
};

/// psi-hat along unit direction v: least-squares slope of log N_C(T) vs T,
/// evaluated at the smallest adequately populated aperture.
DirectionalGrowth directional_growth(const CartanCloud& cloud, const ChamberVec& v,
                                     const GrowthOptions& opt = {});

/// Completeness radius for a functional of the chamber vector.
double completeness_radius(const CartanCloud& cloud, const LinearForm& form);
double completeness_radius_norm(const CartanCloud& cloud);

// ---- critical exponent -------------------------------------------------------

struct ExponentFit {
    double delta = 0.0;
    LineFit fit;
    double t_comp = 0.0;
    double fit_tolerance = 0.0; // 2 stderr + window sensitivity spread
    std::vector<double> t_grid;
    std::vector<uint64_t> counts;
    bool insufficient = false;
};

/// Abscissa estimate for sum exp(-s psi(mu(gamma))): slope of log #{psi <= T}
/// over [T_comp/2, T_comp]. Throws if the form is not positive on the cone.
ExponentFit critical_exponent(const CartanCloud& cloud, const LinearForm& form,
                              const GrowthOptions& opt = {});

// ---- verdicts -----------------------------------------------------------------

struct Verdict {
    std::string verdict; // "tempered" | "non-tempered" | "inconclusive"
    double margin = 0.0; // |delta_rho - 1|
    double p_hat = 2.0;  // almost-L^p integrability exponent
};

/// tempered iff delta_rho <= 1; inconclusive when |delta_rho - 1| < 2 stderr;
/// p_hat = 2/(1 - eta) with eta = max(delta_rho - 1, 0).
Verdict temperedness_verdict(const ExponentFit& delta_rho);

struct BoundsEntry {
    ChamberVec v;
    bool skipped = true;
    bool pass = false;
    double psi_hat = 0.0;
    double bound = 0.0;    // (n-1) v1 + (n-2) v2
    double ratio_rho = 0.0;
    double tolerance = 0.0;
};

struct BoundsReport {
    std::vector<BoundsEntry> entries;
    bool all_pass = true;
    ChamberVec v_sigma;    // argmax of psi-hat/rho, first maximum in direction order
    double max_ratio = 0.0;
    bool have_v_sigma = false;
};

/// Check every sampled direction against the non-lattice growth bound and
/// locate the direction maximizing psi-hat/rho.
BoundsReport bounds_check(const std::vector<DirectionalGrowth>& dirs, int n,
                          double tolerance_floor = 0.1);

// ---- word-length gap ----------------------------------------------------------

struct AnosovFit {
    LineFit fit; // per-layer minima of alpha1(mu) vs layer
    std::vector<double> layer_minima;
    bool insufficient = false;
    bool degenerate = false;       // sublinear minima (unipotent-style)
    double half_slope_ratio = 1.0; // late-half slope over early-half slope
};

/// Fit min over layer of alpha1(mu(gamma)) against |gamma|. Positive slope
/// with high R^2 is evidence of {alpha1}-Anosov behavior; sublinear minima
/// are flagged as gap-degenerate.
AnosovFit anosov_gap(const CartanCloud& cloud);

// ---- Zariski span rank ----------------------------------------------------------

struct ZariskiRank {
    int rank = 0;
    int full_dim = 0; // D^2
    size_t samples = 0;
    uint64_t seed = 0;
};

/// Numerical rank of span{ Ad(gamma) } over a deterministic sample of ball
/// elements (rows normalized; threshold relative to the top singular value).
ZariskiRank zariski_span_rank(const GramForm& gf, const WordBall& b, size_t sample_size,
                              uint64_t seed, double rel_threshold = 1e-8);

/// Exact-rank oracle over the same kind of sample (no float thresholds).
int zariski_rank_exact(const GramForm& gf, const WordBall& b, size_t sample_size, uint64_t seed);

/// Reference full span dimension of the ambient group, from random Lie
/// algebra data (Burnside-style saturation): D^2 when Ad is irreducible.
int ambient_full_span_rank(const GramForm& gf, uint64_t seed = 1, double rel_threshold = 1e-8);

} // namespace conelab
