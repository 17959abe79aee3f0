#pragma once

#include <optional>
#include <vector>

#include "sublap/green.hpp"

namespace sublap {

/// Kato modulus of a measure: K(r) = sup_x of the Green potential of
/// the measure restricted to the open ball B(x,r); the center-uniform
/// variant K_c takes the supremum over ball centers in the closure
/// before the supremum over x.
struct KatoReport {
    std::vector<double> radii;
    std::vector<double> modulus;         // K(r)
    std::vector<double> center_modulus;  // K_c(r); empty when skipped
    bool has_center_modulus = false;
    double sup_norm = 0.0;  // max_x of the full-ball sum; equals K(diam)
    std::optional<double> slope;  // log-log fit over [4h, diam/4]
    double intercept = 0.0;
    std::size_t slope_points = 0;
    bool exact_supremum = true;  // false when x was sampled (node cap)
};

struct KatoOptions {
    /// Geometric ratio of the default radius grid (from 2h up to diam).
    double radius_ratio = 1.4142135623730951;
    /// Compute the center-uniform modulus when the dense matrix is
    /// available and the interior count stays below this cap.
    std::size_t center_modulus_cap = 1500;
    /// Above this interior count, suprema over x fall back to a strided
    /// sample and the report is flagged as a lower bound.
    std::size_t exact_cap = 50000;
    std::size_t block = 256;
    int jobs = 1;
};

std::vector<double> default_kato_radii(const GridDomain& domain, double ratio = 1.4142135623730951);

KatoReport kato_modulus(const GreenOperator& G, const GridMeasure& omega,
                        const std::vector<double>& radii, const KatoOptions& options = {});

/// Least-squares slope of log K vs log r restricted to radii in
/// [4h, diam/4] with K > 0; nullopt when fewer than two points remain.
std::optional<double> fit_kato_slope(const GridDomain& domain, const std::vector<double>& radii,
                                     const std::vector<double>& modulus, double* intercept = nullptr,
                                     std::size_t* points = nullptr);

/// One row of the dist^(-alpha) Kato sweep.
struct KatoSweepRow {
    double alpha = 0.0;
    std::optional<double> slope;
    bool pass = false;        // slope > 0: the modulus decays to zero
    bool borderline = false;  // slope below the documented margin 0.35
    double alpha_threshold = 0.0;  // 1 + beta
    bool below_threshold = false;  // alpha < 1 + beta
};

struct KatoSweep {
    double beta = 1.0;
    std::vector<KatoSweepRow> rows;
};

/// Sweeps mu_alpha over the given exponents and classifies each by the
/// fitted modulus slope, compared against the alpha < 1 + beta range.
/// `beta` defaults to 1 (C^{1,1} boundary); pass a fitted value for
/// corner domains. The borderline margin 0.35 is a documented choice,
/// calibrated so exponents close to the Kato failure edge are flagged
/// at desk resolutions.
KatoSweep kato_threshold_sweep(const GreenOperator& G, const std::vector<double>& alphas,
                               double beta = 1.0, const KatoOptions& options = {});

/// Empirical boundary-decay exponent of the kernel: slope of
/// log g(x, y0) against log delta(x) for x near the boundary and y0 in
/// the bulk. Close to 1 on smooth domains; reported, never asserted,
/// for corner domains.
double fit_boundary_decay_exponent(const GreenOperator& G);

/// Discrete modulus of continuity of G[omega]: the largest jump of the
/// potential across a single stencil arm (boundary arms compare with
/// zero). Shrinks under refinement exactly when the potential stays
/// continuous in the limit.
double continuity_modulus(const GreenOperator& G, const GridMeasure& omega);

}  // namespace sublap
