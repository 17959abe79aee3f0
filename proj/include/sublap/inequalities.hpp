#pragma once

#include <string>
#include <vector>

#include "sublap/green.hpp"

namespace sublap {

/// Signed slack of a pointwise inequality: min over nodes of
/// (majorant - minorant). Nonnegative means the inequality holds.
struct MarginReport {
    double margin = 0.0;
    double scale = 0.0;  // natural size used to normalize tolerances
    bool passes(double tol) const { return margin >= -tol * scale; }
};

/// Thrown by the lower-bound check when the input fails the
/// supersolution hypothesis u >= G[u^q domega].
class hypothesis_violation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Iterated potential inequality: G[omega]^s <= s G[G[omega]^{s-1} domega]
/// for s >= 1. Margin is min over nodes of the difference; scale is
/// max G[omega]^s. Exact for the discrete kernel.
MarginReport check_iterated_inequality(const GreenOperator& G, const GridMeasure& omega, double s);

/// Supersolution lower bound: u >= (1-q)^{1/(1-q)} G[omega]^{1/(1-q)}
/// under the hypothesis u >= G[u^q domega] (verified first; violations
/// beyond hypothesis_tol * ||u||_inf throw hypothesis_violation).
MarginReport check_lower_bound(const GreenOperator& G, const GridMeasure& omega,
                               const GridFunction& u, double q, double hypothesis_tol = 1e-10);

/// (sum_j v(x_j)^gamma m_j)^{1/gamma} with fixed summation order.
double lgamma_norm(const GridFunction& v, const GridMeasure& omega, double gamma);
double lgamma_norm(const std::vector<double>& v, const GridMeasure& omega, double gamma);

/// Exponent convention for the finite-energy threshold study: the
/// source statement displays (gamma+q)/(1+q) while its forward proof
/// direction uses (gamma+q)/(1-q); only the latter reproduces the
/// threshold (2 gamma + 1 + q)/(gamma + 1), so Proof is the default.
enum class ExponentMode { Proof, Statement };

double finite_energy_exponent(double q, double gamma, ExponentMode mode);
double finite_energy_alpha_star(double q, double gamma);

struct ThresholdRow {
    double alpha = 0.0;
    std::vector<double> J;       // one value per refinement level
    std::vector<double> ratios;  // J(h/2)/J(h), finer over coarser
    std::string classification;  // "bounded" | "diverging" | "inconclusive"
};

struct ThresholdTable {
    double q = 0.0, gamma = 0.0, p = 0.0, alpha_star = 0.0;
    ExponentMode mode = ExponentMode::Proof;
    std::vector<double> h_levels;
    std::vector<ThresholdRow> rows;
};

/// J(h) = sum_j G[mu_alpha](x_j)^p m_j across >= 3 refinements of the
/// given shape. Classification: "bounded" when the finest ratio is
/// <= 1.15; "diverging" when every ratio is >= 1.25; otherwise
/// "inconclusive". Only the h-scaling of the ratios separates the two:
/// at fixed h every discrete sum is finite.
ThresholdTable finite_energy_threshold_sweep(const Shape& shape, double h0, int levels, double q,
                                             double gamma, const std::vector<double>& alphas,
                                             ExponentMode mode = ExponentMode::Proof);

}  // namespace sublap
