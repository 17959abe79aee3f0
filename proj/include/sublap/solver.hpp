#pragma once

#include <string>
#include <vector>

#include "sublap/green.hpp"
#include "sublap/inequalities.hpp"

namespace sublap {

/// Raised when ||f|| + ||G[mu]|| + ||G[nu]|| = 0: the only fixed point
/// is identically zero, which is not a positive solution.
class degenerate_data_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SolverConfig {
    double q = 0.5;  // sublinearity exponent, in (0,1)
    double tol = 1e-10;
    int max_iterations = 10000;
    enum class Direction { Below, Above } direction = Direction::Below;

    void validate() const {
        if (!(q > 0 && q < 1)) throw std::invalid_argument("q must lie in (0,1)");
        if (!(tol > 0)) throw std::invalid_argument("tol must be positive");
        if (max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
    }
};

struct EstimateMargins {
    double lower = 0.0;    // u - [c1 G[mu]^{1/(1-q)} + G[nu] + H_f]
    double upper = 0.0;    // [c2^q G[mu] + G[nu] + H_f] - u
    double uniform = 0.0;  // c2 - ||u||_inf
};

struct SolveReport {
    GridFunction u;
    int iterations = 0;  // number of operator applications
    double residual = 0.0;
    int monotonicity_violations = 0;
    // iterates with sup norm >= 1 must stay below
    // (||G[mu]|| + ||G[nu]|| + ||f||)^{1/(1-q)}
    int uniform_bound_violations = 0;
    double c1 = 0.0, c2 = 0.0;
    EstimateMargins margins;
    double sup_green_mu = 0.0, sup_green_nu = 0.0, sup_f = 0.0;
    double contraction_estimate = 0.0;
    bool slow_convergence_warning = false;
    std::vector<double> step_norms;  // ||u_{j+1} - u_j||_inf trace
};

/// T[u] = G[u^q dmu] + G[nu] + H_f with boundary values f. The power
/// is evaluated only at nodes carrying mu-mass (0^q * 0 = 0).
GridFunction apply_T(const GreenOperator& G, const GridMeasure& mu, const GridMeasure& nu,
                     const BoundaryData& f, const GridFunction& u, double q);

/// Monotone fixed-point iteration. Direction Below starts at
/// u0 = (1-q)^{1/(1-q)} G[mu]^{1/(1-q)} and increases to the minimal
/// solution; Above starts at the constant c2 and decreases. Throws
/// degenerate_data_error when the positivity gate fails and
/// numerical_error when the iteration cap is hit (message carries the
/// last residual).
SolveReport picard_solve(const GreenOperator& G, const GridMeasure& mu, const GridMeasure& nu,
                         const BoundaryData& f, const SolverConfig& cfg);

/// Post-hoc margins of the two-sided estimates for a converged u.
EstimateMargins verify_estimates(const GridFunction& u, const GreenOperator& G,
                                 const GridMeasure& mu, const GridMeasure& nu,
                                 const BoundaryData& f, double q);

struct UniquenessReport {
    SolveReport below;
    SolveReport above;
    double gap = 0.0;               // ||above - below||_inf
    double minimality_margin = 0.0; // max over nodes of (below - above)
    bool discrete_unique = false;   // gap <= 1e-6 ||u||_inf
    double gamma = 0.0;
    double lq_norm_below = 0.0, lq_norm_above = 0.0;      // L^q(dmu)
    double lq1_norm_below = -1.0, lq1_norm_above = -1.0;  // L^{q+1}(dmu); only when f == 0
    double cond_green_mu_norm = 0.0;   // ||G[mu]||_{L^{gamma/(1-q)}(dmu)}
    double cond_linear_norm = 0.0;     // ||G[nu] + H_f||_{L^gamma(dmu)}
    std::string note;
};

/// Runs both Picard directions and reports the two-sided gap together
/// with the integrability quantities of the L^gamma theory. The gap is
/// a uniqueness surrogate only; the note says so.
UniquenessReport uniqueness_experiment(const GreenOperator& G, const GridMeasure& mu,
                                       const GridMeasure& nu, const BoundaryData& f, double q,
                                       double gamma, const SolverConfig& base_cfg = {});

}  // namespace sublap
