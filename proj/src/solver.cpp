#include "sublap/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sublap {

namespace {

// Masses of u^q dmu; the power is taken only where mu carries mass.
std::vector<double> power_weights(const GridFunction& u, const GridMeasure& mu, double q) {
    std::vector<double> w(u.interior.size());
    for (std::size_t j = 0; j < w.size(); ++j)
        w[j] = mu.mass(j) > 0 ? std::pow(u.interior[j], q) : 0.0;
    return w;
}

struct Parts {
    GridFunction green_nu;
    GridFunction harmonic;
    double sup_green_mu, sup_green_nu, sup_f;
    GridFunction green_mu;
    double c1, c2;
};

Parts make_parts(const GreenOperator& G, const GridMeasure& mu, const GridMeasure& nu,
                 const BoundaryData& f, double q) {
    Parts p{G.potential(nu), G.harmonic_extension(f), 0, 0, 0, G.potential(mu), 0, 0};
    p.sup_green_mu = std::max(0.0, p.green_mu.max_interior());
    p.sup_green_nu = std::max(0.0, p.green_nu.max_interior());
    p.sup_f = f.sup_norm();
    p.c1 = std::pow(1.0 - q, 1.0 / (1.0 - q));
    const double s = p.sup_green_mu + p.sup_green_nu + p.sup_f;
    p.c2 = std::max(1.0, std::pow(s, 1.0 / (1.0 - q)));
    return p;
}

GridFunction apply_T_with(const GreenOperator& G, const GridMeasure& mu, const Parts& parts,
                          const BoundaryData& f, const GridFunction& u, double q) {
    GridFunction Tu = G.potential(scale_measure(G.domain(), mu, power_weights(u, mu, q)));
    for (std::size_t j = 0; j < Tu.interior.size(); ++j)
        Tu.interior[j] += parts.green_nu.interior[j] + parts.harmonic.interior[j];
    Tu.boundary = f.values;
    return Tu;
}

}  // namespace

GridFunction apply_T(const GreenOperator& G, const GridMeasure& mu, const GridMeasure& nu,
                     const BoundaryData& f, const GridFunction& u, double q) {
    if (!(q > 0 && q < 1)) throw std::invalid_argument("q must lie in (0,1)");
    if (!u.nonnegative()) throw std::invalid_argument("apply_T requires u >= 0");
    Parts parts = make_parts(G, mu, nu, f, q);
    return apply_T_with(G, mu, parts, f, u, q);
}

SolveReport picard_solve(const GreenOperator& G, const GridMeasure& mu, const GridMeasure& nu,
                         const BoundaryData& f, const SolverConfig& cfg) {
    cfg.validate();
    const double q = cfg.q;
    Parts parts = make_parts(G, mu, nu, f, q);

    SolveReport rep;
    rep.c1 = parts.c1;
    rep.c2 = parts.c2;
    rep.sup_green_mu = parts.sup_green_mu;
    rep.sup_green_nu = parts.sup_green_nu;
    rep.sup_f = parts.sup_f;

    if (parts.sup_f + parts.sup_green_mu + parts.sup_green_nu == 0.0)
        throw degenerate_data_error(
            "||f|| + ||G[mu]|| + ||G[nu]|| = 0: no positive solution exists "
            "(the unique fixed point is identically zero)");

    const bool below = cfg.direction == SolverConfig::Direction::Below;
    GridFunction cur = GridFunction::zeros(G.domain());
    if (below) {
        for (std::size_t j = 0; j < cur.interior.size(); ++j)
            cur.interior[j] = parts.c1 * std::pow(parts.green_mu.interior[j], 1.0 / (1.0 - q));
        // boundary starts at zero; iterates carry f from the first step
    } else {
        // T[c2] <= c2: with S = ||G[mu]|| + ||G[nu]|| + ||f|| and
        // c2 = max{1, S^{1/(1-q)}} >= 1 we get
        //   T[c2] <= c2^q ||G[mu]|| + ||G[nu]|| + ||f||
        //         <= c2^q (||G[mu]|| + ||G[nu]|| + ||f||) = c2^q S <= c2^q c2^{1-q} = c2,
        // so the constant c2 is a valid decreasing start.
        cur = GridFunction::constant(G.domain(), parts.c2);
        cur.boundary = f.values;
    }

    const double slack = 1e-12;
    double prev_step = std::numeric_limits<double>::infinity();
    int applications = 0;
    while (true) {
        GridFunction next = apply_T_with(G, mu, parts, f, cur, q);
        ++applications;
        double step = 0;
        const double scale_next = std::max(1.0, next.sup_norm());
        for (std::size_t j = 0; j < cur.interior.size(); ++j) {
            const double d = next.interior[j] - cur.interior[j];
            step = std::max(step, std::abs(d));
            if (below ? d < -slack * scale_next : d > slack * scale_next)
                ++rep.monotonicity_violations;
        }
        rep.step_norms.push_back(step);
        const double sup_next = next.sup_norm();
        if (sup_next >= 1.0) {
            const double cap = std::pow(parts.sup_green_mu + parts.sup_green_nu + parts.sup_f,
                                        1.0 / (1.0 - q));
            if (sup_next > cap * (1.0 + 1e-12)) ++rep.uniform_bound_violations;
        }
        if (std::isfinite(prev_step) && prev_step > 0) {
            rep.contraction_estimate = step / prev_step;
            if (applications > 50 && rep.contraction_estimate > 0.999)
                rep.slow_convergence_warning = true;
        }
        prev_step = step;

        if (step <= cfg.tol * scale_next) {
            // Residual is checked independently of the step criterion.
            GridFunction check = apply_T_with(G, mu, parts, f, next, q);
            ++applications;
            double resid = 0;
            for (std::size_t j = 0; j < next.interior.size(); ++j)
                resid = std::max(resid, std::abs(check.interior[j] - next.interior[j]));
            if (resid <= 2.0 * cfg.tol * std::max(1.0, next.sup_norm())) {
                rep.u = std::move(next);
                rep.residual = resid;
                rep.iterations = applications;
                break;
            }
            cur = std::move(check);
        } else {
            cur = std::move(next);
        }
        if (applications >= cfg.max_iterations)
            throw numerical_error("fixed-point iteration did not converge in " +
                                  std::to_string(cfg.max_iterations) +
                                  " applications; last residual " + std::to_string(prev_step));
    }

    rep.margins = verify_estimates(rep.u, G, mu, nu, f, q);
    return rep;
}

EstimateMargins verify_estimates(const GridFunction& u, const GreenOperator& G,
                                 const GridMeasure& mu, const GridMeasure& nu,
                                 const BoundaryData& f, double q) {
    Parts parts = make_parts(G, mu, nu, f, q);
    EstimateMargins m;
    m.lower = std::numeric_limits<double>::infinity();
    m.upper = std::numeric_limits<double>::infinity();
    const double c2q = std::pow(parts.c2, q);
    for (std::size_t j = 0; j < u.interior.size(); ++j) {
        const double lin = parts.green_nu.interior[j] + parts.harmonic.interior[j];
        const double lower_bound =
            parts.c1 * std::pow(parts.green_mu.interior[j], 1.0 / (1.0 - q)) + lin;
        const double upper_bound = c2q * parts.green_mu.interior[j] + lin;
        m.lower = std::min(m.lower, u.interior[j] - lower_bound);
        m.upper = std::min(m.upper, upper_bound - u.interior[j]);
    }
    if (u.interior.empty()) m.lower = m.upper = 0.0;
    m.uniform = parts.c2 - u.sup_norm();
    return m;
}

UniquenessReport uniqueness_experiment(const GreenOperator& G, const GridMeasure& mu,
                                       const GridMeasure& nu, const BoundaryData& f, double q,
                                       double gamma, const SolverConfig& base_cfg) {
    UniquenessReport rep;
    rep.gamma = gamma;
    SolverConfig cfg = base_cfg;
    cfg.q = q;
    cfg.direction = SolverConfig::Direction::Below;
    rep.below = picard_solve(G, mu, nu, f, cfg);
    cfg.direction = SolverConfig::Direction::Above;
    rep.above = picard_solve(G, mu, nu, f, cfg);

    rep.gap = 0.0;
    rep.minimality_margin = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < rep.below.u.interior.size(); ++j) {
        const double lo = rep.below.u.interior[j], hi = rep.above.u.interior[j];
        rep.gap = std::max(rep.gap, std::abs(hi - lo));
        rep.minimality_margin = std::max(rep.minimality_margin, lo - hi);
    }
    const double sup_u = std::max(rep.below.u.sup_norm(), 1e-300);
    rep.discrete_unique = rep.gap <= 1e-6 * sup_u;

    rep.lq_norm_below = lgamma_norm(rep.below.u, mu, q);
    rep.lq_norm_above = lgamma_norm(rep.above.u, mu, q);
    if (f.sup_norm() == 0.0) {
        rep.lq1_norm_below = lgamma_norm(rep.below.u, mu, q + 1.0);
        rep.lq1_norm_above = lgamma_norm(rep.above.u, mu, q + 1.0);
    }
    GridFunction gmu = G.potential(mu);
    GridFunction lin = G.potential(nu);
    GridFunction hf = G.harmonic_extension(f);
    for (std::size_t j = 0; j < lin.interior.size(); ++j) lin.interior[j] += hf.interior[j];
    rep.cond_green_mu_norm = lgamma_norm(gmu, mu, gamma / (1.0 - q));
    rep.cond_linear_norm = lgamma_norm(lin, mu, gamma);

    rep.note =
        "two-sided gap is a discrete uniqueness surrogate; a gap above tolerance "
        "does not by itself contradict the continuum uniqueness theory";
    return rep;
}

}  // namespace sublap
