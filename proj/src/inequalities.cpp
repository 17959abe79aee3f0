#include "sublap/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sublap {

MarginReport check_iterated_inequality(const GreenOperator& G, const GridMeasure& omega, double s) {
    if (!(s >= 1.0)) throw std::invalid_argument("iterated inequality requires s >= 1");
    const GridDomain& dom = G.domain();
    GridFunction v = G.potential(omega);

    std::vector<double> weight(v.interior.size());
    for (std::size_t j = 0; j < weight.size(); ++j)
        weight[j] = s == 1.0 ? 1.0 : std::pow(v.interior[j], s - 1.0);
    GridFunction w = G.potential(scale_measure(dom, omega, weight));

    MarginReport rep;
    rep.margin = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < v.interior.size(); ++j) {
        const double vs = std::pow(v.interior[j], s);
        rep.margin = std::min(rep.margin, s * w.interior[j] - vs);
        rep.scale = std::max(rep.scale, vs);
    }
    if (v.interior.empty()) rep.margin = 0.0;
    if (rep.scale == 0.0) rep.scale = 1.0;
    return rep;
}

MarginReport check_lower_bound(const GreenOperator& G, const GridMeasure& omega,
                               const GridFunction& u, double q, double hypothesis_tol) {
    if (!(q > 0 && q < 1)) throw std::invalid_argument("q must lie in (0,1)");
    if (!u.nonnegative()) throw std::invalid_argument("u must be nonnegative");
    const GridDomain& dom = G.domain();
    const double sup_u = u.sup_norm();

    // Hypothesis: u is a supersolution of the integral inequality.
    std::vector<double> uq(u.interior.size());
    for (std::size_t j = 0; j < uq.size(); ++j)
        uq[j] = omega.mass(j) > 0 ? std::pow(u.interior[j], q) : 0.0;
    GridFunction Tu = G.potential(scale_measure(dom, omega, uq));
    for (std::size_t j = 0; j < u.interior.size(); ++j)
        if (u.interior[j] < Tu.interior[j] - hypothesis_tol * std::max(1.0, sup_u))
            throw hypothesis_violation("input is not a supersolution: u < G[u^q domega] at node " +
                                       std::to_string(j));

    const double c1 = std::pow(1.0 - q, 1.0 / (1.0 - q));
    GridFunction gm = G.potential(omega);
    MarginReport rep;
    rep.margin = std::numeric_limits<double>::infinity();
    rep.scale = std::max(1e-300, sup_u);
    for (std::size_t j = 0; j < u.interior.size(); ++j) {
        const double bound = c1 * std::pow(gm.interior[j], 1.0 / (1.0 - q));
        rep.margin = std::min(rep.margin, u.interior[j] - bound);
    }
    if (u.interior.empty()) rep.margin = 0.0;
    return rep;
}

double lgamma_norm(const std::vector<double>& v, const GridMeasure& omega, double gamma) {
    if (!(gamma > 0)) throw std::invalid_argument("gamma must be positive");
    if (v.size() != omega.size()) throw std::invalid_argument("function/measure size mismatch");
    double s = 0;
    for (std::size_t j = 0; j < v.size(); ++j) {
        if (!(v[j] >= 0)) throw std::invalid_argument("lgamma_norm requires v >= 0");
        if (omega.mass(j) == 0.0) continue;
        s += std::pow(v[j], gamma) * omega.mass(j);
    }
    return std::pow(s, 1.0 / gamma);
}

double lgamma_norm(const GridFunction& v, const GridMeasure& omega, double gamma) {
    return lgamma_norm(v.interior, omega, gamma);
}

double finite_energy_exponent(double q, double gamma, ExponentMode mode) {
    return mode == ExponentMode::Proof ? (gamma + q) / (1.0 - q) : (gamma + q) / (1.0 + q);
}

double finite_energy_alpha_star(double q, double gamma) {
    return (2.0 * gamma + 1.0 + q) / (gamma + 1.0);
}

ThresholdTable finite_energy_threshold_sweep(const Shape& shape, double h0, int levels, double q,
                                             double gamma, const std::vector<double>& alphas,
                                             ExponentMode mode) {
    if (levels < 3) throw std::invalid_argument("threshold sweep needs at least 3 levels");
    ThresholdTable table;
    table.q = q;
    table.gamma = gamma;
    table.mode = mode;
    table.p = finite_energy_exponent(q, gamma, mode);
    table.alpha_star = finite_energy_alpha_star(q, gamma);
    for (double a : alphas) table.rows.push_back({a, {}, {}, ""});

    double h = h0;
    for (int level = 0; level < levels; ++level, h /= 2.0) {
        GridDomain dom(shape, h);
        GreenOperator G(dom);
        table.h_levels.push_back(h);
        for (auto& row : table.rows) {
            GridMeasure mu = dist_alpha_measure(dom, row.alpha);
            GridFunction pot = G.potential(mu);
            double J = 0;
            for (std::size_t j = 0; j < pot.interior.size(); ++j)
                J += std::pow(pot.interior[j], table.p) * mu.mass(j);
            row.J.push_back(J);
        }
    }

    for (auto& row : table.rows) {
        for (std::size_t k = 1; k < row.J.size(); ++k) row.ratios.push_back(row.J[k] / row.J[k - 1]);
        const double last = row.ratios.back();
        // Divergent sums approach their h-scaling limit from above, so
        // the transient ratios decrease while staying bounded away
        // from 1; bounded sums have ratios falling to 1.
        bool all_big = true;
        for (double r : row.ratios)
            if (r < 1.25) all_big = false;
        if (last <= 1.15)
            row.classification = "bounded";
        else if (all_big)
            row.classification = "diverging";
        else
            row.classification = "inconclusive";
    }
    return table;
}

}  // namespace sublap
