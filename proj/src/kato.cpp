#include "sublap/kato.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace sublap {

namespace {

double sq_dist(const Point& a, const Point& b, int d) {
    double s = 0;
    for (int k = 0; k < d; ++k) {
        const double t = a[k] - b[k];
        s += t * t;
    }
    return s;
}

}  // namespace

std::vector<double> default_kato_radii(const GridDomain& domain, double ratio) {
    std::vector<double> radii;
    const double diam = domain.diameter();
    for (double r = 2.0 * domain.spacing(); r < diam; r *= ratio) radii.push_back(r);
    radii.push_back(diam);
    return radii;
}

KatoReport kato_modulus(const GreenOperator& G, const GridMeasure& omega,
                        const std::vector<double>& radii, const KatoOptions& options) {
    const GridDomain& dom = G.domain();
    const int d = dom.dimension();
    const std::size_t n = G.size();
    if (omega.size() != n) throw std::invalid_argument("measure does not match operator domain");

    KatoReport rep;
    rep.radii = radii;
    std::sort(rep.radii.begin(), rep.radii.end());
    const std::size_t nr = rep.radii.size();
    rep.modulus.assign(nr, 0.0);

    // Suprema over evaluation points x; strided sample above the cap.
    std::vector<std::size_t> xs;
    const std::size_t stride = n > options.exact_cap ? (n + options.exact_cap - 1) / options.exact_cap : 1;
    rep.exact_supremum = stride == 1;
    for (std::size_t i = 0; i < n; i += stride) xs.push_back(i);

    // Stream over blocks of Green columns g(.,x); by symmetry these are
    // the rows needed for the ball sums at each x.
    const std::size_t block = std::max<std::size_t>(1, options.block);
    std::vector<double> full_sum_max{0.0};
    for (std::size_t b0 = 0; b0 < xs.size(); b0 += block) {
        const std::size_t b1 = std::min(xs.size(), b0 + block);
        std::vector<std::size_t> blk(xs.begin() + static_cast<std::ptrdiff_t>(b0),
                                     xs.begin() + static_cast<std::ptrdiff_t>(b1));
        Eigen::MatrixXd cols = G.green_columns(blk);

        const int jobs = std::max(1, options.jobs);
        std::vector<std::vector<double>> part_mod(static_cast<std::size_t>(jobs),
                                                  std::vector<double>(nr, 0.0));
        std::vector<double> part_full(static_cast<std::size_t>(jobs), 0.0);
        auto work = [&](int t) {
            std::vector<double> bins(nr + 1);
            for (std::size_t k = static_cast<std::size_t>(t); k < blk.size();
                 k += static_cast<std::size_t>(jobs)) {
                std::fill(bins.begin(), bins.end(), 0.0);
                const Point& x = dom.interior_node(blk[k]);
                for (std::size_t y = 0; y < n; ++y) {
                    const double m = omega.mass(y);
                    if (m == 0.0) continue;
                    const double dist = std::sqrt(sq_dist(x, dom.interior_node(y), d));
                    auto it = std::upper_bound(rep.radii.begin(), rep.radii.end(), dist);
                    bins[static_cast<std::size_t>(it - rep.radii.begin())] +=
                        cols(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(k)) * m;
                }
                double acc = 0;
                for (std::size_t r = 0; r < nr; ++r) {
                    acc += bins[r];
                    part_mod[static_cast<std::size_t>(t)][r] =
                        std::max(part_mod[static_cast<std::size_t>(t)][r], acc);
                }
                acc += bins[nr];
                part_full[static_cast<std::size_t>(t)] =
                    std::max(part_full[static_cast<std::size_t>(t)], acc);
            }
        };
        if (jobs == 1) {
            work(0);
        } else {
            std::vector<std::thread> pool;
            for (int t = 0; t < jobs; ++t) pool.emplace_back(work, t);
            for (auto& th : pool) th.join();
        }
        for (int t = 0; t < jobs; ++t) {
            for (std::size_t r = 0; r < nr; ++r)
                rep.modulus[r] = std::max(rep.modulus[r], part_mod[static_cast<std::size_t>(t)][r]);
            full_sum_max[0] = std::max(full_sum_max[0], part_full[static_cast<std::size_t>(t)]);
        }
    }
    rep.sup_norm = full_sum_max[0];

    rep.slope = fit_kato_slope(dom, rep.radii, rep.modulus, &rep.intercept, &rep.slope_points);

    // Center-uniform modulus K_c over closure centers (interior plus
    // boundary nodes), via incremental restricted potentials against
    // the dense matrix. Skipped above the cap.
    if (n <= G.dense_cap() && n <= options.center_modulus_cap) {
        const Eigen::MatrixXd& gd = G.dense();
        const std::size_t nb = dom.boundary_count();
        const std::size_t nz = n + nb;
        const int jobs = std::max(1, options.jobs);
        std::vector<std::vector<double>> part(static_cast<std::size_t>(jobs),
                                              std::vector<double>(nr, 0.0));
        auto work = [&](int t) {
            std::vector<std::pair<double, std::size_t>> order(n);
            Eigen::VectorXd pot(static_cast<Eigen::Index>(n));
            for (std::size_t z = static_cast<std::size_t>(t); z < nz;
                 z += static_cast<std::size_t>(jobs)) {
                const Point& c = z < n ? dom.interior_node(z) : dom.boundary_node(z - n);
                for (std::size_t y = 0; y < n; ++y)
                    order[y] = {std::sqrt(sq_dist(c, dom.interior_node(y), d)), y};
                std::sort(order.begin(), order.end());
                pot.setZero();
                std::size_t y = 0;
                for (std::size_t r = 0; r < nr; ++r) {
                    while (y < n && order[y].first < rep.radii[r]) {
                        const double m = omega.mass(order[y].second);
                        if (m != 0.0)
                            pot += gd.col(static_cast<Eigen::Index>(order[y].second)) * m;
                        ++y;
                    }
                    const double mz = y == 0 ? 0.0 : pot.maxCoeff();
                    part[static_cast<std::size_t>(t)][r] =
                        std::max(part[static_cast<std::size_t>(t)][r], mz);
                }
            }
        };
        if (jobs == 1) {
            work(0);
        } else {
            std::vector<std::thread> pool;
            for (int t = 0; t < jobs; ++t) pool.emplace_back(work, t);
            for (auto& th : pool) th.join();
        }
        rep.center_modulus.assign(nr, 0.0);
        for (int t = 0; t < jobs; ++t)
            for (std::size_t r = 0; r < nr; ++r)
                rep.center_modulus[r] =
                    std::max(rep.center_modulus[r], part[static_cast<std::size_t>(t)][r]);
        rep.has_center_modulus = true;
    }
    return rep;
}

std::optional<double> fit_kato_slope(const GridDomain& domain, const std::vector<double>& radii,
                                     const std::vector<double>& modulus, double* intercept,
                                     std::size_t* points) {
    // Window excludes grid regularization (r < 4h) and saturation
    // near the diameter (r > diam/4).
    const double lo = 4.0 * domain.spacing();
    const double hi = domain.diameter() / 4.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t m = 0;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (radii[i] < lo || radii[i] > hi) continue;
        if (!(modulus[i] > 0)) continue;
        const double X = std::log(radii[i]);
        const double Y = std::log(modulus[i]);
        sx += X;
        sy += Y;
        sxx += X * X;
        sxy += X * Y;
        ++m;
    }
    if (points) *points = m;
    if (m < 2) return std::nullopt;
    const double denom = static_cast<double>(m) * sxx - sx * sx;
    if (denom == 0) return std::nullopt;
    const double slope = (static_cast<double>(m) * sxy - sx * sy) / denom;
    if (intercept) *intercept = (sy - slope * sx) / static_cast<double>(m);
    return slope;
}

KatoSweep kato_threshold_sweep(const GreenOperator& G, const std::vector<double>& alphas,
                               double beta, const KatoOptions& options) {
    KatoSweep sweep;
    sweep.beta = beta;
    const auto radii = default_kato_radii(G.domain(), options.radius_ratio);
    for (double alpha : alphas) {
        GridMeasure mu = dist_alpha_measure(G.domain(), alpha);
        KatoReport rep = kato_modulus(G, mu, radii, options);
        KatoSweepRow row;
        row.alpha = alpha;
        row.slope = rep.slope;
        row.pass = rep.slope.has_value() && *rep.slope > 0.0;
        row.borderline = rep.slope.has_value() && *rep.slope < 0.35;
        row.alpha_threshold = 1.0 + beta;
        row.below_threshold = alpha < row.alpha_threshold;
        sweep.rows.push_back(row);
    }
    return sweep;
}

double fit_boundary_decay_exponent(const GreenOperator& G) {
    const GridDomain& dom = G.domain();
    const int d = dom.dimension();
    const std::size_t n = G.size();
    // Bulk source: the node with the largest boundary distance.
    std::size_t y0 = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (dom.boundary_distance(i) > dom.boundary_distance(y0)) y0 = i;
    Eigen::MatrixXd col = G.green_columns({y0});

    // Fit along an approach to one boundary point, so the tangential
    // variation of the normal derivative does not contaminate the
    // slope. For the L-shape the target is the reentrant corner, the
    // worst case that sets the usable exponent; otherwise any smooth
    // boundary point serves.
    Point target{};
    if (dom.shape().kind == ShapeKind::LShape) {
        target = {0.5, 0.5, 0.0};
    } else if (dom.shape().kind == ShapeKind::Disk || dom.shape().kind == ShapeKind::Ball) {
        target = {dom.shape().radius, 0.0, 0.0};
    } else {
        target = {1.0, 0.5, d == 3 ? 0.5 : 0.0};
    }

    const double diam = dom.diameter();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t m = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dist = std::sqrt(sq_dist(dom.interior_node(i), target, d));
        if (dist > diam / 6.0) continue;
        const double delta = dom.boundary_distance(i);
        if (delta < 2.0 * dom.spacing()) continue;        // above grid scale
        if (delta < 0.4 * dist) continue;                 // central approach cone
        if (std::sqrt(sq_dist(dom.interior_node(i), dom.interior_node(y0), d)) < diam / 4.0)
            continue;  // keep away from the kernel singularity
        const double g = col(static_cast<Eigen::Index>(i), 0);
        if (!(g > 0)) continue;
        const double X = std::log(delta);
        const double Y = std::log(g);
        sx += X;
        sy += Y;
        sxx += X * X;
        sxy += X * Y;
        ++m;
    }
    if (m < 2) return 1.0;
    const double denom = static_cast<double>(m) * sxx - sx * sx;
    if (denom == 0) return 1.0;
    return (static_cast<double>(m) * sxy - sx * sy) / denom;
}

double continuity_modulus(const GreenOperator& G, const GridMeasure& omega) {
    GridFunction w = G.potential(omega);
    const GridDomain& dom = G.domain();
    double worst = 0;
    for (std::size_t i = 0; i < dom.interior_count(); ++i)
        for (int a = 0; a < dom.arms_per_node(); ++a) {
            const StencilArm& arm = dom.arm(i, a);
            const double nb = arm.neighbor_class == NodeClass::Interior
                                  ? w.interior[static_cast<std::size_t>(arm.neighbor)]
                                  : 0.0;
            worst = std::max(worst, std::abs(w.interior[i] - nb));
        }
    return worst;
}

}  // namespace sublap
