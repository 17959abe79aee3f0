#include <doctest.h>

#include <cmath>

#include "sublap/kato.hpp"
#include "sublap/rng.hpp"

using namespace sublap;

TEST_SUITE_BEGIN("kato");

namespace {

// brute-force oracle: literal double loop over (x, r), no binning
std::vector<double> naive_modulus(const GreenOperator& G, const GridMeasure& omega,
                                  const std::vector<double>& radii) {
    const GridDomain& dom = G.domain();
    const int d = dom.dimension();
    const Eigen::MatrixXd& g = G.dense();
    std::vector<double> K(radii.size(), 0.0);
    for (std::size_t x = 0; x < dom.interior_count(); ++x)
        for (std::size_t r = 0; r < radii.size(); ++r) {
            double s = 0;
            for (std::size_t y = 0; y < dom.interior_count(); ++y) {
                double dist2 = 0;
                for (int a = 0; a < d; ++a) {
                    const double t = dom.interior_node(x)[a] - dom.interior_node(y)[a];
                    dist2 += t * t;
                }
                if (std::sqrt(dist2) < radii[r])
                    s += g(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) *
                         omega.mass(y);
            }
            K[r] = std::max(K[r], s);
        }
    return K;
}

}  // namespace

TEST_CASE("streamed modulus matches the brute-force oracle") {
    GridDomain dom(Shape{ShapeKind::Square, 1.0}, 1.0 / 12);
    GreenOperator G(dom);
    Rng rng(19);
    std::vector<double> m(dom.interior_count());
    for (auto& v : m) v = rng.u01();
    GridMeasure omega(dom, m);
    const auto radii = default_kato_radii(dom);
    KatoOptions opts;
    opts.block = 7;  // force several streaming blocks
    KatoReport rep = kato_modulus(G, omega, radii, opts);
    const auto oracle = naive_modulus(G, omega, radii);
    REQUIRE(rep.modulus.size() == oracle.size());
    for (std::size_t r = 0; r < oracle.size(); ++r)
        CHECK(rep.modulus[r] == doctest::Approx(oracle[r]).epsilon(1e-12));
}

TEST_CASE("zero measure: modulus identically zero, slope undefined") {
    GridDomain dom(Shape{ShapeKind::Square, 1.0}, 0.125);
    GreenOperator G(dom);
    KatoReport rep = kato_modulus(G, zero_measure(dom), default_kato_radii(dom));
    for (double k : rep.modulus) CHECK(k == 0.0);
    CHECK(!rep.slope.has_value());
    CHECK(rep.sup_norm == 0.0);
}

TEST_CASE("modulus is nondecreasing and tops out at the sup norm") {
    GridDomain dom(Shape{ShapeKind::Disk, 1.0}, 1.0 / 16);
    GreenOperator G(dom);
    GridMeasure mu = dist_alpha_measure(dom, 0.5);
    KatoReport rep = kato_modulus(G, mu, default_kato_radii(dom));
    for (std::size_t r = 1; r < rep.modulus.size(); ++r)
        CHECK(rep.modulus[r] >= rep.modulus[r - 1]);
    CHECK(rep.modulus.back() == rep.sup_norm);  // full ball at r = diam, exactly
    // cross-check the sup norm against the potential solve
    auto pot = G.potential(mu);
    CHECK(rep.sup_norm == doctest::Approx(pot.max_interior()).epsilon(1e-11));
}

TEST_CASE("Lebesgue modulus on the square scales nearly like r^2") {
    GridDomain dom(Shape{ShapeKind::Square, 1.0}, 1.0 / 32);
    GreenOperator G(dom);
    auto lebesgue = measure_from_density(dom, [](const Point&) { return 1.0; });
    KatoOptions opts;
    opts.center_modulus_cap = 0;
    KatoReport rep = kato_modulus(G, lebesgue, default_kato_radii(dom), opts);
    REQUIRE(rep.slope.has_value());
    // the d=2 kernel is logarithmic, so the fitted exponent sits
    // visibly below the r^2 volume scaling at desk resolutions;
    // measured 1.38 at h=1/32 and 1.48 at h=1/64
    CHECK(*rep.slope > 1.2);
    CHECK(*rep.slope < 2.2);
}

TEST_CASE("center-uniform modulus brackets the pointwise modulus") {
    GridDomain dom(Shape{ShapeKind::Square, 1.0}, 1.0 / 16);
    GreenOperator G(dom);
    GridMeasure mu = dist_alpha_measure(dom, 1.0);
    // ratio-2 grid so that 2r lands exactly on the next-but-one entry
    std::vector<double> radii;
    for (double r = 2.0 / 16; r <= dom.diameter(); r *= 2.0) radii.push_back(r);
    KatoOptions opts;
    opts.radius_ratio = 2.0;
    KatoReport rep = kato_modulus(G, mu, radii, opts);
    REQUIRE(rep.has_center_modulus);
    const double scale = rep.sup_norm;
    for (std::size_t i = 0; i + 1 < radii.size(); ++i) {
        // K(r) <= K_c(2r): centering at x itself is allowed
        CHECK(rep.modulus[i] <= rep.center_modulus[i + 1] + 1e-12 * scale);
        // K_c(r) <= K(2r): the covering/domination step, exact discretely
        CHECK(rep.center_modulus[i] <= rep.modulus[i + 1] + 1e-12 * scale);
    }
    // K_c includes the pointwise centers, so K_c(r) >= K(r)
    for (std::size_t i = 0; i < radii.size(); ++i)
        CHECK(rep.center_modulus[i] >= rep.modulus[i] - 1e-12 * scale);
}

TEST_CASE("kato slope of mu_alpha on the disk tracks 2 - alpha") {
    GridDomain dom(Shape{ShapeKind::Disk, 1.0}, 1.0 / 32);  // acceptance reruns this at 1/64
    GreenOperator G(dom);
    for (double alpha : {0.5, 1.5}) {
        GridMeasure mu = dist_alpha_measure(dom, alpha);
        KatoOptions opts;
        opts.center_modulus_cap = 0;  // speed: K only
        KatoReport rep = kato_modulus(G, mu, default_kato_radii(dom), opts);
        REQUIRE(rep.slope.has_value());
        CAPTURE(alpha);
        CHECK(std::abs(*rep.slope - (2.0 - alpha)) <= 0.3);
    }
}

TEST_CASE("threshold sweep classifies slopes against 1 + beta") {
    GridDomain dom(Shape{ShapeKind::Disk, 1.0}, 1.0 / 32);
    GreenOperator G(dom);
    KatoOptions opts;
    opts.center_modulus_cap = 0;
    KatoSweep sweep = kato_threshold_sweep(G, {0.5, 1.0, 1.95}, 1.0, opts);
    REQUIRE(sweep.rows.size() == 3);
    CHECK(sweep.rows[0].pass);
    CHECK(sweep.rows[0].below_threshold);
    CHECK(!sweep.rows[0].borderline);
    CHECK(sweep.rows[1].pass);
    REQUIRE(sweep.rows[1].slope.has_value());
    CHECK(*sweep.rows[1].slope > 0.5);  // log-corrected case at alpha = 1
    CHECK(sweep.rows[2].borderline);
    CHECK(sweep.rows[2].below_threshold);  // 1.95 < 2 = 1 + beta
    CHECK(sweep.rows[0].alpha_threshold == doctest::Approx(2.0));
}

TEST_CASE("boundary decay exponent is about 1 on the disk") {
    GridDomain dom(Shape{ShapeKind::Disk, 1.0}, 1.0 / 24);
    GreenOperator G(dom);
    const double beta = fit_boundary_decay_exponent(G);
    CHECK(beta == doctest::Approx(1.0).epsilon(0.25));
}

TEST_CASE("boundary decay exponent drops below 1 on the L-shape") {
    GridDomain dom(Shape{ShapeKind::LShape, 1.0}, 1.0 / 48);
    GreenOperator G(dom);
    const double beta = fit_boundary_decay_exponent(G);
    // reported, not asserted to a specific value; the reentrant corner
    // (interior angle 3 pi/2, exponent 2/3) pulls it below the smooth
    // case; measured 0.66 at h=1/48
    CHECK(beta < 0.9);
    CHECK(beta > 0.4);
}

TEST_CASE("continuity surrogate: smooth density decays, an atom does not") {
    GridDomain dom(Shape{ShapeKind::Square, 1.0}, 1.0 / 8);
    std::vector<double> smooth, atomic;
    for (int level = 0; level < 3; ++level) {
        GreenOperator G(dom);
        smooth.push_back(
            continuity_modulus(G, measure_from_density(dom, [](const Point&) { return 1.0; })));
        // atom pinned at the same physical point (1/2, 1/2) on every level
        std::size_t mid = 0;
        for (std::size_t i = 0; i < dom.interior_count(); ++i)
            if (dom.interior_node(i)[0] == 0.5 && dom.interior_node(i)[1] == 0.5) mid = i;
        atomic.push_back(
            continuity_modulus(G, measure_with_atoms(dom, {{static_cast<std::int64_t>(mid), 1.0}})));
        if (level < 2) dom = dom.refine();
    }
    CHECK(smooth[0] / smooth[1] >= 1.4);
    CHECK(smooth[1] / smooth[2] >= 1.4);
    CHECK(atomic[2] >= 0.8 * atomic[0]);  // no decay for the atom
}

TEST_CASE("modulus is deterministic across thread counts") {
    GridDomain dom(Shape{ShapeKind::Square, 1.0}, 1.0 / 12);
    GreenOperator G(dom);
    GridMeasure mu = dist_alpha_measure(dom, 0.5);
    KatoOptions one, four;
    one.jobs = 1;
    four.jobs = 4;
    KatoReport a = kato_modulus(G, mu, default_kato_radii(dom), one);
    KatoReport b = kato_modulus(G, mu, default_kato_radii(dom), four);
    for (std::size_t r = 0; r < a.modulus.size(); ++r) CHECK(a.modulus[r] == b.modulus[r]);
    if (a.has_center_modulus && b.has_center_modulus)
        for (std::size_t r = 0; r < a.center_modulus.size(); ++r)
            CHECK(a.center_modulus[r] == b.center_modulus[r]);
}

TEST_SUITE_END();
