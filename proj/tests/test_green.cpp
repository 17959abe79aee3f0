#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sublap/green.hpp"
#include "sublap/rng.hpp"
#include "sublap/solver.hpp"

using namespace sublap;

TEST_SUITE_BEGIN("green");

namespace {

std::size_t center_node(const GridDomain& dom) {
    std::size_t c = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < dom.interior_count(); ++i) {
        const Point& p = dom.interior_node(i);
        const double r2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
        if (r2 < best) {
            best = r2;
            c = i;
        }
    }
    return c;
}

GridMeasure lebesgue(const GridDomain& dom) {
    return measure_from_density(dom, [](const Point&) { return 1.0; });
}

}  // namespace

TEST_CASE("single interior node on the square: g = 1/4 from stencil algebra") {
    GridDomain dom(Shape{ShapeKind::Square, 1.0}, 0.5);
    GreenOperator G(dom);
    // -Laplace_h g = e/h^2 reduces to (4/h^2) g = 1/h^2
    CHECK(G.dense()(0, 0) == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("dense green matrix is symmetric and positive (square h=1/8)") {
    GridDomain dom(Shape{ShapeKind::Square, 1.0}, 0.125);
    GreenOperator G(dom);
    const Eigen::MatrixXd& g = G.dense();
    const double gmax = g.maxCoeff();
    double asym = 0;
    for (Eigen::Index i = 0; i < g.rows(); ++i)
        for (Eigen::Index j = i + 1; j < g.cols(); ++j)
            asym = std::max(asym, std::abs(g(i, j) - g(j, i)));
    CHECK(asym <= 1e-12 * gmax);
    CHECK(g.minCoeff() > 0.0);
}

TEST_CASE("harmonicity: columns solve -Laplace_h g(.,j) = e_j / h^d") {
    GridDomain dom(Shape{ShapeKind::Disk, 1.0}, 0.25);
    GreenOperator G(dom);
    auto cols = G.green_columns({0, dom.interior_count() / 2});
    Eigen::VectorXd r0 = G.matrix() * cols.col(0);
    r0[0] -= 1.0 / G.cell_volume();
    Eigen::VectorXd r1 = G.matrix() * cols.col(1);
    r1[static_cast<Eigen::Index>(dom.interior_count() / 2)] -= 1.0 / G.cell_volume();
    CHECK(r0.lpNorm<Eigen::Infinity>() <= 1e-9 / G.cell_volume());
    CHECK(r1.lpNorm<Eigen::Infinity>() <= 1e-9 / G.cell_volume());
}

TEST_CASE("zero measure gives the zero potential") {
    GridDomain dom(Shape{ShapeKind::Square, 1.0}, 0.25);
    GreenOperator G(dom);
    auto w = G.potential(zero_measure(dom));
    for (double v : w.interior) CHECK(v == 0.0);
    for (double v : w.boundary) CHECK(v == 0.0);
}

TEST_CASE("potential vanishes exactly on boundary nodes") {
    GridDomain dom(Shape{ShapeKind::Disk, 1.0}, 0.125);
    GreenOperator G(dom);
    auto w = G.potential(lebesgue(dom));
    for (double v : w.boundary) CHECK(v == 0.0);
}

TEST_CASE("potential is linear in the measure") {
    GridDomain dom(Shape{ShapeKind::Square, 1.0}, 0.125);
    GreenOperator G(dom);
    Rng rng(11);
    std::vector<double> m1(dom.interior_count()), m2(dom.interior_count());
    for (auto& v : m1) v = rng.u01();
    for (auto& v : m2) v = rng.u01();
    auto p1 = G.potential(GridMeasure(dom, m1));
    auto p2 = G.potential(GridMeasure(dom, m2));
    std::vector<double> comb(dom.interior_count());
    for (std::size_t i = 0; i < comb.size(); ++i) comb[i] = 3.0 * m1[i] + 0.25 * m2[i];
    auto pc = G.potential(GridMeasure(dom, comb));
    double scale = 0, err = 0;
    for (std::size_t i = 0; i < comb.size(); ++i) {
        scale = std::max(scale, std::abs(pc.interior[i]));
        err = std::max(err,
                       std::abs(pc.interior[i] - 3.0 * p1.interior[i] - 0.25 * p2.interior[i]));
    }
    CHECK(err <= 1e-12 * scale);
}

TEST_CASE("atom potential equals the green column times the mass") {
    GridDomain dom(Shape{ShapeKind::Square, 1.0}, 0.125);
    GreenOperator G(dom);
    const std::size_t j = 17;
    auto w = G.potential(measure_with_atoms(dom, {{static_cast<std::int64_t>(j), 2.5}}));
    auto col = G.green_columns({j});
    for (std::size_t i = 0; i < dom.interior_count(); ++i)
        CHECK(w.interior[i] ==
              doctest::Approx(2.5 * col(static_cast<Eigen::Index>(i), 0)).epsilon(1e-12));
}

TEST_CASE("maximum of a potential sits on or adjacent to the support") {
    GridDomain dom(Shape{ShapeKind::Disk, 1.0}, 0.125);
    GreenOperator G(dom);
    Rng rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> m(dom.interior_count(), 0.0);
        std::vector<std::size_t> support;
        for (int k = 0; k < 4; ++k) {
            std::size_t j = static_cast<std::size_t>(rng.below(dom.interior_count()));
            m[j] += rng.uniform(0.5, 2.0);
            support.push_back(j);
        }
        auto w = G.potential(GridMeasure(dom, m));
        std::size_t arg = 0;
        for (std::size_t i = 1; i < w.interior.size(); ++i)
            if (w.interior[i] > w.interior[arg]) arg = i;
        bool ok = false;
        for (std::size_t s : support) {
            if (arg == s) ok = true;
            for (int a = 0; a < dom.arms_per_node(); ++a)
                if (dom.arm(s, a).neighbor_class == NodeClass::Interior &&
                    static_cast<std::size_t>(dom.arm(s, a).neighbor) == arg)
                    ok = true;
        }
        CHECK(ok);
    }
}

TEST_CASE("disk potential of Lebesgue converges to (1-|x|^2)/4 at the center") {
    // -Laplace w = 1 on the unit disk with w = 0 on the circle has the
    // radial solution w = (1 - |x|^2)/4, so w(0) = 1/4
    double prev_err = -1;
    for (double h : {1.0 / 8, 1.0 / 16, 1.0 / 32}) {
        GridDomain dom(Shape{ShapeKind::Disk, 1.0}, h);
        GreenOperator G(dom);
        auto w = G.potential(lebesgue(dom));
        const double err = std::abs(w.interior[center_node(dom)] - 0.25);
        if (prev_err > 0) CHECK(prev_err / err >= 3.0);
        prev_err = err;
    }
}

TEST_CASE("ball potential of Lebesgue converges to 1/6 at the center") {
    double prev_err = -1;
    for (double h : {1.0 / 8, 1.0 / 16}) {
        GridDomain dom(Shape{ShapeKind::Ball, 1.0}, h);
        GreenOperator G(dom);
        auto w = G.potential(lebesgue(dom));
        const double err = std::abs(w.interior[center_node(dom)] - 1.0 / 6.0);
        if (prev_err > 0) CHECK(prev_err / err >= 3.0);
        prev_err = err;
    }
}

TEST_CASE("analytic ball kernel with source at the origin") {
    // the image of the center lies at infinity: G(x,0) = (|x|^{-1} - R^{-1})/4pi
    const double R = 1.0;
    for (double r : {0.2, 0.5, 0.8}) {
        const double got = analytic_disk_kernel({r, 0.0, 0.0}, {0.0, 0.0, 0.0}, R, 3);
        CHECK(got == doctest::Approx((1.0 / r - 1.0) / (4 * std::numbers::pi)).epsilon(1e-14));
    }
}

TEST_CASE("analytic kernels are symmetric at random pairs") {
    Rng rng(5);
    for (int d : {2, 3}) {
        for (int trial = 0; trial < 50; ++trial) {
            Point x{}, y{};
            auto draw = [&](Point& p) {
                do {
                    for (int a = 0; a < d; ++a) p[a] = rng.uniform(-0.9, 0.9);
                } while (p[0] * p[0] + p[1] * p[1] + p[2] * p[2] >= 0.9 * 0.9);
            };
            do {
                draw(x);
                draw(y);
            } while (std::abs(x[0] - y[0]) + std::abs(x[1] - y[1]) + std::abs(x[2] - y[2]) < 1e-3);
            const double gxy = analytic_disk_kernel(x, y, 1.0, d);
            const double gyx = analytic_disk_kernel(y, x, 1.0, d);
            CHECK(gxy == doctest::Approx(gyx).epsilon(1e-11));
        }
    }
}

TEST_CASE("radial quadrature of the ball kernel against the source at 0 gives 1/6") {
    // int_B G(0,y) dy with G(0,y) = (|y|^{-1} - 1)/4pi; composite Simpson in r
    const int n = 2000;
    double sum = 0;
    auto f = [](double r) {
        return r == 0.0 ? 0.0
                        : 4.0 * std::numbers::pi * r * r *
                              analytic_disk_kernel({0.0, 0.0, 0.0}, {r, 0.0, 0.0}, 1.0, 3);
    };
    sum = f(0) + f(1.0 - 1e-12);
    for (int k = 1; k < n; ++k) sum += (k % 2 ? 4.0 : 2.0) * f(k / static_cast<double>(n));
    sum /= 3.0 * n;
    CHECK(sum == doctest::Approx(1.0 / 6.0).epsilon(1e-6));
}

TEST_CASE("discrete kernel approaches the analytic disk kernel in the far field") {
    double prev = -1;
    for (double h : {1.0 / 16, 1.0 / 32}) {
        GridDomain dom(Shape{ShapeKind::Disk, 1.0}, h);
        GreenOperator G(dom);
        Rng rng(2);
        double worst = 0;
        for (int k = 0; k < 5; ++k) {
            const std::size_t j = static_cast<std::size_t>(rng.below(dom.interior_count()));
            auto col = G.green_columns({j});
            const Point& y = dom.interior_node(j);
            for (std::size_t i = 0; i < dom.interior_count(); ++i) {
                const Point& x = dom.interior_node(i);
                if (std::hypot(x[0] - y[0], x[1] - y[1]) < 0.25) continue;
                const double exact = analytic_disk_kernel(x, y, 1.0, 2);
                if (std::abs(exact) < 1e-4) continue;
                worst = std::max(worst,
                                 std::abs(col(static_cast<Eigen::Index>(i), 0) - exact) /
                                     std::abs(exact));
            }
        }
        if (prev > 0) CHECK(worst < prev);
        prev = worst;
    }
}

TEST_CASE("coincident or outside kernel arguments are rejected") {
    CHECK_THROWS_AS(analytic_disk_kernel({0.1, 0.1, 0}, {0.1, 0.1, 0}, 1.0, 2),
                    std::invalid_argument);
    CHECK_THROWS_AS(analytic_disk_kernel({1.5, 0, 0}, {0, 0, 0}, 1.0, 2), std::invalid_argument);
}

TEST_CASE("harmonic extension of a constant is the constant") {
    GridDomain dom(Shape{ShapeKind::Disk, 1.0}, 0.125);
    GreenOperator G(dom);
    auto u = G.harmonic_extension(BoundaryData::constant(dom, 3.5));
    for (double v : u.interior) CHECK(v == doctest::Approx(3.5).epsilon(1e-13));
}

TEST_CASE("five-point stencil reproduces quadratic harmonics exactly") {
    GridDomain dom(Shape{ShapeKind::Square, 1.0}, 0.125);
    GreenOperator G(dom);
    auto f = BoundaryData::sample(dom, [](const Point& p) {
        return p[0] * p[0] - p[1] * p[1] + 1.0;  // harmonic, >= 0 on the square
    });
    auto u = G.harmonic_extension(f);
    for (std::size_t i = 0; i < dom.interior_count(); ++i) {
        const Point& p = dom.interior_node(i);
        CHECK(u.interior[i] == doctest::Approx(p[0] * p[0] - p[1] * p[1] + 1.0).epsilon(1e-12));
    }
}

TEST_CASE("maximum principle and strict interior positivity") {
    GridDomain dom(Shape{ShapeKind::Square, 1.0}, 0.125);
    GreenOperator G(dom);
    // f >= 0, zero on part of the boundary, not identically zero
    auto f = BoundaryData::sample(dom, [](const Point& p) { return p[0] < 0.5 ? 0.0 : p[0]; });
    auto u = G.harmonic_extension(f);
    CHECK(u.max_interior() <= f.sup_norm() + 1e-14);
    CHECK(u.min_interior() > 0.0);
}

TEST_CASE("negative boundary data is rejected") {
    GridDomain dom(Shape{ShapeKind::Square, 1.0}, 0.25);
    CHECK_THROWS_AS(BoundaryData::sample(dom, [](const Point& p) { return p[0] - 0.5; }),
                    std::invalid_argument);
}

TEST_CASE("measure on a mismatched domain is rejected") {
    GridDomain dom(Shape{ShapeKind::Square, 1.0}, 0.25);
    GridDomain other(Shape{ShapeKind::Square, 1.0}, 0.125);
    GreenOperator G(dom);
    CHECK_THROWS_AS(G.potential(lebesgue(other)), std::invalid_argument);
}

TEST_CASE("dense matrix above the cap is refused") {
    GridDomain dom(Shape{ShapeKind::Square, 1.0}, 0.125);
    GreenOptions opts;
    opts.dense_cap = 10;
    GreenOperator G(dom, opts);
    CHECK_THROWS_AS(G.dense(), numerical_error);
}

TEST_SUITE_END();

TEST_SUITE_BEGIN("green");

TEST_CASE("center potential scales with the disk radius") {
    // -Laplace w = 1 on B(0,R): w(0) = R^2/(2d)
    GridDomain dom(Shape{ShapeKind::Disk, 0.7}, 0.05);
    GreenOperator G(dom);
    auto w = G.potential(measure_from_density(dom, [](const Point&) { return 1.0; }));
    std::size_t c = 0;
    double best = 1e18;
    for (std::size_t i = 0; i < dom.interior_count(); ++i) {
        const Point& p = dom.interior_node(i);
        if (p[0] * p[0] + p[1] * p[1] < best) { best = p[0] * p[0] + p[1] * p[1]; c = i; }
    }
    CHECK(w.interior[c] == doctest::Approx(0.49 / 4.0).epsilon(2e-3));
}

TEST_CASE("solver runs on the L-shape with a reentrant corner") {
    GridDomain dom(Shape{ShapeKind::LShape, 1.0}, 1.0 / 16);
    GreenOperator G(dom);
    auto mu = measure_from_density(dom, [](const Point&) { return 1.0; });
    SolverConfig cfg;
    cfg.q = 0.5;
    SolveReport rep = picard_solve(G, mu, zero_measure(dom), BoundaryData::constant(dom, 1.0), cfg);
    CHECK(rep.u.min_interior() > 0.0);
    CHECK(rep.margins.lower >= -1e-10 * rep.u.sup_norm());
    CHECK(rep.margins.upper >= -1e-10 * rep.u.sup_norm());
    CHECK(rep.monotonicity_violations == 0);
}

TEST_SUITE_END();
