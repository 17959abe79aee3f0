#include <doctest.h>

#include <cmath>

#include "sublap/inequalities.hpp"
#include "sublap/rng.hpp"

using namespace sublap;

TEST_SUITE_BEGIN("inequalities");

namespace {

GridMeasure random_measure(const GridDomain& dom, Rng& rng, double scale = 2.0) {
    std::vector<double> m(dom.interior_count());
    const double vol = std::pow(dom.spacing(), dom.dimension());
    for (auto& v : m) v = rng.uniform(0.0, scale) * vol;
    return GridMeasure(dom, std::move(m));
}

}  // namespace

TEST_CASE("iterated inequality at s = 1 is an identity") {
    GridDomain dom(Shape{ShapeKind::Square, 1.0}, 0.125);
    GreenOperator G(dom);
    Rng rng(23);
    MarginReport rep = check_iterated_inequality(G, random_measure(dom, rng), 1.0);
    CHECK(rep.margin == 0.0);  // both sides are the same solve, bitwise
}

TEST_CASE("iterated inequality for the zero measure") {
    GridDomain dom(Shape{ShapeKind::Square, 1.0}, 0.25);
    GreenOperator G(dom);
    MarginReport rep = check_iterated_inequality(G, zero_measure(dom), 2.0);
    CHECK(rep.margin == 0.0);
}

TEST_CASE("iterated inequality holds to round-off for random measures") {
    GridDomain dom(Shape{ShapeKind::Square, 1.0}, 1.0 / 16);
    GreenOperator G(dom);
    Rng rng(31);
    for (int trial = 0; trial < 25; ++trial) {
        GridMeasure omega = random_measure(dom, rng);
        for (double s : {1.0, 1.5, 2.0, 3.0}) {
            MarginReport rep = check_iterated_inequality(G, omega, s);
            CAPTURE(trial);
            CAPTURE(s);
            CHECK(rep.margin >= -1e-12 * rep.scale);
        }
    }
}

TEST_CASE("s below one is rejected") {
    GridDomain dom(Shape{ShapeKind::Square, 1.0}, 0.25);
    GreenOperator G(dom);
    CHECK_THROWS_AS(check_iterated_inequality(G, zero_measure(dom), 0.5), std::invalid_argument);
}

TEST_CASE("lower bound against the zero measure is trivial") {
    GridDomain dom(Shape{ShapeKind::Square, 1.0}, 0.125);
    GreenOperator G(dom);
    GridFunction u = GridFunction::constant(dom, 0.7);
    MarginReport rep = check_lower_bound(G, zero_measure(dom), u, 0.5);
    CHECK(rep.margin == doctest::Approx(0.7));  // bound is u >= 0
}

TEST_CASE("lower-bound prefactor at q = 1/2 is exactly 1/4") {
    CHECK(std::pow(1.0 - 0.5, 1.0 / (1.0 - 0.5)) == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("non-supersolutions are refused") {
    GridDomain dom(Shape{ShapeKind::Square, 1.0}, 0.125);
    GreenOperator G(dom);
    auto mu = measure_from_density(dom, [](const Point&) { return 50.0; });
    GridFunction tiny = GridFunction::constant(dom, 1e-4);
    CHECK_THROWS_AS(check_lower_bound(G, mu, tiny, 0.5), hypothesis_violation);
}

TEST_CASE("lgamma norm basics") {
    GridDomain dom(Shape{ShapeKind::Square, 1.0}, 0.25);
    auto mu = measure_from_density(dom, [](const Point&) { return 1.0; });
    GridFunction one = GridFunction::constant(dom, 1.0);
    GridFunction zero = GridFunction::zeros(dom);
    CHECK(lgamma_norm(one, mu, 2.0) == doctest::Approx(std::sqrt(mu.total_mass())).epsilon(1e-14));
    CHECK(lgamma_norm(one, mu, 1.0) == doctest::Approx(mu.total_mass()).epsilon(1e-14));
    CHECK(lgamma_norm(zero, mu, 1.5) == 0.0);
    CHECK_THROWS_AS(lgamma_norm(one, mu, 0.0), std::invalid_argument);
}

TEST_CASE("proof-mode exponent reproduces the alpha threshold exactly") {
    // with p = (gamma+q)/(1-q), the integrability cutoff (2p+1)/(p+1)
    // collapses to (2 gamma + 1 + q)/(gamma + 1); substitution check:
    for (double q : {0.3, 0.5, 0.8}) {
        for (double gamma : {0.7, 1.5, 2.5}) {
            const double p = finite_energy_exponent(q, gamma, ExponentMode::Proof);
            const double via_p = (2.0 * p + 1.0) / (p + 1.0);
            CHECK(via_p == doctest::Approx(finite_energy_alpha_star(q, gamma)).epsilon(1e-12));
        }
    }
    CHECK(finite_energy_alpha_star(0.5, 1.5) == doctest::Approx(1.8).epsilon(1e-15));
    CHECK(finite_energy_exponent(0.5, 1.5, ExponentMode::Proof) == doctest::Approx(4.0));
    CHECK(finite_energy_exponent(0.5, 1.5, ExponentMode::Statement) ==
          doctest::Approx(4.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("finite-energy sweep separates alpha across the threshold") {
    ThresholdTable table = finite_energy_threshold_sweep(Shape{ShapeKind::Square, 1.0}, 1.0 / 8, 4,
                                                         0.5, 1.5, {1.0, 1.9});
    CHECK(table.alpha_star == doctest::Approx(1.8));
    CHECK(table.p == doctest::Approx(4.0));
    REQUIRE(table.rows.size() == 2);
    CHECK(table.rows[0].classification == "bounded");
    CHECK(table.rows[1].classification == "diverging");
}

TEST_CASE("sweep needs at least three levels") {
    CHECK_THROWS_AS(finite_energy_threshold_sweep(Shape{ShapeKind::Square, 1.0}, 0.25, 2, 0.5, 1.5,
                                                  {1.0}),
                    std::invalid_argument);
}

TEST_SUITE_END();
