#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "fctncd/error.hpp"
#include "fctncd/monotone.hpp"
#include "oracles.hpp"

using namespace fctncd;

namespace {

ScalarField random_field(const Grid& g, std::mt19937& rng, double lo = 0.0, double hi = 1.0)
{
    ScalarField f(g.shape(), 0.0);
    for (double& v : f.storage()) {
        v = std::uniform_real_distribution<double>(lo, hi)(rng);
    }
    return f;
}

}  // namespace

TEST_CASE("stencil bounds")
{
    const Grid g = Grid::uniform_1d(0.0, 4.0, 4);
    ScalarField y(g.shape(), 0.0);
    y(2, 0) = 1.0;
    StencilBounds b = stencil_bounds(y);
    CHECK(b.lower[1] == 0.0);
    CHECK(b.upper[1] == 1.0);
    CHECK(b.lower[0] == 0.0);
    CHECK(b.upper[0] == 1.0);

    const ScalarField c = ScalarField::sample(g, 0.0, [](double, double) { return -2.5; });
    b = stencil_bounds(c);
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(b.lower[k] == -2.5);
        CHECK(b.upper[k] == -2.5);
    }

    const Grid g2 = Grid::uniform_2d(0.0, 1.0, 0.0, 1.0, 4, 4);
    ScalarField z(g2.shape(), 0.0);
    z(2, 2) = 5.0;
    z(1, 2) = -1.0;
    z(3, 2) = 2.0;
    z(2, 1) = 7.0;
    z(2, 3) = 3.0;
    z(1, 1) = 100.0;  // diagonal neighbor is outside the stencil
    b = stencil_bounds(z);
    const std::size_t k = g2.shape().interior(2, 2);
    CHECK(b.lower[k] == -1.0);
    CHECK(b.upper[k] == 7.0);
}

TEST_CASE("explicit time-step bound")
{
    const Grid g = Grid::uniform_1d(0.0, 1.0, 100);
    ProblemSpec spec;
    spec.velocity_x = constant(1.0);
    TimeStepBound b = max_stable_dt(g, spec, 0.0, 0.0);
    CHECK(b.bounds_dt == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(b.monotone_dt == doctest::Approx(0.01).epsilon(1e-12));

    spec.diffusion = constant(0.01);
    b = max_stable_dt(g, spec, 0.0, 0.0);
    CHECK(b.bounds_dt == doctest::Approx(0.005).epsilon(1e-12));

    b = max_stable_dt(g, spec, 0.5, 0.0);
    CHECK(b.bounds_dt == doctest::Approx(0.01).epsilon(1e-12));

    b = max_stable_dt(g, spec, 1.0, 123.0);
    CHECK(b.bounds_dt == std::numeric_limits<double>::infinity());
    CHECK(b.monotone_dt == std::numeric_limits<double>::infinity());
    CHECK(b.implicit_ok);

    spec.reaction = constant(2.0);
    b = max_stable_dt(g, spec, 0.0, 0.0);
    CHECK(b.monotone_dt < b.bounds_dt);
    CHECK(b.limit() == b.monotone_dt);
}

TEST_CASE("implicit margin with negative reaction")
{
    const Grid g = Grid::uniform_1d(0.0, 1.0, 10);
    ProblemSpec spec;
    spec.reaction = constant(-4.0);
    CHECK(max_stable_dt(g, spec, 1.0, 0.0, 0.2).implicit_ok);
    CHECK_FALSE(max_stable_dt(g, spec, 1.0, 0.0, 0.25).implicit_ok);

    ScalarField y = spec.initial_field(g);
    const SchemeOperator op = assemble_operator(g, spec, y);
    CHECK_NOTHROW(require_implicit_margin(op, 1.0, 0.2));
    CHECK_THROWS_AS(require_implicit_margin(op, 1.0, 0.25), StabilityError);

    StepConfig c;
    c.sigma = 1.0;
    c.dt = 0.3;
    CHECK_THROWS_AS(monotone_step(g, spec, y, c), StabilityError);
}

TEST_CASE("implicit matrix is diagonally dominant with the right signs")
{
    std::mt19937 rng(9);
    const Grid g = Grid::nonuniform_1d({0.0, 0.05, 0.2, 0.3, 0.55, 0.6, 0.8, 1.0});
    ProblemSpec spec;
    spec.velocity_x = [](double x, double, double) { return std::cos(5.0 * x); };
    spec.diffusion = constant(0.01);
    spec.reaction = [](double x, double, double) { return x - 0.2; };
    const ScalarField y = random_field(g, rng);
    const SchemeOperator op = assemble_operator(g, spec, y);
    const double sigma = 0.5;
    const double dt = 0.05;
    REQUIRE(max_stable_dt(op, op, sigma, dt).implicit_ok);
    for (std::size_t k = 0; k < op.size(); ++k) {
        const double diag = 1.0 + dt * sigma * (op.diagonal[k] + op.reaction[k]);
        const double off_l = dt * sigma * op.lower[0][k];
        const double off_r = dt * sigma * op.upper[0][k];
        CHECK(diag > 0.0);
        CHECK(off_l <= 0.0);
        CHECK(off_r <= 0.0);
        CHECK(diag > -(off_l + off_r));
    }
}

TEST_CASE("low-order step exactness")
{
    SUBCASE("Courant one shifts by one cell")
    {
        const Grid g = Grid::uniform_1d(0.0, 1.0, 50);
        ProblemSpec spec;
        spec.velocity_x = constant(1.0);
        std::mt19937 rng(1);
        const ScalarField y = random_field(g, rng);
        StepConfig c;
        c.dt = 0.02;
        c.scheme = SchemeKind::Low;
        const ScalarField next = monotone_step(g, spec, y, c);
        for (std::size_t i = 1; i < 50; ++i) {
            CHECK(std::abs(next(i, 0) - y(i - 1, 0)) <= 1e-13);
        }
    }

    SUBCASE("constant fields stay constant")
    {
        const Grid g = Grid::uniform_2d(0.0, 1.0, 0.0, 1.0, 12, 10);
        ProblemSpec spec;
        spec.velocity_x = [](double, double y, double) { return y - 0.5; };
        spec.velocity_y = [](double x, double, double) { return 0.5 - x; };
        spec.diffusion = constant(0.002);
        spec.boundary = constant(0.75);
        spec.initial = [](double, double) { return 0.75; };
        for (double sigma : {0.0, 0.5, 1.0}) {
            StepConfig c;
            c.sigma = sigma;
            c.dt = 0.01;
            const ScalarField next = monotone_step(g, spec, spec.initial_field(g), c);
            for (double v : next.interior()) {
                CHECK(std::abs(v - 0.75) <= 1e-13);
            }
        }
    }
}

TEST_CASE("explicit low-order step respects the stencil bounds")
{
    std::mt19937 rng(17);
    const Grid g1 = Grid::nonuniform_1d({0.0, 0.03, 0.1, 0.14, 0.3, 0.33, 0.5, 0.56, 0.7, 1.0});
    const Grid g2 = Grid::uniform_2d(0.0, 1.0, 0.0, 1.0, 10, 10);
    ProblemSpec spec;
    spec.velocity_x = [](double x, double y, double) { return std::sin(6.0 * y) + 0.3 * x; };
    spec.velocity_y = [](double x, double, double) { return std::cos(4.0 * x); };
    spec.diffusion = [](double x, double, double) { return 0.004 * (1.0 + x); };
    for (const Grid* g : {&g1, &g2}) {
        for (int trial = 0; trial < 20; ++trial) {
            ScalarField y = random_field(*g, rng);
            const SchemeOperator op = assemble_operator(*g, spec, y);
            StepConfig c;
            c.dt = max_stable_dt(op, op, 0.0, 0.0).limit() *
                   std::uniform_real_distribution<double>(0.1, 1.0)(rng);
            const StencilBounds b = stencil_bounds(y);
            ScalarField next = monotone_step(*g, spec, y, c);
            const std::vector<double> v = next.interior();
            for (std::size_t k = 0; k < v.size(); ++k) {
                CHECK(v[k] >= b.lower[k] - 1e-13);
                CHECK(v[k] <= b.upper[k] + 1e-13);
            }
        }
    }
}

TEST_CASE("low-order step is order preserving")
{
    std::mt19937 rng(23);
    const Grid g = Grid::uniform_1d(0.0, 1.0, 40);
    ProblemSpec spec;
    spec.velocity_x = [](double x, double, double) { return 1.0 - 2.0 * x; };
    spec.diffusion = constant(0.001);
    for (double sigma : {0.0, 0.5, 1.0}) {
        for (int trial = 0; trial < 20; ++trial) {
            ScalarField v = random_field(g, rng);
            ScalarField w = v;
            for (std::size_t i = 1; i < 40; ++i) {
                w(i, 0) += std::uniform_real_distribution<double>(0.0, 0.5)(rng);
            }
            StepConfig c;
            c.sigma = sigma;
            c.dt = sigma == 1.0 ? 0.2 : 0.01;
            c.linear_tolerance = 1e-14;
            const auto sv = monotone_step(g, spec, v, c).interior();
            const auto sw = monotone_step(g, spec, w, c).interior();
            for (std::size_t k = 0; k < sv.size(); ++k) {
                CHECK(sv[k] <= sw[k] + 1e-12);
            }
        }
    }
}

TEST_CASE("explicit low-order step matches the standalone reference")
{
    std::mt19937 rng(31);
    const Grid g = Grid::uniform_1d(0.0, 1.0, 25);
    ProblemSpec spec;
    spec.velocity_x = constant(-0.9);
    spec.diffusion = constant(0.01);
    std::vector<double> raw = oracle::random_profile(rng, 26, 0.0, 1.0);
    raw.front() = raw.back() = 0.0;
    ScalarField y(g.shape(), 0.0);
    for (std::size_t i = 0; i < raw.size(); ++i) {
        y(i, 0) = raw[i];
    }
    StepConfig c;
    c.dt = 0.01;
    const ScalarField next = monotone_step(g, spec, y, c);
    const auto ref = oracle::explicit_step(raw, -0.9, 0.01, 1.0 / 25, 0.01, oracle::Limiting::None);
    for (std::size_t i = 1; i < 25; ++i) {
        CHECK(next(i, 0) == doctest::Approx(ref[i]).epsilon(1e-13).scale(1.0));
    }
}
