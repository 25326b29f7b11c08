#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "fctncd/error.hpp"
#include "fctncd/limiter.hpp"
#include "oracles.hpp"

using namespace fctncd;

namespace {

struct Setup {
    Grid grid;
    ProblemSpec spec;
    ScalarField y;
    StepConfig config;
};

// Unit spacing, u = 1, D = 0; values include both boundary nodes.
Setup unit_line(const std::vector<double>& values, double dt)
{
    Setup s{Grid::uniform_1d(0.0, static_cast<double>(values.size() - 1), values.size() - 1), {},
            {}, {}};
    s.spec.velocity_x = constant(1.0);
    s.y = ScalarField(s.grid.shape(), 0.0);
    for (std::size_t i = 0; i < values.size(); ++i) {
        s.y(i, 0) = values[i];
    }
    s.config.dt = dt;
    return s;
}

LimiterProgram program_of(const Setup& s)
{
    const SchemeOperator op = assemble_operator(s.grid, s.spec, s.y);
    return assemble_program(op, op, stencil_bounds(s.y), s.y, s.config);
}

void check_rows(const LimiterProgram& p, const LimiterSet& l, double slack = 1e-10)
{
    const std::vector<double> r = row_values(p, l);
    for (std::size_t k = 0; k < r.size(); ++k) {
        CHECK(r[k] >= p.lower[k] - slack);
        CHECK(r[k] <= p.upper[k] + slack);
    }
}

ScalarField random_field(const Grid& g, std::mt19937& rng)
{
    ScalarField f(g.shape(), 0.0);
    for (double& v : f.storage()) {
        v = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    }
    return f;
}

}  // namespace

TEST_CASE("closed-form limiter at an isolated spike")
{
    const Setup s = unit_line({0, 0, 0, 1, 0, 0, 0}, 0.5);
    const LimiterProgram p = program_of(s);
    const QPBounds qp = qp_bounds(p, 0.5);
    CHECK(qp.q_plus[2] == 1.0);
    CHECK(qp.q_minus[2] == -1.0);
    CHECK(qp.p_plus[2] == 1.0);
    CHECK(qp.p_minus[2] == 0.0);
    CHECK(qp.r_plus[2] == 1.0);
    CHECK(qp.r_minus[2] == 1.0);

    const LimiterSet a = approx_limiters(p, 0.5);
    CHECK(a.in_unit_box());
    for (int sign = 0; sign < 2; ++sign) {
        CHECK(a.alpha(2, 0, 0, sign) == 1.0);
    }
    const LimiterSet l = lp_limiters(p);
    CHECK(l.alpha(2, 0, 0, 0) == 1.0);
    CHECK(l.alpha(2, 0, 0, 1) == 1.0);
    check_rows(p, a);
    check_rows(p, l);
}

TEST_CASE("closed-form limiter cuts antidiffusion at a sharp extremum")
{
    const Setup s = unit_line({0.5, 0.5, 1.0, 0.0, 0.0}, 0.1);
    const LimiterProgram p = program_of(s);
    CHECK(p.lower[1] == doctest::Approx(-0.95).epsilon(1e-15));
    CHECK(p.upper[1] == doctest::Approx(0.05).epsilon(1e-14));
    CHECK(p.row(1)[0] == doctest::Approx(0.025).epsilon(1e-15));
    CHECK(p.row(1)[1] == doctest::Approx(0.05).epsilon(1e-15));

    const QPBounds qp = qp_bounds(p, 0.1);
    CHECK(qp.q_plus[1] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(qp.p_plus[1] == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(qp.r_plus[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));

    const LimiterSet a = approx_limiters(p, 0.1);
    CHECK(a.alpha(1, 0, 0, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(a.alpha(1, 0, 0, 1) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    check_rows(p, a);

    // The LP keeps the small coefficient whole and trims the large one.
    const LimiterSet l = lp_limiters(p);
    CHECK(l.alpha(1, 0, 0, 0) == 1.0);
    CHECK(l.alpha(1, 0, 0, 1) == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(l.objective() > a.objective());
    check_rows(p, l);
}

TEST_CASE("constant fields leave every limiter at one")
{
    const Grid g = Grid::uniform_2d(0.0, 1.0, 0.0, 1.0, 7, 5);
    ProblemSpec spec;
    spec.velocity_x = constant(0.3);
    spec.velocity_y = constant(-1.0);
    const ScalarField y = ScalarField::sample(g, 0.0, [](double, double) { return 0.125; });
    for (double sigma : {0.0, 0.5, 1.0}) {
        StepConfig c;
        c.dt = 0.01;
        c.sigma = sigma;
        const SchemeOperator op = assemble_operator(g, spec, y);
        const LimiterProgram p = assemble_program(op, op, stencil_bounds(y), y, c);
        const QPBounds qp = qp_bounds(p, c.dt);
        for (std::size_t k = 0; k < p.node_count(); ++k) {
            CHECK(qp.q_plus[k] == 0.0);
            CHECK(qp.q_minus[k] == 0.0);
            CHECK(qp.p_plus[k] == 0.0);
            CHECK(qp.p_minus[k] == 0.0);
        }
        for (const LimiterSet& l : {approx_limiters(p, c.dt), lp_limiters(p)}) {
            for (double v : l.values) {
                CHECK(v == 1.0);
            }
        }
        const DivFaceFlux f = div_face_fluxes(g, spec, y, 0.0);
        const BoxedProgram dp = assemble_div_program(g, f, f, p, c);
        for (double v : div_limiters(dp, f, c.dt).values) {
            CHECK(v == 1.0);
        }
    }
}

TEST_CASE("limiters on random fields: rows, box, dominance")
{
    std::mt19937 rng(41);
    const Grid g1 = Grid::nonuniform_1d({0.0, 0.04, 0.1, 0.18, 0.2, 0.35, 0.5, 0.52, 0.8, 1.0});
    const Grid g2 = Grid::uniform_2d(0.0, 1.0, 0.0, 1.0, 8, 9);
    ProblemSpec spec;
    spec.velocity_x = [](double x, double y, double) { return std::sin(5.0 * y) + 0.5 * x; };
    spec.velocity_y = [](double x, double, double) { return std::cos(3.0 * x); };
    spec.diffusion = [](double x, double, double) { return 0.002 * x; };
    for (const Grid* g : {&g1, &g2}) {
        for (double sigma : {0.0, 0.5, 1.0}) {
            for (int trial = 0; trial < 10; ++trial) {
                const ScalarField y = random_field(*g, rng);
                const ScalarField lagged = random_field(*g, rng);
                const SchemeOperator at_n = assemble_operator(*g, spec, y);
                const SchemeOperator at_np1 = assemble_operator(*g, spec, lagged);
                StepConfig c;
                c.sigma = sigma;
                c.dt = 0.7 * std::min(1.0, max_stable_dt(at_n, at_n, sigma, 0.0).limit());
                const LimiterProgram p = assemble_program(at_n, at_np1, stencil_bounds(y), y, c);
                REQUIRE(p.zero_infeasible_rows == 0);

                const LimiterSet a = approx_limiters(p, c.dt);
                const LimiterSet l = lp_limiters(p);
                CHECK(a.in_unit_box());
                CHECK(l.in_unit_box());
                check_rows(p, a);
                check_rows(p, l);
                CHECK(l.objective() >= a.objective() - 1e-12);
                CHECK(solve_dense(p).objective >= a.objective() - 1e-9);

                const QPBounds qp = qp_bounds(p, c.dt);
                for (std::size_t k = 0; k < p.node_count(); ++k) {
                    CHECK(qp.q_plus[k] >= 0.0);
                    CHECK(qp.q_minus[k] <= 0.0);
                    CHECK(qp.p_plus[k] >= 0.0);
                    CHECK(qp.p_minus[k] <= 0.0);
                }

                const DivFaceFlux fn = div_face_fluxes(*g, spec, y, 0.0);
                const DivFaceFlux fp = div_face_fluxes(*g, spec, lagged, c.dt);
                const BoxedProgram dp = assemble_div_program(*g, fn, fp, p, c);
                const LimiterSet d = div_limiters(dp, fn, c.dt);
                CHECK(d.in_unit_box());
                CHECK(dp.satisfied_by(d.values));
            }
        }
    }
}

TEST_CASE("limiters are unchanged by a constant shift")
{
    // Dyadic values keep every operation exact, so equality is bitwise.
    std::mt19937 rng(8);
    std::uniform_int_distribution<int> ticks(0, 256);
    const Grid g = Grid::uniform_1d(0.0, 2.0, 32);
    ProblemSpec spec;
    spec.velocity_x = constant(0.75);
    for (double sigma : {0.0, 0.5}) {
        StepConfig c;
        c.dt = 1.0 / 64.0;
        c.sigma = sigma;
        ScalarField y(g.shape(), 0.0);
        for (double& v : y.storage()) {
            v = ticks(rng) / 256.0;
        }
        ScalarField shifted = y;
        for (double& v : shifted.storage()) {
            v += 3.0;
        }
        const SchemeOperator a_op = assemble_operator(g, spec, y);
        const SchemeOperator b_op = assemble_operator(g, spec, shifted);
        const LimiterProgram pa = assemble_program(a_op, a_op, stencil_bounds(y), y, c);
        const LimiterProgram pb =
            assemble_program(b_op, b_op, stencil_bounds(shifted), shifted, c);
        CHECK(pa.coefficients == pb.coefficients);
        CHECK(pa.lower == pb.lower);
        CHECK(pa.upper == pb.upper);
        CHECK(approx_limiters(pa, c.dt).values == approx_limiters(pb, c.dt).values);
        CHECK(lp_limiters(pa).values == lp_limiters(pb).values);
        const DivFaceFlux fa = div_face_fluxes(g, spec, y, 0.0);
        const DivFaceFlux fb = div_face_fluxes(g, spec, shifted, 0.0);
        CHECK(div_limiters(assemble_div_program(g, fa, fa, pa, c), fa, c.dt).values ==
              div_limiters(assemble_div_program(g, fb, fb, pb, c), fb, c.dt).values);
    }
}

TEST_CASE("limited updates agree with the standalone reference step")
{
    std::mt19937 rng(55);
    const Grid g = Grid::uniform_1d(0.0, 1.0, 40);
    const double h = 1.0 / 40.0;
    ProblemSpec spec;
    spec.velocity_x = constant(1.0);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> raw = oracle::random_profile(rng, 41, 0.0, 1.0);
        ScalarField y(g.shape(), 0.0);
        for (std::size_t i = 0; i < raw.size(); ++i) {
            y(i, 0) = raw[i];
        }
        StepConfig c;
        c.dt = 0.2 * h;
        const SchemeOperator op = assemble_operator(g, spec, y);
        const LimiterProgram p = assemble_program(op, op, stencil_bounds(y), y, c);
        const std::vector<double> inc = row_values(p, approx_limiters(p, c.dt));
        const auto ref = oracle::explicit_step(raw, 1.0, 0.0, h, c.dt, oracle::Limiting::Approximate);
        for_each_interior(g.shape(), [&](std::size_t i, std::size_t j, std::size_t k) {
            const double ours = y(i, j) - c.dt * op.neighbor_sum(y, i, j, k) + inc[k];
            CHECK(ours == doctest::Approx(ref[i]).epsilon(1e-13).scale(1.0));
        });
    }
}

TEST_CASE("face limiter fallback and row layout")
{
    const Setup s = unit_line({0, 0, 0, 1, 0, 0, 0}, 0.5);
    const LimiterProgram p = program_of(s);
    const DivFaceFlux f = div_face_fluxes(s.grid, s.spec, s.y, 0.0);
    const BoxedProgram dp = assemble_div_program(s.grid, f, f, p, s.config);
    CHECK(dp.variable_count == 2 * f.face_count(0));
    CHECK(dp.rows.size() == 5);

    // zero limiters reproduce the monotone update: every row value is zero
    LimiterSet zero = LimiterSet::faces(s.grid.shape(), {f.face_count(0), 0}, 0.0);
    for (double r : row_values(dp, zero)) {
        CHECK(r == 0.0);
    }
    CHECK(dp.satisfied_by(zero.values));

    const LimiterSet d = div_limiters(dp, f, 0.5);
    CHECK(dp.satisfied_by(d.values));
    // level n+1 faces are free at sigma = 0
    for (std::size_t q = 0; q < f.face_count(0); ++q) {
        CHECK(d.beta(1, 0, q) == 1.0);
    }
}

TEST_CASE("Zalesak limiting of a general program")
{
    BoxedProgram p;
    p.variable_count = 3;
    p.rows.push_back({{{0, 1.0}, {1, -1.0}}, -0.5, 0.25});
    p.rows.push_back({{{1, 0.5}, {2, 2.0}}, -1.0, 1.0});
    const std::vector<double> z = zalesak_limiters(p, 1e-14);
    CHECK(z[0] == 0.25);
    CHECK(z[1] == 0.4);
    CHECK(z[2] == 0.4);
    CHECK(p.satisfied_by(z));
}

TEST_CASE("limiter CSV layout")
{
    LimiterSet one = LimiterSet::nodes(Shape{1, 2, 1}, 1.0);
    one.values[1] = 0.5;
    std::ostringstream out;
    write_limiters_csv(out, one);
    CHECK(out.str() == "index,alpha+n,alpha-n,alpha+n1,alpha-n1\n0,1,0.5,1,1\n1,1,1,1,1\n");

    const LimiterSet two = LimiterSet::nodes(Shape{2, 1, 1}, 0.0);
    std::ostringstream out2;
    write_limiters_csv(out2, two);
    CHECK(out2.str() ==
          "index,alpha+n_x,alpha-n_x,alpha+n_y,alpha-n_y,alpha+n1_x,alpha-n1_x,alpha+n1_y,"
          "alpha-n1_y\n0,0,0,0,0,0,0,0,0\n");

    const LimiterSet faces = LimiterSet::faces(Shape{1, 2, 1}, {3, 0}, 1.0);
    std::ostringstream out3;
    CHECK_THROWS_AS(write_limiters_csv(out3, faces), ContractError);
}
