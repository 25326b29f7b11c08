#include "fctncd/monotone.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fctncd/error.hpp"
#include "fctncd/linear_solvers.hpp"

namespace fctncd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kImplicitMargin = 1e-9;

}  // namespace

StencilBounds stencil_bounds(const ScalarField& field)
{
    const Shape& s = field.shape();
    StencilBounds b;
    b.shape = s;
    b.lower.resize(s.interior_size());
    b.upper.resize(s.interior_size());
    for_each_interior(s, [&](std::size_t i, std::size_t j, std::size_t k) {
        double lo = field(i, j);
        double hi = lo;
        for (int a = 0; a < s.dim; ++a) {
            for (int dir : {-1, 1}) {
                const double v = field.storage()[neighbor(s, i, j, a, dir)];
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        }
        b.lower[k] = lo;
        b.upper[k] = hi;
    });
    return b;
}

TimeStepBound max_stable_dt(const SchemeOperator& at_n, const SchemeOperator& at_np1,
                            double sigma, double dt_candidate, double safety)
{
    TimeStepBound out;
    // a_ii is exactly the bracket (u+ + d+)/h - (u- + d-)/h summed over axes.
    double worst_with = -kInf;
    double worst_without = -kInf;
    for (std::size_t k = 0; k < at_n.size(); ++k) {
        worst_without = std::max(worst_without, at_n.diagonal[k]);
        worst_with = std::max(worst_with, at_n.diagonal[k] + at_n.reaction[k]);
    }
    auto bound = [&](double worst) {
        const double rate = (1.0 - sigma) * worst;
        return rate > 0.0 ? safety / rate : kInf;
    };
    out.monotone_dt = bound(worst_with);
    out.bounds_dt = bound(worst_without);

    double min_lambda = kInf;
    for (double l : at_np1.reaction) {
        min_lambda = std::min(min_lambda, l);
    }
    out.implicit_ok = at_np1.size() == 0 || -dt_candidate * sigma * min_lambda <= 1.0 - kImplicitMargin;
    return out;
}

TimeStepBound max_stable_dt(const Grid& grid, const ProblemSpec& spec, double sigma, double t,
                            double dt_candidate, double safety)
{
    ScalarField probe = spec.initial_field(grid, t);
    const SchemeOperator at_n = assemble_operator(grid, spec, probe);
    probe.set_time(t + dt_candidate);
    const SchemeOperator at_np1 = assemble_operator(grid, spec, probe);
    return max_stable_dt(at_n, at_np1, sigma, dt_candidate, safety);
}

void require_implicit_margin(const SchemeOperator& at_np1, double sigma, double dt)
{
    for (std::size_t k = 0; k < at_np1.size(); ++k) {
        if (-dt * sigma * at_np1.reaction[k] > 1.0 - kImplicitMargin) {
            throw StabilityError("dt = " + std::to_string(dt) +
                                 " breaks the M-matrix condition of the implicit operator "
                                 "(reaction " + std::to_string(at_np1.reaction[k]) + ")");
        }
    }
}

std::vector<double> weighted_update(const SchemeOperator& at_n, const SchemeOperator& at_np1,
                                    const ScalarField& y_n, std::span<const double> antidiffusion,
                                    const StepConfig& config, std::span<const double> guess)
{
    const Shape& s = at_n.shape;
    const double dt = config.dt;
    const double explicit_w = dt * (1.0 - config.sigma);
    const double implicit_w = dt * config.sigma;

    std::vector<double> rhs(s.interior_size());
    for_each_interior(s, [&](std::size_t i, std::size_t j, std::size_t k) {
        const double yi = y_n(i, j);
        double v = yi;
        if (explicit_w != 0.0) {
            v -= explicit_w * (at_n.neighbor_sum(y_n, i, j, k) + at_n.reaction[k] * yi);
            v += explicit_w * at_n.source[k];
        }
        if (implicit_w != 0.0) {
            v += implicit_w * (at_np1.source[k] + at_np1.inflow[k]);
        }
        if (!antidiffusion.empty()) {
            v += antidiffusion[k];
        }
        rhs[k] = v;
    });
    if (implicit_w == 0.0) {
        return rhs;
    }

    require_implicit_margin(at_np1, config.sigma, dt);
    const std::size_t n = s.interior_size();
    if (s.dim == 1) {
        TridiagonalRows rows;
        rows.lower.resize(n);
        rows.diag.resize(n);
        rows.upper.resize(n);
        for (std::size_t k = 0; k < n; ++k) {
            rows.diag[k] = 1.0 + implicit_w * (at_np1.diagonal[k] + at_np1.reaction[k]);
            rows.lower[k] = k > 0 ? implicit_w * at_np1.lower[0][k] : 0.0;
            rows.upper[k] = k + 1 < n ? implicit_w * at_np1.upper[0][k] : 0.0;
        }
        return thomas_solve(rows, rhs);
    }

    PentadiagonalOperator m;
    m.nx = s.nx;
    m.ny = s.ny;
    m.diag.resize(n);
    m.west.resize(n);
    m.east.resize(n);
    m.south.resize(n);
    m.north.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        m.diag[k] = 1.0 + implicit_w * (at_np1.diagonal[k] + at_np1.reaction[k]);
        m.west[k] = implicit_w * at_np1.lower[0][k];
        m.east[k] = implicit_w * at_np1.upper[0][k];
        m.south[k] = implicit_w * at_np1.lower[1][k];
        m.north[k] = implicit_w * at_np1.upper[1][k];
    }
    std::vector<double> seed(guess.begin(), guess.end());
    if (seed.size() != n) {
        seed = y_n.interior();
    }
    return relaxation_solve(m, rhs, config.linear_tolerance, config.max_relaxation_sweeps, seed)
        .solution;
}

ScalarField monotone_step(const Grid& grid, const ProblemSpec& spec, const ScalarField& y_n,
                          const StepConfig& config)
{
    config.validate();
    y_n.require_shape(grid.shape());
    const double t_next = y_n.time() + config.dt;
    ScalarField next = y_n;
    next.set_time(t_next);
    next.refresh_boundary(grid, t_next, spec.boundary);

    const SchemeOperator at_n = assemble_operator(grid, spec, y_n);
    const SchemeOperator at_np1 = assemble_operator(grid, spec, next);
    next.set_interior(weighted_update(at_n, at_np1, y_n, {}, config));
    return next;
}

}  // namespace fctncd
