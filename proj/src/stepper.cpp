#include "fctncd/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fctncd/error.hpp"

namespace fctncd {

namespace {

constexpr double kOracleTolerance = 1e-8;

double relative_change(std::span<const double> next, std::span<const double> prev, double delta)
{
    double worst = 0.0;
    for (std::size_t k = 0; k < next.size(); ++k) {
        worst = std::max(worst, std::abs(next[k] - prev[k]) / std::max(delta, std::abs(next[k])));
    }
    return worst;
}

double check_oracle(const LimiterProgram& program)
{
    const double separable = solve_separable(program).objective;
    const LimiterSolution dense = solve_dense(program);
    const double gap = std::abs(dense.objective - separable);
    if (dense.status != LpStatus::Optimal || gap > kOracleTolerance) {
        std::ostringstream msg;
        msg << "dense LP objective " << dense.objective << " differs from the separable optimum "
            << separable << " (gap " << gap << ")";
        throw SolverError(msg.str());
    }
    return gap;
}

}  // namespace

StepResult advance(const Grid& grid, const ProblemSpec& spec, const ScalarField& y_n,
                   const StepConfig& config, const LimiterProbe& probe)
{
    config.validate();
    y_n.require_shape(grid.shape());
    const double t_n = y_n.time();
    const double t_np1 = t_n + config.dt;
    const bool div = config.scheme == SchemeKind::Div;
    const bool explicit_only = config.sigma == 0.0;

    ScalarField iterate = y_n;
    iterate.set_time(t_np1);
    iterate.refresh_boundary(grid, t_np1, spec.boundary);

    const StencilBounds bounds = stencil_bounds(y_n);
    auto assemble = [&](const ScalarField& f) {
        return div ? assemble_div_operator(grid, spec, f, f.time()) : assemble_operator(grid, spec, f);
    };
    const SchemeOperator at_n = assemble(y_n);
    SchemeOperator at_np1 = explicit_only ? at_n : assemble(iterate);
    DivFaceFlux flux_n;
    DivFaceFlux flux_np1;
    if (div) {
        flux_n = div_face_fluxes(grid, spec, y_n, t_n);
        flux_np1 = explicit_only ? flux_n : div_face_fluxes(grid, spec, iterate, t_np1);
    }

    StepResult result;
    IterationReport& report = result.report;
    std::vector<double> previous = iterate.interior();
    double previous_objective = 0.0;

    for (int p = 0;; ++p) {
        if (p > 0) {
            if (div) {
                flux_np1 = div_face_fluxes(grid, spec, iterate, t_np1);
            } else {
                update_antidiffusion(at_np1, grid, iterate);
            }
        }
        const LimiterProgram program = assemble_program(at_n, at_np1, bounds, y_n, config);
        report.zero_infeasible_rows = std::max(report.zero_infeasible_rows, program.zero_infeasible_rows);

        BoxedProgram div_program;
        LimiterSet limiters;
        switch (config.scheme) {
        case SchemeKind::Low:
            limiters = LimiterSet::nodes(grid.shape(), 0.0);
            break;
        case SchemeKind::High:
            limiters = LimiterSet::nodes(grid.shape(), 1.0);
            break;
        case SchemeKind::Ndvl:
            limiters = lp_limiters(program);
            break;
        case SchemeKind::Ndva:
            limiters = approx_limiters(program, config.dt);
            break;
        case SchemeKind::Div:
            div_program = assemble_div_program(grid, flux_n, flux_np1, program, config);
            limiters = div_limiters(div_program, flux_n, config.dt);
            break;
        }
        if (config.oracle && !div) {
            report.oracle_gap = std::max(report.oracle_gap, check_oracle(program));
        }
        if (probe) {
            LimiterContext ctx;
            ctx.iteration = p;
            ctx.program = &program;
            ctx.div_program = div ? &div_program : nullptr;
            ctx.limiters = &limiters;
            ctx.bounds = &bounds;
            probe(ctx);
        }

        const std::vector<double> antidiffusion =
            div ? row_values(div_program, limiters) : row_values(program, limiters);
        std::vector<double> next = weighted_update(at_n, at_np1, y_n, antidiffusion, config, previous);
        iterate.set_interior(next);
        report.iterations = p + 1;
        if (explicit_only) {
            break;
        }

        const double objective = limiters.objective();
        report.field_change = relative_change(next, previous, config.delta);
        report.objective_change = std::abs(objective - previous_objective);
        const double eps2 = config.eps2_per_variable * static_cast<double>(limiters.values.size());
        if (report.field_change < config.eps1 && report.objective_change < eps2) {
            report.converged = true;
            break;
        }
        if (p + 1 >= config.max_outer_iterations) {
            report.converged = false;
            break;
        }
        previous = std::move(next);
        previous_objective = objective;
    }

    if (!iterate.all_finite()) {
        throw SolverError("non-finite values after step to t = " + std::to_string(t_np1));
    }
    result.field = std::move(iterate);
    return result;
}

RunResult run_simulation(const Grid& grid, const ProblemSpec& spec, const StepConfig& config,
                         const RunOptions& options)
{
    return run_simulation(grid, spec, config, spec.initial_field(grid, 0.0), options);
}

RunResult run_simulation(const Grid& grid, const ProblemSpec& spec, const StepConfig& config,
                         ScalarField initial, const RunOptions& options)
{
    config.validate();
    initial.require_shape(grid.shape());
    initial.refresh_boundary(grid, initial.time(), spec.boundary);
    RunResult run;
    ScalarField field = std::move(initial);
    const std::size_t every = options.snapshot_every;
    if (options.on_snapshot && every > 0) {
        options.on_snapshot(0, field);
    }
    const double t0 = field.time();
    for (std::size_t n = 1; n <= options.steps; ++n) {
        // Pin the level to t0 + (n - 1) dt so repeated additions do not drift.
        field.set_time(t0 + static_cast<double>(n - 1) * config.dt);
        StepResult step = advance(grid, spec, field, config, options.probe);
        field = std::move(step.field);
        const IterationReport& r = step.report;
        run.steps = n;
        run.total_iterations += static_cast<std::size_t>(r.iterations);
        run.max_iterations = std::max(run.max_iterations, r.iterations);
        run.max_oracle_gap = std::max(run.max_oracle_gap, r.oracle_gap);
        if (!r.converged) {
            ++run.nonconverged_steps;
        }
        if (options.on_report) {
            options.on_report(n, r);
        }
        if (options.on_snapshot && every > 0 && n % every == 0) {
            options.on_snapshot(n, field);
        }
    }
    if (options.on_snapshot && (every == 0 || options.steps % every != 0)) {
        options.on_snapshot(options.steps, field);
    }
    run.final_field = std::move(field);
    return run;
}

}  // namespace fctncd
