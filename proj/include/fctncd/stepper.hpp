#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "fctncd/field.hpp"
#include "fctncd/grid.hpp"
#include "fctncd/limiter.hpp"
#include "fctncd/lp.hpp"
#include "fctncd/monotone.hpp"
#include "fctncd/problem.hpp"

namespace fctncd {

/// Outcome of the outer iteration of one time step.
struct IterationReport {
    int iterations = 0;
    /// max_i |y^{p+1} - y^p| / max(delta, |y^{p+1}|) of the last iteration.
    double field_change = 0.0;
    /// |J(alpha^{p+1}) - J(alpha^p)| of the last iteration.
    double objective_change = 0.0;
    bool converged = true;
    /// Largest |dense - separable| objective gap seen in oracle mode.
    double oracle_gap = 0.0;
    /// Rows where alpha = 0 was infeasible (inadmissible dt).
    std::size_t zero_infeasible_rows = 0;
};

/// Everything the limiter stage saw in one outer iteration. Pointers are
/// valid only during the probe call; div_program is set for DIV only.
struct LimiterContext {
    int iteration = 0;
    const LimiterProgram* program = nullptr;
    const BoxedProgram* div_program = nullptr;
    const LimiterSet* limiters = nullptr;
    const StencilBounds* bounds = nullptr;
};

using LimiterProbe = std::function<void(const LimiterContext&)>;

struct StepResult {
    ScalarField field;
    IterationReport report;
};

/// One step of the weighted hybrid scheme from y_n (boundary at t_n) to t_n + dt.
/// A non-converged outer loop returns its last iterate with converged = false.
/// Oracle mode throws SolverError when the dense and separable LP optima differ.
StepResult advance(const Grid& grid, const ProblemSpec& spec, const ScalarField& y_n,
                   const StepConfig& config, const LimiterProbe& probe = {});

using SnapshotFn = std::function<void(std::size_t step, const ScalarField& field)>;

struct RunOptions {
    std::size_t steps = 0;
    /// Snapshot every this many steps (0: only the final field). Step 0 is the initial field.
    std::size_t snapshot_every = 0;
    SnapshotFn on_snapshot;
    LimiterProbe probe;
    std::function<void(std::size_t step, const IterationReport&)> on_report;
};

struct RunResult {
    ScalarField final_field;
    std::size_t steps = 0;
    std::size_t nonconverged_steps = 0;
    std::size_t total_iterations = 0;
    int max_iterations = 0;
    double max_oracle_gap = 0.0;

    double mean_iterations() const
    {
        return steps == 0 ? 0.0 : static_cast<double>(total_iterations) / steps;
    }
};

RunResult run_simulation(const Grid& grid, const ProblemSpec& spec, const StepConfig& config,
                         const RunOptions& options);

/// Same, starting from a given field instead of spec.initial.
RunResult run_simulation(const Grid& grid, const ProblemSpec& spec, const StepConfig& config,
                         ScalarField initial, const RunOptions& options);

}  // namespace fctncd
