#pragma once

#include <span>
#include <vector>

#include "fctncd/discretization.hpp"
#include "fctncd/field.hpp"
#include "fctncd/problem.hpp"

namespace fctncd {

/// Local extrema over the stencil S_i = {i} plus its axis neighbors,
/// boundary values included when adjacent.
struct StencilBounds {
    Shape shape{};
    std::vector<double> lower;
    std::vector<double> upper;
};

StencilBounds stencil_bounds(const ScalarField& field);

/// Admissible time steps of the low-order scheme.
struct TimeStepBound {
    /// Largest dt keeping the explicit part order-preserving (reaction included).
    double monotone_dt = 0.0;
    /// Largest dt for the local max-principle bounds (reaction excluded).
    double bounds_dt = 0.0;
    /// Implicit matrix E + dt sigma (A + Lambda) is an M-matrix for the candidate dt.
    bool implicit_ok = true;

    double limit() const { return monotone_dt < bounds_dt ? monotone_dt : bounds_dt; }
};

/// Evaluates the time-step conditions from assembled operators. For sigma = 1
/// both explicit bounds are +inf. `safety` multiplies the reported bounds.
TimeStepBound max_stable_dt(const SchemeOperator& at_n, const SchemeOperator& at_np1,
                            double sigma, double dt_candidate, double safety = 1.0);

TimeStepBound max_stable_dt(const Grid& grid, const ProblemSpec& spec, double sigma, double t,
                            double dt_candidate = 0.0, double safety = 1.0);

/// Throws StabilityError when E + dt sigma (A + Lambda) loses its M-matrix margin.
void require_implicit_margin(const SchemeOperator& at_np1, double sigma, double dt);

/// One step of the weighted scheme with a given antidiffusive increment
/// dt * (B alpha)^(sigma) per interior node (empty span means zero).
/// Returns the new interior values; `guess` seeds the 2D relaxation.
std::vector<double> weighted_update(const SchemeOperator& at_n, const SchemeOperator& at_np1,
                                    const ScalarField& y_n, std::span<const double> antidiffusion,
                                    const StepConfig& config, std::span<const double> guess = {});

/// Low-order (all limiters zero) step from y_n to t + dt.
ScalarField monotone_step(const Grid& grid, const ProblemSpec& spec, const ScalarField& y_n,
                          const StepConfig& config);

}  // namespace fctncd
