#pragma once

#include <functional>
#include <limits>
#include <string>
#include <string_view>

#include "fctncd/field.hpp"
#include "fctncd/grid.hpp"

namespace fctncd {

/// Coefficient of the equation as a function of (x, y, t). In 1D y is 0.
using SpaceTimeFn = std::function<double(double x, double y, double t)>;

SpaceTimeFn constant(double value);

/// Data of  rho_t + u . grad rho + lambda rho = div(D grad rho) + f
/// with Dirichlet boundary data and an initial profile.
///
/// Face quantities (velocity components, diffusion) are evaluated at face
/// midpoints; reaction and source at nodes.
struct ProblemSpec {
    SpaceTimeFn velocity_x = constant(0.0);
    SpaceTimeFn velocity_y = constant(0.0);
    SpaceTimeFn diffusion = constant(0.0);
    SpaceTimeFn reaction = constant(0.0);
    SpaceTimeFn source = constant(0.0);
    /// Dirichlet data; rho_a(t) = boundary(a, 0, t) and rho_b(t) = boundary(b, 0, t) in 1D.
    SpaceTimeFn boundary = constant(0.0);
    std::function<double(double x, double y)> initial = [](double, double) { return 0.0; };
    /// Declared upper bound mu on D.
    double diffusion_bound = std::numeric_limits<double>::max();

    const SpaceTimeFn& velocity(int axis) const { return axis == 0 ? velocity_x : velocity_y; }

    /// D(x, y, t), throwing DataError outside [0, mu].
    double diffusion_at(double x, double y, double t) const;

    /// Initial field sampled at every node, boundary refreshed from the boundary data at t.
    ScalarField initial_field(const Grid& grid, double t = 0.0) const;
};

enum class SchemeKind { Low, High, Ndvl, Ndva, Div };

std::string_view to_string(SchemeKind kind);
/// Parses LOW/HIGH/NDVL/NDVA/DIV (case-insensitive), throwing ConfigError otherwise.
SchemeKind parse_scheme(std::string_view name);

/// Parameters of one time step of the weighted hybrid scheme.
struct StepConfig {
    /// Time weight; 0 explicit, 1 fully implicit.
    double sigma = 0.0;
    double dt = 0.0;
    SchemeKind scheme = SchemeKind::Ndva;

    // Stop criterion of the outer iteration.
    double delta = 1e-8;
    double eps1 = 1e-8;
    /// eps2 is this value times the number of limiter variables.
    double eps2_per_variable = 1e-8;
    int max_outer_iterations = 50;

    /// Relative residual target of the 2D Gauss-Seidel solve.
    double linear_tolerance = 1e-11;
    int max_relaxation_sweeps = 20000;

    /// Cross-check every separable LP against the dense simplex.
    bool oracle = false;

    void validate() const;
};

}  // namespace fctncd
