#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "fctncd/field.hpp"
#include "fctncd/grid.hpp"
#include "fctncd/problem.hpp"
#include "fctncd/stepper.hpp"

namespace fctncd {

/// Standard deviation of the Gaussian pulse of the five-shape profile.
inline constexpr double kLeonardGaussianWidth = 0.025;

/// Five-shape advection profile: square wave, sine-squared, semi-ellipse,
/// Gaussian and triangle on [0.05, 3.5]; 0 elsewhere.
double leonard_profile(double x, double gaussian_width = kLeonardGaussianWidth);

/// Interior nodes over which one shape or body is measured.
struct Window {
    std::string name;
    std::vector<std::size_t> nodes;
};

struct BenchmarkCase {
    std::string name;
    Grid grid;
    ProblemSpec spec;
    double dt = 0.0;
    std::size_t steps = 0;
    /// Exact solution at t = steps * dt.
    std::function<double(double x, double y)> exact;
    std::vector<Window> windows;

    double final_time() const { return dt * static_cast<double>(steps); }
    ScalarField exact_field() const;
};

/// Five-shape advection on [0, 4.5], dx = 0.01, u = 1, Courant 0.2, 400 steps.
BenchmarkCase advection_case(double gaussian_width = kLeonardGaussianWidth);

/// Slotted cylinder, cone and hump rotated once around (0.5, 0.5).
BenchmarkCase rotation_case(std::size_t cells = 128, std::size_t steps = 5000);

/// Bodies of the rotation test at t = 0.
double slotted_cylinder(double x, double y);
double cone(double x, double y);
double hump(double x, double y);

/// Exact 1D solution with the derivatives needed to build its source term.
struct ManufacturedSolution {
    std::string name;
    std::function<double(double x, double t)> rho;
    std::function<double(double x, double t)> rho_t;
    std::function<double(double x, double t)> rho_x;
    std::function<double(double x, double t)> rho_xx;
};

ManufacturedSolution constant_solution(double value);
ManufacturedSolution linear_solution(double slope, double intercept);
/// sin(k (x - c t)).
ManufacturedSolution travelling_sine(double wavenumber, double speed);

struct ManufacturedParams {
    double velocity = 0.0;
    double diffusion = 0.0;
    double reaction = 0.0;
    double a = 0.0;
    double b = 1.0;
    std::size_t cells = 50;
    double dt = 1e-3;
    std::size_t steps = 100;
};

/// Case whose source term makes `solution` exact:
/// f = rho_t + u rho_x + lambda rho - D rho_xx. One window over all nodes.
BenchmarkCase manufactured_case(const ManufacturedSolution& solution,
                                const ManufacturedParams& params);

/// Sum of |numeric - exact| times cell measure over the window.
double l1_error(const Grid& grid, const ScalarField& numeric, const ScalarField& exact,
                const Window& window);
/// Sum of |numeric - exact| divided by the number of window nodes.
double l1_error_mean(const ScalarField& numeric, const ScalarField& exact, const Window& window);
double max_value(const ScalarField& field, const Window& window);

struct ErrorRow {
    std::string case_name;
    std::string shape;
    double sigma = 0.0;
    SchemeKind scheme = SchemeKind::Ndva;
    double l1_error = 0.0;
    double l1_alt = 0.0;
    double y_max = 0.0;
    std::size_t steps = 0;
    double dt = 0.0;
    bool converged = true;
};

struct ErrorReport {
    std::vector<ErrorRow> rows;

    /// Header case,shape,sigma,scheme,l1_error,l1_alt,y_max,steps,dt,converged; %.6g numbers.
    void write_csv(std::ostream& out) const;
    const ErrorRow* find(const std::string& shape, double sigma, SchemeKind scheme) const;
};

/// Metrics of one finished run on every window of the case.
std::vector<ErrorRow> measure(const BenchmarkCase& bench, const ScalarField& numeric,
                              double sigma, SchemeKind scheme, bool converged);

struct TableOptions {
    bool oracle = false;
    LimiterProbe probe;
};

/// Runs every (sigma, scheme) pair in order: sigma outer, scheme inner.
ErrorReport run_table(const BenchmarkCase& bench, const std::vector<SchemeKind>& schemes,
                      const std::vector<double>& sigmas, const TableOptions& options = {});

}  // namespace fctncd
