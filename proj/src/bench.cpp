#include "fctncd/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "fctncd/error.hpp"

namespace fctncd {

namespace {

constexpr double kPi = std::numbers::pi;
// Window edges sit on grid nodes; absorb the rounding of node coordinates.
constexpr double kEdge = 1e-9;

Window interval_window(const Grid& grid, std::string name, double lo, double hi)
{
    Window w{std::move(name), {}};
    for_each_interior(grid.shape(), [&](std::size_t i, std::size_t, std::size_t k) {
        const double x = grid.x(i);
        if (x >= lo - kEdge && x <= hi + kEdge) {
            w.nodes.push_back(k);
        }
    });
    return w;
}

Window disk_window(const Grid& grid, std::string name, double cx, double cy, double radius)
{
    Window w{std::move(name), {}};
    for_each_interior(grid.shape(), [&](std::size_t i, std::size_t j, std::size_t k) {
        const double dx = grid.x(i) - cx;
        const double dy = grid.y(j) - cy;
        if (dx * dx + dy * dy <= radius * radius + kEdge) {
            w.nodes.push_back(k);
        }
    });
    return w;
}

double scaled_radius(double x, double y, double x0, double y0, double r0)
{
    return std::min(std::hypot(x - x0, y - y0), r0) / r0;
}

void require_window(const Window& window)
{
    if (window.nodes.empty()) {
        throw ContractError("error window '" + window.name + "' is empty");
    }
}

std::string format_g6(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

double leonard_profile(double x, double gaussian_width)
{
    constexpr double dx = 0.01;
    if (x >= 0.05 && x <= 0.25) {
        return 1.0;
    }
    if (x >= 0.85 && x <= 1.05) {
        const double s = std::sin(kPi / 0.2 * (x - 0.85));
        return s * s;
    }
    if (x >= 1.6 && x <= 1.9) {
        const double z = (x - 1.75) / (15.0 * dx);
        return std::sqrt(std::max(0.0, 1.0 - z * z));
    }
    if (x >= 2.6 && x <= 2.7) {
        const double z = x - 2.65;
        return std::exp(-z * z / (2.0 * gaussian_width * gaussian_width));
    }
    if (x >= 3.3 && x <= 3.4) {
        return 10.0 * (x - 3.3);
    }
    if (x > 3.4 && x <= 3.5) {
        return 1.0 - 10.0 * (x - 3.4);
    }
    return 0.0;
}

ScalarField BenchmarkCase::exact_field() const
{
    return ScalarField::sample(grid, final_time(), exact);
}

BenchmarkCase advection_case(double gaussian_width)
{
    constexpr double shift = 0.8;
    BenchmarkCase c{
        .name = "advection",
        .grid = Grid::uniform_1d(0.0, 4.5, 450),
        .spec = {},
        .dt = 0.002,
        .steps = 400,
        .exact = {},
        .windows = {},
    };
    c.spec.velocity_x = constant(1.0);
    c.spec.initial = [gaussian_width](double x, double) { return leonard_profile(x, gaussian_width); };
    c.exact = [gaussian_width](double x, double) {
        return leonard_profile(x - shift, gaussian_width);
    };
    struct Support {
        const char* name;
        double lo;
        double hi;
    };
    constexpr Support supports[] = {
        {"square", 0.05, 0.25}, {"sine", 0.85, 1.05},  {"ellipse", 1.6, 1.9},
        {"gaussian", 2.6, 2.7}, {"triangle", 3.3, 3.5},
    };
    for (const Support& s : supports) {
        c.windows.push_back(interval_window(c.grid, s.name, s.lo + shift - 0.1, s.hi + shift + 0.1));
    }
    return c;
}

double slotted_cylinder(double x, double y)
{
    if (std::hypot(x - 0.5, y - 0.75) > 0.15) {
        return 0.0;
    }
    return std::abs(x - 0.5) >= 0.025 || y >= 0.85 ? 1.0 : 0.0;
}

double cone(double x, double y)
{
    return 1.0 - scaled_radius(x, y, 0.25, 0.5, 0.15);
}

double hump(double x, double y)
{
    return 0.25 * (1.0 + std::cos(kPi * scaled_radius(x, y, 0.5, 0.25, 0.1)));
}

BenchmarkCase rotation_case(std::size_t cells, std::size_t steps)
{
    BenchmarkCase c{
        .name = "rotation",
        .grid = Grid::uniform_2d(0.0, 1.0, 0.0, 1.0, cells, cells),
        .spec = {},
        .dt = 1.0 / static_cast<double>(steps),
        .steps = steps,
        .exact = {},
        .windows = {},
    };
    c.spec.velocity_x = [](double, double y, double) { return -2.0 * kPi * (y - 0.5); };
    c.spec.velocity_y = [](double x, double, double) { return 2.0 * kPi * (x - 0.5); };
    auto bodies = [](double x, double y) { return slotted_cylinder(x, y) + cone(x, y) + hump(x, y); };
    c.spec.initial = bodies;
    c.exact = bodies;
    c.windows.push_back(disk_window(c.grid, "cylinder", 0.5, 0.75, 0.15 + 0.05));
    c.windows.push_back(disk_window(c.grid, "cone", 0.25, 0.5, 0.15 + 0.05));
    c.windows.push_back(disk_window(c.grid, "hump", 0.5, 0.25, 0.1 + 0.05));
    return c;
}

ManufacturedSolution constant_solution(double value)
{
    auto zero = [](double, double) { return 0.0; };
    return {"constant", [value](double, double) { return value; }, zero, zero, zero};
}

ManufacturedSolution linear_solution(double slope, double intercept)
{
    auto zero = [](double, double) { return 0.0; };
    return {"linear", [=](double x, double) { return slope * x + intercept; }, zero,
            [slope](double, double) { return slope; }, zero};
}

ManufacturedSolution travelling_sine(double k, double c)
{
    return {
        "sine",
        [=](double x, double t) { return std::sin(k * (x - c * t)); },
        [=](double x, double t) { return -k * c * std::cos(k * (x - c * t)); },
        [=](double x, double t) { return k * std::cos(k * (x - c * t)); },
        [=](double x, double t) { return -k * k * std::sin(k * (x - c * t)); },
    };
}

BenchmarkCase manufactured_case(const ManufacturedSolution& solution,
                                const ManufacturedParams& p)
{
    BenchmarkCase c{
        .name = "manufactured-" + solution.name,
        .grid = Grid::uniform_1d(p.a, p.b, p.cells),
        .spec = {},
        .dt = p.dt,
        .steps = p.steps,
        .exact = {},
        .windows = {},
    };
    const double u = p.velocity;
    const double d = p.diffusion;
    const double lambda = p.reaction;
    c.spec.velocity_x = constant(u);
    c.spec.diffusion = constant(d);
    c.spec.reaction = constant(lambda);
    c.spec.source = [s = solution, u, d, lambda](double x, double, double t) {
        return s.rho_t(x, t) + u * s.rho_x(x, t) + lambda * s.rho(x, t) - d * s.rho_xx(x, t);
    };
    c.spec.boundary = [rho = solution.rho](double x, double, double t) { return rho(x, t); };
    c.spec.initial = [rho = solution.rho](double x, double) { return rho(x, 0.0); };
    const double t_end = c.final_time();
    c.exact = [rho = solution.rho, t_end](double x, double) { return rho(x, t_end); };
    c.windows.push_back(interval_window(c.grid, "all", p.a, p.b));
    return c;
}

double l1_error(const Grid& grid, const ScalarField& numeric, const ScalarField& exact,
                const Window& window)
{
    require_window(window);
    numeric.require_shape(grid.shape());
    exact.require_shape(grid.shape());
    const Shape& s = grid.shape();
    double sum = 0.0;
    for (std::size_t k : window.nodes) {
        const std::size_t i = k % s.nx + 1;
        const std::size_t j = k / s.nx + s.j_first();
        sum += std::abs(numeric(i, j) - exact(i, j)) * grid.cell_measure(i, j);
    }
    return sum;
}

double l1_error_mean(const ScalarField& numeric, const ScalarField& exact, const Window& window)
{
    require_window(window);
    exact.require_shape(numeric.shape());
    const std::vector<double> a = numeric.interior();
    const std::vector<double> b = exact.interior();
    double sum = 0.0;
    for (std::size_t k : window.nodes) {
        sum += std::abs(a[k] - b[k]);
    }
    return sum / static_cast<double>(window.nodes.size());
}

double max_value(const ScalarField& field, const Window& window)
{
    require_window(window);
    const std::vector<double> v = field.interior();
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t k : window.nodes) {
        m = std::max(m, v[k]);
    }
    return m;
}

void ErrorReport::write_csv(std::ostream& out) const
{
    out << "case,shape,sigma,scheme,l1_error,l1_alt,y_max,steps,dt,converged\n";
    for (const ErrorRow& r : rows) {
        out << r.case_name << ',' << r.shape << ',' << format_g6(r.sigma) << ','
            << to_string(r.scheme) << ',' << format_g6(r.l1_error) << ',' << format_g6(r.l1_alt)
            << ',' << format_g6(r.y_max) << ',' << r.steps << ',' << format_g6(r.dt) << ','
            << (r.converged ? "true" : "false") << '\n';
    }
}

const ErrorRow* ErrorReport::find(const std::string& shape, double sigma, SchemeKind scheme) const
{
    for (const ErrorRow& r : rows) {
        if (r.shape == shape && r.sigma == sigma && r.scheme == scheme) {
            return &r;
        }
    }
    return nullptr;
}

std::vector<ErrorRow> measure(const BenchmarkCase& bench, const ScalarField& numeric,
                              double sigma, SchemeKind scheme, bool converged)
{
    const ScalarField exact = bench.exact_field();
    std::vector<ErrorRow> rows;
    for (const Window& w : bench.windows) {
        ErrorRow r;
        r.case_name = bench.name;
        r.shape = w.name;
        r.sigma = sigma;
        r.scheme = scheme;
        r.l1_error = l1_error(bench.grid, numeric, exact, w);
        r.l1_alt = l1_error_mean(numeric, exact, w);
        r.y_max = max_value(numeric, w);
        r.steps = bench.steps;
        r.dt = bench.dt;
        r.converged = converged;
        rows.push_back(std::move(r));
    }
    return rows;
}

ErrorReport run_table(const BenchmarkCase& bench, const std::vector<SchemeKind>& schemes,
                      const std::vector<double>& sigmas, const TableOptions& options)
{
    ErrorReport report;
    for (double sigma : sigmas) {
        for (SchemeKind scheme : schemes) {
            StepConfig config;
            config.sigma = sigma;
            config.dt = bench.dt;
            config.scheme = scheme;
            config.oracle = options.oracle;
            RunOptions run;
            run.steps = bench.steps;
            run.probe = options.probe;
            const RunResult result = run_simulation(bench.grid, bench.spec, config, run);
            auto rows = measure(bench, result.final_field, sigma, scheme,
                                result.nonconverged_steps == 0);
            report.rows.insert(report.rows.end(), rows.begin(), rows.end());
        }
    }
    return report;
}

}  // namespace fctncd
