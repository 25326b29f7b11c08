#include "fctncd/problem.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "fctncd/error.hpp"

namespace fctncd {

SpaceTimeFn constant(double value)
{
    return [value](double, double, double) { return value; };
}

double ProblemSpec::diffusion_at(double x, double y, double t) const
{
    const double d = diffusion(x, y, t);
    if (!(d >= 0.0) || d > diffusion_bound) {
        throw DataError("diffusion coefficient " + std::to_string(d) + " at (" +
                        std::to_string(x) + ", " + std::to_string(y) + ") outside [0, " +
                        std::to_string(diffusion_bound) + "]");
    }
    return d;
}

ScalarField ProblemSpec::initial_field(const Grid& grid, double t) const
{
    ScalarField field = ScalarField::sample(grid, t, initial);
    field.refresh_boundary(grid, t, boundary);
    return field;
}

std::string_view to_string(SchemeKind kind)
{
    switch (kind) {
    case SchemeKind::Low:
        return "LOW";
    case SchemeKind::High:
        return "HIGH";
    case SchemeKind::Ndvl:
        return "NDVL";
    case SchemeKind::Ndva:
        return "NDVA";
    case SchemeKind::Div:
        return "DIV";
    }
    return "?";
}

SchemeKind parse_scheme(std::string_view name)
{
    std::string upper(name);
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    for (SchemeKind k : {SchemeKind::Low, SchemeKind::High, SchemeKind::Ndvl, SchemeKind::Ndva,
                         SchemeKind::Div}) {
        if (upper == to_string(k)) {
            return k;
        }
    }
    throw ConfigError("unknown scheme '" + std::string(name) +
                      "' (expected LOW, HIGH, NDVL, NDVA or DIV)");
}

void StepConfig::validate() const
{
    if (!(sigma >= 0.0 && sigma <= 1.0)) {
        throw ConfigError("sigma must lie in [0, 1], got " + std::to_string(sigma));
    }
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw ConfigError("time step must be positive, got " + std::to_string(dt));
    }
    if (!(delta > 0.0 && eps1 > 0.0 && eps2_per_variable > 0.0 && linear_tolerance > 0.0)) {
        throw ConfigError("iteration tolerances must be positive");
    }
    if (max_outer_iterations < 1 || max_relaxation_sweeps < 1) {
        throw ConfigError("iteration caps must be at least 1");
    }
}

}  // namespace fctncd
