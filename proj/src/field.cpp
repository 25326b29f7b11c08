#include "fctncd/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fctncd/error.hpp"

namespace fctncd {

ScalarField::ScalarField(const Shape& shape, double time)
    : shape_(shape), time_(time), values_(shape.storage_size(), 0.0)
{
}

ScalarField ScalarField::sample(const Grid& grid, double time,
                                const std::function<double(double, double)>& value)
{
    const Shape& s = grid.shape();
    ScalarField field(s, time);
    for (std::size_t j = 0; j < s.rows(); ++j) {
        for (std::size_t i = 0; i < s.stride(); ++i) {
            field(i, j) = value(grid.x(i), grid.y(j));
        }
    }
    return field;
}

std::vector<double> ScalarField::interior() const
{
    std::vector<double> out(shape_.interior_size());
    for_each_interior(shape_, [&](std::size_t i, std::size_t j, std::size_t k) {
        out[k] = (*this)(i, j);
    });
    return out;
}

void ScalarField::set_interior(std::span<const double> values)
{
    if (values.size() != shape_.interior_size()) {
        throw ContractError("interior size mismatch: expected " +
                            std::to_string(shape_.interior_size()) + ", got " +
                            std::to_string(values.size()));
    }
    for_each_interior(shape_, [&](std::size_t i, std::size_t j, std::size_t k) {
        (*this)(i, j) = values[k];
    });
}

void ScalarField::refresh_boundary(const Grid& grid, double t,
                                   const std::function<double(double, double, double)>& rho)
{
    const Shape& s = shape_;
    if (s.dim == 1) {
        (*this)(0, 0) = rho(grid.x(0), 0.0, t);
        (*this)(s.nx + 1, 0) = rho(grid.x(s.nx + 1), 0.0, t);
        return;
    }
    for (std::size_t i = 0; i < s.stride(); ++i) {
        (*this)(i, 0) = rho(grid.x(i), grid.y(0), t);
        (*this)(i, s.ny + 1) = rho(grid.x(i), grid.y(s.ny + 1), t);
    }
    for (std::size_t j = 1; j <= s.ny; ++j) {
        (*this)(0, j) = rho(grid.x(0), grid.y(j), t);
        (*this)(s.nx + 1, j) = rho(grid.x(s.nx + 1), grid.y(j), t);
    }
}

bool ScalarField::all_finite() const
{
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double ScalarField::interior_min() const
{
    double m = std::numeric_limits<double>::infinity();
    for_each_interior(shape_, [&](std::size_t i, std::size_t j, std::size_t) {
        m = std::min(m, (*this)(i, j));
    });
    return m;
}

double ScalarField::interior_max() const
{
    double m = -std::numeric_limits<double>::infinity();
    for_each_interior(shape_, [&](std::size_t i, std::size_t j, std::size_t) {
        m = std::max(m, (*this)(i, j));
    });
    return m;
}

void ScalarField::require_shape(const Shape& expected) const
{
    if (!(shape_ == expected)) {
        throw ContractError("field shape (" + std::to_string(shape_.nx) + "x" +
                            std::to_string(shape_.ny) + ") does not match grid (" +
                            std::to_string(expected.nx) + "x" + std::to_string(expected.ny) +
                            ")");
    }
}

}  // namespace fctncd
