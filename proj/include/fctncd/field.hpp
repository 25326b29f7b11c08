#pragma once

#include <functional>
#include <span>
#include <vector>

#include "fctncd/grid.hpp"

namespace fctncd {

/// Grid function at one time level, boundary values included.
///
/// Values live in the storage layout of Shape: interior nodes plus the
/// boundary nodes (the two end points in 1D, the full ring in 2D).
class ScalarField {
public:
    ScalarField() = default;
    ScalarField(const Shape& shape, double time);

    /// Samples value(x, y) at every node of the grid, boundary included.
    static ScalarField sample(const Grid& grid, double time,
                              const std::function<double(double, double)>& value);

    const Shape& shape() const { return shape_; }
    double time() const { return time_; }
    void set_time(double t) { time_ = t; }

    double operator()(std::size_t i, std::size_t j) const { return values_[shape_.at(i, j)]; }
    double& operator()(std::size_t i, std::size_t j) { return values_[shape_.at(i, j)]; }

    std::span<const double> storage() const { return values_; }
    std::span<double> storage() { return values_; }

    /// Interior values in interior-index order (x fastest).
    std::vector<double> interior() const;
    void set_interior(std::span<const double> values);

    /// Overwrites boundary nodes with rho(x, y, t).
    void refresh_boundary(const Grid& grid, double t,
                          const std::function<double(double, double, double)>& rho);

    bool all_finite() const;
    double interior_min() const;
    double interior_max() const;

    /// Throws ContractError when the field does not match the grid.
    void require_shape(const Shape& expected) const;

private:
    Shape shape_{};
    double time_ = 0.0;
    std::vector<double> values_;
};

/// Calls fn(i, j, k) for every interior node, k being its interior index.
template <class Fn>
void for_each_interior(const Shape& shape, Fn&& fn)
{
    std::size_t k = 0;
    for (std::size_t j = shape.j_first(); j <= shape.j_last(); ++j) {
        for (std::size_t i = 1; i <= shape.nx; ++i) {
            fn(i, j, k++);
        }
    }
}

/// Neighbor of (i, j) one step along axis (0 = x, 1 = y) in direction dir (-1 or +1).
inline std::size_t neighbor(const Shape& shape, std::size_t i, std::size_t j, int axis, int dir)
{
    return axis == 0 ? shape.at(i + dir, j) : shape.at(i, j + dir);
}

}  // namespace fctncd
