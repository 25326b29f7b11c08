#include "fctncd/grid.hpp"

#include <cmath>
#include <string>

#include "fctncd/error.hpp"

namespace fctncd {

Axis Axis::uniform(double a, double b, std::size_t cells)
{
    if (!(b > a) || !std::isfinite(a) || !std::isfinite(b)) {
        throw ConfigError("grid extent must be positive, got [" + std::to_string(a) + ", " +
                          std::to_string(b) + "]");
    }
    if (cells < 3) {
        throw ConfigError("grid needs at least 3 cells per axis, got " + std::to_string(cells));
    }
    std::vector<double> nodes(cells + 1);
    // a + (b - a) * i / cells keeps nodes like 0.05 or 0.25 exact on [0, 4.5].
    for (std::size_t i = 0; i <= cells; ++i) {
        nodes[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(cells);
    }
    nodes.back() = b;
    return Axis(std::move(nodes));
}

Axis Axis::from_coordinates(std::vector<double> coordinates)
{
    for (std::size_t i = 0; i < coordinates.size(); ++i) {
        if (!std::isfinite(coordinates[i])) {
            throw ConfigError("axis coordinate " + std::to_string(i) + " is not finite");
        }
        if (i > 0 && !(coordinates[i] > coordinates[i - 1])) {
            throw ConfigError("axis coordinates must be strictly increasing (index " +
                              std::to_string(i) + ")");
        }
    }
    if (coordinates.size() < 4) {
        throw ConfigError("nonuniform axis needs at least 4 coordinates, got " +
                          std::to_string(coordinates.size()));
    }
    return Axis(std::move(coordinates));
}

Grid Grid::uniform_1d(double a, double b, std::size_t cells)
{
    return nonuniform_1d(Axis::uniform(a, b, cells).nodes());
}

Grid Grid::uniform_2d(double ax, double bx, double ay, double by, std::size_t cells_x,
                      std::size_t cells_y)
{
    return tensor(Axis::uniform(ax, bx, cells_x), Axis::uniform(ay, by, cells_y));
}

Grid Grid::nonuniform_1d(std::vector<double> coordinates)
{
    Axis x = Axis::from_coordinates(std::move(coordinates));
    Shape shape{1, x.interior_count(), 1};
    // Placeholder y axis, never read in 1D.
    Axis y = Axis::uniform(0.0, 1.0, 3);
    return Grid(std::move(x), std::move(y), shape);
}

Grid Grid::tensor(Axis x, Axis y)
{
    Shape shape{2, x.interior_count(), y.interior_count()};
    return Grid(std::move(x), std::move(y), shape);
}

double Grid::cell_measure(std::size_t i, std::size_t j) const
{
    double m = x_.cell_size(i);
    if (shape_.dim == 2) {
        m *= y_.cell_size(j);
    }
    return m;
}

}  // namespace fctncd
