#pragma once

#include <cstddef>
#include <vector>

namespace fctncd {

/// Index layout of a 1D or 2D node lattice, boundary nodes included.
///
/// Nodes are addressed by (i, j). Along x, i = 0 and i = nx + 1 are boundary
/// nodes and 1..nx are interior. In 2D the same holds for j along y; in 1D
/// j is always 0. Storage is row-major with x fastest.
struct Shape {
    int dim = 1;
    std::size_t nx = 0;
    std::size_t ny = 1;

    std::size_t stride() const { return nx + 2; }
    std::size_t rows() const { return dim == 2 ? ny + 2 : 1; }
    std::size_t storage_size() const { return stride() * rows(); }
    std::size_t interior_size() const { return nx * ny; }

    std::size_t j_first() const { return dim == 2 ? 1 : 0; }
    std::size_t j_last() const { return dim == 2 ? ny : 0; }

    std::size_t at(std::size_t i, std::size_t j) const { return j * stride() + i; }

    /// Linear index k of an interior node, 0-based, x fastest.
    std::size_t interior(std::size_t i, std::size_t j) const
    {
        return (j - j_first()) * nx + (i - 1);
    }

    bool operator==(const Shape&) const = default;
};

/// Nodes of one coordinate direction, x_0 = a .. x_{N+1} = b.
class Axis {
public:
    static Axis uniform(double a, double b, std::size_t cells);
    static Axis from_coordinates(std::vector<double> coordinates);

    std::size_t interior_count() const { return nodes_.size() - 2; }
    std::size_t node_count() const { return nodes_.size(); }

    double node(std::size_t i) const { return nodes_[i]; }
    double lower() const { return nodes_.front(); }
    double upper() const { return nodes_.back(); }

    /// Face spacing x_{i+1} - x_i for i in [0, N].
    double face_spacing(std::size_t i) const { return nodes_[i + 1] - nodes_[i]; }
    /// Face midpoint (x_i + x_{i+1}) / 2 for i in [0, N].
    double face_center(std::size_t i) const { return 0.5 * (nodes_[i] + nodes_[i + 1]); }
    /// Cell size (x_{i+1} - x_{i-1}) / 2 for interior i in [1, N].
    double cell_size(std::size_t i) const { return 0.5 * (nodes_[i + 1] - nodes_[i - 1]); }

    const std::vector<double>& nodes() const { return nodes_; }

private:
    explicit Axis(std::vector<double> nodes) : nodes_(std::move(nodes)) {}
    std::vector<double> nodes_;
};

/// Tensor-product grid in one or two dimensions.
class Grid {
public:
    static Grid uniform_1d(double a, double b, std::size_t cells);
    static Grid uniform_2d(double ax, double bx, double ay, double by,
                           std::size_t cells_x, std::size_t cells_y);
    static Grid nonuniform_1d(std::vector<double> coordinates);
    static Grid tensor(Axis x, Axis y);

    int dimension() const { return shape_.dim; }
    const Shape& shape() const { return shape_; }
    const Axis& axis(int a) const { return a == 0 ? x_ : y_; }
    const Axis& x_axis() const { return x_; }
    /// Only meaningful in 2D.
    const Axis& y_axis() const { return y_; }

    double x(std::size_t i) const { return x_.node(i); }
    /// y coordinate of row j; 0 in 1D.
    double y(std::size_t j) const { return shape_.dim == 2 ? y_.node(j) : 0.0; }

    /// Measure of the control volume around interior node (i, j).
    double cell_measure(std::size_t i, std::size_t j) const;

private:
    Grid(Axis x, Axis y, Shape shape) : x_(std::move(x)), y_(std::move(y)), shape_(shape) {}

    Axis x_;
    Axis y_;
    Shape shape_;
};

}  // namespace fctncd
