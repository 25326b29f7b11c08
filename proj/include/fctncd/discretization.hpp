#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "fctncd/field.hpp"
#include "fctncd/grid.hpp"
#include "fctncd/problem.hpp"

namespace fctncd {

/// Per-axis arrays over interior nodes; [axis][k].
using AxisArrays = std::array<std::vector<double>, 2>;

/// Upwind/diffusion splitting of every interior node.
///
/// For axis a and node i, with X = D/dx_i - |u|/2 evaluated on the lower
/// face for the "+" family and on the upper face for the "-" family:
///   d+ = max(0, X),  r+ = -min(0, X)      (lower face)
///   d- = -max(0, X), r- = min(0, X)       (upper face)
/// so d+ >= 0 >= d-, r+ >= 0 >= r-, and d+ - r+ = X, d- - r- = -X.
struct UpwindCoeffs {
    Shape shape{};
    double time = 0.0;
    AxisArrays d_plus;
    AxisArrays d_minus;
    AxisArrays r_plus;
    AxisArrays r_minus;
};

UpwindCoeffs upwind_coeffs(const Grid& grid, const ProblemSpec& spec, double t);

/// Coefficients of the weighted scheme at one time level.
///
/// Row i of A couples node i to its axis neighbors through `lower` (a_{i,i-1})
/// and `upper` (a_{i,i+1}); `diagonal` holds a_ii = -sum of off-diagonals.
/// Couplings to boundary nodes are kept in lower/upper too: the matrix form
/// moves them into `inflow`, which equals -a_{i,bnd} * y_bnd.
struct SchemeOperator {
    Shape shape{};
    double time = 0.0;
    AxisArrays lower;
    AxisArrays upper;
    std::vector<double> diagonal;
    std::vector<double> reaction;
    std::vector<double> source;
    std::vector<double> inflow;
    /// Antidiffusion coefficients b+ = r+ (y_i - y_{i-1}) / h_{i-1/2}, b- = r- (y_{i+1} - y_i) / h_{i+1/2}.
    AxisArrays b_plus;
    AxisArrays b_minus;
    /// r+/r- used to (re)build b from a field.
    AxisArrays r_plus;
    AxisArrays r_minus;

    int axes() const { return shape.dim; }
    std::size_t size() const { return diagonal.size(); }

    /// g = inflow + f.
    std::vector<double> g() const;

    /// sum over j != i of a_ij (y_j - y_i), boundary neighbors included.
    double neighbor_sum(const ScalarField& y, std::size_t i, std::size_t j, std::size_t k) const;
};

SchemeOperator assemble_operator(const Grid& grid, const ProblemSpec& spec,
                                 const UpwindCoeffs& coeffs, const ScalarField& field, double t);

/// Convenience: upwind_coeffs + assemble_operator at the field's time.
SchemeOperator assemble_operator(const Grid& grid, const ProblemSpec& spec,
                                 const ScalarField& field);

/// Recomputes b+/b- of `op` from `field` keeping A, lambda and g.
void update_antidiffusion(SchemeOperator& op, const Grid& grid, const ScalarField& field);

/// Face decomposition of the divergent-form convective term.
///
/// Faces along x are indexed (row, i) for the face between nodes i and i+1,
/// i in [0, nx]; faces along y are indexed (j, column) for the face between
/// rows j and j+1, j in [0, ny]. With D > 0 the antidiffusive piece carries
/// the face analog of r: max(0, |u|/2 - D/h_face) * (rho_{i+1} - rho_i).
struct DivFaceFlux {
    Shape shape{};
    double time = 0.0;
    /// u+ rho_i + u- rho_{i+1}
    AxisArrays low_order;
    /// Unlimited antidiffusive face increment.
    AxisArrays antidiffusive;
    /// Face velocity component.
    AxisArrays velocity;
    /// rho_i (u_{i+1/2} - u_{i-1/2}) per axis and interior node.
    AxisArrays correction;

    std::size_t face_count(int axis) const;
    /// Face between (i, j) and its upper neighbor along axis; (i, j) may be a boundary node.
    std::size_t face_index(int axis, std::size_t i, std::size_t j) const;
};

DivFaceFlux div_face_fluxes(const Grid& grid, const ProblemSpec& spec, const ScalarField& field,
                            double t);

/// Low-order operator of the divergent split. On a uniform grid it coincides
/// with the node-based low-order operator; antidiffusion lives in DivFaceFlux,
/// so b+/b- are zero.
SchemeOperator assemble_div_operator(const Grid& grid, const ProblemSpec& spec,
                                     const ScalarField& field, double t);

/// Convective term per interior node (already divided by the cell size)
/// with face limiters beta[axis][face]. For D = 0 and beta = 1 this is the
/// central divergent flux difference minus the nonconservative correction.
std::vector<double> div_convective_term(const Grid& grid, const DivFaceFlux& fluxes,
                                        const AxisArrays& beta);

}  // namespace fctncd
