#include "fctncd/discretization.hpp"

#include <algorithm>
#include <cmath>

#include "fctncd/error.hpp"

namespace fctncd {

namespace {

double positive_part(double u) { return 0.5 * (u + std::abs(u)); }
double negative_part(double u) { return 0.5 * (u - std::abs(u)); }

/// Geometry and face data of one interior node along one axis.
struct AxisStencil {
    double h_lower;  // spacing of the lower face
    double h_upper;
    double cell;
    double u_lower;  // velocity component at the lower face midpoint
    double u_upper;
    double d_lower;  // diffusion at the lower face midpoint
    double d_upper;
};

AxisStencil axis_stencil(const Grid& grid, const ProblemSpec& spec, std::size_t i, std::size_t j,
                         int axis, double t)
{
    const Axis& ax = grid.axis(axis);
    const std::size_t idx = axis == 0 ? i : j;
    AxisStencil s{};
    s.h_lower = ax.face_spacing(idx - 1);
    s.h_upper = ax.face_spacing(idx);
    s.cell = ax.cell_size(idx);

    double xl, yl, xu, yu;
    if (axis == 0) {
        xl = ax.face_center(idx - 1);
        xu = ax.face_center(idx);
        yl = yu = grid.y(j);
    } else {
        xl = xu = grid.x(i);
        yl = ax.face_center(idx - 1);
        yu = ax.face_center(idx);
    }
    const SpaceTimeFn& u = spec.velocity(axis);
    s.u_lower = u(xl, yl, t);
    s.u_upper = u(xu, yu, t);
    s.d_lower = spec.diffusion_at(xl, yl, t);
    s.d_upper = spec.diffusion_at(xu, yu, t);
    return s;
}

void resize_axes(AxisArrays& a, int axes, std::size_t n)
{
    for (int ax = 0; ax < 2; ++ax) {
        a[ax].assign(ax < axes ? n : 0, 0.0);
    }
}

bool is_boundary(const Shape& s, std::size_t i, std::size_t j)
{
    if (i == 0 || i == s.nx + 1) {
        return true;
    }
    return s.dim == 2 && (j == 0 || j == s.ny + 1);
}

void fill_reaction_source(SchemeOperator& op, const Grid& grid, const ProblemSpec& spec, double t)
{
    for_each_interior(op.shape, [&](std::size_t i, std::size_t j, std::size_t k) {
        op.reaction[k] = spec.reaction(grid.x(i), grid.y(j), t);
        op.source[k] = spec.source(grid.x(i), grid.y(j), t);
    });
}

void fill_diagonal_and_inflow(SchemeOperator& op, const ScalarField& field)
{
    const Shape& s = op.shape;
    for_each_interior(s, [&](std::size_t i, std::size_t j, std::size_t k) {
        double diag = 0.0;
        double inflow = 0.0;
        for (int a = 0; a < s.dim; ++a) {
            diag -= op.lower[a][k] + op.upper[a][k];
            const std::size_t li = a == 0 ? i - 1 : i;
            const std::size_t lj = a == 0 ? j : j - 1;
            const std::size_t ui = a == 0 ? i + 1 : i;
            const std::size_t uj = a == 0 ? j : j + 1;
            if (is_boundary(s, li, lj)) {
                inflow -= op.lower[a][k] * field(li, lj);
            }
            if (is_boundary(s, ui, uj)) {
                inflow -= op.upper[a][k] * field(ui, uj);
            }
        }
        op.diagonal[k] = diag;
        op.inflow[k] = inflow;
    });
}

SchemeOperator empty_operator(const Shape& s, double t)
{
    SchemeOperator op;
    op.shape = s;
    op.time = t;
    const std::size_t n = s.interior_size();
    resize_axes(op.lower, s.dim, n);
    resize_axes(op.upper, s.dim, n);
    resize_axes(op.b_plus, s.dim, n);
    resize_axes(op.b_minus, s.dim, n);
    resize_axes(op.r_plus, s.dim, n);
    resize_axes(op.r_minus, s.dim, n);
    op.diagonal.assign(n, 0.0);
    op.reaction.assign(n, 0.0);
    op.source.assign(n, 0.0);
    op.inflow.assign(n, 0.0);
    return op;
}

}  // namespace

std::vector<double> SchemeOperator::g() const
{
    std::vector<double> out(size());
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] = inflow[k] + source[k];
    }
    return out;
}

double SchemeOperator::neighbor_sum(const ScalarField& y, std::size_t i, std::size_t j,
                                    std::size_t k) const
{
    const double yi = y(i, j);
    double sum = 0.0;
    for (int a = 0; a < shape.dim; ++a) {
        const double ylo = a == 0 ? y(i - 1, j) : y(i, j - 1);
        const double yup = a == 0 ? y(i + 1, j) : y(i, j + 1);
        sum += lower[a][k] * (ylo - yi) + upper[a][k] * (yup - yi);
    }
    return sum;
}

UpwindCoeffs upwind_coeffs(const Grid& grid, const ProblemSpec& spec, double t)
{
    const Shape& s = grid.shape();
    UpwindCoeffs c;
    c.shape = s;
    c.time = t;
    const std::size_t n = s.interior_size();
    resize_axes(c.d_plus, s.dim, n);
    resize_axes(c.d_minus, s.dim, n);
    resize_axes(c.r_plus, s.dim, n);
    resize_axes(c.r_minus, s.dim, n);
    for_each_interior(s, [&](std::size_t i, std::size_t j, std::size_t k) {
        for (int a = 0; a < s.dim; ++a) {
            const AxisStencil st = axis_stencil(grid, spec, i, j, a, t);
            const double x_lower = st.d_lower / st.cell - 0.5 * std::abs(st.u_lower);
            const double x_upper = st.d_upper / st.cell - 0.5 * std::abs(st.u_upper);
            c.d_plus[a][k] = std::max(0.0, x_lower);
            c.r_plus[a][k] = -std::min(0.0, x_lower);
            c.d_minus[a][k] = -std::max(0.0, x_upper);
            c.r_minus[a][k] = std::min(0.0, x_upper);
        }
    });
    return c;
}

SchemeOperator assemble_operator(const Grid& grid, const ProblemSpec& spec,
                                 const UpwindCoeffs& coeffs, const ScalarField& field, double t)
{
    const Shape& s = grid.shape();
    field.require_shape(s);
    if (!(coeffs.shape == s)) {
        throw ContractError("upwind coefficients were built for a different grid");
    }
    SchemeOperator op = empty_operator(s, t);
    for_each_interior(s, [&](std::size_t i, std::size_t j, std::size_t k) {
        for (int a = 0; a < s.dim; ++a) {
            const AxisStencil st = axis_stencil(grid, spec, i, j, a, t);
            op.lower[a][k] = (-positive_part(st.u_lower) - coeffs.d_plus[a][k]) / st.h_lower;
            op.upper[a][k] = (negative_part(st.u_upper) + coeffs.d_minus[a][k]) / st.h_upper;
            op.r_plus[a][k] = coeffs.r_plus[a][k];
            op.r_minus[a][k] = coeffs.r_minus[a][k];
        }
    });
    fill_diagonal_and_inflow(op, field);
    fill_reaction_source(op, grid, spec, t);
    update_antidiffusion(op, grid, field);
    return op;
}

SchemeOperator assemble_operator(const Grid& grid, const ProblemSpec& spec,
                                 const ScalarField& field)
{
    const double t = field.time();
    return assemble_operator(grid, spec, upwind_coeffs(grid, spec, t), field, t);
}

void update_antidiffusion(SchemeOperator& op, const Grid& grid, const ScalarField& field)
{
    const Shape& s = op.shape;
    field.require_shape(s);
    for_each_interior(s, [&](std::size_t i, std::size_t j, std::size_t k) {
        const double yi = field(i, j);
        for (int a = 0; a < s.dim; ++a) {
            const Axis& ax = grid.axis(a);
            const std::size_t idx = a == 0 ? i : j;
            const double ylo = a == 0 ? field(i - 1, j) : field(i, j - 1);
            const double yup = a == 0 ? field(i + 1, j) : field(i, j + 1);
            op.b_plus[a][k] = op.r_plus[a][k] * (yi - ylo) / ax.face_spacing(idx - 1);
            op.b_minus[a][k] = op.r_minus[a][k] * (yup - yi) / ax.face_spacing(idx);
        }
    });
}

std::size_t DivFaceFlux::face_count(int axis) const
{
    return axis == 0 ? (shape.nx + 1) * shape.ny : shape.nx * (shape.ny + 1);
}

std::size_t DivFaceFlux::face_index(int axis, std::size_t i, std::size_t j) const
{
    if (axis == 0) {
        return (j - shape.j_first()) * (shape.nx + 1) + i;
    }
    return j * shape.nx + (i - 1);
}

DivFaceFlux div_face_fluxes(const Grid& grid, const ProblemSpec& spec, const ScalarField& field,
                            double t)
{
    const Shape& s = grid.shape();
    field.require_shape(s);
    DivFaceFlux out;
    out.shape = s;
    out.time = t;
    for (int a = 0; a < s.dim; ++a) {
        const std::size_t nf = out.face_count(a);
        out.low_order[a].assign(nf, 0.0);
        out.antidiffusive[a].assign(nf, 0.0);
        out.velocity[a].assign(nf, 0.0);
    }
    resize_axes(out.correction, s.dim, s.interior_size());

    // Faces along x: every interior row, i in [0, nx].
    for (std::size_t j = s.j_first(); j <= s.j_last(); ++j) {
        for (std::size_t i = 0; i <= s.nx; ++i) {
            const std::size_t f = out.face_index(0, i, j);
            const double xf = grid.x_axis().face_center(i);
            const double yf = grid.y(j);
            const double u = spec.velocity_x(xf, yf, t);
            const double d = spec.diffusion_at(xf, yf, t);
            const double h = grid.x_axis().face_spacing(i);
            const double left = field(i, j);
            const double right = field(i + 1, j);
            out.velocity[0][f] = u;
            out.low_order[0][f] = positive_part(u) * left + negative_part(u) * right;
            out.antidiffusive[0][f] = std::max(0.0, 0.5 * std::abs(u) - d / h) * (right - left);
        }
    }
    if (s.dim == 2) {
        for (std::size_t j = 0; j <= s.ny; ++j) {
            for (std::size_t i = 1; i <= s.nx; ++i) {
                const std::size_t f = out.face_index(1, i, j);
                const double xf = grid.x(i);
                const double yf = grid.y_axis().face_center(j);
                const double u = spec.velocity_y(xf, yf, t);
                const double d = spec.diffusion_at(xf, yf, t);
                const double h = grid.y_axis().face_spacing(j);
                const double below = field(i, j);
                const double above = field(i, j + 1);
                out.velocity[1][f] = u;
                out.low_order[1][f] = positive_part(u) * below + negative_part(u) * above;
                out.antidiffusive[1][f] =
                    std::max(0.0, 0.5 * std::abs(u) - d / h) * (above - below);
            }
        }
    }
    for_each_interior(s, [&](std::size_t i, std::size_t j, std::size_t k) {
        for (int a = 0; a < s.dim; ++a) {
            const std::size_t lo = a == 0 ? out.face_index(0, i - 1, j) : out.face_index(1, i, j - 1);
            const std::size_t up = out.face_index(a, i, j);
            out.correction[a][k] = field(i, j) * (out.velocity[a][up] - out.velocity[a][lo]);
        }
    });
    return out;
}

SchemeOperator assemble_div_operator(const Grid& grid, const ProblemSpec& spec,
                                     const ScalarField& field, double t)
{
    const Shape& s = grid.shape();
    field.require_shape(s);
    SchemeOperator op = empty_operator(s, t);
    for_each_interior(s, [&](std::size_t i, std::size_t j, std::size_t k) {
        for (int a = 0; a < s.dim; ++a) {
            const AxisStencil st = axis_stencil(grid, spec, i, j, a, t);
            const double dl = std::max(0.0, st.d_lower / st.h_lower - 0.5 * std::abs(st.u_lower));
            const double du = std::max(0.0, st.d_upper / st.h_upper - 0.5 * std::abs(st.u_upper));
            op.lower[a][k] = -(positive_part(st.u_lower) + dl) / st.cell;
            op.upper[a][k] = (negative_part(st.u_upper) - du) / st.cell;
        }
    });
    fill_diagonal_and_inflow(op, field);
    fill_reaction_source(op, grid, spec, t);
    return op;
}

std::vector<double> div_convective_term(const Grid& grid, const DivFaceFlux& fluxes,
                                        const AxisArrays& beta)
{
    const Shape& s = fluxes.shape;
    std::vector<double> out(s.interior_size(), 0.0);
    for_each_interior(s, [&](std::size_t i, std::size_t j, std::size_t k) {
        for (int a = 0; a < s.dim; ++a) {
            const std::size_t lo =
                a == 0 ? fluxes.face_index(0, i - 1, j) : fluxes.face_index(1, i, j - 1);
            const std::size_t up = fluxes.face_index(a, i, j);
            const double cell = grid.axis(a).cell_size(a == 0 ? i : j);
            const double up_flux = fluxes.low_order[a][up] + beta[a][up] * fluxes.antidiffusive[a][up];
            const double lo_flux = fluxes.low_order[a][lo] + beta[a][lo] * fluxes.antidiffusive[a][lo];
            out[k] += (up_flux - lo_flux - fluxes.correction[a][k]) / cell;
        }
    });
    return out;
}

}  // namespace fctncd
