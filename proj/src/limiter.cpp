#include "fctncd/limiter.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "fctncd/error.hpp"

namespace fctncd {

namespace {

double ratio(double q, double p)
{
    if (std::abs(p) <= kZeroAntidiffusion) {
        return 1.0;
    }
    return std::clamp(q / p, 0.0, 1.0);
}

}  // namespace

LimiterSet LimiterSet::nodes(const Shape& shape, double value)
{
    LimiterSet s;
    s.kind = Kind::Node;
    s.shape = shape;
    s.vars_per_node = static_cast<std::size_t>(4 * shape.dim);
    s.values.assign(shape.interior_size() * s.vars_per_node, value);
    return s;
}

LimiterSet LimiterSet::faces(const Shape& shape, std::array<std::size_t, 2> face_counts,
                             double value)
{
    LimiterSet s;
    s.kind = Kind::Face;
    s.shape = shape;
    s.face_counts = face_counts;
    s.values.assign(2 * (face_counts[0] + face_counts[1]), value);
    return s;
}

double LimiterSet::alpha(std::size_t k, int level, int axis, int sign_minus) const
{
    return values[k * vars_per_node + limiter_slot(shape.dim, level, axis, sign_minus)];
}

std::size_t LimiterSet::face_variable(int level, int axis, std::size_t face) const
{
    const std::size_t per_level = face_counts[0] + face_counts[1];
    return level * per_level + (axis == 1 ? face_counts[0] : 0) + face;
}

double LimiterSet::beta(int level, int axis, std::size_t face) const
{
    return values[face_variable(level, axis, face)];
}

double LimiterSet::objective() const
{
    return std::accumulate(values.begin(), values.end(), 0.0);
}

bool LimiterSet::in_unit_box() const
{
    return std::all_of(values.begin(), values.end(),
                       [](double v) { return v >= 0.0 && v <= 1.0; });
}

QPBounds qp_bounds(const LimiterProgram& program, double dt)
{
    if (!(dt > 0.0)) {
        throw ContractError("qp_bounds needs dt > 0");
    }
    const std::size_t n = program.node_count();
    QPBounds out;
    out.q_plus.resize(n);
    out.q_minus.resize(n);
    out.p_plus.resize(n);
    out.p_minus.resize(n);
    out.r_plus.resize(n);
    out.r_minus.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        double pos = 0.0;
        double neg = 0.0;
        for (double c : program.row(k)) {
            pos += std::max(0.0, c);
            neg += std::min(0.0, c);
        }
        out.q_plus[k] = program.upper[k] / dt;
        out.q_minus[k] = program.lower[k] / dt;
        out.p_plus[k] = pos / dt;
        out.p_minus[k] = neg / dt;
        out.r_plus[k] = ratio(out.q_plus[k], out.p_plus[k]);
        out.r_minus[k] = ratio(out.q_minus[k], out.p_minus[k]);
    }
    return out;
}

LimiterSet approx_limiters(const LimiterProgram& program, double dt)
{
    const QPBounds qp = qp_bounds(program, dt);
    LimiterSet out = LimiterSet::nodes(program.shape, 1.0);
    if (out.vars_per_node != program.vars_per_node) {
        throw ContractError("limiter program and shape disagree on variables per node");
    }
    for (std::size_t k = 0; k < program.node_count(); ++k) {
        const auto c = program.row(k);
        for (std::size_t v = 0; v < c.size(); ++v) {
            double& a = out.values[k * program.vars_per_node + v];
            if (c[v] > 0.0) {
                a = qp.r_plus[k];
            } else if (c[v] < 0.0) {
                a = qp.r_minus[k];
            }
        }
    }
    return out;
}

LimiterSet lp_limiters(const LimiterProgram& program)
{
    LimiterSet out = LimiterSet::nodes(program.shape, 1.0);
    if (out.vars_per_node != program.vars_per_node) {
        throw ContractError("limiter program and shape disagree on variables per node");
    }
    out.values = solve_separable(program).values;
    return out;
}

std::vector<double> zalesak_limiters(const BoxedProgram& program, double p_floor)
{
    std::vector<double> out(program.variable_count, 1.0);
    for (const auto& row : program.rows) {
        double pos = 0.0;
        double neg = 0.0;
        for (const auto& t : row.terms) {
            pos += std::max(0.0, t.coef);
            neg += std::min(0.0, t.coef);
        }
        const double r_plus = pos <= p_floor ? 1.0 : std::clamp(row.upper / pos, 0.0, 1.0);
        const double r_minus = -neg <= p_floor ? 1.0 : std::clamp(row.lower / neg, 0.0, 1.0);
        for (const auto& t : row.terms) {
            if (t.coef > 0.0) {
                out[t.var] = std::min(out[t.var], r_plus);
            } else if (t.coef < 0.0) {
                out[t.var] = std::min(out[t.var], r_minus);
            }
        }
    }
    return out;
}

BoxedProgram assemble_div_program(const Grid& grid, const DivFaceFlux& at_n,
                                  const DivFaceFlux& at_np1, const LimiterProgram& node_rows,
                                  const StepConfig& config)
{
    const Shape& s = at_n.shape;
    if (node_rows.node_count() != s.interior_size()) {
        throw ContractError("node rows do not match the face fluxes");
    }
    const std::array<std::size_t, 2> counts{at_n.face_count(0),
                                            s.dim == 2 ? at_n.face_count(1) : 0};
    const std::size_t per_level = counts[0] + counts[1];
    BoxedProgram p;
    p.variable_count = 2 * per_level;
    p.rows.resize(s.interior_size());

    const double weights[2] = {config.dt * (1.0 - config.sigma), config.dt * config.sigma};
    const DivFaceFlux* levels[2] = {&at_n, &at_np1};
    for_each_interior(s, [&](std::size_t i, std::size_t j, std::size_t k) {
        BoxedProgram::Row& row = p.rows[k];
        row.lower = node_rows.lower[k];
        row.upper = node_rows.upper[k];
        for (int level = 0; level < 2; ++level) {
            if (weights[level] == 0.0) {
                continue;
            }
            for (int a = 0; a < s.dim; ++a) {
                const std::size_t lo = a == 0 ? at_n.face_index(0, i - 1, j)
                                              : at_n.face_index(1, i, j - 1);
                const std::size_t up = at_n.face_index(a, i, j);
                const double cell = grid.axis(a).cell_size(a == 0 ? i : j);
                const std::size_t base = level * per_level + (a == 1 ? counts[0] : 0);
                const double phi_lo = levels[level]->antidiffusive[a][lo] / cell;
                const double phi_up = levels[level]->antidiffusive[a][up] / cell;
                if (std::abs(phi_lo) > kZeroAntidiffusion) {
                    row.terms.push_back({base + lo, weights[level] * phi_lo});
                }
                if (std::abs(phi_up) > kZeroAntidiffusion) {
                    row.terms.push_back({base + up, -weights[level] * phi_up});
                }
            }
        }
    });
    return p;
}

LimiterSet div_limiters(const BoxedProgram& program, const DivFaceFlux& fluxes, double dt)
{
    const Shape& s = fluxes.shape;
    LimiterSet out = LimiterSet::faces(
        s, {fluxes.face_count(0), s.dim == 2 ? fluxes.face_count(1) : 0}, 1.0);
    if (out.values.size() != program.variable_count) {
        throw ContractError("divergent program does not match the face layout");
    }
    out.values = zalesak_limiters(program, kZeroAntidiffusion * dt);
    return out;
}

std::vector<double> row_values(const LimiterProgram& program, const LimiterSet& limiters)
{
    if (limiters.values.size() != program.variable_count()) {
        throw ContractError("limiter set does not match the program");
    }
    std::vector<double> out(program.node_count());
    for (std::size_t k = 0; k < out.size(); ++k) {
        const auto c = program.row(k);
        double s = 0.0;
        for (std::size_t v = 0; v < c.size(); ++v) {
            s += c[v] * limiters.values[k * program.vars_per_node + v];
        }
        out[k] = s;
    }
    return out;
}

std::vector<double> row_values(const BoxedProgram& program, const LimiterSet& limiters)
{
    if (limiters.values.size() != program.variable_count) {
        throw ContractError("limiter set does not match the program");
    }
    std::vector<double> out(program.rows.size());
    for (std::size_t r = 0; r < out.size(); ++r) {
        out[r] = BoxedProgram::row_value(program.rows[r], limiters.values);
    }
    return out;
}

void write_limiters_csv(std::ostream& out, const LimiterSet& limiters)
{
    if (limiters.kind != LimiterSet::Kind::Node) {
        throw ContractError("only node limiter sets have a CSV layout");
    }
    out << "index";
    for (int level = 0; level < 2; ++level) {
        for (int a = 0; a < limiters.shape.dim; ++a) {
            for (int sign = 0; sign < 2; ++sign) {
                out << ",alpha" << (sign == 0 ? '+' : '-') << (level == 0 ? "n" : "n1")
                    << (limiters.shape.dim == 1 ? "" : a == 0 ? "_x" : "_y");
            }
        }
    }
    out << '\n';
    const auto old_precision = out.precision(17);
    const std::size_t n = limiters.shape.interior_size();
    for (std::size_t k = 0; k < n; ++k) {
        out << k;
        for (std::size_t v = 0; v < limiters.vars_per_node; ++v) {
            out << ',' << limiters.values[k * limiters.vars_per_node + v];
        }
        out << '\n';
    }
    out.precision(old_precision);
}

}  // namespace fctncd
