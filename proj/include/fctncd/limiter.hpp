#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <vector>

#include "fctncd/discretization.hpp"
#include "fctncd/lp.hpp"

namespace fctncd {

/// Limiter values of one outer iteration, stored in the variable order of the
/// program they were computed for.
///
/// Node kind: alpha per node in limiter_slot order.
/// Face kind: beta per face, level-major, then axis, then face index of DivFaceFlux.
struct LimiterSet {
    enum class Kind { Node, Face };

    Kind kind = Kind::Node;
    Shape shape{};
    std::size_t vars_per_node = 0;
    std::array<std::size_t, 2> face_counts{};
    std::vector<double> values;

    static LimiterSet nodes(const Shape& shape, double value);
    static LimiterSet faces(const Shape& shape, std::array<std::size_t, 2> face_counts,
                            double value);

    double alpha(std::size_t k, int level, int axis, int sign_minus) const;
    double beta(int level, int axis, std::size_t face) const;
    std::size_t face_variable(int level, int axis, std::size_t face) const;

    /// Sum of all entries.
    double objective() const;
    bool in_unit_box() const;
};

/// Q, P and R per node, in units of the unweighted b coefficients (divided by dt).
struct QPBounds {
    std::vector<double> q_plus;
    std::vector<double> q_minus;
    std::vector<double> p_plus;
    std::vector<double> p_minus;
    std::vector<double> r_plus;
    std::vector<double> r_minus;
};

QPBounds qp_bounds(const LimiterProgram& program, double dt);

/// Closed-form limiter: alpha = R+ where the coefficient is positive,
/// R- where it is negative, 1 where it vanishes.
LimiterSet approx_limiters(const LimiterProgram& program, double dt);

/// Exact limiter from the separable LP.
LimiterSet lp_limiters(const LimiterProgram& program);

/// Zalesak-type limiting of a general row program: per row, R+ and R- bound
/// the positive and negative coefficient sums; each variable takes the
/// smallest R (of the sign of its coefficient) over the rows it enters.
/// Variables outside every row stay at 1.
std::vector<double> zalesak_limiters(const BoxedProgram& program, double p_floor);

/// Rows of the divergent-form limiter program: one row per interior node with
/// the same bounds as `node_rows`, one variable per face and time level.
BoxedProgram assemble_div_program(const Grid& grid, const DivFaceFlux& at_n,
                                  const DivFaceFlux& at_np1, const LimiterProgram& node_rows,
                                  const StepConfig& config);

LimiterSet div_limiters(const BoxedProgram& program, const DivFaceFlux& fluxes, double dt);

/// Antidiffusive increment dt (B alpha)^(sigma) at every node, i.e. the row value.
std::vector<double> row_values(const LimiterProgram& program, const LimiterSet& limiters);
std::vector<double> row_values(const BoxedProgram& program, const LimiterSet& limiters);

/// CSV of a node limiter set: index, then one column per variable
/// (1D: alpha+n, alpha-n, alpha+n1, alpha-n1).
void write_limiters_csv(std::ostream& out, const LimiterSet& limiters);

}  // namespace fctncd
