#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "fctncd/discretization.hpp"
#include "fctncd/field.hpp"
#include "fctncd/monotone.hpp"
#include "fctncd/problem.hpp"

namespace fctncd {

/// Box-constrained LP with two-sided sparse rows:
///   maximize sum(x)  s.t.  lower_r <= sum_v coef_rv x_v <= upper_r,  0 <= x <= 1.
struct BoxedProgram {
    struct Term {
        std::size_t var;
        double coef;
    };
    struct Row {
        std::vector<Term> terms;
        double lower = 0.0;
        double upper = 0.0;
    };

    std::size_t variable_count = 0;
    std::vector<Row> rows;

    static double row_value(const Row& row, std::span<const double> x);
    /// Box holds exactly and every row within `slack`.
    bool satisfied_by(std::span<const double> x, double slack = 1e-10) const;
};

/// Limiter program in node-separable form: node k owns `vars_per_node`
/// consecutive variables and one two-sided row over exactly those variables.
///
/// Variables of a node are ordered level-major, then axis, then sign:
/// (+x, -x[, +y, -y]) at level n followed by the same at level n+1.
struct LimiterProgram {
    Shape shape{};
    std::size_t vars_per_node = 0;
    /// coefficients[k * vars_per_node + v]: dt-weighted b coefficient of variable v.
    std::vector<double> coefficients;
    std::vector<double> lower;
    std::vector<double> upper;
    /// Rows where alpha = 0 violates the bounds (inadmissible dt).
    std::size_t zero_infeasible_rows = 0;

    std::size_t node_count() const { return lower.size(); }
    std::size_t variable_count() const { return coefficients.size(); }
    std::span<const double> row(std::size_t k) const
    {
        return std::span<const double>(coefficients).subspan(k * vars_per_node, vars_per_node);
    }

    BoxedProgram as_boxed() const;
};

/// Index of a limiter variable inside a node block.
inline std::size_t limiter_slot(int axes, int level, int axis, int sign_minus)
{
    return static_cast<std::size_t>(level * 2 * axes + axis * 2 + sign_minus);
}

/// Antidiffusion below this, in units of b (per unit dt), counts as zero:
/// such coefficients are dropped from the rows and |P| at or below it gives R = 1.
inline constexpr double kZeroAntidiffusion = 1e-14;

enum class LpStatus { Optimal, Infeasible };

struct NodeSolution {
    std::vector<double> values;
    double objective = 0.0;
    bool feasible = true;
};

/// Exact optimum of max sum(x) over {x in [0,1]^k : lower <= c.x <= upper}.
/// Starts from x = 1 and gives up antidiffusion greedily on the side that
/// violates a bound, largest |c| first; among equal |c| the later variable is
/// reduced first.
NodeSolution solve_node(std::span<const double> coefficients, double lower, double upper);

struct LimiterSolution {
    std::vector<double> values;
    double objective = 0.0;
    LpStatus status = LpStatus::Optimal;
    std::size_t iterations = 0;
};

/// solve_node on every block.
LimiterSolution solve_separable(const LimiterProgram& program);

/// Solves the whole program without assuming separability: bounded-variable
/// primal simplex (phase 1 with artificials, Bland's rule after a run of
/// degenerate pivots). The tableau is kept as sparse rows so block-structured
/// programs stay cheap. Throws SolverError when the iteration guard trips.
LimiterSolution solve_dense(const BoxedProgram& program);
LimiterSolution solve_dense(const LimiterProgram& program);

/// Rows of the limiter program for one outer iteration.
///
/// bounds come from y_n; at_n carries b at level n and at_np1 the lagged
/// b at level n+1. Coefficients with |b| <= kZeroAntidiffusion are stored as 0.
LimiterProgram assemble_program(const SchemeOperator& at_n, const SchemeOperator& at_np1,
                                const StencilBounds& bounds, const ScalarField& y_n,
                                const StepConfig& config);

/// Plain-text dump, one node per line: "c_0 c_1 ... c_{k-1} L U".
void write_program(std::ostream& out, const LimiterProgram& program);

}  // namespace fctncd
