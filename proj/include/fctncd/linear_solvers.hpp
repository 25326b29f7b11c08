#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fctncd {

/// Rows of a tridiagonal matrix; lower[0] and upper[n-1] are ignored.
struct TridiagonalRows {
    std::vector<double> lower;
    std::vector<double> diag;
    std::vector<double> upper;
};

/// Thomas algorithm. Throws SolverError on a vanishing pivot.
std::vector<double> thomas_solve(const TridiagonalRows& rows, std::span<const double> rhs);

/// Five-point matrix on an nx-by-ny interior lattice, x fastest. Couplings
/// pointing outside the lattice are ignored. ny = 1 embeds a 1D problem.
struct PentadiagonalOperator {
    std::size_t nx = 0;
    std::size_t ny = 1;
    std::vector<double> diag;
    std::vector<double> west;
    std::vector<double> east;
    std::vector<double> south;
    std::vector<double> north;

    std::vector<double> apply(std::span<const double> v) const;
};

struct RelaxationResult {
    std::vector<double> solution;
    int sweeps = 0;
    double relative_residual = 0.0;
};

/// Gauss-Seidel until ||b - Ax||_inf <= tolerance * max(||b||_inf, tiny).
/// Throws SolverError when the sweep cap is reached first.
RelaxationResult relaxation_solve(const PentadiagonalOperator& op, std::span<const double> rhs,
                                  double tolerance = 1e-11, int max_sweeps = 20000,
                                  std::span<const double> initial_guess = {});

}  // namespace fctncd
