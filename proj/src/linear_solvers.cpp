#include "fctncd/linear_solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fctncd/error.hpp"

namespace fctncd {

std::vector<double> thomas_solve(const TridiagonalRows& rows, std::span<const double> rhs)
{
    const std::size_t n = rows.diag.size();
    if (rows.lower.size() != n || rows.upper.size() != n || rhs.size() != n) {
        throw ContractError("tridiagonal system has inconsistent sizes");
    }
    if (n == 0) {
        return {};
    }
    std::vector<double> c(n), d(n), x(n);
    double pivot = rows.diag[0];
    for (std::size_t i = 0;; ++i) {
        if (pivot == 0.0 || !std::isfinite(pivot)) {
            throw SolverError("zero pivot in tridiagonal solve at row " + std::to_string(i));
        }
        c[i] = i + 1 < n ? rows.upper[i] / pivot : 0.0;
        d[i] = ((i > 0 ? rhs[i] - rows.lower[i] * d[i - 1] : rhs[i])) / pivot;
        if (i + 1 == n) {
            break;
        }
        pivot = rows.diag[i + 1] - rows.lower[i + 1] * c[i];
    }
    x[n - 1] = d[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    return x;
}

std::vector<double> PentadiagonalOperator::apply(std::span<const double> v) const
{
    std::vector<double> out(v.size());
    for (std::size_t j = 0; j < ny; ++j) {
        for (std::size_t i = 0; i < nx; ++i) {
            const std::size_t k = j * nx + i;
            double s = diag[k] * v[k];
            if (i > 0) s += west[k] * v[k - 1];
            if (i + 1 < nx) s += east[k] * v[k + 1];
            if (j > 0) s += south[k] * v[k - nx];
            if (j + 1 < ny) s += north[k] * v[k + nx];
            out[k] = s;
        }
    }
    return out;
}

namespace {

double inf_norm(std::span<const double> v)
{
    double m = 0.0;
    for (double x : v) {
        m = std::max(m, std::abs(x));
    }
    return m;
}

}  // namespace

RelaxationResult relaxation_solve(const PentadiagonalOperator& op, std::span<const double> rhs,
                                  double tolerance, int max_sweeps,
                                  std::span<const double> initial_guess)
{
    const std::size_t n = op.nx * op.ny;
    if (rhs.size() != n || op.diag.size() != n || op.west.size() != n || op.east.size() != n ||
        op.south.size() != n || op.north.size() != n) {
        throw ContractError("pentadiagonal system has inconsistent sizes");
    }
    RelaxationResult result;
    result.solution = initial_guess.size() == n
                          ? std::vector<double>(initial_guess.begin(), initial_guess.end())
                          : std::vector<double>(rhs.begin(), rhs.end());
    std::vector<double>& x = result.solution;
    const double scale = std::max(inf_norm(rhs), std::numeric_limits<double>::min());
    auto residual = [&] {
        const std::vector<double> ax = op.apply(x);
        double r = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            r = std::max(r, std::abs(rhs[k] - ax[k]));
        }
        return r / scale;
    };

    result.relative_residual = residual();
    const std::size_t nx = op.nx;
    while (result.relative_residual > tolerance) {
        if (result.sweeps >= max_sweeps) {
            throw SolverError("Gauss-Seidel did not reach relative residual " +
                              std::to_string(tolerance) + " in " + std::to_string(max_sweeps) +
                              " sweeps (last " + std::to_string(result.relative_residual) + ")");
        }
        for (std::size_t j = 0; j < op.ny; ++j) {
            for (std::size_t i = 0; i < nx; ++i) {
                const std::size_t k = j * nx + i;
                double s = rhs[k];
                if (i > 0) s -= op.west[k] * x[k - 1];
                if (i + 1 < nx) s -= op.east[k] * x[k + 1];
                if (j > 0) s -= op.south[k] * x[k - nx];
                if (j + 1 < op.ny) s -= op.north[k] * x[k + nx];
                x[k] = s / op.diag[k];
            }
        }
        ++result.sweeps;
        result.relative_residual = residual();
    }
    return result;
}

}  // namespace fctncd
