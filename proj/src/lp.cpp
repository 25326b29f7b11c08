#include "fctncd/lp.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>

#include "fctncd/error.hpp"

namespace fctncd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kFeasibilitySlack = 1e-10;

}  // namespace

double BoxedProgram::row_value(const Row& row, std::span<const double> x)
{
    double s = 0.0;
    for (const Term& t : row.terms) {
        s += t.coef * x[t.var];
    }
    return s;
}

bool BoxedProgram::satisfied_by(std::span<const double> x, double slack) const
{
    if (x.size() != variable_count) {
        return false;
    }
    for (double v : x) {
        if (!(v >= 0.0 && v <= 1.0)) {
            return false;
        }
    }
    for (const Row& r : rows) {
        const double v = row_value(r, x);
        if (v < r.lower - slack || v > r.upper + slack) {
            return false;
        }
    }
    return true;
}

BoxedProgram LimiterProgram::as_boxed() const
{
    BoxedProgram p;
    p.variable_count = variable_count();
    p.rows.resize(node_count());
    for (std::size_t k = 0; k < node_count(); ++k) {
        BoxedProgram::Row& r = p.rows[k];
        r.lower = lower[k];
        r.upper = upper[k];
        const auto c = row(k);
        for (std::size_t v = 0; v < c.size(); ++v) {
            if (c[v] != 0.0) {
                r.terms.push_back({k * vars_per_node + v, c[v]});
            }
        }
    }
    return p;
}

NodeSolution solve_node(std::span<const double> c, double lower, double upper)
{
    NodeSolution out;
    out.values.assign(c.size(), 1.0);
    if (lower > upper) {
        out.feasible = false;
    }
    const double total = std::accumulate(c.begin(), c.end(), 0.0);

    // Only one side can be violated at x = 1; shrinking the variables that push
    // toward it moves c.x monotonically back and never crosses the other bound.
    double excess = 0.0;
    int side = 0;
    if (total > upper) {
        excess = total - upper;
        side = 1;
    } else if (total < lower) {
        excess = lower - total;
        side = -1;
    }
    if (side != 0) {
        std::vector<std::size_t> order;
        for (std::size_t v = 0; v < c.size(); ++v) {
            if (side * c[v] > 0.0) {
                order.push_back(v);
            }
        }
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            const double ma = std::abs(c[a]);
            const double mb = std::abs(c[b]);
            return ma != mb ? ma > mb : a > b;
        });
        // Each variable is solved against the bound and the live terms summed
        // afresh; subtracting the large weights from a running excess loses
        // residuals at the scale of the smallest coefficients.
        const double target = side > 0 ? upper : lower;
        const auto activity = [&] {
            double a = 0.0;
            for (std::size_t v = 0; v < c.size(); ++v) {
                a += c[v] * out.values[v];
            }
            return a;
        };
        for (std::size_t v : order) {
            out.values[v] = 0.0;
            const double rest = activity();
            out.values[v] = std::clamp((target - rest) / c[v], 0.0, 1.0);
            if (out.values[v] > 0.0) {
                break;
            }
        }
        excess = std::max(0.0, side * (activity() - target));
        if (excess > kFeasibilitySlack * std::max(1.0, std::abs(side > 0 ? upper : lower))) {
            out.feasible = false;
        }
    }
    out.objective = std::accumulate(out.values.begin(), out.values.end(), 0.0);
    return out;
}

LimiterSolution solve_separable(const LimiterProgram& program)
{
    LimiterSolution out;
    out.values.resize(program.variable_count());
    const std::size_t k_vars = program.vars_per_node;
    for (std::size_t k = 0; k < program.node_count(); ++k) {
        const NodeSolution s = solve_node(program.row(k), program.lower[k], program.upper[k]);
        std::copy(s.values.begin(), s.values.end(), out.values.begin() + k * k_vars);
        out.objective += s.objective;
        if (!s.feasible) {
            out.status = LpStatus::Infeasible;
        }
    }
    out.iterations = program.node_count();
    return out;
}

namespace {

/// Bounded-variable primal simplex over a tableau stored as sparse rows.
///
/// Columns: structural [0, n), row activities [n, n + m), artificials after.
/// Row r of the tableau reads  sum_j T[r][j] x_j = 0  with T[r][basis[r]] = 1,
/// so x_basis[r] = -sum over nonbasic j of T[r][j] x_j.
class SparseSimplex {
public:
    explicit SparseSimplex(const BoxedProgram& p) : n_(p.variable_count), m_(p.rows.size())
    {
        std::vector<std::size_t> needs_artificial;
        for (std::size_t r = 0; r < m_; ++r) {
            const auto& row = p.rows[r];
            if (!(row.lower <= 0.0 && 0.0 <= row.upper)) {
                needs_artificial.push_back(r);
            }
        }
        cols_ = n_ + m_ + needs_artificial.size();
        lo_.assign(cols_, 0.0);
        hi_.assign(cols_, 1.0);
        value_.assign(cols_, 0.0);
        basic_row_.assign(cols_, kNone);
        col_rows_.resize(cols_);
        rows_.resize(m_);
        basis_.resize(m_);

        for (std::size_t r = 0; r < m_; ++r) {
            lo_[n_ + r] = p.rows[r].lower;
            hi_[n_ + r] = p.rows[r].upper;
        }
        std::size_t next_art = n_ + m_;
        std::size_t art_index = 0;
        for (std::size_t r = 0; r < m_; ++r) {
            const auto& row = p.rows[r];
            const std::size_t slack = n_ + r;
            std::vector<std::pair<std::size_t, double>> entries;
            const bool artificial =
                art_index < needs_artificial.size() && needs_artificial[art_index] == r;
            if (!artificial) {
                // activity - c.x = 0, activity basic at 0.
                for (const auto& t : row.terms) {
                    entries.emplace_back(t.var, -t.coef);
                }
                entries.emplace_back(slack, 1.0);
                basis_[r] = slack;
                value_[slack] = 0.0;
            } else {
                ++art_index;
                const std::size_t a = next_art++;
                const double start = row.lower > 0.0 ? row.lower : row.upper;
                const double sgn = start > 0.0 ? 1.0 : -1.0;
                value_[slack] = start;
                lo_[a] = 0.0;
                hi_[a] = kInf;
                for (const auto& t : row.terms) {
                    entries.emplace_back(t.var, t.coef / sgn);
                }
                entries.emplace_back(slack, -1.0 / sgn);
                entries.emplace_back(a, 1.0);
                basis_[r] = a;
                value_[a] = std::abs(start);
                artificials_.push_back(a);
            }
            std::sort(entries.begin(), entries.end());
            // Merge duplicate variables within a row.
            std::vector<std::pair<std::size_t, double>> merged;
            for (const auto& e : entries) {
                if (!merged.empty() && merged.back().first == e.first) {
                    merged.back().second += e.second;
                } else {
                    merged.push_back(e);
                }
            }
            rows_[r] = std::move(merged);
            for (const auto& e : rows_[r]) {
                col_rows_[e.first].push_back(r);
            }
            basic_row_[basis_[r]] = r;
        }
        at_upper_.assign(cols_, false);
        for (std::size_t r = 0; r < m_; ++r) {
            const std::size_t slack = n_ + r;
            if (basic_row_[slack] == kNone && value_[slack] == hi_[slack]) {
                at_upper_[slack] = true;
            }
        }
    }

    LimiterSolution run()
    {
        LimiterSolution out;
        if (!artificials_.empty()) {
            std::vector<double> cost(cols_, 0.0);
            for (std::size_t a : artificials_) {
                cost[a] = -1.0;
            }
            optimize(cost);
            double infeasibility = 0.0;
            for (std::size_t a : artificials_) {
                infeasibility += value_[a];
            }
            if (infeasibility > 1e-9) {
                out.status = LpStatus::Infeasible;
                out.values.assign(value_.begin(), value_.begin() + n_);
                out.iterations = iterations_;
                return out;
            }
            for (std::size_t a : artificials_) {
                hi_[a] = 0.0;
                value_[a] = 0.0;
            }
        }
        std::vector<double> cost(cols_, 0.0);
        std::fill(cost.begin(), cost.begin() + n_, 1.0);
        optimize(cost);
        refresh_basic_values();

        out.values.assign(value_.begin(), value_.begin() + n_);
        for (double& v : out.values) {
            v = std::clamp(v, 0.0, 1.0);
        }
        out.objective = std::accumulate(out.values.begin(), out.values.end(), 0.0);
        out.iterations = iterations_;
        return out;
    }

private:
    static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
    static constexpr double kPivotTol = 1e-18;
    static constexpr double kCostTol = 1e-11;
    static constexpr double kTieTol = 1e-14;
    static constexpr int kDegenerateStreak = 50;

    double entry(std::size_t r, std::size_t col) const
    {
        const auto& row = rows_[r];
        auto it = std::lower_bound(row.begin(), row.end(), col,
                                   [](const auto& e, std::size_t c) { return e.first < c; });
        return it != row.end() && it->first == col ? it->second : 0.0;
    }

    bool eligible(std::size_t j) const
    {
        if (basic_row_[j] != kNone || lo_[j] == hi_[j]) {
            return false;
        }
        return at_upper_[j] ? reduced_[j] < -kCostTol : reduced_[j] > kCostTol;
    }

    /// Drops stale and duplicate row references of a column.
    void compact_column(std::size_t col)
    {
        auto& list = col_rows_[col];
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
        list.erase(std::remove_if(list.begin(), list.end(),
                                  [&](std::size_t r) { return entry(r, col) == 0.0; }),
                   list.end());
    }

    void optimize(const std::vector<double>& cost)
    {
        // Every row holds its basic variable with coefficient 1, so
        // d_j = c_j - sum_r c_B(r) T[r][j].
        reduced_ = cost;
        for (std::size_t r = 0; r < m_; ++r) {
            const double cb = cost[basis_[r]];
            if (cb == 0.0) {
                continue;
            }
            for (const auto& e : rows_[r]) {
                reduced_[e.first] -= cb * e.second;
            }
        }
        for (std::size_t r = 0; r < m_; ++r) {
            reduced_[basis_[r]] = 0.0;
        }

        const std::size_t guard = 50 * (cols_ + m_) + 1000;
        bool bland = false;
        int degenerate = 0;
        std::size_t cursor = 0;
        for (;;) {
            if (++iterations_ > guard) {
                throw SolverError("simplex iteration guard exceeded (" + std::to_string(guard) +
                                  " iterations)");
            }
            std::size_t enter = kNone;
            for (std::size_t s = 0; s < cols_; ++s) {
                const std::size_t j = bland ? s : (cursor + s) % cols_;
                if (eligible(j)) {
                    enter = j;
                    cursor = j + 1;
                    break;
                }
            }
            if (enter == kNone) {
                return;
            }
            const double dir = at_upper_[enter] ? -1.0 : 1.0;
            compact_column(enter);

            double theta = hi_[enter] - lo_[enter];
            std::size_t leave_row = kNone;
            double leave_alpha = 0.0;
            for (std::size_t r : col_rows_[enter]) {
                // x_B[r] falls by alpha per unit step of the entering variable.
                const double alpha = entry(r, enter) * dir;
                const std::size_t b = basis_[r];
                double limit;
                if (alpha > kPivotTol) {
                    limit = std::max(0.0, value_[b] - lo_[b]) / alpha;
                } else if (alpha < -kPivotTol && hi_[b] != kInf) {
                    limit = std::max(0.0, hi_[b] - value_[b]) / -alpha;
                } else {
                    continue;
                }
                bool take = false;
                if (limit < theta - kTieTol) {
                    take = true;
                } else if (limit <= theta + kTieTol) {
                    if (leave_row == kNone) {
                        take = true;
                    } else if (bland) {
                        take = b < basis_[leave_row];
                    } else {
                        take = std::abs(alpha) > std::abs(leave_alpha);
                    }
                }
                if (take) {
                    theta = std::min(theta, limit);
                    leave_row = r;
                    leave_alpha = alpha;
                }
            }
            if (theta == kInf) {
                throw SolverError("limiter LP is unbounded");
            }
            if (theta <= kTieTol) {
                if (++degenerate > kDegenerateStreak) {
                    bland = true;
                }
            } else {
                degenerate = 0;
            }

            for (std::size_t r : col_rows_[enter]) {
                value_[basis_[r]] -= entry(r, enter) * dir * theta;
            }
            value_[enter] += dir * theta;

            if (leave_row == kNone) {
                at_upper_[enter] = !at_upper_[enter];
                value_[enter] = at_upper_[enter] ? hi_[enter] : lo_[enter];
                continue;
            }
            const std::size_t leave = basis_[leave_row];
            const bool to_upper = leave_alpha < 0.0;
            value_[leave] = to_upper ? hi_[leave] : lo_[leave];
            at_upper_[leave] = to_upper;
            pivot(leave_row, enter);
            basic_row_[leave] = kNone;
            basis_[leave_row] = enter;
            basic_row_[enter] = leave_row;
            at_upper_[enter] = false;
        }
    }

    /// Recomputes x_B from the final tableau and the nonbasic bounds; the
    /// incremental updates drift by round-off that tiny pivots amplify.
    void refresh_basic_values()
    {
        for (std::size_t r = 0; r < m_; ++r) {
            double sum = 0.0;
            for (const auto& e : rows_[r]) {
                if (e.first != basis_[r]) {
                    sum += e.second * value_[e.first];
                }
            }
            value_[basis_[r]] = -sum;
        }
    }

    void pivot(std::size_t r, std::size_t enter)
    {
        auto& prow = rows_[r];
        const double p = entry(r, enter);
        for (auto& e : prow) {
            e.second /= p;
        }
        set_entry(prow, enter, 1.0);

        const std::vector<std::size_t> touched = col_rows_[enter];
        for (std::size_t i : touched) {
            if (i == r) {
                continue;
            }
            const double f = entry(i, enter);
            if (f == 0.0) {
                continue;
            }
            axpy_row(i, -f, prow);
            remove_entry(rows_[i], enter);
        }
        col_rows_[enter].assign(1, r);

        const double d_enter = reduced_[enter];
        for (const auto& e : prow) {
            reduced_[e.first] -= d_enter * e.second;
        }
        reduced_[enter] = 0.0;
    }

    static void set_entry(std::vector<std::pair<std::size_t, double>>& row, std::size_t col,
                          double v)
    {
        auto it = std::lower_bound(row.begin(), row.end(), col,
                                   [](const auto& e, std::size_t c) { return e.first < c; });
        if (it != row.end() && it->first == col) {
            it->second = v;
        } else {
            row.insert(it, {col, v});
        }
    }

    static void remove_entry(std::vector<std::pair<std::size_t, double>>& row, std::size_t col)
    {
        auto it = std::lower_bound(row.begin(), row.end(), col,
                                   [](const auto& e, std::size_t c) { return e.first < c; });
        if (it != row.end() && it->first == col) {
            row.erase(it);
        }
    }

    /// rows_[i] += f * src (src sorted), dropping round-off zeros.
    void axpy_row(std::size_t i, double f, const std::vector<std::pair<std::size_t, double>>& src)
    {
        const auto& dst = rows_[i];
        std::vector<std::pair<std::size_t, double>> merged;
        merged.reserve(dst.size() + src.size());
        std::size_t a = 0, b = 0;
        while (a < dst.size() || b < src.size()) {
            if (b == src.size() || (a < dst.size() && dst[a].first < src[b].first)) {
                merged.push_back(dst[a++]);
            } else if (a == dst.size() || src[b].first < dst[a].first) {
                const double v = f * src[b].second;
                if (std::abs(v) > 1e-15) {
                    merged.emplace_back(src[b].first, v);
                    col_rows_[src[b].first].push_back(i);
                }
                ++b;
            } else {
                const double v = dst[a].second + f * src[b].second;
                if (std::abs(v) > 1e-15) {
                    merged.emplace_back(dst[a].first, v);
                }
                ++a;
                ++b;
            }
        }
        rows_[i] = std::move(merged);
    }

    std::size_t n_;
    std::size_t m_;
    std::size_t cols_ = 0;
    std::vector<double> lo_;
    std::vector<double> hi_;
    std::vector<double> value_;
    std::vector<bool> at_upper_;
    std::vector<std::size_t> basis_;
    std::vector<std::size_t> basic_row_;
    std::vector<std::vector<std::pair<std::size_t, double>>> rows_;
    std::vector<std::vector<std::size_t>> col_rows_;
    std::vector<std::size_t> artificials_;
    std::vector<double> reduced_;
    std::size_t iterations_ = 0;
};

}  // namespace

LimiterSolution solve_dense(const BoxedProgram& program)
{
    for (const auto& row : program.rows) {
        if (!std::isfinite(row.lower) || !std::isfinite(row.upper)) {
            throw ContractError("limiter program rows must have finite bounds");
        }
        for (const auto& t : row.terms) {
            if (t.var >= program.variable_count || !std::isfinite(t.coef)) {
                throw ContractError("limiter program has an invalid term");
            }
        }
        if (row.lower > row.upper) {
            LimiterSolution out;
            out.status = LpStatus::Infeasible;
            out.values.assign(program.variable_count, 0.0);
            return out;
        }
    }
    // Equilibrate rows so the pivot tolerances are relative to each row's own
    // scale; tails of an implicit iterate give rows with coefficients ~1e-15.
    BoxedProgram scaled = program;
    for (auto& row : scaled.rows) {
        double scale = 0.0;
        for (const auto& t : row.terms) {
            scale = std::max(scale, std::abs(t.coef));
        }
        if (scale == 0.0) {
            continue;
        }
        for (auto& t : row.terms) {
            t.coef /= scale;
        }
        row.lower /= scale;
        row.upper /= scale;
    }
    return SparseSimplex(scaled).run();
}

LimiterSolution solve_dense(const LimiterProgram& program)
{
    return solve_dense(program.as_boxed());
}

LimiterProgram assemble_program(const SchemeOperator& at_n, const SchemeOperator& at_np1,
                                const StencilBounds& bounds, const ScalarField& y_n,
                                const StepConfig& config)
{
    const Shape& s = at_n.shape;
    y_n.require_shape(s);
    const int axes = s.dim;
    LimiterProgram p;
    p.shape = s;
    p.vars_per_node = static_cast<std::size_t>(4 * axes);
    p.coefficients.assign(s.interior_size() * p.vars_per_node, 0.0);
    p.lower.resize(s.interior_size());
    p.upper.resize(s.interior_size());

    const double wn = config.dt * (1.0 - config.sigma);
    const double wp = config.dt * config.sigma;
    for_each_interior(s, [&](std::size_t i, std::size_t j, std::size_t k) {
        const double yi = y_n(i, j);
        const double low_order = wn * at_n.neighbor_sum(y_n, i, j, k);
        p.lower[k] = bounds.lower[k] - yi + low_order;
        p.upper[k] = bounds.upper[k] - yi + low_order;
        double* c = p.coefficients.data() + k * p.vars_per_node;
        // Round-off antidiffusion (e.g. the tail of an implicit iterate) would
        // otherwise flip limiter values between iterations.
        auto weighted = [](double w, double b) {
            return std::abs(b) <= kZeroAntidiffusion ? 0.0 : w * b;
        };
        for (int a = 0; a < axes; ++a) {
            c[limiter_slot(axes, 0, a, 0)] = weighted(wn, at_n.b_plus[a][k]);
            c[limiter_slot(axes, 0, a, 1)] = weighted(wn, at_n.b_minus[a][k]);
            c[limiter_slot(axes, 1, a, 0)] = weighted(wp, at_np1.b_plus[a][k]);
            c[limiter_slot(axes, 1, a, 1)] = weighted(wp, at_np1.b_minus[a][k]);
        }
        if (p.lower[k] > kFeasibilitySlack || p.upper[k] < -kFeasibilitySlack) {
            ++p.zero_infeasible_rows;
        }
    });
    return p;
}

void write_program(std::ostream& out, const LimiterProgram& program)
{
    const auto old_flags = out.flags();
    const auto old_precision = out.precision();
    out << std::setprecision(17);
    for (std::size_t k = 0; k < program.node_count(); ++k) {
        for (double c : program.row(k)) {
            out << c << ' ';
        }
        out << program.lower[k] << ' ' << program.upper[k] << '\n';
    }
    out.flags(old_flags);
    out.precision(old_precision);
}

}  // namespace fctncd
