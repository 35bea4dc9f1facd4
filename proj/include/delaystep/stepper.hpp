#pragma once

// Method of steps for the closed-loop delay equation.
//
// Time is split into unit intervals n = 1, 2, ... (global t = n - 1 + t_n with
// local t_n in [0, 1]) and each interval into subintervals k = 1..q at knots
// 0 = tau_0 < tau_1 < ... < tau_q = 1. On subinterval (n, k) the delayed terms
// come from segment (n-1, k) evaluated at the same local time, so the delay
// equation becomes an ODE whose right-hand side is an exponential polynomial
// over the characteristic roots. Its solution is again an exponential
// polynomial:
//
//   y_{n,k}(t_n) = sum_p e^{r_p t_n} sum_{i=0}^{v_{k,p}+n} G_{n,k,p,i} t_n^i
//
// G_{n,k,p,i} for i >= 1 follow from a banded upper-triangular system per root
// (the G_{n,k,p,i} t^i coefficient column of the characteristic polynomial
// vanishes), and the m_a constants G_{n,k,p,0} from the continuity of y and
// its first m_a - 1 derivatives at the left end of the subinterval, which is a
// column-scaled Vandermonde system.
//
// Interval numbering in this API follows that convention: n = 0 is the
// initial history on [-1, 0], n >= 1 are solved intervals. Subintervals are
// numbered k = 1..q.

#include "delaystep/closed_loop.hpp"
#include "delaystep/exp_poly.hpp"

#include <span>
#include <utility>
#include <vector>

namespace delaystep {

/// Absolute tolerance for the junction continuity checks.
inline constexpr double continuity_tol = 1e-9;

/// Knots closer than this are merged.
inline constexpr double knot_merge_tol = 1e-12;

/// History y(t) on [-1, 0]. Segment k covers [-1 + tau_{k-1}, -1 + tau_k] and
/// is written in global time t.
struct InitialCondition {
    std::vector<double> knots{0.0, 1.0};
    std::vector<ExpPoly> segments{ExpPoly{}};

    [[nodiscard]] static InitialCondition steady(double value);

    [[nodiscard]] int subintervals() const noexcept { return static_cast<int>(segments.size()); }

    /// Throws InvalidInput when knots are not 0 = tau_0 < ... < tau_q = 1 or
    /// the segment count does not match.
    void validate() const;

    /// Segment valid at global time t in [-1, 0].
    [[nodiscard]] const ExpPoly& at(double t) const;
};

struct SetpointStep {
    double time = 0.0;  ///< global time, >= 0
    double value = 0.0;

    friend bool operator==(const SetpointStep&, const SetpointStep&) = default;
};

/// Setpoint f(t) as a piecewise exponential polynomial in global time. Piece
/// p applies from pieces[p].start up to the next start; the first piece
/// extends back to t = -1.
class ForcingTerm {
public:
    struct Piece {
        double start = 0.0;
        ExpPoly f;
    };

    ForcingTerm() = default;
    ForcingTerm(ExpPoly before, std::vector<Piece> pieces);

    [[nodiscard]] static ForcingTerm zero() { return {}; }
    [[nodiscard]] static ForcingTerm constant(double value);

    /// Constant `initial` before the first step; each step switches the value.
    [[nodiscard]] static ForcingTerm setpoint_steps(double initial, std::vector<SetpointStep> steps);

    /// Fractional positions in (0, 1) of the piece starts.
    [[nodiscard]] std::vector<double> knots() const;

    /// Piece active at global time t (a piece start belongs to the new piece).
    [[nodiscard]] const ExpPoly& active(double t) const;

    /// f_{n,k}: the piece covering local [lo, hi] of interval n, in local time.
    [[nodiscard]] ExpPoly segment(int n, double lo, double hi) const;

    [[nodiscard]] const std::vector<Piece>& pieces() const noexcept { return pieces_; }

    /// f(t) in global time.
    [[nodiscard]] double value(double t) const;

private:
    std::vector<Piece> pieces_{Piece{-1.0, ExpPoly{}}};
};

/// Segments y_{n,k} in local time for n = 0..N, k = 1..q.
class PiecewiseSolution {
public:
    PiecewiseSolution() = default;
    PiecewiseSolution(std::vector<double> knots, std::vector<std::vector<ExpPoly>> segments);

    [[nodiscard]] int intervals() const noexcept { return static_cast<int>(segments_.size()) - 1; }
    [[nodiscard]] int subintervals() const noexcept { return static_cast<int>(knots_.size()) - 1; }
    [[nodiscard]] const std::vector<double>& knots() const noexcept { return knots_; }

    [[nodiscard]] const ExpPoly& segment(int n, int k) const;

    /// (n, k) of the segment that contains global time t. A junction belongs to
    /// the segment that ends there; t = -1 belongs to (0, 1).
    [[nodiscard]] std::pair<int, int> locate(double t) const;

    [[nodiscard]] double value(double t) const;
    [[nodiscard]] double derivative(double t, int order) const;

    [[nodiscard]] double start_time() const noexcept { return -1.0; }
    [[nodiscard]] double end_time() const noexcept { return static_cast<double>(intervals()); }

private:
    std::vector<double> knots_{0.0, 1.0};
    std::vector<std::vector<ExpPoly>> segments_;
};

/// Banded upper-triangular system for the coefficients G_1..G_Z of one root.
/// Row j (0..Z-1) equates the e^{rt} t^j coefficients; matrix[j][i] multiplies
/// G_i and is nonzero only for j < i <= j + m_a.
struct TriangularSystem {
    real root = 0;
    int unknowns = 0;                         ///< Z
    std::vector<std::vector<real>> matrix;  ///< Z rows, Z + 1 columns (column 0 unused)
    std::vector<real> rhs;                  ///< Z entries
};

/// Coefficients of e^{rt} t^j, j = 0..deg, of sum_h weights_h d^h/dt^h (e^{rt} sum_i g_i t^i).
[[nodiscard]] std::vector<real> differentiated_coefficients(std::span<const double> weights,
                                                           const real& root,
                                                           std::span<const real> g);

/// Builds the triangular system of one root from the previous segment's and
/// the forcing's coefficients at that root.
[[nodiscard]] TriangularSystem assemble_triangular_system(const DdeSystem& system, const real& root,
                                                          std::span<const real> prev_y,
                                                          std::span<const real> prev_f);

/// Back-substitution from G_Z down to G_1; returned vector has G_0 = 0 at index 0.
/// Throws DegenerateLeadingCoefficient when the characteristic polynomial's
/// slope at the root is below 1e-12.
[[nodiscard]] std::vector<real> solve_triangular(const TriangularSystem& tri);

/// Coefficients G_{n,k,p,i}, i >= 1, for every root, with G_{n,k,p,0} = 0.
/// prev_y and prev_f must already be in local time t_n.
[[nodiscard]] ExpPoly advance_polynomial_part(const DdeSystem& system, const ExpPoly& prev_y,
                                              const ExpPoly& prev_f);

/// Adds the constants G_{n,k,p,0} so that the segment and its derivatives of
/// order 0..m_a-1 equal `boundary_values` at local time `knot`.
[[nodiscard]] ExpPoly advance_constant_part(const DdeSystem& system, const ExpPoly& partial,
                                            std::span<const real> boundary_values, double knot);

/// y(t), y'(t), ..., y^{(count-1)}(t).
[[nodiscard]] std::vector<real> boundary_values(const ExpPoly& y, double t, int count);

/// Union of two sorted knot sets, merging knots within knot_merge_tol.
[[nodiscard]] std::vector<double> merge_knots(std::span<const double> a, std::span<const double> b);

/// Runs the method of steps over intervals 1..N.
[[nodiscard]] PiecewiseSolution solve(const DdeSystem& system, const InitialCondition& init,
                                      const ForcingTerm& forcing, int intervals);

/// Declared polynomial degree v + n of the solution form; negative means absent.
[[nodiscard]] constexpr int ansatz_degree(int v, int n) noexcept { return v + n; }

/// v_{k,p} + n for every subinterval k and root p, taking v_{k,p} as the
/// degree of the history segment k at root p (-1 when absent).
[[nodiscard]] std::vector<std::vector<int>> degrees(const InitialCondition& init,
                                                    std::span<const real> roots, int n);

/// Relative residual of the delay equation on segment (n, k) at local time t:
/// |LHS - RHS| / (sum of absolute values of all terms).
[[nodiscard]] double equation_residual(const DdeSystem& system, const PiecewiseSolution& sol,
                                       const ForcingTerm& forcing, int n, int k, double t);

}  // namespace delaystep
