#pragma once

// Exponential polynomials  f(t) = sum_p e^{r_p t} sum_i g_{p,i} t^i
//
// This is the representation of every solution segment, forcing segment and
// initial-condition segment in the library. The class is a value type kept in
// canonical form: terms sorted by ascending root, roots closer than
// root_distinct_tol merged, no trailing zero coefficients, no empty terms.
// Roots, coefficients and all internal arithmetic use `real`; evaluation
// returns double.

#include "delaystep/real.hpp"

#include <span>
#include <vector>

namespace delaystep {

/// Two roots closer than this are treated as the same root.
inline constexpr double root_distinct_tol = 1e-9;

/// Largest n for which n! is finite in double precision.
inline constexpr int max_factorial = 170;

/// n! from a precomputed table. Throws UnsupportedDegree outside [0, 170].
[[nodiscard]] double factorial(int n);

[[nodiscard]] double binomial(int n, int k);

/// base^exp for exp >= 0, with 0^0 = 1.
[[nodiscard]] double ipow(double base, int exp) noexcept;

/// Coefficient of e^{rt} t^j in the h-th derivative of e^{rt} t^i:
///   i! h! / (j! (i-j)! (h-i+j)!) r^{h-i+j}   for max(0, i-h) <= j <= i,
/// and zero otherwise. h = 0 gives the identity.
[[nodiscard]] double derivative_coefficient(int h, int i, int j, double r);
[[nodiscard]] real derivative_coefficient(int h, int i, int j, const real& r);

struct ExpTerm {
    real root = 0;
    std::vector<real> coeffs;  ///< coeffs[i] multiplies t^i

    friend bool operator==(const ExpTerm&, const ExpTerm&) = default;
};

class ExpPoly {
public:
    ExpPoly() = default;
    explicit ExpPoly(std::vector<ExpTerm> terms);

    [[nodiscard]] static ExpPoly constant(double value);
    [[nodiscard]] static ExpPoly term(const real& root, std::vector<real> coeffs);

    [[nodiscard]] const std::vector<ExpTerm>& terms() const noexcept { return terms_; }
    [[nodiscard]] bool empty() const noexcept { return terms_.empty(); }

    /// Term whose root is within tol of `root`, or nullptr.
    [[nodiscard]] const ExpTerm* find(const real& root, double tol = root_distinct_tol) const;

    /// Polynomial degree attached to `root`; -1 when the root is absent.
    [[nodiscard]] int degree(const real& root) const;
    [[nodiscard]] int max_degree() const noexcept;
    [[nodiscard]] std::vector<real> roots() const;

    /// Value rounded to double; the sum itself is formed in `real`.
    [[nodiscard]] double operator()(double t) const;
    [[nodiscard]] real exact(double t) const;

    friend bool operator==(const ExpPoly&, const ExpPoly&) = default;

private:
    std::vector<ExpTerm> terms_;
};

[[nodiscard]] double evaluate(const ExpPoly& f, double t);

/// Exact h-th derivative, h >= 1. Throws InvalidInput for h < 1.
[[nodiscard]] ExpPoly derivative(const ExpPoly& f, int h);

/// Value of the h-th derivative at t; h = 0 is plain evaluation.
[[nodiscard]] double evaluate_derivative(const ExpPoly& f, int h, double t);
[[nodiscard]] real exact_derivative(const ExpPoly& f, int h, double t);

[[nodiscard]] ExpPoly add(const ExpPoly& f, const ExpPoly& g);
[[nodiscard]] ExpPoly scale(const ExpPoly& f, double s);

/// g with g(t) = f(t + delta), re-expanded exactly.
[[nodiscard]] ExpPoly shift_origin(const ExpPoly& f, double delta);

/// Exact integral of f over [a, b].
[[nodiscard]] double definite_integral(const ExpPoly& f, double a, double b);

/// Integral of e^{x s} s^j over s in [0, 1], summed from positive-term series.
[[nodiscard]] double unit_moment(int j, double x);
[[nodiscard]] real unit_moment(int j, const real& x);

/// Same roots (within root_distinct_tol) and coefficients within
/// tol * max(1, largest coefficient magnitude).
[[nodiscard]] bool approx_equal(const ExpPoly& f, const ExpPoly& g, double tol);

/// Re-expresses every root of f as the nearest entry of `roots`.
/// Throws InvalidInput when a root of f has no match within root_distinct_tol.
[[nodiscard]] ExpPoly snap_roots(const ExpPoly& f, std::span<const real> roots);

inline ExpPoly operator+(const ExpPoly& f, const ExpPoly& g) { return add(f, g); }
inline ExpPoly operator-(const ExpPoly& f, const ExpPoly& g) { return add(f, scale(g, -1.0)); }
inline ExpPoly operator*(double s, const ExpPoly& f) { return scale(f, s); }

}  // namespace delaystep
