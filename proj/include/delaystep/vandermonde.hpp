#pragma once

// Column-scaled Vandermonde systems
//     sum_{j=1}^{m} d_j r_j^{i-1} x_j = Z_i,   i = 1..m
//
// solve_cramer evaluates Cramer's rule with closed-form determinants: the full
// determinant is prod_{a>b}(r_a - r_b) prod_j d_j, and every minor U_{i,j} is
// expanded by Laplace along rows 1..i-1 into products of two smaller
// Vandermonde determinants. solve_elimination is plain partial-pivot LU on the
// explicit matrix. The stepper uses elimination; Cramer is kept as the
// independent route for cross-checking.

#include "delaystep/real.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace delaystep {

/// Largest order accepted by solve_cramer.
inline constexpr int max_cramer_order = 8;

template <class T>
struct BasicVandermondeSystem {
    std::vector<T> nodes;   ///< r_j, pairwise distinct
    std::vector<T> scales;  ///< d_j, nonzero
    std::vector<T> rhs;     ///< Z_i

    [[nodiscard]] int order() const noexcept { return static_cast<int>(nodes.size()); }
};

using VandermondeSystem = BasicVandermondeSystem<double>;

/// prod_{a>b}(r_a - r_b) prod_j d_j
[[nodiscard]] double vandermonde_determinant(std::span<const double> nodes,
                                             std::span<const double> scales);

/// Explicit matrix, row-major: entry (i, j) = d_j r_j^i for 0-based i, j.
[[nodiscard]] std::vector<double> vandermonde_matrix(std::span<const double> nodes,
                                                     std::span<const double> scales);

/// Number of column subsets laplace_minor enumerates for U_{i,j} (1-based row
/// i of an order-m system). Equals (m-1)! / ((i-1)! (m-i)!).
[[nodiscard]] std::size_t laplace_subset_count(int m, int i);

/// Minor U_{i,j} (row i and column j deleted, both 1-based) via Laplace
/// expansion over the first i-1 rows.
[[nodiscard]] double laplace_minor(std::span<const double> nodes, std::span<const double> scales,
                                   int i, int j);

[[nodiscard]] std::vector<double> solve_cramer(const VandermondeSystem& sys);
[[nodiscard]] std::vector<double> solve_elimination(const VandermondeSystem& sys);
[[nodiscard]] std::vector<real> solve_elimination(const BasicVandermondeSystem<real>& sys);

}  // namespace delaystep
