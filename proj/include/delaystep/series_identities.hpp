#pragma once

// Index sets of the triple sums that appear when an exponential polynomial is
// differentiated and substituted into the delay equation:
//
//   S1(m)   = sum_{h=1}^{m} sum_{i=0}^{h-1} sum_{j=0}^{i}
//   S2(m,z) = sum_{h=1}^{m} sum_{i=h}^{z}   sum_{j=i-h}^{i}
//
// (h = derivative order, i = input power, j = output power). The shifted
// forms put j outermost so coefficients of t^j can be collected directly; the
// stepper assembles its coefficient systems from these enumerations.

#include <span>
#include <string>
#include <vector>

namespace delaystep {

enum class SeriesKind { s1, s2 };

struct IndexTriple {
    int h = 0;
    int i = 0;
    int j = 0;

    friend auto operator<=>(const IndexTriple&, const IndexTriple&) = default;
};

/// Triples in the original h, i, j nesting. z is ignored for S1.
[[nodiscard]] std::vector<IndexTriple> enumerate_original(SeriesKind kind, int m, int z = 0);

/// Triples with j outermost. S2 is produced as the six blocks S21..S26 split
/// at floor(z/2); h never exceeds m in any block.
[[nodiscard]] std::vector<IndexTriple> enumerate_shifted(SeriesKind kind, int m, int z = 0);

/// True when both lists hold the same triples with the same multiplicities.
[[nodiscard]] bool same_multiset(std::span<const IndexTriple> a, std::span<const IndexTriple> b);

/// Occupancy of (i, j) for one derivative order h.
class TermsGrid {
public:
    TermsGrid() = default;
    TermsGrid(int rows, int cols);

    [[nodiscard]] int rows() const noexcept { return rows_; }
    [[nodiscard]] int cols() const noexcept { return cols_; }
    [[nodiscard]] bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }
    [[nodiscard]] bool at(int i, int j) const noexcept;
    void mark(int i, int j);
    [[nodiscard]] int count() const noexcept;

    /// Rows are i, columns are j; 'x' marks an occupied cell.
    [[nodiscard]] std::string render() const;

    friend bool operator==(const TermsGrid&, const TermsGrid&) = default;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<char> cells_;
};

[[nodiscard]] TermsGrid terms_grid(std::span<const IndexTriple> triples, int h);

}  // namespace delaystep
