#include "delaystep/series_identities.hpp"

#include <algorithm>
#include <sstream>

namespace delaystep {

std::vector<IndexTriple> enumerate_original(SeriesKind kind, int m, int z) {
    std::vector<IndexTriple> out;
    if (kind == SeriesKind::s1) {
        for (int h = 1; h <= m; ++h)
            for (int i = 0; i <= h - 1; ++i)
                for (int j = 0; j <= i; ++j) out.push_back({h, i, j});
        return out;
    }
    for (int h = 1; h <= m; ++h)
        for (int i = h; i <= z; ++i)
            for (int j = i - h; j <= i; ++j) out.push_back({h, i, j});
    return out;
}

std::vector<IndexTriple> enumerate_shifted(SeriesKind kind, int m, int z) {
    std::vector<IndexTriple> out;
    if (kind == SeriesKind::s1) {
        for (int j = 0; j <= m - 1; ++j)
            for (int h = j + 1; h <= m; ++h)
                for (int i = j; i <= h - 1; ++i) out.push_back({h, i, j});
        return out;
    }
    if (m < 1 || z < 1) {
        return out;
    }
    const int half = z / 2;
    // S21..S23 run h up to floor(z/2); when floor(z/2) > m those h would
    // exceed m, so their upper limit is min(floor(z/2), m).
    const int low = std::min(half, m);

    // S21
    for (int j = 0; j <= half - 1; ++j)
        for (int h = j + 1; h <= low; ++h)
            for (int i = h; i <= h + j; ++i) out.push_back({h, i, j});
    // S22
    for (int j = 1; j <= half; ++j)
        for (int h = 1; h <= std::min(j, low); ++h)
            for (int i = j; i <= h + j; ++i) out.push_back({h, i, j});
    for (int j = half + 1; j <= z - 1; ++j)
        for (int h = 1; h <= std::min(z - j, low); ++h)
            for (int i = j; i <= h + j; ++i) out.push_back({h, i, j});
    // S23
    for (int j = z + 1 - half; j <= z; ++j)
        for (int h = z - j + 1; h <= low; ++h)
            for (int i = j; i <= z; ++i) out.push_back({h, i, j});
    // S24
    for (int j = 0; j <= z - 1 - m; ++j)
        for (int h = half + 1; h <= m; ++h)
            for (int i = h; i <= h + j; ++i) out.push_back({h, i, j});
    for (int j = z - m; j <= z - 2 - half; ++j)
        for (int h = half + 1; h <= z - 1 - j; ++h)
            for (int i = h; i <= h + j; ++i) out.push_back({h, i, j});
    // S25
    for (int j = z - m; j <= z - half - 1; ++j)
        for (int h = z - j; h <= m; ++h)
            for (int i = h; i <= z; ++i) out.push_back({h, i, j});
    for (int j = z - half; j <= half; ++j)
        for (int h = half + 1; h <= m; ++h)
            for (int i = h; i <= z; ++i) out.push_back({h, i, j});
    for (int j = half + 1; j <= m; ++j)
        for (int h = j; h <= m; ++h)
            for (int i = h; i <= z; ++i) out.push_back({h, i, j});
    // S26
    for (int j = half + 2; j <= m + 1; ++j)
        for (int h = half + 1; h <= j - 1; ++h)
            for (int i = j; i <= z; ++i) out.push_back({h, i, j});
    for (int j = m + 2; j <= z; ++j)
        for (int h = half + 1; h <= m; ++h)
            for (int i = j; i <= z; ++i) out.push_back({h, i, j});
    return out;
}

bool same_multiset(std::span<const IndexTriple> a, std::span<const IndexTriple> b) {
    if (a.size() != b.size()) {
        return false;
    }
    std::vector<IndexTriple> sa(a.begin(), a.end());
    std::vector<IndexTriple> sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    return sa == sb;
}

TermsGrid::TermsGrid(int rows, int cols)
    : rows_(rows), cols_(cols), cells_(static_cast<std::size_t>(rows * cols), 0) {}

bool TermsGrid::at(int i, int j) const noexcept {
    if (i < 0 || j < 0 || i >= rows_ || j >= cols_) {
        return false;
    }
    return cells_[static_cast<std::size_t>(i * cols_ + j)] != 0;
}

void TermsGrid::mark(int i, int j) {
    cells_[static_cast<std::size_t>(i * cols_ + j)] = 1;
}

int TermsGrid::count() const noexcept {
    return static_cast<int>(std::count(cells_.begin(), cells_.end(), 1));
}

std::string TermsGrid::render() const {
    std::ostringstream os;
    os << "i\\j";
    for (int j = 0; j < cols_; ++j) os << ' ' << j;
    os << '\n';
    for (int i = 0; i < rows_; ++i) {
        os << i << "  ";
        for (int j = 0; j < cols_; ++j) {
            os << ' ' << (at(i, j) ? 'x' : '.');
        }
        os << '\n';
    }
    return os.str();
}

TermsGrid terms_grid(std::span<const IndexTriple> triples, int h) {
    int rows = 0;
    int cols = 0;
    for (const auto& t : triples) {
        if (t.h == h) {
            rows = std::max(rows, t.i + 1);
            cols = std::max(cols, t.j + 1);
        }
    }
    TermsGrid grid(rows, cols);
    for (const auto& t : triples) {
        if (t.h == h) {
            grid.mark(t.i, t.j);
        }
    }
    return grid;
}

}  // namespace delaystep
