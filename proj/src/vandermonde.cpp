#include "delaystep/vandermonde.hpp"

#include "delaystep/errors.hpp"
#include "delaystep/exp_poly.hpp"

#include <Eigen/LU>
#include <boost/multiprecision/eigen.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

namespace delaystep {

namespace {

constexpr double singular_tol = 1e-12;

template <class T>
void validate(const BasicVandermondeSystem<T>& sys) {
    using std::abs;
    const std::size_t m = sys.nodes.size();
    if (m == 0) {
        throw InvalidInput("Vandermonde system of order 0");
    }
    if (sys.scales.size() != m || sys.rhs.size() != m) {
        throw InvalidInput("Vandermonde nodes, scales and right-hand side differ in length");
    }
    for (std::size_t a = 0; a < m; ++a) {
        if (sys.scales[a] == 0.0) {
            throw SingularSystem("Vandermonde column scale d_" + std::to_string(a + 1) + " is zero");
        }
        for (std::size_t b = 0; b < a; ++b) {
            if (abs(sys.nodes[a] - sys.nodes[b]) <= root_distinct_tol) {
                throw SingularSystem("Vandermonde nodes " + std::to_string(b + 1) + " and " +
                                     std::to_string(a + 1) + " coincide");
            }
        }
    }
}

/// Magnitude a well-conditioned determinant of these nodes and scales would have.
double determinant_scale(std::span<const double> nodes, std::span<const double> scales) {
    double s = 1.0;
    for (double d : scales) s *= std::abs(d);
    for (std::size_t a = 0; a < nodes.size(); ++a)
        for (std::size_t b = 0; b < a; ++b)
            s *= std::max({1.0, std::abs(nodes[a]), std::abs(nodes[b])});
    return s;
}

/// Bit masks over `width` columns with exactly `chosen` bits set, ascending.
std::vector<unsigned> column_subsets(int width, int chosen) {
    std::vector<unsigned> out;
    for (unsigned mask = 0; mask < (1u << width); ++mask) {
        if (std::popcount(mask) == chosen) out.push_back(mask);
    }
    return out;
}

}  // namespace

double vandermonde_determinant(std::span<const double> nodes, std::span<const double> scales) {
    double v = 1.0;
    for (std::size_t a = 0; a < nodes.size(); ++a) {
        for (std::size_t b = 0; b < a; ++b) {
            v *= nodes[a] - nodes[b];
        }
    }
    for (double d : scales) {
        v *= d;
    }
    return v;
}

std::vector<double> vandermonde_matrix(std::span<const double> nodes, std::span<const double> scales) {
    const std::size_t m = nodes.size();
    std::vector<double> out(m * m);
    for (std::size_t j = 0; j < m; ++j) {
        double power = scales[j];
        for (std::size_t i = 0; i < m; ++i) {
            out[i * m + j] = power;
            power *= nodes[j];
        }
    }
    return out;
}

std::size_t laplace_subset_count(int m, int i) {
    if (m < 1 || i < 1 || i > m) {
        throw InvalidInput("minor row index out of range");
    }
    return column_subsets(m - 1, i - 1).size();
}

double laplace_minor(std::span<const double> nodes, std::span<const double> scales, int i, int j) {
    const int m = static_cast<int>(nodes.size());
    // columns of M_U, i.e. the original columns without j, in increasing order
    std::vector<int> columns;
    for (int c = 1; c <= m; ++c) {
        if (c != j) columns.push_back(c - 1);
    }
    const int width = m - 1;
    const int top = i - 1;  // rows 1..i-1 of M_V
    int row_sum = 0;
    for (int h = 1; h <= top; ++h) row_sum += h;

    double minor = 0.0;
    std::vector<double> pa_nodes;
    std::vector<double> qa_nodes;
    for (const unsigned mask : column_subsets(width, top)) {
        pa_nodes.clear();
        qa_nodes.clear();
        int sign_exponent = row_sum;
        double w = 1.0;
        for (int k = 0; k < width; ++k) {
            const auto col = static_cast<std::size_t>(columns[static_cast<std::size_t>(k)]);
            if (mask & (1u << k)) {
                sign_exponent += k + 1;  // pa(n, k) in M_U numbering
                pa_nodes.push_back(nodes[col]);
                w *= scales[col];
            } else {
                qa_nodes.push_back(nodes[col]);
                w *= scales[col] * ipow(nodes[col], i);
            }
        }
        w *= vandermonde_determinant(pa_nodes, {}) * vandermonde_determinant(qa_nodes, {});
        minor += (sign_exponent % 2 == 0) ? w : -w;
    }
    return minor;
}

std::vector<double> solve_cramer(const VandermondeSystem& sys) {
    validate(sys);
    const int m = sys.order();
    if (m > max_cramer_order) {
        throw UnsupportedDegree("Cramer expansion supports order <= " +
                                std::to_string(max_cramer_order) + ", got " + std::to_string(m));
    }
    const double det = vandermonde_determinant(sys.nodes, sys.scales);
    if (std::abs(det) < singular_tol * determinant_scale(sys.nodes, sys.scales)) {
        throw SingularSystem("Vandermonde determinant is numerically zero");
    }
    std::vector<double> x(static_cast<std::size_t>(m), 0.0);
    for (int j = 1; j <= m; ++j) {
        double acc = 0.0;
        for (int i = 1; i <= m; ++i) {
            const double term = laplace_minor(sys.nodes, sys.scales, i, j) *
                                sys.rhs[static_cast<std::size_t>(i - 1)];
            acc += ((i + j) % 2 == 0) ? term : -term;
        }
        x[static_cast<std::size_t>(j - 1)] = acc / det;
    }
    return x;
}

namespace {

template <class T>
std::vector<T> eliminate(const BasicVandermondeSystem<T>& sys) {
    using std::abs;
    validate(sys);
    const int m = sys.order();
    using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
    using Vector = Eigen::Matrix<T, Eigen::Dynamic, 1>;
    Matrix matrix(m, m);
    for (int j = 0; j < m; ++j) {
        T power = sys.scales[static_cast<std::size_t>(j)];
        for (int i = 0; i < m; ++i) {
            matrix(i, j) = power;
            power *= sys.nodes[static_cast<std::size_t>(j)];
        }
    }
    const Eigen::PartialPivLU<Matrix> lu(matrix);
    T magnitude = 0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) magnitude = std::max<T>(magnitude, abs(matrix(i, j)));
    const auto& factors = lu.matrixLU();
    for (int k = 0; k < m; ++k) {
        if (abs(factors(k, k)) < singular_tol * magnitude) {
            throw SingularSystem("zero pivot in Vandermonde elimination");
        }
    }
    Vector rhs(m);
    for (int i = 0; i < m; ++i) rhs(i) = sys.rhs[static_cast<std::size_t>(i)];
    const Vector x = lu.solve(rhs);
    return {x.data(), x.data() + m};
}

}  // namespace

std::vector<double> solve_elimination(const VandermondeSystem& sys) { return eliminate(sys); }

std::vector<real> solve_elimination(const BasicVandermondeSystem<real>& sys) { return eliminate(sys); }

}  // namespace delaystep
