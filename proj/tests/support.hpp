#pragma once

// Small helpers shared by the unit tests: a seeded case generator and
// numerical reference routines that do not go through the library.

#include "delaystep/exp_poly.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace delaystep::testing {

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    bool coin() { return integer(0, 1) == 1; }

    /// Distinct values in [lo, hi], pairwise at least `gap` apart.
    std::vector<double> separated(int count, double lo, double hi, double gap) {
        std::vector<double> out;
        while (static_cast<int>(out.size()) < count) {
            const double v = uniform(lo, hi);
            bool ok = true;
            for (double w : out) ok = ok && std::abs(v - w) >= gap;
            if (ok) out.push_back(v);
        }
        return out;
    }

    ExpPoly exp_poly(int max_roots, int max_degree, double root_bound) {
        const auto roots = separated(integer(1, max_roots), -root_bound, root_bound, 0.05);
        std::vector<ExpTerm> terms;
        for (double r : roots) {
            ExpTerm term{r, {}};
            const int deg = integer(0, max_degree);
            for (int i = 0; i <= deg; ++i) term.coeffs.push_back(uniform(-1.0, 1.0));
            terms.push_back(std::move(term));
        }
        return ExpPoly(std::move(terms));
    }

private:
    std::mt19937_64 rng_;
};

/// h-th derivative by central differences, step `d`, with two Richardson
/// extrapolation levels (error O(d^6)).
inline double finite_difference(const std::function<double(double)>& f, int h, double t, double d) {
    auto raw = [&](double step) {
        double sum = 0.0;
        double c = 1.0;  // binomial(h, k) with alternating sign
        for (int k = 0; k <= h; ++k) {
            sum += c * f(t + (0.5 * h - k) * step);
            c = -c * (h - k) / (k + 1);
        }
        return sum / std::pow(step, h);
    };
    const double d1 = raw(d);
    const double d2 = raw(d / 2);
    const double d4 = raw(d / 4);
    const double r1 = (4 * d2 - d1) / 3;
    const double r2 = (4 * d4 - d2) / 3;
    return (16 * r2 - r1) / 15;
}

/// Composite Gauss-Legendre (5 points per panel) quadrature on [a, b].
inline double integrate(const std::function<double(double)>& f, double a, double b, int panels = 200) {
    static constexpr double x[5] = {0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640,
                                    0.9061798459386640};
    static constexpr double w[5] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                    0.2369268850561891, 0.2369268850561891};
    const double width = (b - a) / panels;
    double sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * width;
        for (int q = 0; q < 5; ++q) sum += w[q] * f(mid + 0.5 * width * x[q]);
    }
    return sum * 0.5 * width;
}

/// Coefficients of the term at `root` as doubles; empty when absent.
inline std::vector<double> coeffs_at(const ExpPoly& f, double root) {
    const ExpTerm* term = f.find(real(root));
    if (term == nullptr) return {};
    return to_double(term->coeffs);
}

}  // namespace delaystep::testing
