#include "delaystep/closed_loop.hpp"

#include "delaystep/errors.hpp"
#include "delaystep/exp_poly.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace delaystep {

namespace {

constexpr double imaginary_tol = 1e-9;
constexpr int newton_steps = 4;

void trim_trailing_zeros(std::vector<double>& p) {
    while (!p.empty() && p.back() == 0.0) {
        p.pop_back();
    }
}

bool all_finite(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

/// Real roots of sum_k q_k s^k (q.back() != 0), unsorted.
std::vector<double> real_roots(const std::vector<double>& q) {
    const int degree = static_cast<int>(q.size()) - 1;
    if (degree == 0) {
        return {};
    }
    if (degree == 1) {
        return {-q[0] / q[1]};
    }
    if (degree == 2) {
        const double a = q[2];
        const double b = q[1];
        const double c = q[0];
        const double disc = b * b - 4.0 * a * c;
        if (disc < 0.0) {
            const double imag = std::sqrt(-disc) / (2.0 * std::abs(a));
            if (imag > imaginary_tol) {
                std::ostringstream msg;
                msg << "complex characteristic roots with imaginary part " << imag;
                throw RootsNotRealSimple(msg.str());
            }
            return {-b / (2.0 * a), -b / (2.0 * a)};
        }
        // cancellation-free pair
        const double s = -0.5 * (b + std::copysign(std::sqrt(disc), b));
        if (s == 0.0) {
            return {0.0, 0.0};
        }
        return {s / a, c / s};
    }
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(degree, degree);
    for (int i = 1; i < degree; ++i) {
        companion(i, i - 1) = 1.0;
    }
    for (int i = 0; i < degree; ++i) {
        companion(i, degree - 1) = -q[static_cast<std::size_t>(i)] / q.back();
    }
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    if (solver.info() != Eigen::Success) {
        throw RootsNotRealSimple("eigenvalue iteration for characteristic roots did not converge");
    }
    std::vector<double> roots;
    roots.reserve(static_cast<std::size_t>(degree));
    for (const auto& ev : solver.eigenvalues()) {
        if (std::abs(ev.imag()) > imaginary_tol) {
            std::ostringstream msg;
            msg << "complex characteristic root " << ev.real() << (ev.imag() < 0 ? " - " : " + ")
                << std::abs(ev.imag()) << "i";
            throw RootsNotRealSimple(msg.str());
        }
        roots.push_back(ev.real());
    }
    return roots;
}

template <class T>
T horner_derivative(std::span<const double> a, const T& r, int d) {
    T acc = 0;
    for (int h = static_cast<int>(a.size()) - 1; h >= d; --h) {
        acc = acc * r + T(a[static_cast<std::size_t>(h)]) * T(factorial(h) / factorial(h - d));
    }
    return acc;
}

}  // namespace

double polynomial_derivative(std::span<const double> a, double r, int d) {
    return horner_derivative(a, r, d);
}

real polynomial_derivative(std::span<const double> a, const real& r, int d) {
    return horner_derivative(a, r, d);
}

std::vector<double> poly_multiply(std::span<const double> p, std::span<const double> q) {
    if (p.empty() || q.empty()) {
        return {};
    }
    std::vector<double> out(p.size() + q.size() - 1, 0.0);
    for (std::size_t i = 0; i < p.size(); ++i) {
        for (std::size_t j = 0; j < q.size(); ++j) {
            out[i + j] += p[i] * q[j];
        }
    }
    return out;
}

std::vector<real> characteristic_roots(std::span<const double> a) {
    std::vector<double> poly(a.begin(), a.end());
    trim_trailing_zeros(poly);
    if (poly.size() < 2) {
        throw InvalidInput("characteristic polynomial needs a nonzero coefficient of order >= 1");
    }
    if (poly[0] != 0.0) {
        throw InvalidInput("characteristic polynomial must have a_0 = 0 (integrating controller)");
    }
    if (static_cast<int>(poly.size()) - 1 > max_supported_order) {
        throw UnsupportedDegree("order m_a = " + std::to_string(poly.size() - 1) +
                                " exceeds the supported maximum of " +
                                std::to_string(max_supported_order));
    }
    if (poly[1] == 0.0) {
        throw RootsNotRealSimple("zero is a repeated characteristic root (a_1 = 0)");
    }
    // Deflate the exact zero root: sum_{h>=1} a_h r^h = r * sum_{h>=1} a_h r^{h-1}.
    const std::vector<double> deflated(poly.begin() + 1, poly.end());
    std::vector<real> roots;
    for (double estimate : real_roots(deflated)) {
        // Newton polishing in working precision; quadratic convergence from a
        // double-accurate start needs only a few steps.
        real r = estimate;
        for (int step = 0; step < newton_steps; ++step) {
            const real slope = polynomial_derivative(poly, r, 1);
            if (slope == 0) break;
            r -= polynomial_derivative(poly, r, 0) / slope;
        }
        roots.push_back(r);
    }
    roots.push_back(real(0));
    std::sort(roots.begin(), roots.end());
    for (std::size_t i = 1; i < roots.size(); ++i) {
        if (roots[i] - roots[i - 1] <= root_distinct_tol) {
            std::ostringstream msg;
            msg << "repeated characteristic root near " << roots[i];
            throw RootsNotRealSimple(msg.str());
        }
    }
    return roots;
}

DdeSystem make_system(std::vector<double> a, std::vector<double> b) {
    if (!all_finite(a) || !all_finite(b)) {
        throw InvalidInput("delay equation coefficients must be finite");
    }
    trim_trailing_zeros(a);
    trim_trailing_zeros(b);
    if (a.size() < 2) {
        throw InvalidInput("left-hand side polynomial a is zero");
    }
    if (b.empty()) {
        throw InvalidInput("delayed polynomial b is zero");
    }
    if (b.size() > a.size()) {
        throw InvalidInput("delayed order m_b = " + std::to_string(b.size() - 1) +
                           " exceeds m_a = " + std::to_string(a.size() - 1) +
                           "; the plant must satisfy m_b <= m_a");
    }
    DdeSystem sys;
    sys.roots = characteristic_roots(a);
    sys.a = std::move(a);
    sys.c = b;
    sys.b = std::move(b);
    return sys;
}

DdeSystem build_closed_loop(const PidParams& pid, const PlantModel& plant) {
    if (!std::isfinite(pid.k) || !std::isfinite(pid.k_i) || !std::isfinite(pid.k_d)) {
        throw InvalidInput("PID gains must be finite");
    }
    if (pid.k == 0.0 && pid.k_i == 0.0 && pid.k_d == 0.0) {
        throw InvalidInput("at least one PID gain must be nonzero");
    }
    std::vector<double> numerator = plant.numerator;
    std::vector<double> denominator = plant.denominator;
    if (!all_finite(numerator) || !all_finite(denominator)) {
        throw InvalidInput("plant coefficients must be finite");
    }
    trim_trailing_zeros(numerator);
    if (numerator.empty()) {
        throw InvalidInput("plant numerator is the zero polynomial");
    }
    if (denominator.empty() || denominator.back() == 0.0) {
        throw InvalidInput("plant denominator must have a nonzero leading coefficient");
    }
    if (numerator.size() > denominator.size()) {
        throw InvalidInput("plant numerator degree exceeds denominator degree");
    }
    // a(s) = s A(s)
    std::vector<double> a(denominator.size() + 1, 0.0);
    std::copy(denominator.begin(), denominator.end(), a.begin() + 1);
    const std::vector<double> controller{pid.k_i, pid.k, pid.k_d};
    return make_system(std::move(a), poly_multiply(controller, numerator));
}

ClosedLoopSpec normalize_delay(const ClosedLoopSpec& spec) {
    const double L = spec.delay;
    if (!(L > 0.0) || !std::isfinite(L)) {
        throw InvalidInput("delay must be positive and finite");
    }
    ClosedLoopSpec out = spec;
    out.delay = 1.0;
    out.pid.k_i = spec.pid.k_i * L;
    out.pid.k_d = spec.pid.k_d / L;
    const auto rescale = [L](std::vector<double>& p) {
        double scale = 1.0;
        for (double& c : p) {
            c /= scale;
            scale *= L;
        }
    };
    rescale(out.plant.numerator);
    rescale(out.plant.denominator);
    return out;
}

}  // namespace delaystep
