#pragma once

// Closed-loop delay equation for an ideal parallel PID controller
//     C(s) = k + k_i/s + k_d s
// acting on a plant with a unit transport delay
//     P(s) = e^{-s} E(s) / A(s).
//
// Clearing the integrator gives the neutral delay differential equation
//     sum_{h=1}^{m_a} a_h y^(h)(t) = - sum_{h=0}^{m_b} b_h y^(h)(t-1)
//                                    + sum_{h=0}^{m_b} c_h f^(h)(t-1)
// with a(s) = s A(s), b(s) = (k_i + k s + k_d s^2) E(s) and c = b.

#include "delaystep/real.hpp"

#include <span>
#include <vector>

namespace delaystep {

/// Highest supported order m_a of the delay-free part.
inline constexpr int max_supported_order = 12;

struct PidParams {
    double k = 0.0;    ///< proportional gain
    double k_i = 0.0;  ///< integral gain, 1/delay
    double k_d = 0.0;  ///< derivative gain, delay

    friend bool operator==(const PidParams&, const PidParams&) = default;
};

/// Coefficient lists are indexed by power of s.
struct PlantModel {
    std::vector<double> numerator;    ///< E(s)
    std::vector<double> denominator;  ///< A(s)

    friend bool operator==(const PlantModel&, const PlantModel&) = default;
};

/// Controller and plant with a physical delay; times in the same unit as `delay`.
struct ClosedLoopSpec {
    PidParams pid;
    PlantModel plant;
    double delay = 1.0;
};

/// Rescales time so that the delay becomes 1: s' = s L, so k_i <- k_i L,
/// k_d <- k_d / L and every plant coefficient of s^h is divided by L^h.
[[nodiscard]] ClosedLoopSpec normalize_delay(const ClosedLoopSpec& spec);

/// Coefficients of the delay equation. All lists are indexed by derivative
/// order h; a[0] is always 0 because of the integrator.
struct DdeSystem {
    std::vector<double> a;      ///< a_h, h = 0..m_a
    std::vector<double> b;      ///< b_h, h = 0..m_b
    std::vector<double> c;      ///< c_h, h = 0..m_c (equal to b)
    std::vector<real> roots;    ///< characteristic roots, ascending, one is exactly 0

    [[nodiscard]] int order_a() const noexcept { return static_cast<int>(a.size()) - 1; }
    [[nodiscard]] int order_b() const noexcept { return static_cast<int>(b.size()) - 1; }
    [[nodiscard]] int order_c() const noexcept { return static_cast<int>(c.size()) - 1; }
};

[[nodiscard]] DdeSystem build_closed_loop(const PidParams& pid, const PlantModel& plant);

/// Validates coefficient lists given directly (a indexed from h = 0 with
/// a[0] = 0) and computes the roots. c is set equal to b.
[[nodiscard]] DdeSystem make_system(std::vector<double> a, std::vector<double> b);

/// All roots of sum_{h>=1} a_h r^h, a[0] must be 0. The zero root is factored
/// out exactly; the rest come from a closed form (degree <= 2) or companion
/// matrix eigenvalues, polished by Newton steps in working precision. Sorted
/// ascending. Throws RootsNotRealSimple for complex or repeated roots.
[[nodiscard]] std::vector<real> characteristic_roots(std::span<const double> a);

/// d-th derivative of the polynomial sum_h a_h s^h at s = r.
[[nodiscard]] double polynomial_derivative(std::span<const double> a, double r, int d = 0);
[[nodiscard]] real polynomial_derivative(std::span<const double> a, const real& r, int d = 0);

[[nodiscard]] std::vector<double> poly_multiply(std::span<const double> p, std::span<const double> q);

}  // namespace delaystep
