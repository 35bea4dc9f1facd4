// Acceptance suite: one PASS/FAIL line per criterion. Every reference value
// is computed here from scratch (own generators, own evaluation of
// exponential polynomials and their derivatives, the printed first-order
// recursions) and compared against the library.

#include "delaystep/closed_loop.hpp"
#include "delaystep/errors.hpp"
#include "delaystep/exp_poly.hpp"
#include "delaystep/oracle.hpp"
#include "delaystep/series_identities.hpp"
#include "delaystep/stepper.hpp"
#include "delaystep/vandermonde.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

using namespace delaystep;

namespace {

// ---------------------------------------------------------------------------
// Generators

class Draw {
public:
    explicit Draw(std::uint64_t seed) : rng_(seed) {}
    double real_in(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    int int_in(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

private:
    std::mt19937_64 rng_;
};

// ---------------------------------------------------------------------------
// Independent evaluation of exponential polynomials

real choose(int n, int k) {
    real c = 1;
    for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return c;
}

/// h-th derivative of f at t (Leibniz rule), and the same sum with every
/// term replaced by its magnitude.
std::pair<real, real> derivative_at(const ExpPoly& f, int h, const real& t) {
    real value = 0;
    real magnitude = 0;
    for (const auto& term : f.terms()) {
        const real& r = term.root;
        const real growth = exp(r * t);
        for (std::size_t ii = 0; ii < term.coeffs.size(); ++ii) {
            const int i = static_cast<int>(ii);
            for (int d = 0; d <= std::min(h, i); ++d) {
                real falling = 1;
                for (int s = 0; s < d; ++s) falling *= i - s;
                const real piece = term.coeffs[ii] * choose(h, d) * pow(r, h - d) * falling * pow(t, i - d) * growth;
                value += piece;
                magnitude += abs(piece);
            }
        }
    }
    return {value, magnitude};
}

std::vector<real> coefficients(const ExpPoly& f, const real& root) {
    const ExpTerm* term = f.find(root);
    return term ? term->coeffs : std::vector<real>{};
}

// ---------------------------------------------------------------------------
// Reporting

struct Outcome {
    bool passed = true;
    double worst = 0.0;
    std::string note;

    void observe(double error, double tolerance, const std::string& what) {
        if (!(error <= tolerance)) {
            if (passed) note = what;
            passed = false;
        }
        if (std::isnan(error) || error > worst) worst = error;
    }
    void fail(const std::string& what) {
        if (passed) note = what;
        passed = false;
    }
};

using Clock = std::chrono::steady_clock;

bool report(int id, const std::string& title, Outcome o, double tolerance, double seconds, double limit) {
    if (seconds > limit) o.fail("runtime " + std::to_string(seconds) + " s exceeds " + std::to_string(limit) + " s");
    std::printf("%s criterion %d: %s (worst %.3e, tol %.1e, %.2f s of %.0f s)%s%s\n", o.passed ? "PASS" : "FAIL", id,
                title.c_str(), o.worst, tolerance, seconds, limit, o.note.empty() ? "" : " first failure: ",
                o.note.c_str());
    return o.passed;
}

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// ---------------------------------------------------------------------------
// Criterion 1: first interval after a unit step down

bool criterion1() {
    const auto start = Clock::now();
    Draw draw(1001);
    Outcome o;
    for (int c = 0; c < 100; ++c) {
        const double tp = draw.real_in(0.05, 20.0);
        const double e0 = draw.real_in(0.1, 3.0);
        const PidParams pid{draw.real_in(0.0, 2.0), draw.real_in(0.01, 2.0), draw.real_in(0.0, 0.9) * tp / e0};
        const auto sys = build_closed_loop(pid, {{e0}, {1.0, tp}});
        const auto sol = solve(sys, InitialCondition::steady(1.0), ForcingTerm::setpoint_steps(1.0, {{0.0, 0.0}}), 1);
        const ExpPoly& y = sol.segment(1, 1);
        const std::string label = "t_p=" + std::to_string(tp);
        double error = 0.0;
        bool found = false;
        for (const auto& term : y.terms()) {
            for (std::size_t i = 0; i < term.coeffs.size(); ++i) {
                const double g = to_double(term.coeffs[i]);
                if (term.root == 0 && i == 0) {
                    found = true;
                    error = std::max(error, std::abs(g - 1.0));
                } else {
                    error = std::max(error, std::abs(g));
                }
            }
        }
        if (!found) o.fail(label + ": G_{1,1,1,0} missing");
        o.observe(error, 1e-12, label);
    }
    return report(1, "step-down first interval is y = 1 (100 draws of t_p and gains)", o, 1e-12,
                  seconds_since(start), 1.0);
}

// ---------------------------------------------------------------------------
// Criterion 2: printed recursions for the first-order plant

using Coeffs = std::vector<real>;

/// Coefficients of one segment at the two roots 0 and -1/t_p.
struct Segment {
    Coeffs g1;
    Coeffs g2;
};

real at(const Coeffs& c, int i) {
    return (i >= 0 && i < static_cast<int>(c.size())) ? c[static_cast<std::size_t>(i)] : real(0);
}

struct FirstOrder {
    real tp;
    real b0, b1, b2;
    real b3() const { return b0 - b1 / tp + b2 / (tp * tp); }
    real b4() const { return b1 - 2 * b2 / tp; }
    real b5() const { return b2; }

    real value(const Segment& s, const real& t) const {
        real p1 = 0, p2 = 0;
        for (int i = static_cast<int>(s.g1.size()) - 1; i >= 0; --i) p1 = p1 * t + s.g1[static_cast<std::size_t>(i)];
        for (int i = static_cast<int>(s.g2.size()) - 1; i >= 0; --i) p2 = p2 * t + s.g2[static_cast<std::size_t>(i)];
        return p1 + exp(-t / tp) * p2;
    }
    real slope(const Segment& s, const real& t) const {
        real d1 = 0, p2 = 0, d2 = 0;
        for (int i = 1; i < static_cast<int>(s.g1.size()); ++i) d1 += i * s.g1[static_cast<std::size_t>(i)] * pow(t, i - 1);
        for (int i = 0; i < static_cast<int>(s.g2.size()); ++i) {
            p2 += s.g2[static_cast<std::size_t>(i)] * pow(t, i);
            if (i > 0) d2 += i * s.g2[static_cast<std::size_t>(i)] * pow(t, i - 1);
        }
        return d1 + exp(-t / tp) * (d2 - p2 / tp);
    }

    /// i > 0 coefficients of the new segment from the previous one; degrees
    /// z1 = v_{k,1} + n and z2 = v_{k,2} + n.
    Segment polynomial_part(const Segment& prev, int z1, int z2) const {
        Segment s;
        s.g1.assign(static_cast<std::size_t>(std::max(z1, 0)) + 1, real(0));
        s.g2.assign(static_cast<std::size_t>(std::max(z2, 0)) + 1, real(0));
        const Coeffs& p1 = prev.g1;
        const Coeffs& p2 = prev.g2;
        for (int i = z1; i >= 1; --i) {
            real g = -(b0 / i) * at(p1, i - 1);
            if (i <= z1 - 1) g += -tp * (i + 1) * s.g1[static_cast<std::size_t>(i) + 1] - b1 * at(p1, i);
            if (i <= z1 - 2) g += -b2 * (i + 1) * at(p1, i + 1);
            s.g1[static_cast<std::size_t>(i)] = g;
        }
        for (int i = z2; i >= 1; --i) {
            real g = (b3() / i) * at(p2, i - 1);
            if (i <= z2 - 1) g += tp * (i + 1) * s.g2[static_cast<std::size_t>(i) + 1] + b4() * at(p2, i);
            if (i <= z2 - 2) g += b5() * (i + 1) * at(p2, i + 1);
            s.g2[static_cast<std::size_t>(i)] = g;
        }
        return s;
    }

    /// i = 0 coefficients; y, dy are the junction values and tau the left
    /// end of the subinterval (0 for k = 1).
    void constants(Segment& s, const real& y, const real& dy, const real& tau) const {
        real sum11 = 0, sum12 = 0, sum21 = 0, sum22 = 0;
        for (int h = 1; h < static_cast<int>(s.g1.size()); ++h) {
            const real g = s.g1[static_cast<std::size_t>(h)];
            sum11 += (tau + tp * h) * pow(tau, h - 1) * g;
            sum21 += tp * h * pow(tau, h - 1) * g;
        }
        for (int h = 1; h < static_cast<int>(s.g2.size()); ++h) {
            const real g = s.g2[static_cast<std::size_t>(h)];
            sum12 += tp * h * pow(tau, h - 1) * g;
            sum22 += (-tau + tp * h) * pow(tau, h - 1) * g;
        }
        const real grow = exp(tau / tp);
        s.g1[0] = y + tp * dy - sum11 - sum12 / grow;
        s.g2[0] = -tp * grow * dy + grow * sum21 + sum22;
    }
};

double segment_mismatch(const Segment& want, const ExpPoly& got, const real& r2) {
    const Coeffs g1 = coefficients(got, real(0));
    const Coeffs g2 = coefficients(got, r2);
    real scale = 1e-300;
    for (const auto& c : {want.g1, want.g2})
        for (const auto& v : c) scale = std::max(scale, real(abs(v)));
    real worst = 0;
    const int n1 = static_cast<int>(std::max(want.g1.size(), g1.size()));
    const int n2 = static_cast<int>(std::max(want.g2.size(), g2.size()));
    for (int i = 0; i < n1; ++i) worst = std::max(worst, real(abs(at(want.g1, i) - at(g1, i))));
    for (int i = 0; i < n2; ++i) worst = std::max(worst, real(abs(at(want.g2, i) - at(g2, i))));
    return to_double(worst / scale);
}

bool criterion2() {
    const auto start = Clock::now();
    Draw draw(2002);
    Outcome o;
    constexpr int max_n = 5;
    for (int c = 0; c < 100; ++c) {
        FirstOrder fo;
        const double tp = draw.real_in(0.2, 5.0);
        const double b0 = draw.real_in(-1.0, 1.0);
        const double b1 = draw.real_in(-1.0, 1.0);
        const double b2 = draw.real_in(-0.9, 0.9) * tp;
        fo.tp = tp;
        fo.b0 = b0;
        fo.b1 = b1;
        fo.b2 = b2;
        const auto sys = make_system({0.0, 1.0, tp}, {b0, b1, b2});
        const real r2 = sys.roots.front();
        const std::string label = "draw " + std::to_string(c);

        // Preset history on q subintervals, zero setpoint.
        const int q = draw.int_in(1, 3);
        InitialCondition init;
        init.knots = {0.0};
        for (int k = 1; k < q; ++k) init.knots.push_back((k + draw.real_in(-0.3, 0.3)) / q);
        init.knots.push_back(1.0);
        init.segments.clear();
        std::vector<std::array<int, 2>> v;
        std::vector<Segment> current;
        for (int k = 0; k < q; ++k) {
            Segment local;
            std::array<int, 2> vk{draw.int_in(-1, 2), draw.int_in(-1, 2)};
            for (int i = 0; i <= vk[0]; ++i) local.g1.push_back(draw.real_in(-1.0, 1.0));
            for (int i = 0; i <= vk[1]; ++i) local.g2.push_back(draw.real_in(-1.0, 1.0));
            v.push_back(vk);
            // the history is stored in global time t = t_1 - 1
            const ExpPoly in_local({ExpTerm{0.0, local.g1}, ExpTerm{r2, local.g2}});
            init.segments.push_back(shift_origin(in_local, 1.0));
        }
        const auto sol = solve(sys, init, ForcingTerm::zero(), max_n);
        for (int k = 1; k <= q; ++k) {
            const ExpPoly& h = sol.segment(0, k);
            current.push_back(Segment{coefficients(h, real(0)), coefficients(h, r2)});
        }
        const auto& knots = sol.knots();
        for (int n = 1; n <= max_n; ++n) {
            std::vector<Segment> next;
            for (int k = 1; k <= q; ++k) {
                const auto& vk = v[static_cast<std::size_t>(k - 1)];
                Segment s = fo.polynomial_part(current[static_cast<std::size_t>(k - 1)], vk[0] + n, vk[1] + n);
                if (k == 1) {
                    const Segment& last = current.back();
                    fo.constants(s, fo.value(last, 1), fo.slope(last, 1), 0);
                } else {
                    const real tau = knots[static_cast<std::size_t>(k - 1)];
                    const Segment& left = next.back();
                    fo.constants(s, fo.value(left, tau), fo.slope(left, tau), tau);
                }
                o.observe(segment_mismatch(s, sol.segment(n, k), r2), 1e-10,
                          label + " preset history n=" + std::to_string(n) + " k=" + std::to_string(k));
                next.push_back(std::move(s));
            }
            current = std::move(next);
        }

        // Unit step down: steady history 1, setpoint 1 -> 0; G_{1,1,1,0} = 1 and
        // the same recursions from n = 2 with v_{1,1} = -1, v_{1,2} = -2.
        const auto sol2 = solve(sys, InitialCondition::steady(1.0), ForcingTerm::setpoint_steps(1.0, {{0.0, 0.0}}),
                                max_n);
        Segment y{{real(1)}, {}};
        o.observe(segment_mismatch(y, sol2.segment(1, 1), r2), 1e-10, label + " step down n=1");
        for (int n = 2; n <= max_n; ++n) {
            Segment s = fo.polynomial_part(y, n - 1, n - 2);
            if (n - 2 < 0) s.g2.assign(1, real(0));
            fo.constants(s, fo.value(y, 1), fo.slope(y, 1), 0);
            o.observe(segment_mismatch(s, sol2.segment(n, 1), r2), 1e-10, label + " step down n=" + std::to_string(n));
            y = std::move(s);
        }
    }
    return report(2, "first-order recursions with b3, b4, b5 reproduced for n <= 5 (100 draws)", o, 1e-10,
                  seconds_since(start), 5.0);
}

// ---------------------------------------------------------------------------
// Criteria 3, 4, 8: random stable loops

struct Loop {
    DdeSystem system;
    InitialCondition init = InitialCondition::steady(1.0);
    ForcingTerm forcing;
    PiecewiseSolution solution;
    std::string label;
};

constexpr int loop_horizon = 10;

Loop random_stable_loop(Draw& draw, int index) {
    for (;;) {
        Loop lp;
        PlantModel plant;
        const double e0 = draw.real_in(0.5, 2.0);
        double top = 1.0;
        if (draw.int_in(1, 2) == 1) {
            const double r = draw.real_in(-5.0, -0.1);
            plant = {{e0}, {1.0, -1.0 / r}};
            top = -1.0 / r;
        } else {
            const double r1 = draw.real_in(-5.0, -0.1);
            const double r2 = draw.real_in(-5.0, -0.1);
            if (std::abs(r1 - r2) < 0.05) continue;
            // monic denominator, unit static gain times e0
            plant = {{e0 * r1 * r2}, {r1 * r2, -(r1 + r2), 1.0}};
            top = 0.0;
        }
        const double dc = plant.numerator[0] / plant.denominator[0];
        PidParams pid{draw.real_in(0.0, 0.5) / dc, draw.real_in(0.05, 0.5) / dc, 0.0};
        if (top > 0.0) pid.k_d = draw.real_in(0.0, 0.5) * top / e0;
        lp.system = build_closed_loop(pid, plant);
        const double second = 0.05 * draw.int_in(1, 20 * loop_horizon - 1);
        lp.forcing = ForcingTerm::setpoint_steps(1.0, {{0.0, 0.0}, {second, draw.real_in(-1.0, 1.0)}});
        lp.solution = solve(lp.system, lp.init, lp.forcing, loop_horizon);
        double peak = 0.0;
        for (int s = 0; s <= 200 * loop_horizon; ++s) peak = std::max(peak, std::abs(lp.solution.value(s / 200.0)));
        if (!(peak < 5.0)) continue;  // not a stable loop
        lp.label = "loop " + std::to_string(index) + " (m_a=" + std::to_string(lp.system.order_a()) + ")";
        return lp;
    }
}

struct LoopOutcomes {
    Outcome oracle;
    Outcome continuity;
    Outcome residual;
    double seconds = 0.0;
};

LoopOutcomes run_loops() {
    const auto start = Clock::now();
    Draw draw(3003);
    LoopOutcomes out;
    for (int l = 0; l < 50; ++l) {
        const Loop lp = random_stable_loop(draw, l);
        const auto& sol = lp.solution;
        const int m = lp.system.order_a();

        // criterion 3
        const auto traj = oracle::integrate(lp.system, lp.init, lp.forcing, loop_horizon, 1e-3);
        double worst = 0.0;
        for (std::size_t s = 0; s < traj.size(); ++s) {
            worst = std::max(worst, std::abs(sol.value(traj.times[s]) - traj.value(s)));
        }
        out.oracle.observe(worst, 1e-6, lp.label);

        // criterion 4
        const int q = sol.subintervals();
        double jump = 0.0;
        for (int n = 1; n <= loop_horizon; ++n) {
            for (int k = 1; k <= q; ++k) {
                const real lo = sol.knots()[static_cast<std::size_t>(k - 1)];
                const ExpPoly& left = k == 1 ? sol.segment(n - 1, q) : sol.segment(n, k - 1);
                const real left_t = k == 1 ? real(1) : lo;
                for (int h = 0; h < m; ++h) {
                    const real a = derivative_at(sol.segment(n, k), h, lo).first;
                    const real b = derivative_at(left, h, left_t).first;
                    jump = std::max(jump, to_double(abs(a - b)));
                }
            }
        }
        out.continuity.observe(jump, 1e-9, lp.label);

        // criterion 8: a y^(h)(t) = -b y^(h)(t-1) + c f^(h)(t-1) at 20 points per interval
        double resid = 0.0;
        for (int n = 1; n <= loop_horizon; ++n) {
            for (int s = 0; s < 20; ++s) {
                const double t = draw.real_in(0.0, 1.0);
                const auto [nn, k] = sol.locate(n - 1 + t);
                if (nn != n) continue;
                const real tt = t;
                real lhs = 0, rhs = 0, scale = 0;
                for (int h = 1; h <= m; ++h) {
                    const auto [v, mag] = derivative_at(sol.segment(n, k), h, tt);
                    lhs += lp.system.a[static_cast<std::size_t>(h)] * v;
                    scale += abs(lp.system.a[static_cast<std::size_t>(h)]) * mag;
                }
                for (int h = 0; h <= lp.system.order_b(); ++h) {
                    const auto [v, mag] = derivative_at(sol.segment(n - 1, k), h, tt);
                    rhs -= lp.system.b[static_cast<std::size_t>(h)] * v;
                    scale += abs(lp.system.b[static_cast<std::size_t>(h)]) * mag;
                }
                // the setpoint is piecewise constant: only c_0 f(t - 1) contributes
                const double f = lp.forcing.value(n - 2 + t);
                rhs += lp.system.c[0] * f;
                scale += std::abs(lp.system.c[0] * f);
                if (scale > 0) resid = std::max(resid, to_double(abs(lhs - rhs) / scale));
            }
        }
        out.residual.observe(resid, 1e-8, lp.label);
    }
    out.seconds = seconds_since(start);
    return out;
}

// ---------------------------------------------------------------------------
// Criterion 5: series identities

bool criterion5() {
    const auto start = Clock::now();
    Outcome o;
    auto sorted = [](std::vector<IndexTriple> t) {
        std::sort(t.begin(), t.end(), [](const IndexTriple& a, const IndexTriple& b) {
            return std::tie(a.h, a.i, a.j) < std::tie(b.h, b.i, b.j);
        });
        return t;
    };
    for (int m = 1; m <= 8; ++m) {
        std::vector<IndexTriple> s1;
        for (int h = 1; h <= m; ++h)
            for (int i = 0; i <= h - 1; ++i)
                for (int j = 0; j <= i; ++j) s1.push_back({h, i, j});
        const auto shifted1 = enumerate_shifted(SeriesKind::s1, m);
        if (sorted(shifted1) != sorted(s1)) o.fail("S1 m=" + std::to_string(m));
        if (sorted(enumerate_original(SeriesKind::s1, m)) != sorted(s1)) o.fail("S1 original m=" + std::to_string(m));
        // For every h the (i, j) grid is lower triangular with h rows
        for (int h = 1; h <= m; ++h) {
            const auto grid = terms_grid(shifted1, h);
            bool ok = grid.rows() == h && grid.cols() == h;
            for (int i = 0; ok && i < h; ++i)
                for (int j = 0; j < h; ++j) ok = ok && grid.at(i, j) == (j <= i);
            if (!ok) o.fail("Terms Grid m=" + std::to_string(m) + " h=" + std::to_string(h));
        }
        for (int z = 1; z <= 8; ++z) {
            std::vector<IndexTriple> s2;
            for (int h = 1; h <= m; ++h)
                for (int i = h; i <= z; ++i)
                    for (int j = i - h; j <= i; ++j) s2.push_back({h, i, j});
            const auto tag = " m=" + std::to_string(m) + " z=" + std::to_string(z);
            if (sorted(enumerate_shifted(SeriesKind::s2, m, z)) != sorted(s2)) o.fail("S2" + tag);
            if (sorted(enumerate_original(SeriesKind::s2, m, z)) != sorted(s2)) o.fail("S2 original" + tag);
        }
    }
    return report(5, "original and shifted S1/S2 enumerations agree for m, z <= 8; terms grid", o, 0.0,
                  seconds_since(start), 5.0);
}

// ---------------------------------------------------------------------------
// Criterion 6: Cramer vs elimination

bool criterion6() {
    const auto start = Clock::now();
    Draw draw(6006);
    Outcome o;
    for (int c = 0; c < 1000; ++c) {
        const int m = draw.int_in(1, 6);
        VandermondeSystem sys;
        while (static_cast<int>(sys.nodes.size()) < m) {
            const double r = draw.real_in(-4.0, 4.0);
            bool apart = true;
            for (double s : sys.nodes) apart = apart && std::abs(r - s) >= 0.2;
            if (apart) sys.nodes.push_back(r);
        }
        for (int j = 0; j < m; ++j) {
            sys.scales.push_back(draw.real_in(0.2, 3.0) * (draw.int_in(0, 1) ? 1.0 : -1.0));
            sys.rhs.push_back(draw.real_in(-2.0, 2.0));
        }
        const auto a = solve_cramer(sys);
        const auto b = solve_elimination(sys);
        double scale = 1e-300;
        double diff = 0.0;
        for (std::size_t j = 0; j < b.size(); ++j) {
            scale = std::max(scale, std::abs(b[j]));
            diff = std::max(diff, std::abs(a[j] - b[j]));
        }
        o.observe(diff / scale, 1e-10, "system " + std::to_string(c) + " m=" + std::to_string(m));
    }
    for (int m = 1; m <= 8; ++m) {
        for (int i = 1; i <= m; ++i) {
            double n = 1.0;  // (m-1)! / ((i-1)! (m-i)!) as a product
            for (int s = 1; s <= i - 1; ++s) n = n * (m - i + s) / s;
            if (static_cast<double>(laplace_subset_count(m, i)) != n) {
                o.fail("minor count m=" + std::to_string(m) + " i=" + std::to_string(i));
            }
        }
    }
    return report(6, "Cramer/Laplace equals elimination on 1000 systems; minor counts for m, i <= 8", o, 1e-10,
                  seconds_since(start), 30.0);
}

// ---------------------------------------------------------------------------
// Criterion 7: derivative formula

/// Central differences of order h with two Richardson levels, evaluated in
/// quad precision so that rounding stays far below the truncation error.
real central_difference(const std::function<real(const real&)>& f, int h, const real& t, const real& d) {
    auto stencil = [&](const real& step) {
        real sum = 0;
        real w = 1;
        for (int k = 0; k <= h; ++k) {
            sum += w * f(t + (real(h) / 2 - k) * step);
            w = -w * (h - k) / (k + 1);
        }
        return real(sum / pow(step, h));
    };
    const real d1 = stencil(d), d2 = stencil(d / 2), d4 = stencil(d / 4);
    const real e1 = (4 * d2 - d1) / 3, e2 = (4 * d4 - d2) / 3;
    return (16 * e2 - e1) / 15;
}

bool criterion7() {
    const auto start = Clock::now();
    Draw draw(7007);
    Outcome fd, repeated;
    for (int c = 0; c < 500; ++c) {
        const double r = draw.real_in(-3.0, 3.0);
        const int i = draw.int_in(0, 6);
        const int h = draw.int_in(1, 4);
        const double t = draw.real_in(-2.0, 2.0);
        std::vector<real> unit(static_cast<std::size_t>(i) + 1, real(0));
        unit.back() = 1;
        const auto f = ExpPoly::term(r, unit);
        const auto formula = derivative(f, h);
        const std::string label = "r=" + std::to_string(r) + " i=" + std::to_string(i) + " h=" + std::to_string(h);

        const double value = formula(t);
        const double numeric = to_double(central_difference(
            [&](const real& x) { return real(exp(r * x) * pow(x, i)); }, h, real(t), real(0.01)));
        const double magnitude = to_double(derivative_at(f, h, t).second);
        fd.observe(std::abs(value - numeric) / std::max(std::abs(numeric), magnitude), 1e-5, label);

        // h applications of d/dt (e^{rt} sum g_k t^k) = e^{rt} sum (r g_k + (k+1) g_{k+1}) t^k
        std::vector<double> g(static_cast<std::size_t>(i) + 1, 0.0);
        g.back() = 1.0;
        for (int s = 0; s < h; ++s) {
            std::vector<double> next(g.size(), 0.0);
            for (std::size_t k = 0; k < g.size(); ++k) {
                next[k] = r * g[k] + (k + 1 < g.size() ? (k + 1) * g[k + 1] : 0.0);
            }
            g = next;
        }
        const auto got = to_double(coefficients(formula, real(r)));
        double scale = 1e-300, diff = 0.0;
        for (std::size_t k = 0; k < g.size(); ++k) {
            scale = std::max(scale, std::abs(g[k]));
            diff = std::max(diff, std::abs((k < got.size() ? got[k] : 0.0) - g[k]));
        }
        repeated.observe(diff / scale, 1e-12, label);
    }
    Outcome both = fd;
    if (!repeated.passed) both.fail("repeated differentiation: " + repeated.note);
    std::printf("     finite differences worst %.3e (tol 1e-5); repeated differentiation worst %.3e (tol 1e-12)\n",
                fd.worst, repeated.worst);
    return report(7, "derivative formula vs finite differences and repeated d/dt (500 draws)", both, 1e-5,
                  seconds_since(start), 5.0);
}

}  // namespace

int main() {
    bool ok = true;
    try {
        ok = criterion1() && ok;
        ok = criterion2() && ok;
        const auto loops = run_loops();
        ok = report(3, "analytic vs RK4 (dt=1e-3) on 50 random stable loops over [0, 10]", loops.oracle, 1e-6,
                    loops.seconds, 60.0) && ok;
        ok = report(4, "continuity of y and derivatives up to m_a-1 at every junction of criterion 3",
                    loops.continuity, 1e-9, loops.seconds, 60.0) && ok;
        ok = criterion5() && ok;
        ok = criterion6() && ok;
        ok = criterion7() && ok;
        ok = report(8, "relative equation residual at 20 random points per interval of criterion 3",
                    loops.residual, 1e-8, loops.seconds, 60.0) && ok;
    } catch (const std::exception& e) {
        std::printf("FAIL acceptance aborted: %s\n", e.what());
        return 1;
    }
    std::printf("%s\n", ok ? "all acceptance criteria passed" : "acceptance FAILED");
    return ok ? 0 : 1;
}
