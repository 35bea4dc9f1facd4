#include "delaystep/verification.hpp"

#include "delaystep/closed_loop.hpp"
#include "delaystep/errors.hpp"
#include "delaystep/exp_poly.hpp"
#include "delaystep/oracle.hpp"
#include "delaystep/series_identities.hpp"
#include "delaystep/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

namespace delaystep {

namespace {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int uniform_int(Rng& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

void record(CheckResult& check, double error, const std::string& what) {
    ++check.cases;
    if (std::isnan(error) || error > check.worst) check.worst = error;
    if (!(error <= check.tolerance) && check.detail.empty()) {
        check.detail = what;
    }
}

CheckResult make_check(std::string name, double tolerance) {
    CheckResult check;
    check.name = std::move(name);
    check.tolerance = tolerance;
    return check;
}

void finish(CheckResult& check) {
    check.passed = check.detail.empty() && check.cases > 0;
}

CheckResult check_series_identities(int limit) {
    auto check = make_check("series identities (m, z <= " + std::to_string(limit) + ")", 0.0);
    for (auto kind : {SeriesKind::s1, SeriesKind::s2}) {
        for (int m = 1; m <= limit; ++m) {
            for (int z = 1; z <= limit; ++z) {
                const auto original = enumerate_original(kind, m, z);
                const auto shifted = enumerate_shifted(kind, m, z);
                const bool ok = same_multiset(original, shifted);
                record(check, ok ? 0.0 : 1.0,
                       std::string(kind == SeriesKind::s1 ? "S1" : "S2") + " m=" + std::to_string(m) +
                           " z=" + std::to_string(z));
            }
        }
    }
    finish(check);
    return check;
}

VandermondeSystem random_vandermonde(Rng& rng, int m) {
    VandermondeSystem sys;
    while (static_cast<int>(sys.nodes.size()) < m) {
        const double r = uniform(rng, -3.0, 3.0);
        const bool separated = std::all_of(sys.nodes.begin(), sys.nodes.end(),
                                           [r](double s) { return std::abs(r - s) >= 0.2; });
        if (separated) sys.nodes.push_back(r);
    }
    for (int j = 0; j < m; ++j) {
        const double d = uniform(rng, 0.5, 2.0);
        sys.scales.push_back(uniform_int(rng, 0, 1) == 0 ? d : -d);
        sys.rhs.push_back(uniform(rng, -1.0, 1.0));
    }
    return sys;
}

CheckResult check_cramer(Rng& rng, int count, const VandermondeSolver& cramer) {
    auto check = make_check("Cramer vs elimination (" + std::to_string(count) + " systems)", 1e-10);
    for (int c = 0; c < count; ++c) {
        const int m = uniform_int(rng, 1, 6);
        const auto sys = random_vandermonde(rng, m);
        const auto xc = cramer(sys);
        const auto xe = solve_elimination(sys);
        double diff = 0.0;
        double size = 0.0;
        for (std::size_t j = 0; j < xe.size(); ++j) {
            diff = std::max(diff, std::abs(xc[j] - xe[j]));
            size = std::max(size, std::abs(xe[j]));
        }
        record(check, diff / std::max(size, 1e-300), "system " + std::to_string(c) + " of order " + std::to_string(m));
    }
    for (int m = 1; m <= max_cramer_order; ++m) {
        for (int i = 1; i <= m; ++i) {
            const double expected = factorial(m - 1) / (factorial(i - 1) * factorial(m - i));
            const auto got = static_cast<double>(laplace_subset_count(m, i));
            record(check, got == expected ? 0.0 : 1.0,
                   "minor count m=" + std::to_string(m) + " i=" + std::to_string(i));
        }
    }
    finish(check);
    return check;
}

/// h-th derivative of e^{rt} t^i by the Leibniz rule, with the sum of |terms|.
std::pair<double, double> leibniz(double r, int i, int h, double t) {
    double value = 0.0;
    double size = 0.0;
    for (int l = 0; l <= std::min(h, i); ++l) {
        const double falling = factorial(i) / factorial(i - l);
        const double v = binomial(h, l) * ipow(r, h - l) * falling * ipow(t, i - l);
        value += v;
        size += std::abs(v);
    }
    const double e = std::exp(r * t);
    return {value * e, size * e};
}

void check_derivatives(Rng& rng, int count, std::vector<CheckResult>& out) {
    auto check = make_check("derivatives vs finite differences (" + std::to_string(count) + " cases)", 1e-5);
    auto repeated = make_check("derivatives vs repeated differentiation (" + std::to_string(count) + " cases)", 1e-12);
    for (int c = 0; c < count; ++c) {
        const double r = uniform(rng, -3.0, 3.0);
        const int i = uniform_int(rng, 0, 6);
        const int h = uniform_int(rng, 1, 4);
        const double t = uniform(rng, -1.0, 1.0);
        std::vector<real> g(static_cast<std::size_t>(i) + 1, real(0));
        g.back() = 1;
        const ExpPoly f = ExpPoly::term(r, g);
        const double got = evaluate_derivative(f, h, t);

        const double step = 1e-5;
        const double fd = (leibniz(r, i, h - 1, t + step).first - leibniz(r, i, h - 1, t - step).first) /
                          (2.0 * step);
        const double size = std::max(leibniz(r, i, h, t).second, 1e-3);
        const std::string what = "r=" + std::to_string(r) + " i=" + std::to_string(i) +
                                 " h=" + std::to_string(h) + " t=" + std::to_string(t);
        record(check, std::abs(got - fd) / size, what);

        ExpPoly chain = f;
        for (int k = 0; k < h; ++k) chain = derivative(chain, 1);
        record(repeated, std::abs(got - chain(t)) / size, what);
    }
    finish(check);
    finish(repeated);
    out.push_back(check);
    out.push_back(repeated);
}

struct LoopCase {
    DdeSystem system;
    InitialCondition init;
    ForcingTerm forcing;
    PiecewiseSolution solution;
    std::string label;
};

/// Stable first- or second-order loop under a 1 -> 0 setpoint change at t = 0
/// and a second step at a multiple of 1/8, redrawn until |y| stays below 5.
LoopCase random_loop(Rng& rng, int horizon, int index) {
    for (;;) {
        const int order = uniform_int(rng, 1, 2);
        PlantModel plant;
        plant.numerator = {uniform(rng, 0.5, 1.5)};
        double top = 0.0;
        if (order == 1) {
            const double tp = uniform(rng, 0.2, 10.0);
            plant.denominator = {1.0, tp};
            top = tp;
        } else {
            const double r1 = uniform(rng, -5.0, -0.1);
            const double r2 = uniform(rng, -5.0, -0.1);
            if (std::abs(r1 - r2) < 0.2) continue;
            plant.denominator = {1.0, -(1.0 / r1 + 1.0 / r2), 1.0 / (r1 * r2)};
            top = plant.denominator[2];
        }
        PidParams pid{uniform(rng, 0.0, 0.6), uniform(rng, 0.05, 0.6), 0.0};
        if (order == 1) pid.k_d = uniform(rng, 0.0, 0.5) * top / plant.numerator[0];

        LoopCase lc;
        lc.system = build_closed_loop(pid, plant);
        lc.init = InitialCondition::steady(1.0);
        const double second = uniform_int(rng, 1, 8 * horizon - 1) / 8.0;
        lc.forcing = ForcingTerm::setpoint_steps(1.0, {{0.0, 0.0}, {second, uniform(rng, -1.0, 1.0)}});
        lc.solution = solve(lc.system, lc.init, lc.forcing, horizon);
        double peak = 0.0;
        for (int s = 0; s <= 100 * horizon; ++s) {
            peak = std::max(peak, std::abs(lc.solution.value(s / 100.0)));
        }
        if (!(peak <= 5.0)) continue;
        std::ostringstream label;
        label << "loop " << index << " (order " << order << ", k=" << pid.k << ", k_i=" << pid.k_i
              << ", k_d=" << pid.k_d << ")";
        lc.label = label.str();
        return lc;
    }
}

void check_oracle(const LoopCase& lc, int horizon, CheckResult& check) {
    const auto traj = oracle::integrate(lc.system, lc.init, lc.forcing, horizon, oracle::default_step);
    double worst = 0.0;
    for (std::size_t s = 0; s < traj.size(); ++s) {
        worst = std::max(worst, std::abs(lc.solution.value(traj.times[s]) - traj.value(s)));
    }
    record(check, worst, lc.label);
}

void check_continuity(const LoopCase& lc, CheckResult& check) {
    const auto& sol = lc.solution;
    const int m = lc.system.order_a();
    const int q = sol.subintervals();
    double worst = 0.0;
    for (int n = 1; n <= sol.intervals(); ++n) {
        for (int k = 1; k <= q; ++k) {
            const double lo = sol.knots()[static_cast<std::size_t>(k - 1)];
            const auto right = to_double(boundary_values(sol.segment(n, k), lo, m));
            const auto left = to_double(k == 1 ? boundary_values(sol.segment(n - 1, q), 1.0, m)
                                               : boundary_values(sol.segment(n, k - 1), lo, m));
            for (int h = 0; h < m; ++h) {
                const auto hh = static_cast<std::size_t>(h);
                worst = std::max(worst, std::abs(right[hh] - left[hh]) / std::max(1.0, std::abs(left[hh])));
            }
        }
    }
    record(check, worst, lc.label);
}

void check_residual(Rng& rng, const LoopCase& lc, CheckResult& check) {
    const auto& sol = lc.solution;
    double worst = 0.0;
    for (int n = 1; n <= sol.intervals(); ++n) {
        for (int k = 1; k <= sol.subintervals(); ++k) {
            const double lo = sol.knots()[static_cast<std::size_t>(k - 1)];
            const double hi = sol.knots()[static_cast<std::size_t>(k)];
            for (int s = 0; s < 3; ++s) {
                const double t = uniform(rng, lo, hi);
                worst = std::max(worst, equation_residual(lc.system, sol, lc.forcing, n, k, t));
            }
        }
    }
    record(check, worst, lc.label);
}

}  // namespace

bool VerifyReport::passed() const noexcept {
    return !checks.empty() &&
           std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::string VerifyReport::render() const {
    std::ostringstream out;
    out << "verify level=" << (level == VerifyLevel::quick ? "quick" : "full") << " seed=" << seed << "\n";
    for (const auto& c : checks) {
        char line[64];
        std::snprintf(line, sizeof line, "worst=%.3e tol=%.1e", c.worst, c.tolerance);
        out << (c.passed ? "PASS " : "FAIL ") << c.name << ": cases=" << c.cases << " " << line;
        if (!c.detail.empty()) out << " first failure: " << c.detail;
        out << "\n";
    }
    out << (passed() ? "all checks passed" : "verification FAILED") << "\n";
    return out.str();
}

VerifyReport run_verification(const VerifyOptions& options) {
    const bool full = options.level == VerifyLevel::full;
    VerifyReport report;
    report.level = options.level;
    report.seed = options.seed;
    Rng rng(options.seed);

    report.checks.push_back(check_series_identities(8));
    const VandermondeSolver cramer = options.cramer ? options.cramer : VandermondeSolver(solve_cramer);
    report.checks.push_back(check_cramer(rng, full ? 1000 : 100, cramer));
    check_derivatives(rng, full ? 500 : 100, report.checks);

    const int horizon = 10;
    const int loops = full ? 50 : 4;
    auto oracle_check = make_check("analytic vs RK4 (" + std::to_string(loops) + " loops, dt=1e-3)", 1e-6);
    auto continuity = make_check("junction continuity (" + std::to_string(loops) + " loops)", continuity_tol);
    auto residual = make_check("equation residual (" + std::to_string(loops) + " loops)", 1e-8);
    for (int l = 0; l < loops; ++l) {
        try {
            const auto lc = random_loop(rng, horizon, l);
            check_oracle(lc, horizon, oracle_check);
            check_continuity(lc, continuity);
            check_residual(rng, lc, residual);
        } catch (const Error& e) {
            const std::string what = "loop " + std::to_string(l) + ": " + e.what();
            record(oracle_check, INFINITY, what);
            record(continuity, INFINITY, what);
            record(residual, INFINITY, what);
        }
    }
    finish(oracle_check);
    finish(continuity);
    finish(residual);
    report.checks.push_back(oracle_check);
    report.checks.push_back(continuity);
    report.checks.push_back(residual);
    return report;
}

}  // namespace delaystep
