#include "delaystep/metrics.hpp"

#include "delaystep/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace delaystep {

namespace {

constexpr double bisection_tol = 1e-10;

int sign_of(double v) noexcept { return (v > 0.0) - (v < 0.0); }

double bisect(const ExpPoly& f, double lo, double hi) {
    const int s_lo = sign_of(f(lo));
    while (hi - lo > bisection_tol) {
        const double mid = 0.5 * (lo + hi);
        if (sign_of(f(mid)) == s_lo) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

struct Crossing {
    double t;
    int sign_before;
};

/// Points in (lo, hi) where f changes sign, bracketed on a uniform grid.
std::vector<Crossing> crossings(const ExpPoly& f, double lo, double hi, int samples) {
    std::vector<Crossing> roots;
    double last_t = lo;
    int last_sign = sign_of(f(lo));
    for (int s = 1; s <= samples; ++s) {
        const double t = (s == samples) ? hi : lo + (hi - lo) * s / samples;
        const int sg = sign_of(f(t));
        if (sg == 0) continue;
        if (last_sign != 0 && sg != last_sign) {
            roots.push_back({bisect(f, last_t, t), last_sign});
        }
        last_sign = sg;
        last_t = t;
    }
    return roots;
}

std::vector<double> sign_changes(const ExpPoly& f, double lo, double hi, int samples) {
    std::vector<double> out;
    for (const auto& c : crossings(f, lo, hi, samples)) out.push_back(c.t);
    return out;
}

struct Candidate {
    double t;       // global time
    double error;   // y - setpoint
    int piece;
};

struct Piece {
    double origin;  // global time of local 0
    double lo;      // local bounds
    double hi;
    ExpPoly error;
};

}  // namespace

ResponseMetrics compute_metrics(const PiecewiseSolution& sol, double setpoint, double horizon,
                                const MetricsOptions& options) {
    if (!(horizon > 0.0) || horizon > sol.end_time() + 1e-12) {
        throw InvalidInput("metrics horizon must lie in (0, " + std::to_string(sol.end_time()) + "]");
    }
    if (!(options.band > 0.0 && options.band < 0.5)) {
        throw InvalidInput("settling band must lie in (0, 0.5)");
    }
    if (options.samples_per_segment < 2) {
        throw InvalidInput("samples_per_segment must be at least 2");
    }

    const ExpPoly offset = ExpPoly::constant(-setpoint);
    std::vector<Piece> pieces;
    const auto& knots = sol.knots();
    for (int n = 1; n <= sol.intervals(); ++n) {
        const double origin = n - 1;
        for (int k = 1; k <= sol.subintervals(); ++k) {
            const double lo = knots[static_cast<std::size_t>(k - 1)];
            const double hi = std::min(knots[static_cast<std::size_t>(k)], horizon - origin);
            if (hi <= lo) continue;
            pieces.push_back(Piece{origin, lo, hi, sol.segment(n, k) + offset});
        }
    }

    ResponseMetrics out;
    out.band = options.band;
    const double initial_error = pieces.front().error(pieces.front().lo);
    out.step_magnitude = std::abs(initial_error);
    const double direction = -static_cast<double>(sign_of(initial_error));  // sign of setpoint - y(0)
    const double tolerance = out.step_magnitude > 0.0 ? options.band * out.step_magnitude : options.band;

    std::vector<Candidate> candidates;
    std::vector<double> peak_errors;
    for (int p = 0; p < static_cast<int>(pieces.size()); ++p) {
        const auto& pc = pieces[static_cast<std::size_t>(p)];
        const ExpPoly slope = derivative(pc.error, 1);
        const auto zeros = sign_changes(pc.error, pc.lo, pc.hi, options.samples_per_segment);
        const auto turning = crossings(slope, pc.lo, pc.hi, options.samples_per_segment);
        std::vector<double> critical;
        for (const auto& c : turning) critical.push_back(c.t);

        std::vector<double> local{pc.lo, pc.hi};
        local.insert(local.end(), zeros.begin(), zeros.end());
        local.insert(local.end(), critical.begin(), critical.end());
        std::sort(local.begin(), local.end());
        for (double s : local) {
            candidates.push_back(Candidate{pc.origin + s, pc.error(s), p});
        }

        std::vector<double> cuts{pc.lo};
        cuts.insert(cuts.end(), zeros.begin(), zeros.end());
        cuts.push_back(pc.hi);
        for (std::size_t c = 1; c < cuts.size(); ++c) {
            out.iae += std::abs(definite_integral(pc.error, cuts[c - 1], cuts[c]));
        }

        for (const auto& turn : turning) {
            const double e = pc.error(turn.t);
            const bool is_max_of_e = turn.sign_before > 0;
            if ((is_max_of_e && e > 0.0) || (!is_max_of_e && e < 0.0)) {
                if (std::abs(e) > 1e-12 * std::max(1.0, out.step_magnitude)) {
                    peak_errors.push_back(std::abs(e));
                }
            }
        }
    }

    double worst = 0.0;
    for (const auto& c : candidates) {
        if (out.step_magnitude > 0.0) {
            worst = std::max(worst, c.error * direction);
        } else {
            worst = std::max(worst, std::abs(c.error));
        }
    }
    out.overshoot = out.step_magnitude > 0.0 ? worst / out.step_magnitude : worst;

    // |e| is monotone between consecutive candidates, so band crossings can
    // only occur between a candidate outside and the next one inside.
    int last_out = -1;
    for (int c = 0; c < static_cast<int>(candidates.size()); ++c) {
        if (std::abs(candidates[static_cast<std::size_t>(c)].error) > tolerance) last_out = c;
    }
    if (last_out < 0) {
        out.settling_time = 0.0;
    } else if (last_out + 1 < static_cast<int>(candidates.size())) {
        const auto& a = candidates[static_cast<std::size_t>(last_out)];
        const auto& b = candidates[static_cast<std::size_t>(last_out) + 1];
        if (b.t <= a.t) {
            out.settling_time = a.t;
        } else {
            const auto& pc = pieces[static_cast<std::size_t>(b.piece)];
            const ExpPoly excess =
                add(scale(pc.error, a.error > 0.0 ? 1.0 : -1.0), ExpPoly::constant(-tolerance));
            out.settling_time = pc.origin + bisect(excess, a.t - pc.origin, b.t - pc.origin);
        }
    }

    if (out.settling_time) {
        const auto first_in = std::find_if(candidates.begin(), candidates.end(), [&](const Candidate& c) {
            return std::abs(c.error) <= tolerance;
        });
        out.deadbeat = std::all_of(first_in, candidates.end(), [&](const Candidate& c) {
            return std::abs(c.error) <= tolerance;
        });
    }

    if (peak_errors.size() >= 2) {
        out.decay_ratio = peak_errors[1] / peak_errors[0];
    }
    return out;
}

}  // namespace delaystep
