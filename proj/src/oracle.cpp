#include "delaystep/oracle.hpp"

#include "delaystep/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace delaystep::oracle {

namespace {

/// All derivatives 0..order of f as separate exponential polynomials.
std::vector<ExpPoly> derivative_ladder(const ExpPoly& f, int order) {
    std::vector<ExpPoly> out{f};
    for (int h = 1; h <= order; ++h) {
        out.push_back(derivative(out.back(), 1));
    }
    return out;
}

}  // namespace

OracleTrajectory integrate(const DdeSystem& system, const InitialCondition& init,
                           const ForcingTerm& forcing, int intervals, double step) {
    if (!(step > 0.0) || !std::isfinite(step)) {
        throw InvalidInput("oracle step must be positive");
    }
    if (intervals < 1) {
        throw InvalidInput("number of intervals must be at least 1");
    }
    init.validate();
    const int m = system.order_a();
    const int mb = system.order_b();
    const int mc = system.order_c();
    const auto knots = merge_knots(init.knots, forcing.knots());
    const int q = static_cast<int>(knots.size()) - 1;

    std::vector<int> steps_in(static_cast<std::size_t>(q));
    int steps_per_interval = 0;
    for (int k = 0; k < q; ++k) {
        const double gap = knots[static_cast<std::size_t>(k) + 1] - knots[static_cast<std::size_t>(k)];
        const long count = std::lround(gap / step);
        if (count < 1 || std::abs(static_cast<double>(count) * step - gap) > 1e-9) {
            throw InvalidInput("oracle step " + std::to_string(step) +
                               " does not divide the knot gap " + std::to_string(gap));
        }
        steps_in[static_cast<std::size_t>(k)] = static_cast<int>(count);
        steps_per_interval += static_cast<int>(count);
    }

    // history y_{0,k} in local time, with derivatives up to m_b
    std::vector<std::vector<ExpPoly>> history;
    for (int k = 0; k < q; ++k) {
        const double mid = -1.0 + 0.5 * (knots[static_cast<std::size_t>(k)] + knots[static_cast<std::size_t>(k) + 1]);
        history.push_back(derivative_ladder(shift_origin(init.at(mid), -1.0), std::max(mb, m - 1)));
    }

    const auto width = static_cast<std::size_t>(m + 1);  // state y..y^{(m-1)} plus top derivative
    const auto slot = [width](int step_index, int l) {
        return (static_cast<std::size_t>(step_index) * 4 + static_cast<std::size_t>(l)) * width;
    };
    std::vector<double> previous_stages;
    std::vector<double> current_stages(static_cast<std::size_t>(steps_per_interval) * 4 * width);

    OracleTrajectory traj;
    traj.step = step;
    traj.times.reserve(static_cast<std::size_t>(intervals * steps_per_interval) + 1);

    std::vector<double> state(static_cast<std::size_t>(m));
    for (int h = 0; h < m; ++h) {
        state[static_cast<std::size_t>(h)] = history.back()[static_cast<std::size_t>(h)](1.0);
    }
    traj.times.push_back(0.0);
    traj.states.push_back(state);

    std::vector<double> delayed(static_cast<std::size_t>(mb) + 1);
    std::vector<double> stage(static_cast<std::size_t>(m));
    std::array<std::vector<double>, 4> slopes;
    for (auto& s : slopes) s.resize(static_cast<std::size_t>(m));

    for (int n = 1; n <= intervals; ++n) {
        int step_index = 0;
        for (int k = 0; k < q; ++k) {
            const double lo = knots[static_cast<std::size_t>(k)];
            const auto forcing_ladder = derivative_ladder(
                forcing.segment(n - 1, lo, knots[static_cast<std::size_t>(k) + 1]), mc);
            const auto& hist = history[static_cast<std::size_t>(k)];
            const int count = steps_in[static_cast<std::size_t>(k)];

            for (int s = 0; s < count; ++s, ++step_index) {
                const double s0 = lo + s * step;
                const double stage_time[4] = {s0, s0 + 0.5 * step, s0 + 0.5 * step, s0 + step};
                for (int l = 0; l < 4; ++l) {
                    double* record = &current_stages[slot(step_index, l)];
                    // stage input
                    for (int h = 0; h < m; ++h) {
                        double v = state[static_cast<std::size_t>(h)];
                        if (l == 1 || l == 2) v += 0.5 * step * slopes[static_cast<std::size_t>(l) - 1][static_cast<std::size_t>(h)];
                        if (l == 3) v += step * slopes[2][static_cast<std::size_t>(h)];
                        stage[static_cast<std::size_t>(h)] = v;
                    }
                    // delayed y and its derivatives at this stage
                    const double t = stage_time[l];
                    if (n == 1) {
                        for (int h = 0; h <= mb; ++h) {
                            delayed[static_cast<std::size_t>(h)] = hist[static_cast<std::size_t>(h)](t);
                        }
                    } else {
                        const double* prev = &previous_stages[slot(step_index, l)];
                        for (int h = 0; h <= mb; ++h) {
                            delayed[static_cast<std::size_t>(h)] = prev[h];
                        }
                    }
                    double rhs = 0.0;
                    for (int h = 0; h <= mb; ++h) {
                        rhs -= system.b[static_cast<std::size_t>(h)] * delayed[static_cast<std::size_t>(h)];
                    }
                    for (int h = 0; h <= mc; ++h) {
                        rhs += system.c[static_cast<std::size_t>(h)] * forcing_ladder[static_cast<std::size_t>(h)](t);
                    }
                    for (int h = 1; h < m; ++h) {
                        rhs -= system.a[static_cast<std::size_t>(h)] * stage[static_cast<std::size_t>(h)];
                    }
                    const double top = rhs / system.a[static_cast<std::size_t>(m)];
                    auto& slope = slopes[static_cast<std::size_t>(l)];
                    for (int h = 0; h + 1 < m; ++h) {
                        slope[static_cast<std::size_t>(h)] = stage[static_cast<std::size_t>(h) + 1];
                    }
                    slope[static_cast<std::size_t>(m) - 1] = top;
                    for (int h = 0; h < m; ++h) record[h] = stage[static_cast<std::size_t>(h)];
                    record[m] = top;
                }
                for (int h = 0; h < m; ++h) {
                    const auto hh = static_cast<std::size_t>(h);
                    state[hh] += step / 6.0 *
                                 (slopes[0][hh] + 2.0 * slopes[1][hh] + 2.0 * slopes[2][hh] + slopes[3][hh]);
                }
                const double local = (s + 1 == count) ? knots[static_cast<std::size_t>(k) + 1] : s0 + step;
                traj.times.push_back(static_cast<double>(n - 1) + local);
                traj.states.push_back(state);
            }
        }
        std::swap(previous_stages, current_stages);
        current_stages.assign(static_cast<std::size_t>(steps_per_interval) * 4 * width, 0.0);
    }
    return traj;
}

}  // namespace delaystep::oracle
