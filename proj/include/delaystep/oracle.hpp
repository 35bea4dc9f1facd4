#pragma once

// Fixed-step RK4 reference solution of the closed-loop delay equation.
//
// Used only to cross-check the analytic stepper. The history and the setpoint
// are evaluated exactly; every solved interval is integrated numerically. To
// obtain the delayed terms at RK4 stage times without interpolation, intervals
// 1..j are integrated jointly in local time as one coupled ODE system, with
// interval i driven by the state of interval i-1. The neutral term
// y^{(m_a)}(t-1) is recovered algebraically from the previous interval's
// equation, never by differencing.

#include "delaystep/closed_loop.hpp"
#include "delaystep/stepper.hpp"

#include <vector>

namespace delaystep::oracle {

inline constexpr double default_step = 1e-3;

struct OracleTrajectory {
    double step = default_step;
    std::vector<double> times;                ///< global t, from 0 to N
    std::vector<std::vector<double>> states;  ///< y, y', ..., y^{(m_a-1)} at each time

    [[nodiscard]] std::size_t size() const noexcept { return times.size(); }
    [[nodiscard]] double value(std::size_t index) const { return states[index][0]; }
};

/// Throws InvalidInput when `step` does not divide every knot gap.
[[nodiscard]] OracleTrajectory integrate(const DdeSystem& system, const InitialCondition& init,
                                         const ForcingTerm& forcing, int intervals,
                                         double step = default_step);

}  // namespace delaystep::oracle
