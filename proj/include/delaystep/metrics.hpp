#pragma once

// Step-response figures of merit computed from the analytic solution.

#include "delaystep/stepper.hpp"

#include <optional>

namespace delaystep {

struct ResponseMetrics {
    double step_magnitude = 0.0;  ///< |setpoint - y(0)|
    /// Largest excursion past the setpoint, as a fraction of step_magnitude
    /// (absolute when the step magnitude is zero).
    double overshoot = 0.0;
    /// Earliest time after which |y - setpoint| stays within the band up to the
    /// horizon; empty when the response is still outside the band at the horizon.
    std::optional<double> settling_time;
    double band = 0.05;  ///< fraction of step_magnitude (absolute for zero steps)
    double iae = 0.0;    ///< integral of |y - setpoint| over [0, horizon]
    /// |e| at the second local maximum of |e| over |e| at the first.
    std::optional<double> decay_ratio;
    /// Once inside the band the response never leaves it again.
    bool deadbeat = false;
};

struct MetricsOptions {
    double band = 0.05;
    /// Bracketing grid density per segment for locating sign changes; results
    /// do not depend on it once every extremum is resolved.
    int samples_per_segment = 64;
};

/// Metrics of the response on [0, horizon]. Throws InvalidInput when the
/// horizon exceeds the solved range or the band is outside (0, 0.5).
[[nodiscard]] ResponseMetrics compute_metrics(const PiecewiseSolution& sol, double setpoint,
                                              double horizon, const MetricsOptions& options = {});

}  // namespace delaystep
