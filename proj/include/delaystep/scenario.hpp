#pragma once

// Scenario files: a closed loop, its history and a setpoint schedule, stored
// as JSON. Layout (every key except "plant" and "pid" is optional):
//
//   {
//     "plant":    { "numerator": [e_0, e_1, ...], "denominator": [A_0, A_1, ...],
//                   "delay": L },
//     "pid":      { "k": ..., "k_i": ..., "k_d": ... },
//     "initial":  { "steady": y0 }
//              or { "knots": [0, ..., 1],
//                   "segments": [ [ {"root": r, "coeffs": [g_0, g_1, ...]}, ... ], ... ] },
//     "setpoint": { "initial": f0, "steps": [ {"time": t, "value": v}, ... ] },
//     "horizon":  N,
//     "output":   { "dt": 0.01, "band": 0.05 }
//   }
//
// Plant polynomials and PID gains are in the physical time unit of "delay";
// they are rescaled so that the delay becomes 1. All times in the file
// (step times, horizon, dt, history segments) are in delay units.
// Without "initial", the history is steady at the initial setpoint.

#include "delaystep/closed_loop.hpp"
#include "delaystep/stepper.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace delaystep {

struct ScenarioConfig {
    PlantModel plant;
    double delay = 1.0;
    PidParams pid;

    std::optional<double> steady_value;
    std::vector<double> initial_knots;
    std::vector<ExpPoly> initial_segments;

    double setpoint_initial = 0.0;
    std::vector<SetpointStep> setpoint_steps;

    int horizon = 10;
    double dt = 0.01;
    double band = 0.05;

    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Throws InvalidInput naming the offending key on malformed input.
[[nodiscard]] ScenarioConfig parse_scenario(std::string_view text);
[[nodiscard]] ScenarioConfig load_scenario(const std::string& path);
[[nodiscard]] std::string serialize_scenario(const ScenarioConfig& config);

/// Everything the solver needs, in normalized time.
struct Scenario {
    DdeSystem system;
    InitialCondition init;
    ForcingTerm forcing;
    int intervals = 1;
    double final_setpoint = 0.0;
};

[[nodiscard]] Scenario build_scenario(const ScenarioConfig& config);

}  // namespace delaystep
