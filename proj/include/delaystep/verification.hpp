#pragma once

// Self-check suites run by `delaystep verify`. Every suite draws its cases
// from a std::mt19937_64 seeded with the report seed, so a report is
// reproducible from (level, seed).

#include "delaystep/vandermonde.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace delaystep {

enum class VerifyLevel { quick, full };

inline constexpr std::uint64_t default_verify_seed = 20240601;

struct CheckResult {
    std::string name;
    bool passed = false;
    int cases = 0;
    double worst = 0.0;       ///< worst observed error measure
    double tolerance = 0.0;
    std::string detail;       ///< first failing case, if any
};

struct VerifyReport {
    VerifyLevel level = VerifyLevel::quick;
    std::uint64_t seed = default_verify_seed;
    std::vector<CheckResult> checks;

    [[nodiscard]] bool passed() const noexcept;
    [[nodiscard]] std::string render() const;
};

using VandermondeSolver = std::function<std::vector<double>(const VandermondeSystem&)>;

struct VerifyOptions {
    VerifyLevel level = VerifyLevel::quick;
    std::uint64_t seed = default_verify_seed;
    /// Solver compared against solve_elimination; defaults to solve_cramer.
    VandermondeSolver cramer;
};

[[nodiscard]] VerifyReport run_verification(const VerifyOptions& options);

}  // namespace delaystep
