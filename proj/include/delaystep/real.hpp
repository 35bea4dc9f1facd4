#pragma once

// Working precision for characteristic roots and solution coefficients.
//
// Coefficients G of a segment can exceed the segment's values by many orders
// of magnitude when two characteristic roots are close (terms at neighbouring
// roots cancel), so they are held in IEEE quad precision. The roots must be
// accurate to the same level for the cancellation to come out right. System
// coefficients, inputs and evaluated values stay in double.

#include <boost/multiprecision/float128.hpp>

#include <span>
#include <vector>

namespace delaystep {

using real = boost::multiprecision::float128;

[[nodiscard]] inline double to_double(const real& v) { return static_cast<double>(v); }

[[nodiscard]] inline std::vector<real> to_real(std::span<const double> v) {
    return {v.begin(), v.end()};
}

[[nodiscard]] inline std::vector<double> to_double(std::span<const real> v) {
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& x : v) out.push_back(static_cast<double>(x));
    return out;
}

}  // namespace delaystep
