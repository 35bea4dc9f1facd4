#include "delaystep/stepper.hpp"

#include "delaystep/errors.hpp"
#include "delaystep/series_identities.hpp"
#include "delaystep/vandermonde.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace delaystep {

namespace {

constexpr double leading_tol = 1e-12;

std::span<const real> coefficients_at(const ExpPoly& f, const real& root) {
    const auto* t = f.find(root);
    if (t == nullptr) {
        return {};
    }
    return t->coeffs;
}

void trim(std::vector<real>& c) {
    while (!c.empty() && c.back() == 0) {
        c.pop_back();
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// Initial condition and forcing

InitialCondition InitialCondition::steady(double value) {
    InitialCondition ic;
    ic.segments = {ExpPoly::constant(value)};
    return ic;
}

void InitialCondition::validate() const {
    if (knots.size() < 2) {
        throw InvalidInput("initial condition needs at least the knots 0 and 1");
    }
    if (knots.front() != 0.0 || knots.back() != 1.0) {
        throw InvalidInput("initial condition knots must start at 0 and end at 1");
    }
    for (std::size_t k = 1; k < knots.size(); ++k) {
        if (!(knots[k] > knots[k - 1])) {
            throw InvalidInput("initial condition knots must be strictly increasing");
        }
    }
    if (segments.size() != knots.size() - 1) {
        throw InvalidInput("initial condition has " + std::to_string(segments.size()) +
                           " segments for " + std::to_string(knots.size() - 1) + " subintervals");
    }
}

const ExpPoly& InitialCondition::at(double t) const {
    const double local = t + 1.0;
    for (std::size_t k = 1; k < knots.size(); ++k) {
        if (local <= knots[k]) {
            return segments[k - 1];
        }
    }
    return segments.back();
}

ForcingTerm::ForcingTerm(ExpPoly before, std::vector<Piece> pieces) {
    std::stable_sort(pieces.begin(), pieces.end(),
                     [](const Piece& a, const Piece& b) { return a.start < b.start; });
    for (const auto& p : pieces) {
        if (!std::isfinite(p.start) || p.start <= -1.0) {
            throw InvalidInput("forcing pieces must start after t = -1");
        }
    }
    pieces_.clear();
    pieces_.push_back(Piece{-1.0, std::move(before)});
    pieces_.insert(pieces_.end(), pieces.begin(), pieces.end());
}

ForcingTerm ForcingTerm::constant(double value) {
    return ForcingTerm(ExpPoly::constant(value), {});
}

ForcingTerm ForcingTerm::setpoint_steps(double initial, std::vector<SetpointStep> steps) {
    std::vector<Piece> pieces;
    pieces.reserve(steps.size());
    for (const auto& s : steps) {
        if (!std::isfinite(s.time) || s.time < 0.0) {
            throw InvalidInput("setpoint step times must be finite and non-negative");
        }
        pieces.push_back(Piece{s.time, ExpPoly::constant(s.value)});
    }
    return ForcingTerm(ExpPoly::constant(initial), std::move(pieces));
}

std::vector<double> ForcingTerm::knots() const {
    std::vector<double> out;
    for (std::size_t p = 1; p < pieces_.size(); ++p) {
        const double s = pieces_[p].start;
        const double frac = s - std::floor(s);
        if (frac > knot_merge_tol && frac < 1.0 - knot_merge_tol) {
            out.push_back(frac);
        }
    }
    std::sort(out.begin(), out.end());
    return merge_knots(out, {});
}

const ExpPoly& ForcingTerm::active(double t) const {
    const ExpPoly* f = &pieces_.front().f;
    for (const auto& p : pieces_) {
        if (p.start <= t) {
            f = &p.f;
        }
    }
    return *f;
}

ExpPoly ForcingTerm::segment(int n, double lo, double hi) const {
    const double origin = static_cast<double>(n - 1);
    return shift_origin(active(origin + 0.5 * (lo + hi)), origin);
}

double ForcingTerm::value(double t) const { return active(t)(t); }

std::vector<double> merge_knots(std::span<const double> a, std::span<const double> b) {
    std::vector<double> all(a.begin(), a.end());
    all.insert(all.end(), b.begin(), b.end());
    std::sort(all.begin(), all.end());
    std::vector<double> out;
    for (double k : all) {
        if (out.empty() || k - out.back() > knot_merge_tol) {
            out.push_back(k);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Piecewise solution

PiecewiseSolution::PiecewiseSolution(std::vector<double> knots,
                                     std::vector<std::vector<ExpPoly>> segments)
    : knots_(std::move(knots)), segments_(std::move(segments)) {
    if (knots_.size() < 2 || knots_.front() != 0.0 || knots_.back() != 1.0) {
        throw InvalidInput("solution knots must run from 0 to 1");
    }
    if (segments_.empty()) {
        throw InvalidInput("solution needs at least the history interval");
    }
    for (const auto& row : segments_) {
        if (row.size() != knots_.size() - 1) {
            throw InvalidInput("every interval needs one segment per subinterval");
        }
    }
}

const ExpPoly& PiecewiseSolution::segment(int n, int k) const {
    if (n < 0 || n > intervals() || k < 1 || k > subintervals()) {
        throw InvalidInput("segment (" + std::to_string(n) + ", " + std::to_string(k) +
                           ") outside the solved range");
    }
    return segments_[static_cast<std::size_t>(n)][static_cast<std::size_t>(k - 1)];
}

std::pair<int, int> PiecewiseSolution::locate(double t) const {
    int n = static_cast<int>(std::ceil(t));
    n = std::clamp(n, 0, intervals());
    const double local = std::clamp(t - (n - 1), 0.0, 1.0);
    int k = 1;
    while (k < subintervals() && local > knots_[static_cast<std::size_t>(k)]) {
        ++k;
    }
    return {n, k};
}

double PiecewiseSolution::value(double t) const {
    const auto [n, k] = locate(t);
    return segment(n, k)(t - (n - 1));
}

double PiecewiseSolution::derivative(double t, int order) const {
    const auto [n, k] = locate(t);
    return evaluate_derivative(segment(n, k), order, t - (n - 1));
}

// ---------------------------------------------------------------------------
// Coefficient systems

std::vector<real> differentiated_coefficients(std::span<const double> weights, const real& root,
                                              std::span<const real> g) {
    if (g.empty() || weights.empty()) {
        return {};
    }
    const int z = static_cast<int>(g.size()) - 1;
    const int m = static_cast<int>(weights.size()) - 1;
    const real& r = root;
    std::vector<real> out(g.size(), real(0));
    for (int j = 0; j <= z; ++j) {
        out[static_cast<std::size_t>(j)] = weights[0] * g[static_cast<std::size_t>(j)];
    }
    if (m >= 1) {
        const auto accumulate = [&](const std::vector<IndexTriple>& triples) {
            for (const auto& [h, i, j] : triples) {
                if (i > z) continue;
                out[static_cast<std::size_t>(j)] += weights[static_cast<std::size_t>(h)] *
                                                    derivative_coefficient(h, i, j, r) *
                                                    g[static_cast<std::size_t>(i)];
            }
        };
        accumulate(enumerate_shifted(SeriesKind::s1, m));
        accumulate(enumerate_shifted(SeriesKind::s2, m, z));
    }
    return out;
}

TriangularSystem assemble_triangular_system(const DdeSystem& system, const real& root,
                                            std::span<const real> prev_y,
                                            std::span<const real> prev_f) {
    std::vector<real> rhs = differentiated_coefficients(system.b, root, prev_y);
    for (auto& v : rhs) v = -v;
    const auto forced = differentiated_coefficients(system.c, root, prev_f);
    if (forced.size() > rhs.size()) rhs.resize(forced.size(), real(0));
    for (std::size_t j = 0; j < forced.size(); ++j) rhs[j] += forced[j];
    trim(rhs);

    TriangularSystem tri;
    tri.root = root;
    tri.unknowns = static_cast<int>(rhs.size());
    const int z = tri.unknowns;
    if (z > max_factorial) {
        throw UnsupportedDegree("solution degree " + std::to_string(z) + " exceeds " +
                                std::to_string(max_factorial));
    }
    tri.rhs = std::move(rhs);
    tri.matrix.assign(static_cast<std::size_t>(z), std::vector<real>(static_cast<std::size_t>(z) + 1, real(0)));
    if (z == 0) {
        return tri;
    }
    const int m = system.order_a();
    const real& r = root;
    // The i == j entries sum to the characteristic polynomial at the root,
    // which vanishes; they are left out.
    const auto accumulate = [&](const std::vector<IndexTriple>& triples) {
        for (const auto& [h, i, j] : triples) {
            if (i > z || i == j) continue;
            tri.matrix[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] +=
                system.a[static_cast<std::size_t>(h)] * derivative_coefficient(h, i, j, r);
        }
    };
    accumulate(enumerate_shifted(SeriesKind::s1, m));
    accumulate(enumerate_shifted(SeriesKind::s2, m, z));
    return tri;
}

std::vector<real> solve_triangular(const TriangularSystem& tri) {
    const int z = tri.unknowns;
    std::vector<real> g(static_cast<std::size_t>(z) + 1, real(0));
    for (int j = z - 1; j >= 0; --j) {
        const auto& row = tri.matrix[static_cast<std::size_t>(j)];
        const real& lead = row[static_cast<std::size_t>(j) + 1];
        if (abs(lead) / (j + 1) < leading_tol) {
            throw DegenerateLeadingCoefficient(
                "characteristic polynomial slope vanishes at root " + std::to_string(to_double(tri.root)) +
                " (multiple root)");
        }
        real acc = tri.rhs[static_cast<std::size_t>(j)];
        for (int i = j + 2; i <= z; ++i) {
            acc -= row[static_cast<std::size_t>(i)] * g[static_cast<std::size_t>(i)];
        }
        g[static_cast<std::size_t>(j) + 1] = acc / lead;
    }
    return g;
}

ExpPoly advance_polynomial_part(const DdeSystem& system, const ExpPoly& prev_y,
                                const ExpPoly& prev_f) {
    const ExpPoly y = snap_roots(prev_y, system.roots);
    const ExpPoly f = snap_roots(prev_f, system.roots);
    std::vector<ExpTerm> terms;
    terms.reserve(system.roots.size());
    for (const real& r : system.roots) {
        const auto tri = assemble_triangular_system(system, r, coefficients_at(y, r),
                                                    coefficients_at(f, r));
        terms.push_back(ExpTerm{r, solve_triangular(tri)});
    }
    return ExpPoly(std::move(terms));
}

ExpPoly advance_constant_part(const DdeSystem& system, const ExpPoly& partial,
                              std::span<const real> boundary, double knot) {
    const int m = system.order_a();
    if (static_cast<int>(boundary.size()) != m) {
        throw InvalidInput("continuity needs " + std::to_string(m) + " boundary values, got " +
                           std::to_string(boundary.size()));
    }
    BasicVandermondeSystem<real> vs;
    vs.nodes = system.roots;
    vs.scales.reserve(system.roots.size());
    for (const real& r : system.roots) {
        vs.scales.push_back(exp(r * real(knot)));
    }
    const auto known = boundary_values(partial, knot, m);
    vs.rhs.resize(static_cast<std::size_t>(m));
    for (std::size_t h = 0; h < vs.rhs.size(); ++h) {
        vs.rhs[h] = boundary[h] - known[h];
    }
    const auto constants = solve_elimination(vs);
    std::vector<ExpTerm> terms(partial.terms());
    for (std::size_t p = 0; p < constants.size(); ++p) {
        terms.push_back(ExpTerm{system.roots[p], {constants[p]}});
    }
    return ExpPoly(std::move(terms));
}

std::vector<real> boundary_values(const ExpPoly& y, double t, int count) {
    std::vector<real> out;
    out.reserve(static_cast<std::size_t>(std::max(count, 0)));
    ExpPoly d = y;
    for (int h = 0; h < count; ++h) {
        if (h > 0) d = derivative(d, 1);
        out.push_back(d.exact(t));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Driver

PiecewiseSolution solve(const DdeSystem& system, const InitialCondition& init,
                        const ForcingTerm& forcing, int intervals) {
    if (intervals < 1) {
        throw InvalidInput("number of intervals must be at least 1");
    }
    init.validate();
    const auto forcing_knots = forcing.knots();
    const auto knots = merge_knots(init.knots, forcing_knots);
    const int q = static_cast<int>(knots.size()) - 1;
    const int m = system.order_a();

    std::vector<std::vector<ExpPoly>> segments(static_cast<std::size_t>(intervals) + 1);
    auto& history = segments[0];
    int start_degree = 0;
    for (int k = 1; k <= q; ++k) {
        const double mid = -1.0 + 0.5 * (knots[static_cast<std::size_t>(k - 1)] + knots[static_cast<std::size_t>(k)]);
        history.push_back(snap_roots(shift_origin(init.at(mid), -1.0), system.roots));
        start_degree = std::max(start_degree, history.back().max_degree());
    }
    for (const auto& p : forcing.pieces()) {
        start_degree = std::max(start_degree, p.f.max_degree());
    }
    if (start_degree + intervals > max_factorial) {
        throw UnsupportedDegree("degree after " + std::to_string(intervals) +
                                " intervals would exceed " + std::to_string(max_factorial));
    }

    for (int n = 1; n <= intervals; ++n) {
        const auto& prev = segments[static_cast<std::size_t>(n - 1)];
        auto& current = segments[static_cast<std::size_t>(n)];
        current.reserve(static_cast<std::size_t>(q));
        for (int k = 1; k <= q; ++k) {
            const double lo = knots[static_cast<std::size_t>(k - 1)];
            const double hi = knots[static_cast<std::size_t>(k)];
            const ExpPoly prev_f = forcing.segment(n - 1, lo, hi);
            const ExpPoly partial =
                advance_polynomial_part(system, prev[static_cast<std::size_t>(k - 1)], prev_f);
            const auto boundary = k == 1 ? boundary_values(prev.back(), 1.0, m)
                                         : boundary_values(current.back(), lo, m);
            current.push_back(advance_constant_part(system, partial, boundary, lo));
        }
    }
    return PiecewiseSolution(knots, std::move(segments));
}

std::vector<std::vector<int>> degrees(const InitialCondition& init, std::span<const real> roots,
                                      int n) {
    std::vector<std::vector<int>> out;
    out.reserve(init.segments.size());
    for (const auto& seg : init.segments) {
        std::vector<int> row;
        row.reserve(roots.size());
        for (const real& r : roots) {
            row.push_back(ansatz_degree(seg.degree(r), n));
        }
        out.push_back(std::move(row));
    }
    return out;
}

double equation_residual(const DdeSystem& system, const PiecewiseSolution& sol,
                         const ForcingTerm& forcing, int n, int k, double t) {
    if (n < 1) {
        throw InvalidInput("residual is defined on solved intervals n >= 1");
    }
    const auto& knots = sol.knots();
    const ExpPoly& y = sol.segment(n, k);
    const ExpPoly& prev_y = sol.segment(n - 1, k);
    const ExpPoly prev_f =
        forcing.segment(n - 1, knots[static_cast<std::size_t>(k - 1)], knots[static_cast<std::size_t>(k)]);
    double lhs = 0.0;
    double rhs = 0.0;
    double scale = 0.0;
    for (int h = 1; h <= system.order_a(); ++h) {
        const double v = system.a[static_cast<std::size_t>(h)] * evaluate_derivative(y, h, t);
        lhs += v;
        scale += std::abs(v);
    }
    for (int h = 0; h <= system.order_b(); ++h) {
        const double v = system.b[static_cast<std::size_t>(h)] * evaluate_derivative(prev_y, h, t);
        rhs -= v;
        scale += std::abs(v);
    }
    for (int h = 0; h <= system.order_c(); ++h) {
        const double v = system.c[static_cast<std::size_t>(h)] * evaluate_derivative(prev_f, h, t);
        rhs += v;
        scale += std::abs(v);
    }
    return scale == 0.0 ? 0.0 : std::abs(lhs - rhs) / scale;
}

}  // namespace delaystep
