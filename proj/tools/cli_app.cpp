#include "cli_app.hpp"

#include "delaystep/errors.hpp"
#include "delaystep/metrics.hpp"
#include "delaystep/scenario.hpp"
#include "delaystep/stepper.hpp"
#include "delaystep/verification.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <optional>
#include <ostream>

namespace delaystep::cli {

namespace {

std::string format(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct SimulateArgs {
    std::string config;
    std::optional<int> horizon;
    std::optional<double> dt;
    std::optional<double> band;
    std::string out_path;
};

struct CoeffsArgs {
    std::string config;
    int n = 1;
    int k = 1;
    std::optional<int> horizon;
};

struct VerifyArgs {
    std::string level = "quick";
    std::uint64_t seed = default_verify_seed;
};

ScenarioConfig load_with_overrides(const std::string& path, std::optional<int> horizon) {
    auto cfg = load_scenario(path);
    if (horizon) cfg.horizon = *horizon;
    return cfg;
}

void write_metrics(std::ostream& os, const ResponseMetrics& m) {
    os << "# metrics\n";
    os << "step_magnitude=" << format(m.step_magnitude) << "\n";
    os << "overshoot=" << format(m.overshoot) << "\n";
    os << "settling_time=" << (m.settling_time ? format(*m.settling_time) : "not-settled") << "\n";
    os << "band=" << format(m.band) << "\n";
    os << "iae=" << format(m.iae) << "\n";
    os << "decay_ratio=" << (m.decay_ratio ? format(*m.decay_ratio) : "none") << "\n";
    os << "deadbeat=" << (m.deadbeat ? "true" : "false") << "\n";
}

int simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err) {
    auto cfg = load_with_overrides(args.config, args.horizon);
    if (args.dt) cfg.dt = *args.dt;
    if (args.band) cfg.band = *args.band;
    const auto sc = build_scenario(cfg);
    const auto sol = solve(sc.system, sc.init, sc.forcing, sc.intervals);
    const auto metrics = compute_metrics(sol, sc.final_setpoint, sc.intervals, MetricsOptions{cfg.band});

    std::ofstream file;
    if (!args.out_path.empty()) {
        file.open(args.out_path);
        if (!file) throw InvalidInput("cannot write " + args.out_path);
    }
    std::ostream& csv = args.out_path.empty() ? out : file;
    csv << "t,y\n";
    const auto samples = static_cast<long>(std::floor(sc.intervals / cfg.dt + 1e-9));
    for (long i = 0; i <= samples; ++i) {
        const double t = static_cast<double>(i) * cfg.dt;
        csv << format(t) << "," << format(sol.value(t)) << "\n";
    }
    write_metrics(args.out_path.empty() ? err : out, metrics);
    return exit_ok;
}

int coeffs(const CoeffsArgs& args, std::ostream& out) {
    const auto cfg = load_with_overrides(args.config, args.horizon);
    const auto sc = build_scenario(cfg);
    if (args.n < 0 || args.n > sc.intervals) {
        throw InvalidInput("--n " + std::to_string(args.n) + " is outside the solved intervals 0.." +
                           std::to_string(sc.intervals));
    }
    const auto sol = solve(sc.system, sc.init, sc.forcing, std::max(args.n, 1));
    if (args.k < 1 || args.k > sol.subintervals()) {
        throw InvalidInput("--k " + std::to_string(args.k) + " is outside the subintervals 1.." +
                           std::to_string(sol.subintervals()));
    }
    const auto roots = to_double(sc.system.roots);
    const auto order = root_numbering(roots);
    out << "# roots:";
    for (std::size_t p = 0; p < order.size(); ++p) {
        out << " p" << p + 1 << "=" << format(roots[order[p]]);
    }
    out << "\np,root,i,G\n";
    const ExpPoly& seg = sol.segment(args.n, args.k);
    for (std::size_t p = 0; p < order.size(); ++p) {
        const ExpTerm* term = seg.find(sc.system.roots[order[p]]);
        if (term == nullptr) continue;
        for (std::size_t i = 0; i < term->coeffs.size(); ++i) {
            if (term->coeffs[i] == 0.0) continue;
            out << p + 1 << "," << format(to_double(term->root)) << "," << i << "," << format(to_double(term->coeffs[i])) << "\n";
        }
    }
    return exit_ok;
}

int roots(const std::string& config, std::ostream& out) {
    const auto sc = build_scenario(load_scenario(config));
    const auto r = to_double(sc.system.roots);
    out << "p,root\n";
    const auto order = root_numbering(r);
    for (std::size_t p = 0; p < order.size(); ++p) {
        out << p + 1 << "," << format(r[order[p]]) << "\n";
    }
    return exit_ok;
}

int verify(const VerifyArgs& args, std::ostream& out) {
    VerifyOptions options;
    options.level = args.level == "full" ? VerifyLevel::full : VerifyLevel::quick;
    options.seed = args.seed;
    const auto report = run_verification(options);
    out << report.render();
    return report.passed() ? exit_ok : exit_verify_failed;
}

}  // namespace

std::vector<std::size_t> root_numbering(const std::vector<double>& roots) {
    std::vector<std::size_t> order(roots.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const bool za = roots[a] == 0.0;
        const bool zb = roots[b] == 0.0;
        if (za != zb) return za;
        return roots[a] > roots[b];
    });
    return order;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Piecewise-analytic setpoint response of PID loops with transport delay", "delaystep"};
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* sim_cmd = app.add_subcommand("simulate", "Write the response as CSV and print step-response metrics");
    sim_cmd->add_option("--config", sim.config, "Scenario file (JSON)")->required();
    sim_cmd->add_option("--horizon", sim.horizon, "Number of delay intervals to solve")->check(CLI::PositiveNumber);
    sim_cmd->add_option("--dt", sim.dt, "CSV sample spacing in delay units")->check(CLI::PositiveNumber);
    sim_cmd->add_option("--band", sim.band, "Settling band as a fraction of the step");
    sim_cmd->add_option("--out", sim.out_path, "CSV output path (default: stdout)");

    CoeffsArgs co;
    auto* co_cmd = app.add_subcommand("coeffs", "Print the coefficients of one solution segment");
    co_cmd->add_option("--config", co.config, "Scenario file (JSON)")->required();
    co_cmd->add_option("--n", co.n, "Interval index (0 is the history)")->required();
    co_cmd->add_option("--k", co.k, "Subinterval index, from 1");
    co_cmd->add_option("--horizon", co.horizon, "Number of delay intervals")->check(CLI::PositiveNumber);

    std::string roots_config;
    auto* roots_cmd = app.add_subcommand("roots", "Print the characteristic roots");
    roots_cmd->add_option("--config", roots_config, "Scenario file (JSON)")->required();

    VerifyArgs ver;
    auto* ver_cmd = app.add_subcommand("verify", "Run the built-in self-check suites");
    ver_cmd->add_option("--level", ver.level, "quick or full")->check(CLI::IsMember({"quick", "full"}));
    ver_cmd->add_option("--seed", ver.seed, "Random seed for generated cases");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_input_error;
    }

    try {
        if (*sim_cmd) return simulate(sim, out, err);
        if (*co_cmd) return coeffs(co, out);
        if (*roots_cmd) return roots(roots_config, out);
        if (*ver_cmd) return verify(ver, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_input_error;
    }
    return exit_input_error;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<std::string> storage{"delaystep"};
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : storage) argv.push_back(s.data());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace delaystep::cli
