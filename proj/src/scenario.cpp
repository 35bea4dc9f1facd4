#include "delaystep/scenario.hpp"

#include "delaystep/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace delaystep {

using nlohmann::json;

namespace {

double number(const json& j, const char* key) {
    if (!j.contains(key)) {
        throw InvalidInput(std::string("missing key \"") + key + "\"");
    }
    const auto& v = j.at(key);
    if (!v.is_number()) {
        throw InvalidInput(std::string("key \"") + key + "\" must be a number");
    }
    return v.get<double>();
}

double number_or(const json& j, const char* key, double fallback) {
    return j.contains(key) ? number(j, key) : fallback;
}

std::vector<double> number_list(const json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_array()) {
        throw InvalidInput(std::string("key \"") + key + "\" must be a list of numbers");
    }
    std::vector<double> out;
    for (const auto& v : j.at(key)) {
        if (!v.is_number()) {
            throw InvalidInput(std::string("key \"") + key + "\" must be a list of numbers");
        }
        out.push_back(v.get<double>());
    }
    return out;
}

const json& section(const json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_object()) {
        throw InvalidInput(std::string("missing section \"") + key + "\"");
    }
    return j.at(key);
}

ExpPoly parse_exp_poly(const json& terms) {
    if (!terms.is_array()) {
        throw InvalidInput("history segment must be a list of {root, coeffs} terms");
    }
    std::vector<ExpTerm> out;
    for (const auto& t : terms) {
        if (!t.is_object()) {
            throw InvalidInput("history segment term must be an object");
        }
        out.push_back(ExpTerm{number(t, "root"), to_real(number_list(t, "coeffs"))});
    }
    return ExpPoly(std::move(out));
}

json dump_exp_poly(const ExpPoly& f) {
    json terms = json::array();
    for (const auto& t : f.terms()) {
        terms.push_back(json{{"root", to_double(t.root)}, {"coeffs", to_double(t.coeffs)}});
    }
    return terms;
}

}  // namespace

ScenarioConfig parse_scenario(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InvalidInput(std::string("scenario is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        throw InvalidInput("scenario must be a JSON object");
    }
    ScenarioConfig cfg;
    const auto& plant = section(doc, "plant");
    cfg.plant.numerator = number_list(plant, "numerator");
    cfg.plant.denominator = number_list(plant, "denominator");
    cfg.delay = number_or(plant, "delay", 1.0);

    const auto& pid = section(doc, "pid");
    cfg.pid.k = number_or(pid, "k", 0.0);
    cfg.pid.k_i = number_or(pid, "k_i", 0.0);
    cfg.pid.k_d = number_or(pid, "k_d", 0.0);

    if (doc.contains("setpoint")) {
        const auto& sp = section(doc, "setpoint");
        cfg.setpoint_initial = number_or(sp, "initial", 0.0);
        if (sp.contains("steps")) {
            if (!sp.at("steps").is_array()) {
                throw InvalidInput("key \"steps\" must be a list");
            }
            for (const auto& s : sp.at("steps")) {
                cfg.setpoint_steps.push_back(SetpointStep{number(s, "time"), number(s, "value")});
            }
        }
    }

    if (doc.contains("initial")) {
        const auto& init = section(doc, "initial");
        if (init.contains("steady")) {
            cfg.steady_value = number(init, "steady");
        } else {
            cfg.initial_knots = number_list(init, "knots");
            if (!init.contains("segments") || !init.at("segments").is_array()) {
                throw InvalidInput("key \"segments\" must be a list of history segments");
            }
            for (const auto& seg : init.at("segments")) {
                cfg.initial_segments.push_back(parse_exp_poly(seg));
            }
        }
    }

    if (doc.contains("horizon")) {
        const auto& h = doc.at("horizon");
        if (!h.is_number_integer() || h.get<long long>() < 1) {
            throw InvalidInput("key \"horizon\" must be a positive integer");
        }
        cfg.horizon = h.get<int>();
    }
    if (doc.contains("output")) {
        const auto& out = section(doc, "output");
        cfg.dt = number_or(out, "dt", cfg.dt);
        cfg.band = number_or(out, "band", cfg.band);
    }
    return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidInput("cannot open scenario file " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario(buffer.str());
}

std::string serialize_scenario(const ScenarioConfig& cfg) {
    json doc;
    doc["plant"] = {{"numerator", cfg.plant.numerator},
                    {"denominator", cfg.plant.denominator},
                    {"delay", cfg.delay}};
    doc["pid"] = {{"k", cfg.pid.k}, {"k_i", cfg.pid.k_i}, {"k_d", cfg.pid.k_d}};
    if (cfg.steady_value) {
        doc["initial"] = {{"steady", *cfg.steady_value}};
    } else if (!cfg.initial_segments.empty()) {
        json segments = json::array();
        for (const auto& s : cfg.initial_segments) segments.push_back(dump_exp_poly(s));
        doc["initial"] = {{"knots", cfg.initial_knots}, {"segments", segments}};
    }
    json steps = json::array();
    for (const auto& s : cfg.setpoint_steps) {
        steps.push_back({{"time", s.time}, {"value", s.value}});
    }
    doc["setpoint"] = {{"initial", cfg.setpoint_initial}, {"steps", steps}};
    doc["horizon"] = cfg.horizon;
    doc["output"] = {{"dt", cfg.dt}, {"band", cfg.band}};
    return doc.dump(2) + "\n";
}

Scenario build_scenario(const ScenarioConfig& cfg) {
    if (cfg.horizon < 1) {
        throw InvalidInput("horizon must be at least 1 delay interval");
    }
    if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) {
        throw InvalidInput("output dt must be positive");
    }
    const auto normalized = normalize_delay(ClosedLoopSpec{cfg.pid, cfg.plant, cfg.delay});

    Scenario sc;
    sc.system = build_closed_loop(normalized.pid, normalized.plant);
    sc.intervals = cfg.horizon;
    sc.forcing = ForcingTerm::setpoint_steps(cfg.setpoint_initial, cfg.setpoint_steps);

    if (cfg.steady_value) {
        sc.init = InitialCondition::steady(*cfg.steady_value);
    } else if (!cfg.initial_segments.empty()) {
        sc.init.knots = cfg.initial_knots;
        sc.init.segments = cfg.initial_segments;
        sc.init.validate();
    } else {
        sc.init = InitialCondition::steady(cfg.setpoint_initial);
    }

    auto steps = cfg.setpoint_steps;
    std::stable_sort(steps.begin(), steps.end(),
                     [](const SetpointStep& a, const SetpointStep& b) { return a.time < b.time; });
    sc.final_setpoint = steps.empty() ? cfg.setpoint_initial : steps.back().value;
    return sc;
}

}  // namespace delaystep
