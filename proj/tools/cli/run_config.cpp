#include "run_config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "vcoop/errors.hpp"
#include "vcoop/numeric.hpp"

namespace vcoop::cli {

using nlohmann::json;

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) parts.push_back(item);
    return parts;
}

double parse_number(const std::string& text, const std::string& what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(fmt::format("{}: '{}' is not a number", what, text));
    }
}

int rounded_int(double value, const std::string& name) {
    if (!std::isfinite(value) || std::abs(value) > 1e9) {
        throw ConfigError(fmt::format("{} must be a finite integer", name));
    }
    return static_cast<int>(std::lround(value));
}

using Setter = std::function<void(RunConfig&, double)>;

const std::map<std::string, Setter>& variable_setters() {
    static const std::map<std::string, Setter> setters = {
        {"snr_db", [](RunConfig& c, double v) { c.snr_db = v; }},
        {"gamma0_db", [](RunConfig& c, double v) { c.gamma0_db = v; }},
        {"noise", [](RunConfig& c, double v) { c.noise = v; }},
        {"n_helpers", [](RunConfig& c, double v) { c.n_helpers = rounded_int(v, "n_helpers"); }},
        {"antennas", [](RunConfig& c, double v) { c.antennas = rounded_int(v, "antennas"); }},
        {"phi", [](RunConfig& c, double v) { c.phi = v; }},
        {"m_fading", [](RunConfig& c, double v) { c.m_fading = v; }},
        {"rho", [](RunConfig& c, double v) { c.rho = v; }},
        {"blocks", [](RunConfig& c, double v) { c.blocks = rounded_int(v, "blocks"); }},
        {"packet_bits", [](RunConfig& c, double v) { c.packet_bits = v; }},
        {"carrier_hz", [](RunConfig& c, double v) { c.carrier_hz = v; }},
        {"speed", [](RunConfig& c, double v) { c.speed = v; }},
        {"d_first", [](RunConfig& c, double v) { c.d_first = v; }},
        {"d_second", [](RunConfig& c, double v) { c.d_second = v; }},
        // Moves the helper along the source-RSU segment, keeping the total length.
        {"distance_ratio",
         [](RunConfig& c, double v) {
             const double total = c.d_first + c.d_second;
             c.d_first = total * v / (1.0 + v);
             c.d_second = total / (1.0 + v);
         }},
        {"d_source_rsu", [](RunConfig& c, double v) { c.d_source_rsu = v; }},
        {"alpha", [](RunConfig& c, double v) { c.alpha = v; }},
        {"steepness", [](RunConfig& c, double v) { c.steepness = v; }},
        {"revenue_weight", [](RunConfig& c, double v) { c.revenue_weight = v; }},
        {"helper_cost", [](RunConfig& c, double v) { c.helper_cost = v; }},
        {"price", [](RunConfig& c, double v) { c.price = v; }},
    };
    return setters;
}

} // namespace

std::vector<double> SweepSpec::values() const {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        const double t = points == 1 ? 0.0 : double(i) / double(points - 1);
        if (scale == SweepScale::Log) {
            out.push_back(start * std::pow(stop / start, t));
        } else {
            out.push_back(start + (stop - start) * t);
        }
    }
    // Avoid 1e-17 style noise at the end point.
    if (points > 1) out.back() = stop;
    return out;
}

std::string SweepSpec::to_string() const {
    return fmt::format("{}:{}:{}:{}{}", variable, start, stop, points,
                       scale == SweepScale::Log ? ":log" : "");
}

SweepSpec parse_sweep(const std::string& text) {
    const auto parts = split(text, ':');
    if (parts.size() != 4 && parts.size() != 5) {
        throw ConfigError(fmt::format("sweep '{}' must look like VAR:START:STOP:POINTS[:log]", text));
    }
    SweepSpec s;
    s.variable = parts[0];
    if (!is_sweep_variable(s.variable)) {
        throw ConfigError(fmt::format("'{}' is not a sweepable variable", s.variable));
    }
    s.start = parse_number(parts[1], "sweep start");
    s.stop = parse_number(parts[2], "sweep stop");
    s.points = rounded_int(parse_number(parts[3], "sweep points"), "sweep points");
    if (parts.size() == 5) {
        if (parts[4] == "log") {
            s.scale = SweepScale::Log;
        } else if (parts[4] == "lin" || parts[4] == "linear") {
            s.scale = SweepScale::Linear;
        } else {
            throw ConfigError(fmt::format("unknown sweep scale '{}'", parts[4]));
        }
    }
    if (!std::isfinite(s.start) || !std::isfinite(s.stop)) {
        throw ConfigError("sweep bounds must be finite");
    }
    if (s.points < 2) throw ConfigError("a sweep needs at least 2 points");
    if (s.scale == SweepScale::Log && !(s.start > 0.0 && s.stop > 0.0)) {
        throw ConfigError("log sweeps need positive bounds");
    }
    return s;
}

bool is_sweep_variable(const std::string& name) { return variable_setters().count(name) > 0; }

const std::vector<std::string>& sweep_variables() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& [name, setter] : variable_setters()) v.push_back(name);
        return v;
    }();
    return names;
}

void set_variable(RunConfig& cfg, const std::string& name, double value) {
    const auto it = variable_setters().find(name);
    if (it == variable_setters().end()) {
        throw ConfigError(fmt::format("'{}' is not a sweepable variable", name));
    }
    it->second(cfg, value);
}

double get_variable(const RunConfig& c, const std::string& name) {
    static const std::map<std::string, std::function<double(const RunConfig&)>> getters = {
        {"snr_db", [](const RunConfig& r) { return r.snr_db; }},
        {"gamma0_db", [](const RunConfig& r) { return r.gamma0_db; }},
        {"noise", [](const RunConfig& r) { return r.noise; }},
        {"n_helpers", [](const RunConfig& r) { return double(r.n_helpers); }},
        {"antennas", [](const RunConfig& r) { return double(r.antennas); }},
        {"phi", [](const RunConfig& r) { return r.phi; }},
        {"m_fading", [](const RunConfig& r) { return r.m_fading; }},
        {"rho", [](const RunConfig& r) { return r.rho; }},
        {"blocks", [](const RunConfig& r) { return double(r.blocks); }},
        {"packet_bits", [](const RunConfig& r) { return r.packet_bits; }},
        {"carrier_hz", [](const RunConfig& r) { return r.carrier_hz; }},
        {"speed", [](const RunConfig& r) { return r.speed; }},
        {"d_first", [](const RunConfig& r) { return r.d_first; }},
        {"d_second", [](const RunConfig& r) { return r.d_second; }},
        {"distance_ratio", [](const RunConfig& r) { return r.d_first / r.d_second; }},
        {"d_source_rsu", [](const RunConfig& r) { return r.d_source_rsu; }},
        {"alpha", [](const RunConfig& r) { return r.alpha; }},
        {"steepness", [](const RunConfig& r) { return r.steepness; }},
        {"revenue_weight", [](const RunConfig& r) { return r.revenue_weight; }},
        {"helper_cost", [](const RunConfig& r) { return r.helper_cost; }},
        {"price", [](const RunConfig& r) { return r.price; }},
    };
    const auto it = getters.find(name);
    if (it == getters.end()) throw ConfigError(fmt::format("'{}' is not a sweepable variable", name));
    return it->second(c);
}

double RunConfig::gamma0() const { return db_to_linear(gamma0_db); }

double RunConfig::effective_d_second() const {
    return d_source_rsu > 0.0 ? std::hypot(d_source_rsu, d_first) : d_second;
}

int RunConfig::resolved_threads() const {
    if (threads > 0) return threads;
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

std::vector<channel::CorrelationModel> RunConfig::models() const {
    switch (model) {
    case ModelChoice::CC: return {channel::CorrelationModel::CC};
    case ModelChoice::EC: return {channel::CorrelationModel::EC};
    case ModelChoice::Both: return {channel::CorrelationModel::CC, channel::CorrelationModel::EC};
    }
    return {};
}

void RunConfig::validate() const {
    const auto finite = [](double v) { return std::isfinite(v); };
    if (!finite(snr_db) || !finite(gamma0_db)) throw ConfigError("snr_db and gamma0_db must be finite");
    if (!(noise > 0.0) || !finite(noise)) throw ConfigError("noise must be positive");
    if (n_helpers < 1) throw ConfigError("n_helpers must be >= 1");
    if (antennas < 1) throw ConfigError("antennas must be >= 1");
    if (!(phi > 0.0 && phi <= 1.0)) throw ConfigError("phi must lie in (0, 1]");
    if (!(m_fading >= 0.5) || !finite(m_fading)) throw ConfigError("m_fading must be >= 0.5");
    if (!(rho >= 0.0 && rho < 1.0)) throw ConfigError("rho must lie in [0, 1)");
    if (blocks < 0) throw ConfigError("blocks must be >= 0 (0 derives L)");
    if (!(packet_bits > 0.0) || !(carrier_hz > 0.0) || !(speed >= 0.0)) {
        throw ConfigError("packet_bits and carrier_hz must be positive, speed non-negative");
    }
    if (!(d_first > 0.0) || !(d_second > 0.0) || !(d_source_rsu >= 0.0)) {
        throw ConfigError("distances must be positive");
    }
    if (!(alpha >= 2.0) || !finite(alpha)) throw ConfigError("alpha must be >= 2");
    if (!(steepness > 0.0) || !(revenue_weight >= 0.0) || !(helper_cost > 0.0) || !(price >= 0.0)) {
        throw ConfigError("game parameters: steepness > 0, revenue_weight >= 0, helper_cost > 0, price >= 0");
    }
    if (!(max_power > 0.0)) throw ConfigError("max_power must be positive");
    if (draws < 0) throw ConfigError("draws must be >= 0");
    if (trials < 1) throw ConfigError("trials must be >= 1");
    if (threads < 0) throw ConfigError("threads must be >= 0");
    if (!finite(corrupt_analytic)) throw ConfigError("corrupt_analytic must be finite");
    if (sweep) {
        if (sweep->points < 2) throw ConfigError("a sweep needs at least 2 points");
        if (!is_sweep_variable(sweep->variable)) throw ConfigError("unknown sweep variable");
    }
}

pep::ScenarioParams scenario_params(const RunConfig& cfg, channel::CorrelationModel model) {
    pep::ScenarioParams p;
    p.snr = db_to_linear(cfg.snr_db);
    p.noise = cfg.noise;
    p.gamma0 = cfg.gamma0();
    p.n_helpers = cfg.n_helpers;
    p.antennas = cfg.antennas;
    p.phi = cfg.phi;
    p.m = cfg.m_fading;
    p.rho = cfg.rho;
    p.model = model;
    p.d_first = cfg.d_first;
    p.d_second = cfg.effective_d_second();
    p.alpha = cfg.alpha;
    p.packet_bits = cfg.packet_bits;
    p.carrier_hz = cfg.carrier_hz;
    p.speed_mps = cfg.speed;
    p.tc_model = cfg.tc_model;
    return p;
}

pep::Scenario build_scenario(const RunConfig& cfg, channel::CorrelationModel model) {
    try {
        return pep::make_scenario(scenario_params(cfg, model));
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
}

int resolve_blocks(const RunConfig& cfg, const pep::Scenario& scenario) {
    return cfg.blocks > 0 ? cfg.blocks : pep::num_blocks(scenario);
}

game::GameParams game_params(const RunConfig& cfg) {
    game::GameParams g;
    g.steepness = cfg.steepness;
    g.revenue_weight = cfg.revenue_weight;
    g.helper_cost = cfg.helper_cost;
    g.price = cfg.price;
    g.gamma0 = cfg.gamma0();
    g.max_power = cfg.max_power;
    return g;
}

std::string to_string(ModelChoice choice) {
    switch (choice) {
    case ModelChoice::CC: return "cc";
    case ModelChoice::EC: return "ec";
    case ModelChoice::Both: return "both";
    }
    return "both";
}

ModelChoice parse_model_choice(const std::string& text) {
    if (text == "cc") return ModelChoice::CC;
    if (text == "ec") return ModelChoice::EC;
    if (text == "both") return ModelChoice::Both;
    throw ConfigError(fmt::format("unknown model '{}' (cc, ec or both)", text));
}

std::string to_string(OutputFormat format) { return format == OutputFormat::Csv ? "csv" : "json"; }

OutputFormat parse_output_format(const std::string& text) {
    if (text == "csv") return OutputFormat::Csv;
    if (text == "json") return OutputFormat::Json;
    throw ConfigError(fmt::format("unknown format '{}' (csv or json)", text));
}

nlohmann::ordered_json to_json(const RunConfig& c, bool for_header) {
    nlohmann::ordered_json j;
    j["snr_db"] = c.snr_db;
    j["gamma0_db"] = c.gamma0_db;
    j["noise"] = c.noise;
    j["n_helpers"] = c.n_helpers;
    j["antennas"] = c.antennas;
    j["phi"] = c.phi;
    j["m_fading"] = c.m_fading;
    j["rho"] = c.rho;
    j["model"] = to_string(c.model);
    j["blocks"] = c.blocks;
    j["packet_bits"] = c.packet_bits;
    j["carrier_hz"] = c.carrier_hz;
    j["speed"] = c.speed;
    j["tc_model"] = std::string(pep::to_string(c.tc_model));
    j["d_first"] = c.d_first;
    j["d_second"] = c.d_second;
    j["alpha"] = c.alpha;
    j["d_source_rsu"] = c.d_source_rsu;
    j["steepness"] = c.steepness;
    j["revenue_weight"] = c.revenue_weight;
    j["helper_cost"] = c.helper_cost;
    j["price"] = c.price;
    j["max_power"] = std::isinf(c.max_power) ? nlohmann::ordered_json(nullptr)
                                             : nlohmann::ordered_json(c.max_power);
    j["draws"] = c.draws;
    j["trials"] = c.trials;
    j["seed"] = c.seed;
    j["sweep"] = c.sweep ? nlohmann::ordered_json(c.sweep->to_string()) : nlohmann::ordered_json(nullptr);
    j["format"] = to_string(c.format);
    if (!for_header) {
        j["threads"] = c.threads;
        j["out"] = c.out;
    }
    if (c.corrupt_analytic != 0.0) j["corrupt_analytic"] = c.corrupt_analytic;
    return j;
}

void apply_json(RunConfig& cfg, const json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        try {
            if (variable_setters().count(key) && key != "distance_ratio") {
                set_variable(cfg, key, value.get<double>());
            } else if (key == "model") {
                cfg.model = parse_model_choice(value.get<std::string>());
            } else if (key == "tc_model") {
                cfg.tc_model = pep::parse_coherence_model(value.get<std::string>());
            } else if (key == "max_power") {
                cfg.max_power = value.is_null() ? std::numeric_limits<double>::infinity()
                                                : value.get<double>();
            } else if (key == "draws") {
                cfg.draws = value.get<int>();
            } else if (key == "trials") {
                cfg.trials = value.get<std::uint64_t>();
            } else if (key == "seed") {
                cfg.seed = value.get<std::uint64_t>();
            } else if (key == "threads") {
                cfg.threads = value.get<int>();
            } else if (key == "sweep") {
                if (value.is_null()) {
                    cfg.sweep.reset();
                } else {
                    cfg.sweep = parse_sweep(value.get<std::string>());
                }
            } else if (key == "out") {
                cfg.out = value.get<std::string>();
            } else if (key == "format") {
                cfg.format = parse_output_format(value.get<std::string>());
            } else if (key == "corrupt_analytic") {
                cfg.corrupt_analytic = value.get<double>();
            } else {
                throw ConfigError(fmt::format("unknown config key '{}'", key));
            }
        } catch (const json::exception& e) {
            throw ConfigError(fmt::format("config key '{}': {}", key, e.what()));
        } catch (const DomainError& e) {
            throw ConfigError(fmt::format("config key '{}': {}", key, e.what()));
        }
    }
}

RunConfig load_config_file(const std::string& path, const RunConfig& base) {
    std::ifstream in(path);
    if (!in) throw ConfigError(fmt::format("cannot open config file '{}'", path));
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError(fmt::format("config file '{}': {}", path, e.what()));
    }
    RunConfig cfg = base;
    apply_json(cfg, j);
    return cfg;
}

void write_config_file(const RunConfig& cfg, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError(fmt::format("cannot write config file '{}'", path));
    out << to_json(cfg).dump(2) << '\n';
}

} // namespace vcoop::cli
