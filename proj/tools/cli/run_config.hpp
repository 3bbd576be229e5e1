#pragma once

// Resolved run configuration for the command-line tool. SNR-like inputs are
// in dB here and converted to linear values only when a scenario is built.

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "vcoop/game.hpp"
#include "vcoop/pep.hpp"

namespace vcoop::cli {

inline constexpr const char* kToolName = "vcoop";
inline constexpr const char* kToolVersion = "0.3.0";

/// Bad flags, bad config files, out-of-range parameters (exit status 1).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ModelChoice { CC, EC, Both };
enum class OutputFormat { Csv, Json };
enum class SweepScale { Linear, Log };

struct SweepSpec {
    std::string variable;
    double start = 0.0;
    double stop = 0.0;
    int points = 2;
    SweepScale scale = SweepScale::Linear;

    std::vector<double> values() const;
    std::string to_string() const;
};

/// Parses VAR:START:STOP:POINTS[:log].
SweepSpec parse_sweep(const std::string& text);

struct RunConfig {
    // link budget and array
    double snr_db = 25.0;
    double gamma0_db = -10.0;
    double noise = 1.0;  // N0 in Watts; only the game depends on its absolute value
    int n_helpers = 5;
    int antennas = 10;
    double phi = 0.5;
    double m_fading = 1.0;
    double rho = 0.1;
    ModelChoice model = ModelChoice::Both;

    // blocks: a positive value forces L, 0 derives it from the packet and speed
    int blocks = 10;
    double packet_bits = 8000.0;
    double carrier_hz = 5.9e9;
    double speed = 20.0;
    pep::CoherenceModel tc_model = pep::CoherenceModel::CarrierScaled;

    // geometry
    double d_first = 9.8;
    double d_second = 9.8;
    double alpha = 2.5;
    // When positive, the helper sits at d_first from the source on a line
    // perpendicular to the source-RSU segment: d_second = hypot(d_source_rsu, d_first).
    double d_source_rsu = 0.0;

    // game
    double steepness = 3.0;
    double revenue_weight = 2000.0;
    double helper_cost = 1.0;
    double price = 10.0;
    double max_power = std::numeric_limits<double>::infinity();
    int draws = 0;  // 0: unit-mean channel (|h|^2 = 1, eta = M)

    // execution
    std::uint64_t trials = 100000;
    std::uint64_t seed = 1;
    int threads = 0;  // 0: hardware concurrency; never changes results
    std::optional<SweepSpec> sweep;
    std::string out = "-";
    OutputFormat format = OutputFormat::Csv;

    // Test hook: added to every analytic block outage in `validate`.
    double corrupt_analytic = 0.0;

    void validate() const;

    double gamma0() const;
    double effective_d_second() const;
    int resolved_threads() const;
    std::vector<channel::CorrelationModel> models() const;
};

/// Sets one sweepable variable; integer variables are rounded.
void set_variable(RunConfig& cfg, const std::string& name, double value);
double get_variable(const RunConfig& cfg, const std::string& name);
bool is_sweep_variable(const std::string& name);
const std::vector<std::string>& sweep_variables();

pep::ScenarioParams scenario_params(const RunConfig& cfg, channel::CorrelationModel model);
pep::Scenario build_scenario(const RunConfig& cfg, channel::CorrelationModel model);
int resolve_blocks(const RunConfig& cfg, const pep::Scenario& scenario);
game::GameParams game_params(const RunConfig& cfg);

/// Full configuration. Execution-only fields (threads, out) are left out
/// when `for_header` is set so that output does not depend on them.
nlohmann::ordered_json to_json(const RunConfig& cfg, bool for_header = false);

/// Overlays the keys present in `j` onto `cfg`. Unknown keys are errors.
void apply_json(RunConfig& cfg, const nlohmann::json& j);

RunConfig load_config_file(const std::string& path, const RunConfig& base = {});
void write_config_file(const RunConfig& cfg, const std::string& path);

std::string to_string(ModelChoice choice);
ModelChoice parse_model_choice(const std::string& text);
std::string to_string(OutputFormat format);
OutputFormat parse_output_format(const std::string& text);

} // namespace vcoop::cli
