#pragma once

#include <ostream>
#include <string>

#include <json.hpp>

#include "run_config.hpp"
#include "table.hpp"

namespace vcoop::cli {

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitNumeric = 2, kExitValidation = 3 };

struct CommandResult {
    Table table;
    int exit_code = kExitOk;
    std::string summary;
    nlohmann::ordered_json header_extra = nlohmann::ordered_json::object();
};

/// Sweep points in order; a config without a sweep yields itself once.
struct SweepPoint {
    double x;
    RunConfig cfg;
};
std::vector<SweepPoint> sweep_points(const RunConfig& cfg, const std::string& default_variable);

CommandResult cmd_pep(const RunConfig& cfg);
CommandResult cmd_validate(const RunConfig& cfg);
CommandResult cmd_game(const RunConfig& cfg);
CommandResult cmd_selftest(const RunConfig& cfg);
CommandResult cmd_reproduce(const std::string& figure, const std::string& recipe_dir,
                            const RunConfig& exec);

/// Header object: tool, version, command, seed, resolved configuration.
nlohmann::ordered_json make_header(const std::string& command, const RunConfig& cfg,
                                   const nlohmann::ordered_json& extra);

/// Writes the result in the configured format to cfg.out ("-" is `fallback`).
void write_result(const std::string& command, const RunConfig& cfg, const CommandResult& result,
                  std::ostream& fallback);

/// Default location of the figure recipes.
std::string default_recipe_dir();

} // namespace vcoop::cli
