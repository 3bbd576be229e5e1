#include "app.hpp"

#include <algorithm>
#include <optional>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "commands.hpp"
#include "vcoop/errors.hpp"

namespace vcoop::cli {

namespace {

// Flag values stay empty unless given, so they can be laid over the config file.
struct Flags {
    std::optional<std::string> config_path;
    std::optional<std::string> write_config;
    std::optional<std::string> recipes;

    std::optional<double> snr_db, gamma0_db, noise, phi, m_fading, rho;
    std::optional<int> n_helpers, antennas, blocks, draws, threads;
    std::optional<std::string> model, tc_model, sweep, out, format;
    std::optional<double> packet_bits, carrier_hz, speed;
    std::optional<double> d_first, d_second, alpha, d_source_rsu;
    std::optional<double> steepness, revenue_weight, helper_cost, price, max_power;
    std::optional<std::uint64_t> trials, seed;
    std::optional<double> corrupt_analytic;
};

void add_flags(CLI::App& app, Flags& f) {
    app.add_option("--config", f.config_path, "JSON config file (flags override it)");
    app.add_option("--write-config", f.write_config, "Write the resolved config as JSON");
    app.add_option("--recipes", f.recipes, "Directory holding figN.json recipes");

    app.add_option("--snr-db", f.snr_db, "Transmit SNR P/N0 in dB");
    app.add_option("--gamma0-db", f.gamma0_db, "Outage threshold in dB");
    app.add_option("--noise", f.noise, "Noise power N0 in Watts");
    app.add_option("--n-helpers", f.n_helpers, "Number of candidate helpers N");
    app.add_option("--m-antennas", f.antennas, "RSU antennas M");
    app.add_option("--phi", f.phi, "Share of power spent in the first phase");
    app.add_option("--m-fading", f.m_fading, "Nakagami shape m");
    app.add_option("--rho", f.rho, "Branch power correlation");
    app.add_option("--model", f.model, "Array correlation model")
        ->check(CLI::IsMember({"cc", "ec", "both"}));
    app.add_option("--blocks", f.blocks, "Force the number of blocks L");
    app.add_option("--packet-bits", f.packet_bits, "Packet size (derives L unless --blocks)");
    app.add_option("--carrier-hz", f.carrier_hz, "Carrier frequency in Hz (derives L)");
    app.add_option("--speed", f.speed, "Vehicle speed in m/s (derives L)");
    app.add_option("--tc-model", f.tc_model, "Coherence-time formula")
        ->check(CLI::IsMember({"paper", "classical"}));
    app.add_option("--d-first", f.d_first, "Source-helper distance in m");
    app.add_option("--d-second", f.d_second, "Helper-RSU distance in m");
    app.add_option("--d-source-rsu", f.d_source_rsu,
                   "Source-RSU distance in m; the helper then sits off the source-RSU line");
    app.add_option("--alpha", f.alpha, "Path-loss exponent");
    app.add_option("--steepness", f.steepness, "Satisfaction sigmoid steepness a");
    app.add_option("--revenue-weight", f.revenue_weight, "Revenue per unit satisfaction w_p");
    app.add_option("--helper-cost", f.helper_cost, "Helper cost per Watt c");
    app.add_option("--price", f.price, "Helper price per Watt p_i");
    app.add_option("--max-power", f.max_power, "Cap on the purchased power (default none)");
    app.add_option("--draws", f.draws, "Channel draws averaged by the game (0: unit-mean gains)");
    app.add_option("--trials", f.trials, "Monte Carlo trials per point");
    app.add_option("--seed", f.seed, "Random seed");
    app.add_option("--threads", f.threads, "Worker threads (0: all cores; results do not change)");
    app.add_option("--sweep", f.sweep, "VAR:START:STOP:POINTS[:log]");
    app.add_option("--out", f.out, "Output path ('-' for stdout)");
    app.add_option("--format", f.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--corrupt-analytic", f.corrupt_analytic)->group("");
}

RunConfig resolve(const Flags& f) {
    RunConfig cfg;
    if (f.config_path) cfg = load_config_file(*f.config_path, cfg);

    const auto set = [](auto& field, const auto& flag) {
        if (flag) field = *flag;
    };
    set(cfg.snr_db, f.snr_db);
    set(cfg.gamma0_db, f.gamma0_db);
    set(cfg.noise, f.noise);
    set(cfg.n_helpers, f.n_helpers);
    set(cfg.antennas, f.antennas);
    set(cfg.phi, f.phi);
    set(cfg.m_fading, f.m_fading);
    set(cfg.rho, f.rho);
    if (f.model) cfg.model = parse_model_choice(*f.model);
    set(cfg.packet_bits, f.packet_bits);
    set(cfg.carrier_hz, f.carrier_hz);
    set(cfg.speed, f.speed);
    // Packet or mobility flags without --blocks ask for L to be derived.
    if ((f.packet_bits || f.carrier_hz || f.speed) && !f.blocks) cfg.blocks = 0;
    set(cfg.blocks, f.blocks);
    if (f.tc_model) cfg.tc_model = pep::parse_coherence_model(*f.tc_model);
    set(cfg.d_first, f.d_first);
    set(cfg.d_second, f.d_second);
    set(cfg.d_source_rsu, f.d_source_rsu);
    set(cfg.alpha, f.alpha);
    set(cfg.steepness, f.steepness);
    set(cfg.revenue_weight, f.revenue_weight);
    set(cfg.helper_cost, f.helper_cost);
    set(cfg.price, f.price);
    set(cfg.max_power, f.max_power);
    set(cfg.draws, f.draws);
    set(cfg.trials, f.trials);
    set(cfg.seed, f.seed);
    set(cfg.threads, f.threads);
    if (f.sweep) cfg.sweep = parse_sweep(*f.sweep);
    set(cfg.out, f.out);
    if (f.format) cfg.format = parse_output_format(*f.format);
    set(cfg.corrupt_analytic, f.corrupt_analytic);
    cfg.validate();
    return cfg;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Packet error probability and pricing game for a two-hop vehicular uplink",
                 kToolName};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(0, 1);
    app.fallthrough();

    Flags flags;
    add_flags(app, flags);

    auto* pep_cmd = app.add_subcommand("pep", "Closed-form packet error probability sweep");
    auto* validate_cmd = app.add_subcommand("validate", "Closed form against Monte Carlo");
    auto* game_cmd = app.add_subcommand("game", "Pricing game equilibrium sweep");
    auto* reproduce_cmd = app.add_subcommand("reproduce", "Run a frozen figure recipe");
    std::string figure;
    reproduce_cmd->add_option("figure", figure, "fig2 ... fig6")
        ->required()
        ->check(CLI::IsMember({"fig2", "fig3", "fig4", "fig5", "fig6"}));
    auto* selftest_cmd = app.add_subcommand("selftest", "Quick internal consistency checks");
    for (auto* sub : {pep_cmd, validate_cmd, game_cmd, reproduce_cmd, selftest_cmd}) {
        sub->fallthrough();
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    std::string command;
    try {
        const RunConfig cfg = resolve(flags);
        if (flags.write_config) write_config_file(cfg, *flags.write_config);

        CommandResult result;
        if (pep_cmd->parsed()) {
            command = "pep";
            result = cmd_pep(cfg);
        } else if (validate_cmd->parsed()) {
            command = "validate";
            result = cmd_validate(cfg);
        } else if (game_cmd->parsed()) {
            command = "game";
            result = cmd_game(cfg);
        } else if (reproduce_cmd->parsed()) {
            command = "reproduce";
            result = cmd_reproduce(figure, flags.recipes.value_or(default_recipe_dir()), cfg);
        } else if (selftest_cmd->parsed()) {
            command = "selftest";
            result = cmd_selftest(cfg);
        } else {
            if (flags.write_config) return kExitOk;
            err << app.help();
            return kExitConfig;
        }
        write_result(command, cfg, result, out);
        if (!result.summary.empty()) err << result.summary << '\n';
        return result.exit_code;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const DomainError& e) {
        err << "error: invalid parameters: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "error: numeric failure" << (command.empty() ? "" : " in " + command) << ": "
            << e.what() << '\n';
        return kExitNumeric;
    }
}

} // namespace vcoop::cli
