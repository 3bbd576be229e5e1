#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>

#include <fmt/format.h>

#include "vcoop/errors.hpp"
#include "vcoop/game.hpp"
#include "vcoop/montecarlo.hpp"
#include "vcoop/numeric.hpp"
#include "vcoop/specfun.hpp"

#ifndef VCOOP_RECIPE_DIR
#define VCOOP_RECIPE_DIR "recipes"
#endif

namespace vcoop::cli {

namespace {

// Stream ids keep the game's channel draws apart from the validation trials.
constexpr std::uint64_t kValidateStream = 0;
constexpr std::uint64_t kGameStream = 0x67616d65;

std::string model_tag(channel::CorrelationModel m) { return std::string(channel::to_string(m)); }

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    const double upper = v[mid];
    if (v.size() % 2 == 1) return upper;
    const double lower = *std::max_element(v.begin(), v.begin() + mid);
    return 0.5 * (lower + upper);
}

double mean(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    NeumaierSum s;
    for (double x : v) s.add(x);
    return s.value() / double(v.size());
}

double to_db_or_neg_inf(double v) { return v > 0.0 ? linear_to_db(v) : -HUGE_VAL; }

} // namespace

std::vector<SweepPoint> sweep_points(const RunConfig& cfg, const std::string& default_variable) {
    std::vector<SweepPoint> points;
    if (!cfg.sweep) {
        points.push_back({get_variable(cfg, default_variable), cfg});
        return points;
    }
    for (double v : cfg.sweep->values()) {
        RunConfig at = cfg;
        set_variable(at, cfg.sweep->variable, v);
        points.push_back({v, at});
    }
    return points;
}

CommandResult cmd_pep(const RunConfig& cfg) {
    cfg.validate();
    const auto models = cfg.models();
    const std::string x_name = cfg.sweep ? cfg.sweep->variable : "gamma0_db";

    CommandResult res;
    res.table.columns = {x_name, "L", "P_A"};
    for (auto m : models) {
        const auto tag = model_tag(m);
        res.table.columns.push_back("P_B_" + tag);
        res.table.columns.push_back("P_block_" + tag);
        res.table.columns.push_back("PEP_" + tag);
    }

    for (const auto& point : sweep_points(cfg, "gamma0_db")) {
        point.cfg.validate();
        std::vector<Cell> row{point.x};
        bool first = true;
        for (auto m : models) {
            const auto scenario = build_scenario(point.cfg, m);
            const int blocks = resolve_blocks(point.cfg, scenario);
            const auto be = pep::block_error(scenario);
            if (first) {
                row.push_back(static_cast<long long>(blocks));
                row.push_back(be.p_first);
                first = false;
            }
            row.push_back(be.p_second);
            row.push_back(be.p_block);
            row.push_back(pep::packet_error_from_block(be.p_block, blocks));
        }
        res.table.add_row(std::move(row));
    }
    res.summary = fmt::format("pep: {} point(s), model {}", res.table.rows.size(), to_string(cfg.model));
    return res;
}

CommandResult cmd_validate(const RunConfig& cfg) {
    cfg.validate();
    if (cfg.trials < 1000) throw ConfigError("validate needs at least 1000 trials");
    const auto models = cfg.models();
    const std::string x_name = cfg.sweep ? cfg.sweep->variable : "gamma0_db";
    const int threads = cfg.resolved_threads();

    CommandResult res;
    res.table.columns = {x_name,        "model",  "L",    "analytic_block", "mc_block",
                         "outages",     "trials", "analytic_pep",       "mc_pep",
                         "half_width",  "z",      "pass"};

    double worst = 0.0;
    int failures = 0;
    for (const auto& point : sweep_points(cfg, "gamma0_db")) {
        point.cfg.validate();
        for (auto m : models) {
            const auto scenario = build_scenario(point.cfg, m);
            const int blocks = resolve_blocks(point.cfg, scenario);
            const double analytic =
                std::clamp(pep::block_error_prob(scenario) + cfg.corrupt_analytic, 0.0, 1.0);

            const auto count =
                mc::count_outages(scenario, cfg.trials, {cfg.seed, kValidateStream}, threads);
            const auto est = mc::pep_from_count(count, blocks);

            const double se = std::sqrt(analytic * (1.0 - analytic) / double(count.trials));
            const double diff = count.fraction() - analytic;
            double z = 0.0;
            if (se > 0.0) {
                z = diff / se;
            } else if (diff != 0.0) {
                z = diff > 0 ? HUGE_VAL : -HUGE_VAL;
            }
            const bool pass = mc::count_agrees(count, analytic);
            if (!pass) ++failures;
            worst = std::max(worst, std::abs(z));

            res.table.add_row({point.x, model_tag(m), static_cast<long long>(blocks), analytic,
                               count.fraction(), static_cast<long long>(count.outages),
                               static_cast<long long>(count.trials),
                               pep::packet_error_from_block(analytic, blocks), est.value,
                               est.half_width, z, pass});
        }
    }
    const std::size_t n = res.table.rows.size();
    res.exit_code = failures == 0 ? kExitOk : kExitValidation;
    res.summary = fmt::format("validate: {} ({} of {} comparisons consistent at 3 SE, max |z| = {:.3f})",
                              failures == 0 ? "PASS" : "FAIL", n - failures, n, worst);
    res.table.notes.push_back(res.summary);
    return res;
}

namespace {

struct GameRow {
    double phi_star, p_star, P_star, P_star_mean, U_s, U_H, no_trade, q, foc;
};

GameRow evaluate_game(const RunConfig& cfg, channel::CorrelationModel model) {
    const auto params = game_params(cfg);
    const double d_second = cfg.effective_d_second();

    std::vector<game::ChannelRealization> channels;
    if (cfg.draws == 0) {
        channels.push_back({1.0, double(cfg.antennas), cfg.d_first, d_second, cfg.alpha, cfg.noise});
    } else {
        channel::CorrelatedArray array;
        array.antennas = cfg.antennas;
        array.model = model;
        array.rho = cfg.rho;
        array.branch.m = cfg.m_fading;
        const mc::CorrelatedGammaSampler sampler(array);
        const int m = mc::integer_shape(cfg.m_fading);
        Eigen::VectorXd gains;
        for (int k = 0; k < cfg.draws; ++k) {
            mc::TrialRng rng({cfg.seed, kGameStream}, static_cast<std::uint64_t>(k));
            double h = 0.0;
            for (int i = 0; i < cfg.n_helpers; ++i) h = std::max(h, mc::sample_gamma_power(m, rng));
            sampler.sample(rng, gains);
            channels.push_back({h, gains.sum(), cfg.d_first, d_second, cfg.alpha, cfg.noise});
        }
    }

    std::vector<double> phi, p_star, power, us, uh, q, foc;
    int no_trade = 0;
    for (const auto& ch : channels) {
        phi.push_back(game::optimal_phi(ch));
        p_star.push_back(game::optimal_price(ch, params));
        q.push_back(game::feasibility_ratio(ch, params));
        double P = 0.0;
        try {
            P = game::optimal_power(ch, params);
            foc.push_back(std::abs(game::source_marginal(P, ch, params)));
        } catch (const NoInteriorOptimum&) {
            ++no_trade;
        }
        power.push_back(P);
        us.push_back(game::utility_source(P, ch, params));
        uh.push_back(game::utility_helper(P, phi.back(), params.price, params.helper_cost));
    }
    GameRow r{};
    r.phi_star = median(phi);
    r.p_star = median(p_star);
    r.P_star = median(power);
    r.P_star_mean = mean(power);
    r.U_s = mean(us);
    r.U_H = mean(uh);
    r.no_trade = double(no_trade) / double(channels.size());
    r.q = median(q);
    r.foc = foc.empty() ? 0.0 : *std::max_element(foc.begin(), foc.end());
    return r;
}

} // namespace

CommandResult cmd_game(const RunConfig& cfg) {
    cfg.validate();
    const auto models = cfg.models();
    const std::string x_name = cfg.sweep ? cfg.sweep->variable : "price";

    CommandResult res;
    // The price gets its own column unless it is the swept variable already.
    const bool price_column = x_name != "price";
    res.table.columns = {x_name, "model"};
    if (price_column) res.table.columns.push_back("price");
    for (const char* c : {"phi_star", "p_star", "P_star", "P_star_db", "P_star_mean", "U_s", "U_H",
                          "no_trade", "q", "foc_residual"}) {
        res.table.columns.push_back(c);
    }
    for (const auto& point : sweep_points(cfg, "price")) {
        point.cfg.validate();
        for (auto m : models) {
            const GameRow r = evaluate_game(point.cfg, m);
            std::vector<Cell> row{point.x, model_tag(m)};
            if (price_column) row.push_back(point.cfg.price);
            for (Cell c : std::initializer_list<Cell>{
                     r.phi_star, r.p_star, r.P_star, to_db_or_neg_inf(r.P_star), r.P_star_mean,
                     r.U_s, r.U_H, r.no_trade, r.q, r.foc}) {
                row.push_back(std::move(c));
            }
            res.table.add_row(std::move(row));
        }
    }
    res.header_extra["channel"] =
        cfg.draws == 0 ? std::string("unit-mean gains")
                       : fmt::format("{} seeded draws; P_star and prices are medians, utilities means",
                                     cfg.draws);
    res.summary = fmt::format("game: {} row(s)", res.table.rows.size());
    return res;
}

CommandResult cmd_selftest(const RunConfig& cfg) {
    CommandResult res;
    res.table.columns = {"check", "value", "expected", "tolerance", "pass"};
    int failures = 0;
    const auto check = [&](const std::string& name, double value, double expected, double tol) {
        const bool pass = std::abs(value - expected) <= tol;
        if (!pass) ++failures;
        res.table.add_row({name, value, expected, tol, pass});
    };

    check("reg_lower_gamma(1, ln 2)", specfun::reg_lower_gamma(1.0, std::log(2.0)), 0.5, 1e-15);
    check("kummer_1f1(1, 1, 1)", specfun::kummer_1f1(1.0, 1.0, 1.0), std::exp(1.0), 1e-10);
    check("ec_lambda(10, 0)", channel::ec_lambda(10, 0.0), 10.0, 0.0);

    channel::CorrelatedArray array{10, channel::CorrelationModel::CC, 1e-6, {1.0, 31.6, 1.0, 2.0}};
    const double iid = channel::iid_mrc_cdf(10, array.branch, 100.0);
    check("cc cdf at rho=1e-6 / iid", channel::cc_combiner_cdf(array, 100.0) / iid, 1.0, 1e-3);
    array.model = channel::CorrelationModel::EC;
    check("ec cdf at rho=1e-6 / iid", channel::ec_combiner_cdf(array, 100.0) / iid, 1.0, 1e-3);

    game::GameParams gp;
    check("satisfaction(gamma0)", game::satisfaction(gp.gamma0, gp), 0.5, 0.0);
    const game::ChannelRealization ch{0.8, 9.0, 10.0, 30.0, 2.0, 0.05};
    gp.revenue_weight = 50.0;
    gp.price = 0.2 * game::price_ceiling(ch, gp);
    const double P = game::optimal_power(ch, gp);
    check("source marginal at P*", game::source_marginal(P, ch, gp), 0.0, 1e-9);

    RunConfig small = cfg;
    small.sweep.reset();
    small.gamma0_db = -5.0;
    small.model = ModelChoice::EC;
    small.trials = 20000;
    const auto scenario = build_scenario(small, channel::CorrelationModel::EC);
    const auto count = mc::count_outages(scenario, small.trials, {small.seed, 0}, small.resolved_threads());
    const double p = pep::block_error_prob(scenario);
    const double z = (count.fraction() - p) / std::sqrt(p * (1.0 - p) / double(count.trials));
    check("block outage z-score (EC, -5 dB, 2e4 trials)", z, 0.0, 4.0);

    res.exit_code = failures == 0 ? kExitOk : kExitValidation;
    res.summary = fmt::format("selftest: {} ({} checks, {} failed)", failures == 0 ? "PASS" : "FAIL",
                              res.table.rows.size(), failures);
    return res;
}

nlohmann::ordered_json make_header(const std::string& command, const RunConfig& cfg,
                                   const nlohmann::ordered_json& extra) {
    nlohmann::ordered_json h;
    h["tool"] = kToolName;
    h["version"] = kToolVersion;
    h["command"] = command;
    h["seed"] = cfg.seed;
    h["config"] = to_json(cfg, true);
    for (const auto& [key, value] : extra.items()) h[key] = value;
    return h;
}

void write_result(const std::string& command, const RunConfig& cfg, const CommandResult& result,
                  std::ostream& fallback) {
    std::ofstream file;
    std::ostream* out = &fallback;
    if (cfg.out != "-" && !cfg.out.empty()) {
        file.open(cfg.out, std::ios::binary);
        if (!file) throw ConfigError(fmt::format("cannot open output file '{}'", cfg.out));
        out = &file;
    }
    const auto header = make_header(command, cfg, result.header_extra);
    if (cfg.format == OutputFormat::Csv) {
        write_csv(*out, header, result.table);
    } else {
        write_json_lines(*out, header, result.table);
    }
    out->flush();
}

std::string default_recipe_dir() {
    if (const char* env = std::getenv("VCOOP_RECIPES")) return env;
    return VCOOP_RECIPE_DIR;
}

} // namespace vcoop::cli
