#include <doctest.h>

#include <cmath>
#include <numbers>

#include "unit/oracles.hpp"
#include "unit/pep_sim.hpp"
#include "vcoop/errors.hpp"
#include "vcoop/numeric.hpp"
#include "vcoop/pep.hpp"

using namespace vcoop;
using namespace vcoop::pep;

namespace {

ScenarioParams defaults(channel::CorrelationModel model) {
    ScenarioParams p;
    p.model = model;
    return p;
}

double pep_of(const ScenarioParams& p, int blocks) {
    return packet_error_prob(make_scenario(p), blocks);
}

} // namespace

TEST_SUITE("pep") {

TEST_CASE("coherence time") {
    const double f = 5.9e9;
    CHECK(coherence_time(f, 0.0) == doctest::Approx(3.0 * f / (4.0 * std::sqrt(std::numbers::pi))).epsilon(1e-15));
    CHECK(coherence_time(f, 30.0) < coherence_time(f, 0.0));
    CHECK(coherence_time(f, 20.0) == doctest::Approx(2496538740.647684).epsilon(1e-14));
    CHECK(coherence_time(f, 20.0, CoherenceModel::Classical) ==
          doctest::Approx(9.0 * kSpeedOfLight / (16.0 * std::numbers::pi * 20.0 * f)).epsilon(1e-15));
    CHECK(std::isinf(coherence_time(f, 0.0, CoherenceModel::Classical)));
    CHECK_THROWS_AS(coherence_time(0.0, 1.0), DomainError);
    CHECK(parse_coherence_model("classical") == CoherenceModel::Classical);
}

TEST_CASE("block count policy") {
    CHECK(blocks_from_ratio(4.2) == 5);
    CHECK(blocks_from_ratio(0.3) == 1);
    CHECK(blocks_from_ratio(5.0) == 5);
    auto s = make_scenario(ScenarioParams{});
    // The default coherence time is huge, so one block carries the packet.
    CHECK(num_blocks(s) == 1);
    s.tc_model = CoherenceModel::Classical;
    const double tc = coherence_time(s.carrier_hz, s.speed_mps, CoherenceModel::Classical);
    CHECK(raw_block_ratio(s) == doctest::Approx(s.packet_bits / (tc * std::log2(1.1))).epsilon(1e-14));
    CHECK(num_blocks(s) == int(std::ceil(raw_block_ratio(s))));
}

TEST_CASE("make_scenario fills mean SNRs from geometry") {
    ScenarioParams p;
    p.d_first = 2.0;
    p.d_second = 4.0;
    p.alpha = 3.0;
    const auto s = make_scenario(p);
    CHECK(s.source_links.size() == 5);
    CHECK(s.source_links[0].mean_snr == doctest::Approx(p.phi * p.snr / 8.0).epsilon(1e-15));
    CHECK(s.helper_to_rsu.branch.mean_snr == doctest::Approx((1 - p.phi) * p.snr / 64.0).epsilon(1e-15));
    p.n_helpers = 0;
    CHECK_THROWS_AS(make_scenario(p), DomainError);
}

TEST_CASE("best_relay_outage") {
    channel::FadingLink l{1.0, 1.0, 1.0, 2.0};
    CHECK(best_relay_outage({l}, 0.7) == channel::iid_snr_cdf(l, 0.7));
    const std::vector<channel::FadingLink> five(5, l);
    CHECK(best_relay_outage(five, std::log(2.0)) == doctest::Approx(0.03125).epsilon(1e-14));

    std::vector<channel::FadingLink> links(5, channel::FadingLink{1.0, 158.1, 1.0, 2.0});
    const double want = best_relay_outage(links, 0.1);
    std::mt19937_64 eng(17);
    const int n = 100000;
    int hits = 0;
    for (int i = 0; i < n; ++i) {
        double best = 0.0;
        for (int k = 0; k < 5; ++k) best = std::max(best, oracle::gamma_power(eng, 1.0, 158.1));
        hits += best < 0.1;
    }
    CHECK(oracle::consistent(hits, n, want));
}

TEST_CASE("combine_outages and packet error arithmetic") {
    CHECK(combine_outages(0.0, 0.0) == 0.0);
    for (double pb : {0.0, 0.3, 1.0}) CHECK(combine_outages(1.0, pb) == 1.0);
    CHECK(packet_error_from_block(0.2, 1) == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(std::abs(packet_error_from_block(0.09, 5) - 0.37596785489999984) < 1e-12);
    CHECK(std::abs(packet_error_from_block(0.09, 20) - 0.8483550869498241) < 1e-12);
    CHECK(packet_error_from_block(0.0, 7) == 0.0);
    CHECK(packet_error_from_block(1.0, 7) == 1.0);
    CHECK_THROWS_AS(packet_error_from_block(0.5, 0), DomainError);
}

TEST_CASE("unpowered second hop is certain outage") {
    ScenarioParams p;
    p.phi = 1.0;
    const auto be = block_error(make_scenario(p));
    CHECK(be.p_second == 1.0);
    CHECK(be.p_block == 1.0);
}

TEST_CASE("zero threshold never fails") {
    ScenarioParams p;
    p.gamma0 = 0.0;
    const auto s = make_scenario(p);
    CHECK(block_error_prob(s) == 0.0);
    CHECK(packet_error_prob(s, 10) == 0.0);
}

TEST_CASE("default scenario against end-to-end simulation") {
    const int n = 100000;
    for (auto model : {channel::CorrelationModel::CC, channel::CorrelationModel::EC}) {
        const auto s = make_scenario(defaults(model));
        const double p = block_error_prob(s);
        const double e = oracle::simulate_block_outage(s, n, 1234);
        CHECK(oracle::consistent(std::lround(e * n), n, p));
    }
}

TEST_CASE("analytic_pep provenance") {
    const auto cc = analytic_pep(make_scenario(defaults(channel::CorrelationModel::CC)), 10);
    CHECK(cc.provenance == Provenance::Quadrature);
    const auto ec = analytic_pep(make_scenario(defaults(channel::CorrelationModel::EC)), 10);
    CHECK(ec.provenance == Provenance::ClosedForm);
    CHECK(ec.value == doctest::Approx(packet_error_from_block(ec.block_value, 10)).epsilon(1e-15));
}

TEST_CASE("inclusion-exclusion bounds") {
    for (double g_db : {-20.0, -10.0, 0.0, 10.0}) {
        for (double rho : {0.1, 0.5, 0.9}) {
            auto p = defaults(channel::CorrelationModel::CC);
            p.gamma0 = db_to_linear(g_db);
            p.rho = rho;
            const auto be = block_error(make_scenario(p));
            CHECK(be.p_block >= std::max(be.p_first, be.p_second));
            CHECK(be.p_block <= be.p_first + be.p_second + 1e-15);
        }
    }
}

TEST_CASE("curves for different L converge at high threshold") {
    for (double g_db = -20.0; g_db <= 20.0; g_db += 1.0) {
        auto p = defaults(channel::CorrelationModel::EC);
        p.gamma0 = db_to_linear(g_db);
        const auto s = make_scenario(p);
        if (block_error_prob(s) > 0.999) {
            CHECK(std::abs(packet_error_prob(s, 5) - packet_error_prob(s, 20)) < 1e-2);
        }
    }
}

TEST_CASE("monotonicity around the defaults") {
    for (auto model : {channel::CorrelationModel::CC, channel::CorrelationModel::EC}) {
        const auto base = defaults(model);
        const auto nondecreasing = [&](auto set, std::initializer_list<double> values, int blocks = 10) {
            double prev = -1.0;
            for (double v : values) {
                auto p = base;
                set(p, v);
                const double pe = pep_of(p, blocks);
                CHECK(pe >= prev - 1e-13);
                prev = pe;
            }
        };
        nondecreasing([](ScenarioParams& p, double v) { p.gamma0 = db_to_linear(v); }, {-20, -10, -5, 0, 5});
        nondecreasing([](ScenarioParams& p, double v) { p.rho = v; }, {0.0, 0.1, 0.5, 0.9});
        nondecreasing([](ScenarioParams& p, double v) { p.d_first = v; }, {5, 9.8, 20, 40});
        nondecreasing([](ScenarioParams& p, double v) { p.d_second = v; }, {5, 9.8, 20, 40});
        nondecreasing([](ScenarioParams& p, double v) { p.snr = db_to_linear(-v); }, {-40, -25, -15, -5});
        nondecreasing([](ScenarioParams& p, double v) { p.n_helpers = int(-v); }, {-10, -5, -2, -1});
        nondecreasing([](ScenarioParams& p, double v) { p.antennas = int(-v); }, {-16, -10, -4, -1});
        double prev = -1.0;
        for (int L : {1, 5, 10, 20}) {
            const double pe = pep_of(base, L);
            CHECK(pe >= prev);
            prev = pe;
        }
    }
}

TEST_CASE("scenario validation") {
    auto s = make_scenario(ScenarioParams{});
    s.gamma0 = -1.0;
    CHECK_THROWS_AS(s.validate(), DomainError);
    s = make_scenario(ScenarioParams{});
    s.source_links.clear();
    CHECK_THROWS_AS(block_error(s), DomainError);
    s = make_scenario(ScenarioParams{});
    s.speed_mps = -1.0;
    CHECK_THROWS_AS(s.validate(), DomainError);
}

}
