#include "vcoop/pep.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "vcoop/errors.hpp"

namespace vcoop::pep {

std::string_view to_string(CoherenceModel model) {
    return model == CoherenceModel::CarrierScaled ? "paper" : "classical";
}

CoherenceModel parse_coherence_model(std::string_view text) {
    if (text == "paper") return CoherenceModel::CarrierScaled;
    if (text == "classical") return CoherenceModel::Classical;
    throw DomainError("unknown coherence-time model '" + std::string(text) + "'");
}

std::string_view to_string(Provenance provenance) {
    switch (provenance) {
    case Provenance::ClosedForm: return "closed-form";
    case Provenance::Quadrature: return "quadrature";
    case Provenance::MonteCarlo: return "monte-carlo";
    }
    return "unknown";
}

void Scenario::validate() const {
    if (source_links.empty()) throw DomainError("Scenario: need at least one helper");
    for (const auto& link : source_links) link.validate();
    helper_to_rsu.validate();
    budget.validate();
    if (!(d_second > 0.0)) throw DomainError("Scenario: helper-to-RSU distance must be positive");
    if (!(gamma0 >= 0.0) || !std::isfinite(gamma0)) {
        throw DomainError("Scenario: gamma0 must be non-negative and finite");
    }
    if (!(packet_bits > 0.0)) throw DomainError("Scenario: packet size must be positive");
    if (!(carrier_hz > 0.0)) throw DomainError("Scenario: carrier frequency must be positive");
    if (!(speed_mps >= 0.0)) throw DomainError("Scenario: speed must be non-negative");
}

Scenario make_scenario(const ScenarioParams& p) {
    if (p.n_helpers < 1) throw DomainError("make_scenario: need at least one helper");
    Scenario s;
    s.budget = {p.snr * p.noise, p.phi, p.noise};
    s.budget.validate();

    const auto first = channel::mean_snr(s.budget, channel::Phase::First, p.d_first, p.alpha);
    const auto second = channel::mean_snr(s.budget, channel::Phase::Second, p.d_second, p.alpha);

    channel::FadingLink link{p.m, first.value, p.d_first, p.alpha};
    s.source_links.assign(static_cast<std::size_t>(p.n_helpers), link);

    s.helper_to_rsu.antennas = p.antennas;
    s.helper_to_rsu.model = p.model;
    s.helper_to_rsu.rho = p.rho;
    s.helper_to_rsu.branch = {p.m, second.unpowered ? 0.0 : second.value, p.d_second, p.alpha};
    s.d_second = p.d_second;

    s.gamma0 = p.gamma0;
    s.packet_bits = p.packet_bits;
    s.carrier_hz = p.carrier_hz;
    s.speed_mps = p.speed_mps;
    s.tc_model = p.tc_model;
    s.validate();
    return s;
}

double coherence_time(double carrier_hz, double speed_mps, CoherenceModel model) {
    if (!(carrier_hz > 0.0)) throw DomainError("coherence_time: carrier must be positive");
    if (!(speed_mps >= 0.0)) throw DomainError("coherence_time: speed must be non-negative");
    const double c = kSpeedOfLight;
    if (model == CoherenceModel::CarrierScaled) {
        return 3.0 * c * carrier_hz / (4.0 * std::sqrt(std::numbers::pi) * (c + speed_mps));
    }
    if (speed_mps == 0.0) return HUGE_VAL;
    return 9.0 * c / (16.0 * std::numbers::pi * speed_mps * carrier_hz);
}

double raw_block_ratio(const Scenario& scenario) {
    if (!(scenario.gamma0 > 0.0)) throw DomainError("raw_block_ratio: needs gamma0 > 0");
    const double tc = coherence_time(scenario.carrier_hz, scenario.speed_mps, scenario.tc_model);
    return scenario.packet_bits / (tc * std::log2(1.0 + scenario.gamma0));
}

int blocks_from_ratio(double ratio) {
    if (std::isnan(ratio)) throw DomainError("blocks_from_ratio: ratio is NaN");
    if (!(ratio > 1.0)) return 1;
    if (ratio >= 1e9) throw DomainError("blocks_from_ratio: block count out of range");
    return static_cast<int>(std::ceil(ratio));
}

int num_blocks(const Scenario& scenario) {
    scenario.validate();
    return blocks_from_ratio(raw_block_ratio(scenario));
}

double best_relay_outage(const std::vector<channel::FadingLink>& source_links, double gamma0) {
    if (source_links.empty()) throw DomainError("best_relay_outage: need at least one helper");
    double product = 1.0;
    for (const auto& link : source_links) {
        product *= channel::iid_snr_cdf(link, gamma0);
        if (product == 0.0) break;
    }
    return product;
}

double combine_outages(double p_first, double p_second) {
    if (!(p_first >= 0.0 && p_first <= 1.0) || !(p_second >= 0.0 && p_second <= 1.0)) {
        throw DomainError("combine_outages: probabilities must lie in [0, 1]");
    }
    if (p_first == 1.0 || p_second == 1.0) return 1.0;
    // 1 - (1 - a)(1 - b) rearranged so that small values keep their precision.
    return std::clamp(p_first + p_second - p_first * p_second, 0.0, 1.0);
}

BlockError block_error(const Scenario& scenario, const quad::QuadratureControl& ctl) {
    scenario.validate();
    BlockError out;
    out.p_first = best_relay_outage(scenario.source_links, scenario.gamma0);
    out.p_second = channel::combiner_cdf(scenario.helper_to_rsu, scenario.gamma0, ctl);
    out.p_block = combine_outages(out.p_first, out.p_second);
    return out;
}

double block_error_prob(const Scenario& scenario, const quad::QuadratureControl& ctl) {
    return block_error(scenario, ctl).p_block;
}

double packet_error_from_block(double p_block, int blocks) {
    if (blocks < 1) throw DomainError("packet_error_from_block: need at least one block");
    if (!(p_block >= 0.0 && p_block <= 1.0)) {
        throw DomainError("packet_error_from_block: probability must lie in [0, 1]");
    }
    if (p_block == 1.0) return 1.0;
    return -std::expm1(blocks * std::log1p(-p_block));
}

double packet_error_prob(const Scenario& scenario, int blocks, const quad::QuadratureControl& ctl) {
    return packet_error_from_block(block_error_prob(scenario, ctl), blocks);
}

PepEstimate analytic_pep(const Scenario& scenario, int blocks, const quad::QuadratureControl& ctl) {
    const BlockError be = block_error(scenario, ctl);
    const auto& array = scenario.helper_to_rsu;
    const bool needs_quadrature = array.model == channel::CorrelationModel::CC &&
                                  array.antennas > 1 && array.rho > 0.0 &&
                                  array.branch.mean_snr > 0.0;
    PepEstimate est;
    est.value = packet_error_from_block(be.p_block, blocks);
    est.block_value = be.p_block;
    est.provenance = needs_quadrature ? Provenance::Quadrature : Provenance::ClosedForm;
    return est;
}

} // namespace vcoop::pep
