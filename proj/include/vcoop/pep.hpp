#pragma once

// Packet error probability of the two-hop uplink: best helper on the first
// hop, correlated MRC array on the second, L independent fading blocks.

#include <cstdint>
#include <string_view>
#include <vector>

#include "vcoop/channel.hpp"

namespace vcoop::pep {

constexpr double kSpeedOfLight = 299792458.0;

enum class CoherenceModel { CarrierScaled, Classical };

std::string_view to_string(CoherenceModel model);
CoherenceModel parse_coherence_model(std::string_view text);

struct Scenario {
    std::vector<channel::FadingLink> source_links;
    channel::CorrelatedArray helper_to_rsu;
    double d_second = 1.0;
    channel::PowerBudget budget;
    double gamma0 = 0.1;
    double packet_bits = 8000.0;
    double carrier_hz = 5.9e9;
    double speed_mps = 20.0;
    CoherenceModel tc_model = CoherenceModel::CarrierScaled;

    void validate() const;
};

// Flat, linear-unit description of a symmetric scenario: every helper sits at
// d_first from the source, the selected helper at d_second from the RSU.
struct ScenarioParams {
    double snr = 316.227766016838;  // P / N0, linear
    double noise = 1.0;
    double gamma0 = 0.1;
    int n_helpers = 5;
    int antennas = 10;
    double phi = 0.5;
    double m = 1.0;
    double rho = 0.1;
    channel::CorrelationModel model = channel::CorrelationModel::EC;
    double d_first = 9.8;
    double d_second = 9.8;
    double alpha = 2.5;
    double packet_bits = 8000.0;
    double carrier_hz = 5.9e9;
    double speed_mps = 20.0;
    CoherenceModel tc_model = CoherenceModel::CarrierScaled;
};

/// Mean SNRs are filled in from the power budget and the geometry.
Scenario make_scenario(const ScenarioParams& params);

/// Default form 3 c f_c / (4 sqrt(pi) (c + v)); classical form 9 c / (16 pi v f_c).
/// The classical form is infinite at v = 0.
double coherence_time(double carrier_hz, double speed_mps,
                      CoherenceModel model = CoherenceModel::CarrierScaled);

/// Psi / (T_c log2(1 + gamma0)) before rounding.
double raw_block_ratio(const Scenario& scenario);

/// Ceiling of a raw ratio, never below one.
int blocks_from_ratio(double ratio);

int num_blocks(const Scenario& scenario);

/// prod_i P(m_i, m_i gamma0 / mean_i): the best of N independent hops is
/// below gamma0 only if all of them are.
double best_relay_outage(const std::vector<channel::FadingLink>& source_links, double gamma0);

/// P_A + P_B - P_A P_B for independent hop outages.
double combine_outages(double p_first, double p_second);

struct BlockError {
    double p_first = 0.0;   // P_A, first hop (best helper) outage
    double p_second = 0.0;  // P_B, combiner outage
    double p_block = 0.0;
};

BlockError block_error(const Scenario& scenario, const quad::QuadratureControl& ctl = {});
double block_error_prob(const Scenario& scenario, const quad::QuadratureControl& ctl = {});

/// 1 - (1 - p)^L, computed as -expm1(L log1p(-p)).
double packet_error_from_block(double p_block, int blocks);
double packet_error_prob(const Scenario& scenario, int blocks,
                         const quad::QuadratureControl& ctl = {});

enum class Provenance { ClosedForm, Quadrature, MonteCarlo };

std::string_view to_string(Provenance provenance);

struct PepEstimate {
    double value = 0.0;
    Provenance provenance = Provenance::ClosedForm;
    std::uint64_t trials = 0;       // Monte Carlo only
    double half_width = 0.0;        // 95 %, Monte Carlo only
    double block_value = 0.0;       // per-block outage behind value
};

/// Closed-form estimate; provenance is Quadrature when the CC array needs it.
PepEstimate analytic_pep(const Scenario& scenario, int blocks,
                         const quad::QuadratureControl& ctl = {});

} // namespace vcoop::pep
