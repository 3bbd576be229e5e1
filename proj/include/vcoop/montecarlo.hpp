#pragma once

// Link-level simulation of the two-phase protocol, used as the oracle for the
// closed forms.

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "vcoop/channel.hpp"
#include "vcoop/pep.hpp"
#include "vcoop/rng.hpp"

namespace vcoop::mc {

/// Correlated unit-mean Gamma(m, 1/m) branch powers. Each power is the
/// average of m squared magnitudes of complex Gaussians colored by the
/// symmetric square root of R_g, where R_g has off-diagonal sqrt(rho) (CC)
/// or sqrt(rho)^|i-j| (EC). Power correlation is then |R_g(i,j)|^2.
class CorrelatedGammaSampler {
public:
    explicit CorrelatedGammaSampler(const channel::CorrelatedArray& array);

    int antennas() const { return antennas_; }
    int shape() const { return shape_; }
    const Eigen::MatrixXd& coloring() const { return coloring_; }

    /// Fills `out` (resized to M) with one vector of branch powers.
    void sample(TrialRng& rng, Eigen::VectorXd& out) const;

private:
    int antennas_;
    int shape_;
    Eigen::MatrixXd coloring_;
};

/// Gaussian correlation matrix for the given array model.
Eigen::MatrixXd gaussian_correlation(const channel::CorrelatedArray& array);

/// Unit-mean Gamma(m, 1/m) draw, m a positive integer.
double sample_gamma_power(int m, TrialRng& rng);

/// Rejects non-integer shapes; returns m as an int.
int integer_shape(double m);

struct ChannelDraw {
    std::vector<double> first_gains;   // |h|^2 per helper
    Eigen::VectorXd second_gains;      // |h|^2 per RSU antenna
};

struct TrialResult {
    double first_hop_snr = 0.0;
    double second_hop_snr = 0.0;
    double e2e_snr = 0.0;
    bool outage = false;
    int selected_helper = 0;
};

/// Precomputed per-scenario state so that trials only draw and combine.
class TrialRunner {
public:
    explicit TrialRunner(const pep::Scenario& scenario);

    ChannelDraw draw(TrialRng& rng) const;
    TrialResult evaluate(const ChannelDraw& draw) const;
    TrialResult run(TrialRng& rng) const { return evaluate(draw(rng)); }

    const pep::Scenario& scenario() const { return scenario_; }

private:
    pep::Scenario scenario_;
    std::vector<int> first_shapes_;
    CorrelatedGammaSampler sampler_;
};

/// Selection by max over helpers (ties to the lowest index), MRC sum on the
/// second hop, bottleneck minimum, outage when strictly below gamma0.
TrialResult evaluate_trial(const pep::Scenario& scenario, const ChannelDraw& draw);

TrialResult run_trial(const pep::Scenario& scenario, TrialRng& rng);

struct OutageCount {
    std::uint64_t outages = 0;
    std::uint64_t trials = 0;

    double fraction() const { return trials == 0 ? 0.0 : double(outages) / double(trials); }
};

/// Whether an outage count is consistent with probability p at the two-sided
/// level of `sigmas` normal standard errors. Uses the normal approximation
/// when at least 10 outages and 10 successes are expected, otherwise the exact
/// Poisson tails at the same level, since a single rare event already sits many
/// standard errors away from a tiny p.
bool count_agrees(const OutageCount& count, double p, double sigmas = 3.0);

/// Trial i uses TrialRng(spec, i). Threads split the index range; counts are
/// integers so the total is independent of the thread count.
OutageCount count_outages(const pep::Scenario& scenario, std::uint64_t trials,
                          const RngSpec& spec, int threads = 1);

/// PEP = 1 - (1 - p_hat)^L with the 95 % normal-approximation interval on
/// p_hat mapped through the same function; half_width is half its length.
pep::PepEstimate estimate_pep(const pep::Scenario& scenario, int blocks, std::uint64_t trials,
                              const RngSpec& spec, int threads = 1);

pep::PepEstimate pep_from_count(const OutageCount& count, int blocks);

} // namespace vcoop::mc
