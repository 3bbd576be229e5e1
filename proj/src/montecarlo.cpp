#include "vcoop/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include <boost/math/special_functions/gamma.hpp>

#include "vcoop/errors.hpp"

namespace vcoop::mc {

namespace {

// Each real component of a unit-power circular complex Gaussian.
const double kHalfSigma = std::sqrt(0.5);

// z = 1.96 for the two-sided 95 % interval.
constexpr double kZ95 = 1.959963984540054;

} // namespace

int integer_shape(double m) {
    if (!(m >= 1.0) || std::floor(m) != m || m > 1e6) {
        throw DomainError("Monte Carlo sampler needs a positive integer Nakagami m");
    }
    return static_cast<int>(m);
}

Eigen::MatrixXd gaussian_correlation(const channel::CorrelatedArray& array) {
    array.validate();
    const int M = array.antennas;
    const double c = std::sqrt(array.rho);
    Eigen::MatrixXd r(M, M);
    for (int i = 0; i < M; ++i) {
        for (int j = 0; j < M; ++j) {
            if (i == j) {
                r(i, j) = 1.0;
            } else if (array.model == channel::CorrelationModel::CC) {
                r(i, j) = c;
            } else {
                r(i, j) = std::pow(c, std::abs(i - j));
            }
        }
    }
    return r;
}

CorrelatedGammaSampler::CorrelatedGammaSampler(const channel::CorrelatedArray& array)
    : antennas_(array.antennas), shape_(integer_shape(array.branch.m)) {
    const Eigen::MatrixXd r = gaussian_correlation(array);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(r);
    if (eig.info() != Eigen::Success) {
        throw DomainError("CorrelatedGammaSampler: eigendecomposition failed");
    }
    Eigen::VectorXd values = eig.eigenvalues();
    // Both structures are positive definite for rho < 1; tiny negatives are rounding.
    if (values.minCoeff() < -1e-10) {
        throw DomainError("CorrelatedGammaSampler: correlation matrix is not positive semidefinite");
    }
    values = values.cwiseMax(0.0).cwiseSqrt();
    coloring_ = eig.eigenvectors() * values.asDiagonal() * eig.eigenvectors().transpose();
}

void CorrelatedGammaSampler::sample(TrialRng& rng, Eigen::VectorXd& out) const {
    out.setZero(antennas_);
    Eigen::VectorXd re(antennas_);
    Eigen::VectorXd im(antennas_);
    for (int k = 0; k < shape_; ++k) {
        for (int j = 0; j < antennas_; ++j) {
            re[j] = kHalfSigma * rng.normal();
            im[j] = kHalfSigma * rng.normal();
        }
        out += (coloring_ * re).cwiseAbs2() + (coloring_ * im).cwiseAbs2();
    }
    out /= shape_;
}

double sample_gamma_power(int m, TrialRng& rng) {
    double sum = 0.0;
    for (int k = 0; k < m; ++k) {
        const double re = kHalfSigma * rng.normal();
        const double im = kHalfSigma * rng.normal();
        sum += re * re + im * im;
    }
    return sum / m;
}

TrialRunner::TrialRunner(const pep::Scenario& scenario)
    : scenario_(scenario), sampler_(scenario.helper_to_rsu) {
    scenario_.validate();
    first_shapes_.reserve(scenario_.source_links.size());
    for (const auto& link : scenario_.source_links) first_shapes_.push_back(integer_shape(link.m));
}

ChannelDraw TrialRunner::draw(TrialRng& rng) const {
    ChannelDraw d;
    d.first_gains.reserve(first_shapes_.size());
    for (int m : first_shapes_) d.first_gains.push_back(sample_gamma_power(m, rng));
    sampler_.sample(rng, d.second_gains);
    return d;
}

TrialResult TrialRunner::evaluate(const ChannelDraw& draw) const {
    return evaluate_trial(scenario_, draw);
}

TrialResult evaluate_trial(const pep::Scenario& scenario, const ChannelDraw& draw) {
    const auto& links = scenario.source_links;
    if (draw.first_gains.size() != links.size() ||
        draw.second_gains.size() != scenario.helper_to_rsu.antennas) {
        throw DomainError("evaluate_trial: draw does not match the scenario dimensions");
    }
    TrialResult r;
    r.first_hop_snr = -1.0;
    for (std::size_t i = 0; i < links.size(); ++i) {
        const double snr = links[i].mean_snr * draw.first_gains[i];
        if (snr > r.first_hop_snr) {
            r.first_hop_snr = snr;
            r.selected_helper = static_cast<int>(i);
        }
    }
    r.second_hop_snr = scenario.helper_to_rsu.branch.mean_snr * draw.second_gains.sum();
    r.e2e_snr = std::min(r.first_hop_snr, r.second_hop_snr);
    r.outage = r.e2e_snr < scenario.gamma0;
    return r;
}

TrialResult run_trial(const pep::Scenario& scenario, TrialRng& rng) {
    return TrialRunner(scenario).run(rng);
}

OutageCount count_outages(const pep::Scenario& scenario, std::uint64_t trials,
                          const RngSpec& spec, int threads) {
    if (threads < 1) throw DomainError("count_outages: thread count must be >= 1");
    const TrialRunner runner(scenario);

    const auto work = [&runner, &spec](std::uint64_t begin, std::uint64_t end) {
        std::uint64_t outages = 0;
        for (std::uint64_t i = begin; i < end; ++i) {
            TrialRng rng(spec, i);
            if (runner.run(rng).outage) ++outages;
        }
        return outages;
    };

    const auto workers = static_cast<std::uint64_t>(
        std::min<std::uint64_t>(static_cast<std::uint64_t>(threads), std::max<std::uint64_t>(trials, 1)));
    OutageCount total{0, trials};
    if (workers == 1) {
        total.outages = work(0, trials);
        return total;
    }

    std::vector<std::uint64_t> partial(workers, 0);
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::uint64_t w = 0; w < workers; ++w) {
            const std::uint64_t begin = trials * w / workers;
            const std::uint64_t end = trials * (w + 1) / workers;
            pool.emplace_back([&partial, &work, w, begin, end] { partial[w] = work(begin, end); });
        }
    }
    for (std::uint64_t p : partial) total.outages += p;
    return total;
}

bool count_agrees(const OutageCount& count, double p, double sigmas) {
    if (count.trials == 0) throw DomainError("count_agrees: no trials");
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("count_agrees: probability must lie in [0, 1]");
    const double n = double(count.trials);
    if (p == 0.0) return count.outages == 0;
    if (p == 1.0) return count.outages == count.trials;
    if (n * p >= 10.0 && n * (1.0 - p) >= 10.0) {
        return std::abs(count.fraction() - p) <= sigmas * std::sqrt(p * (1.0 - p) / n);
    }
    // Count the rarer outcome so that the Poisson limit applies.
    const bool rare_outage = p <= 0.5;
    const double lambda = n * (rare_outage ? p : 1.0 - p);
    const double k = double(rare_outage ? count.outages : count.trials - count.outages);
    const double half_alpha = 0.5 * std::erfc(sigmas / std::sqrt(2.0));
    const double at_most = boost::math::gamma_q(k + 1.0, lambda);
    const double at_least = k == 0.0 ? 1.0 : boost::math::gamma_p(k, lambda);
    return at_most > half_alpha && at_least > half_alpha;
}

pep::PepEstimate pep_from_count(const OutageCount& count, int blocks) {
    if (count.trials == 0) throw DomainError("pep_from_count: no trials");
    const double p = count.fraction();
    const double h = kZ95 * std::sqrt(p * (1.0 - p) / double(count.trials));
    const double lo = pep::packet_error_from_block(std::max(0.0, p - h), blocks);
    const double hi = pep::packet_error_from_block(std::min(1.0, p + h), blocks);

    pep::PepEstimate est;
    est.value = pep::packet_error_from_block(p, blocks);
    est.provenance = pep::Provenance::MonteCarlo;
    est.trials = count.trials;
    est.half_width = 0.5 * (hi - lo);
    est.block_value = p;
    return est;
}

pep::PepEstimate estimate_pep(const pep::Scenario& scenario, int blocks, std::uint64_t trials,
                              const RngSpec& spec, int threads) {
    if (trials < 100) throw DomainError("estimate_pep: need at least 100 trials");
    return pep_from_count(count_outages(scenario, trials, spec, threads), blocks);
}

} // namespace vcoop::mc
