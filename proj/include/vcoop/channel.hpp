#pragma once

// SNR distributions for a single Nakagami-m hop and for the MRC output of a
// correlated multi-antenna receiver.
//
// Correlation coefficients are branch *power* correlations (correlation of
// the squared envelopes) in both array models: CC uses rho for every pair,
// EC uses rho^|i-j|. The CC density is written in terms of the correlation
// of the underlying complex Gaussian components, which is sqrt(rho).

#include <string_view>

#include "vcoop/quadrature.hpp"
#include "vcoop/specfun.hpp"

namespace vcoop::channel {

/// One Nakagami-m hop. A mean SNR of exactly 0 marks an unpowered hop whose
/// SNR is identically zero.
struct FadingLink {
    double m = 1.0;
    double mean_snr = 1.0;
    double distance = 1.0;
    double pathloss_exp = 2.0;

    void validate() const;
};

enum class CorrelationModel { CC, EC };

std::string_view to_string(CorrelationModel model);
CorrelationModel parse_correlation_model(std::string_view text);

struct CorrelatedArray {
    int antennas = 1;
    CorrelationModel model = CorrelationModel::CC;
    double rho = 0.0;
    FadingLink branch;

    void validate() const;
};

struct PowerBudget {
    double total_power = 1.0;
    double split = 0.5;
    double noise = 1.0;

    void validate() const;
};

enum class Phase { First, Second };

struct HopMeanSnr {
    double value = 0.0;
    /// Set when the phase gets no power (split = 1 for the second phase).
    bool unpowered = false;
};

/// phi P / (d^alpha N0) for the first phase, (1 - phi) P / (d^alpha N0) for
/// the second, with unit-mean fading power.
HopMeanSnr mean_snr(const PowerBudget& budget, Phase phase, double distance, double alpha);

/// Gamma CDF of one branch: P(m, m gamma0 / mean).
double iid_snr_cdf(const FadingLink& link, double gamma0);

/// CDF of the MRC sum of M independent branches: P(M m, m gamma0 / mean).
double iid_mrc_cdf(int antennas, const FadingLink& branch, double gamma0);

/// Density of the CC combiner output SNR. Requires 0 < rho < 1.
double cc_combiner_pdf(const CorrelatedArray& array, double z,
                       const specfun::SeriesControl& ctl = {});

/// CC combiner CDF by adaptive quadrature of the density, without routing
/// the rho = 0 / M = 1 cases. For gamma0 beyond the mean the upper tail is
/// integrated instead and subtracted from one.
double cc_combiner_cdf_quadrature(const CorrelatedArray& array, double gamma0,
                                  const quad::QuadratureControl& ctl = {});

/// CC combiner CDF. rho = 0 and M = 1 go to the independent-branch formulas.
double cc_combiner_cdf(const CorrelatedArray& array, double gamma0,
                       const quad::QuadratureControl& ctl = {});

struct Phi1CrossCheck {
    double phi1_value = 0.0;
    double quadrature_value = 0.0;
    double gap = 0.0;
    int sum_limit = 0;
};

/// Evaluates the finite-sum Phi1 expression for the CC CDF next to the
/// quadrature value. Refuses (DomainError) when the sum's upper limit
/// (1 - c + M c) / (M c) - 1 is not a non-negative integer.
Phi1CrossCheck cc_combiner_cdf_phi1_crosscheck(const CorrelatedArray& array, double gamma0,
                                               const specfun::SeriesControl& ctl = {});

/// lambda = M + 2 rho / (1 - rho) * (M - (1 - rho^M) / (1 - rho)), the sum of
/// all pairwise power correlations of an EC array.
double ec_lambda(int antennas, double rho_e);

/// Gamma law with shape m M^2 / lambda and mean M * mean_snr, evaluated as the
/// regularized lower incomplete gamma P(m M^2 / lambda, M m gamma0 / (lambda mean)).
double ec_combiner_cdf(const CorrelatedArray& array, double gamma0);

/// Dispatches on the array's correlation model.
double combiner_cdf(const CorrelatedArray& array, double gamma0,
                    const quad::QuadratureControl& ctl = {});

} // namespace vcoop::channel
