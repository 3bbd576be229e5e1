#include "vcoop/channel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vcoop/errors.hpp"
#include "vcoop/numeric.hpp"

namespace vcoop::channel {

namespace {

// Below this the density is smaller than the smallest normal double.
constexpr double kLogUnderflow = -745.0;

double clamp_probability(double p) { return std::clamp(p, 0.0, 1.0); }

void check_threshold(double gamma0, const char* who) {
    if (!(gamma0 >= 0.0)) {
        throw DomainError(std::string(who) + ": threshold must be non-negative");
    }
}

// CDF of a hop that receives no power: all mass sits at SNR 0.
double unpowered_cdf(double gamma0) { return gamma0 > 0.0 ? 1.0 : 0.0; }

struct CcShape {
    double c;       // correlation of the complex Gaussian components
    double mm;      // M m
    double scale;   // mean / m
    double spread;  // 1 - c + M c
};

CcShape cc_shape(const CorrelatedArray& array) {
    const double c = std::sqrt(array.rho);
    const double mm = array.antennas * array.branch.m;
    return {c, mm, array.branch.mean_snr / array.branch.m, 1.0 - c + array.antennas * c};
}

} // namespace

void FadingLink::validate() const {
    if (!(m >= 0.5)) throw DomainError("FadingLink: Nakagami m must be >= 0.5");
    if (!(mean_snr >= 0.0) || !std::isfinite(mean_snr)) {
        throw DomainError("FadingLink: mean SNR must be finite and non-negative");
    }
    if (!(distance > 0.0)) throw DomainError("FadingLink: distance must be positive");
    if (!(pathloss_exp >= 2.0)) throw DomainError("FadingLink: path-loss exponent must be >= 2");
}

std::string_view to_string(CorrelationModel model) {
    return model == CorrelationModel::CC ? "cc" : "ec";
}

CorrelationModel parse_correlation_model(std::string_view text) {
    if (text == "cc" || text == "CC") return CorrelationModel::CC;
    if (text == "ec" || text == "EC") return CorrelationModel::EC;
    throw DomainError("unknown correlation model '" + std::string(text) + "'");
}

void CorrelatedArray::validate() const {
    if (antennas < 1) throw DomainError("CorrelatedArray: need at least one antenna");
    if (!(rho >= 0.0 && rho < 1.0)) throw DomainError("CorrelatedArray: rho must lie in [0, 1)");
    branch.validate();
}

void PowerBudget::validate() const {
    if (!(total_power > 0.0)) throw DomainError("PowerBudget: total power must be positive");
    if (!(split > 0.0 && split <= 1.0)) throw DomainError("PowerBudget: split must lie in (0, 1]");
    if (!(noise > 0.0)) throw DomainError("PowerBudget: noise power must be positive");
}

HopMeanSnr mean_snr(const PowerBudget& budget, Phase phase, double distance, double alpha) {
    budget.validate();
    if (!(distance > 0.0)) throw DomainError("mean_snr: distance must be positive");
    const double share = phase == Phase::First ? budget.split : 1.0 - budget.split;
    const double value = share * budget.total_power / (std::pow(distance, alpha) * budget.noise);
    return {value, share == 0.0};
}

double iid_snr_cdf(const FadingLink& link, double gamma0) {
    link.validate();
    check_threshold(gamma0, "iid_snr_cdf");
    if (link.mean_snr == 0.0) return unpowered_cdf(gamma0);
    return specfun::reg_lower_gamma(link.m, link.m * gamma0 / link.mean_snr);
}

double iid_mrc_cdf(int antennas, const FadingLink& branch, double gamma0) {
    branch.validate();
    check_threshold(gamma0, "iid_mrc_cdf");
    if (antennas < 1) throw DomainError("iid_mrc_cdf: need at least one antenna");
    if (branch.mean_snr == 0.0) return unpowered_cdf(gamma0);
    return specfun::reg_lower_gamma(antennas * branch.m, branch.m * gamma0 / branch.mean_snr);
}

double cc_combiner_pdf(const CorrelatedArray& array, double z, const specfun::SeriesControl& ctl) {
    array.validate();
    if (!(array.rho > 0.0)) throw DomainError("cc_combiner_pdf: requires rho > 0");
    if (!(array.branch.mean_snr > 0.0)) throw DomainError("cc_combiner_pdf: requires mean SNR > 0");
    if (!(z >= 0.0)) throw DomainError("cc_combiner_pdf: z must be non-negative");

    const auto [c, mm, scale, spread] = cc_shape(array);
    const double m = array.branch.m;
    const double u = z / scale; // z m / mean
    const double log_norm = std::log(scale) + m * (array.antennas - 1) * std::log1p(-c) +
                            m * std::log(spread) + log_gamma(mm);

    if (z == 0.0) {
        if (mm > 1.0) return 0.0;
        return mm == 1.0 ? std::exp(-log_norm) : HUGE_VAL;
    }

    // 1F1(m; Mm; y) <= e^y because (m)_k <= (Mm)_k; skip hopeless tails early.
    const double log_power = (mm - 1.0) * std::log(u);
    if (log_power - u / spread - log_norm < kLogUnderflow) return 0.0;

    const double y = array.antennas * c * u / ((1.0 - c) * spread);
    const double log_pdf = log_power - u / (1.0 - c) +
                           specfun::log_kummer_1f1_positive(m, mm, y, ctl) - log_norm;
    return std::exp(log_pdf);
}

double cc_combiner_cdf_quadrature(const CorrelatedArray& array, double gamma0,
                                  const quad::QuadratureControl& ctl) {
    array.validate();
    check_threshold(gamma0, "cc_combiner_cdf");
    if (gamma0 == 0.0) return 0.0;

    const auto pdf = [&array](double z) { return cc_combiner_pdf(array, z); };
    const double mean = array.antennas * array.branch.mean_snr;
    if (gamma0 <= mean) {
        return clamp_probability(quad::integrate(pdf, 0.0, gamma0, ctl).value);
    }
    return clamp_probability(1.0 - quad::integrate_to_infinity(pdf, gamma0, ctl).value);
}

double cc_combiner_cdf(const CorrelatedArray& array, double gamma0,
                       const quad::QuadratureControl& ctl) {
    array.validate();
    check_threshold(gamma0, "cc_combiner_cdf");
    if (array.branch.mean_snr == 0.0) return unpowered_cdf(gamma0);
    if (array.antennas == 1) return iid_snr_cdf(array.branch, gamma0);
    if (array.rho == 0.0) return iid_mrc_cdf(array.antennas, array.branch, gamma0);
    return cc_combiner_cdf_quadrature(array, gamma0, ctl);
}

Phi1CrossCheck cc_combiner_cdf_phi1_crosscheck(const CorrelatedArray& array, double gamma0,
                                               const specfun::SeriesControl& ctl) {
    array.validate();
    check_threshold(gamma0, "cc_combiner_cdf_phi1_crosscheck");
    if (array.antennas < 2 || !(array.rho > 0.0) || !(array.branch.mean_snr > 0.0)) {
        throw DomainError("Phi1 cross-check needs M >= 2, rho > 0 and a powered hop");
    }
    const auto [c, mm, scale, spread] = cc_shape(array);
    const double m = array.branch.m;
    const double M = array.antennas;

    const double raw_limit = spread / (M * c) - 1.0;
    const double nearest = std::round(raw_limit);
    if (raw_limit < -1e-9 || std::abs(raw_limit - nearest) > 1e-9 * std::max(1.0, nearest)) {
        throw DomainError("Phi1 cross-check refused: sum limit " + std::to_string(raw_limit) +
                          " is not a non-negative integer");
    }
    const int limit = static_cast<int>(nearest);

    const double v = mm - m;
    const double log_pre = -log_gamma(m) - log_gamma(v) + m * std::log((1.0 - c) / (M * c)) +
                           v * std::log(spread / (M * c));
    const double pre = std::exp(log_pre);
    const double x = M * c / spread;
    const double y = M * c * m * gamma0 / (array.branch.mean_snr * (1.0 - c) * spread);

    NeumaierSum finite_sum;
    double power = 1.0; // gamma0^n / n!
    for (int n = 0; n <= limit; ++n) {
        if (n > 0) power *= gamma0 / n;
        finite_sum.add(power * specfun::humbert_phi1(m, mm - n, mm, x, y, ctl));
    }
    const double value = pre * specfun::humbert_phi1(m, mm, mm, x, 0.0, ctl) -
                         pre * std::exp(-spread * gamma0 / (M * c)) * finite_sum.value();

    Phi1CrossCheck out;
    out.phi1_value = value;
    out.quadrature_value = cc_combiner_cdf_quadrature(array, gamma0);
    out.gap = std::abs(out.phi1_value - out.quadrature_value);
    out.sum_limit = limit;
    return out;
}

double ec_lambda(int antennas, double rho_e) {
    if (antennas < 1) throw DomainError("ec_lambda: need at least one antenna");
    if (!(rho_e >= 0.0 && rho_e < 1.0)) throw DomainError("ec_lambda: rho must lie in [0, 1)");
    const double M = antennas;
    const double geometric = (1.0 - std::pow(rho_e, M)) / (1.0 - rho_e);
    return M + 2.0 * rho_e / (1.0 - rho_e) * (M - geometric);
}

double ec_combiner_cdf(const CorrelatedArray& array, double gamma0) {
    array.validate();
    check_threshold(gamma0, "ec_combiner_cdf");
    if (array.branch.mean_snr == 0.0) return unpowered_cdf(gamma0);
    if (array.antennas == 1) return iid_snr_cdf(array.branch, gamma0);
    if (array.rho == 0.0) return iid_mrc_cdf(array.antennas, array.branch, gamma0);

    const double M = array.antennas;
    const double m = array.branch.m;
    const double lambda = ec_lambda(array.antennas, array.rho);
    return specfun::reg_lower_gamma(m * M * M / lambda,
                                    M * m * gamma0 / (lambda * array.branch.mean_snr));
}

double combiner_cdf(const CorrelatedArray& array, double gamma0,
                    const quad::QuadratureControl& ctl) {
    return array.model == CorrelationModel::CC ? cc_combiner_cdf(array, gamma0, ctl)
                                               : ec_combiner_cdf(array, gamma0);
}

} // namespace vcoop::channel
