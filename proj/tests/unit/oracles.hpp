#pragma once

// Independent reference implementations used only by the tests. None of them
// share code with the library.

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/distributions/poisson.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace oracle {

// Lower regularized incomplete gamma by Gauss-Kronrod on t^(a-1) e^-t.
inline double lower_gamma_quadrature(double a, double x) {
    using boost::math::quadrature::gauss_kronrod;
    const auto f = [a](double t) { return std::exp((a - 1.0) * std::log(t) - t - std::lgamma(a)); };
    return gauss_kronrod<double, 61>::integrate(f, 0.0, x, 15, 1e-14);
}

inline double upper_gamma_quadrature(double a, double x) {
    using boost::math::quadrature::gauss_kronrod;
    const auto f = [a](double t) { return std::exp((a - 1.0) * std::log(t) - t - std::lgamma(a)); };
    return gauss_kronrod<double, 61>::integrate(f, x, std::numeric_limits<double>::infinity(),
                                                15, 1e-14);
}

// 1F1 by a fixed number of terms in long double.
inline double kummer_long(double a, double b, double x, int terms = 200) {
    long double term = 1.0L, sum = 1.0L;
    for (int n = 0; n < terms; ++n) {
        term *= (static_cast<long double>(a) + n) * x / ((static_cast<long double>(b) + n) * (n + 1));
        sum += term;
    }
    return static_cast<double>(sum);
}

// Phi1 as a plain rectangle sum over (m, n) < terms x terms in long double.
inline double phi1_brute(double a, double b, double c, double x, double y, int terms) {
    // t(m, n) built from t(m, 0) by the ratio in n.
    long double total = 0.0L;
    long double row = 1.0L;  // t(m, 0)
    for (int m = 0; m < terms; ++m) {
        long double t = row;
        for (int n = 0; n < terms; ++n) {
            total += t;
            t *= (static_cast<long double>(a) + m + n) * y /
                 ((static_cast<long double>(c) + m + n) * (n + 1));
            if (t == 0.0L) break;
        }
        row *= (static_cast<long double>(a) + m) * (static_cast<long double>(b) + m) * x /
               ((static_cast<long double>(c) + m) * (m + 1));
        if (row == 0.0L) break;
    }
    return static_cast<double>(total);
}

inline double gauss_2f1_long(double a, double b, double c, double x, int terms = 2000) {
    long double term = 1.0L, sum = 1.0L;
    for (int n = 0; n < terms; ++n) {
        term *= (static_cast<long double>(a) + n) * (b + n) * x / ((c + n) * (n + 1.0L));
        sum += term;
    }
    return static_cast<double>(sum);
}

// Binomial standard error of a probability estimated from n trials.
inline double binomial_se(double p, double n) { return std::sqrt(std::max(p * (1.0 - p), 1e-300) / n); }

// Count of `hits` in n trials consistent with p at the 3-sigma two-sided
// level: normal approximation with enough expected events, Poisson tails
// otherwise.
inline bool consistent(long hits, long n, double p) {
    if (p <= 0.0) return hits == 0;
    if (p >= 1.0) return hits == n;
    if (n * p >= 10.0 && n * (1.0 - p) >= 10.0) {
        return std::abs(double(hits) / n - p) <= 3.0 * binomial_se(p, double(n));
    }
    const bool low = p <= 0.5;
    const boost::math::poisson_distribution<double> pois(n * (low ? p : 1.0 - p));
    const long k = low ? hits : n - hits;
    const double half_alpha = 0.00134989803163;
    const double lower = boost::math::cdf(pois, double(k));
    const double upper = k == 0 ? 1.0 : boost::math::cdf(boost::math::complement(pois, double(k - 1)));
    return lower > half_alpha && upper > half_alpha;
}

// Golden-section maximizer on [lo, hi].
template <class F>
double golden_argmax(F f, double lo, double hi, int iters = 200) {
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < iters && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++i) {
        if (f1 < f2) {
            lo = x1; x1 = x2; f1 = f2;
            x2 = lo + g * (hi - lo); f2 = f(x2);
        } else {
            hi = x2; x2 = x1; f2 = f1;
            x1 = hi - g * (hi - lo); f1 = f(x1);
        }
    }
    return 0.5 * (lo + hi);
}

// Sum of m unit-mean exponentials divided by m: Gamma(m, 1/m), drawn with std.
inline double gamma_power(std::mt19937_64& eng, double m, double mean) {
    std::gamma_distribution<double> g(m, mean / m);
    return g(eng);
}

// Exact CDF of sum_j |g_j|^2 for g ~ CN(0, R) with distinct eigenvalues of R
// (Rayleigh branches, unit mean each, scaled by mean): a hypoexponential law.
inline double rayleigh_sum_cdf(const Eigen::MatrixXd& R, double mean, double gamma0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(R);
    const Eigen::VectorXd l = es.eigenvalues() * mean;
    long double tail = 0.0L;
    for (int k = 0; k < l.size(); ++k) {
        long double w = 1.0L;
        for (int j = 0; j < l.size(); ++j) {
            if (j != k) w *= l[k] / (static_cast<long double>(l[k]) - l[j]);
        }
        tail += w * std::exp(-static_cast<long double>(gamma0) / l[k]);
    }
    return static_cast<double>(1.0L - tail);
}

inline Eigen::MatrixXd exponential_gaussian_correlation(int M, double rho) {
    const double c = std::sqrt(rho);
    Eigen::MatrixXd R(M, M);
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j) R(i, j) = std::pow(c, std::abs(i - j));
    return R;
}

// Correlated unit-mean branch powers built without any matrix square root.
// CC: g_j = sqrt(c) x0 + sqrt(1 - c) x_j; EC: g_{j+1} = c g_j + sqrt(1 - c^2) w_j,
// both with Gaussian correlation c = sqrt(rho), so the power correlation is rho
// (CC) or rho^|i-j| (EC). m averaged copies give Gamma(m, 1/m) marginals.
class ArraySampler {
public:
    ArraySampler(int antennas, bool exponential, double rho, int m, std::uint64_t seed)
        : M_(antennas), ec_(exponential), c_(std::sqrt(rho)), m_(m), eng_(seed) {}

    std::vector<double> draw() {
        std::vector<double> power(M_, 0.0);
        std::vector<double> re(M_), im(M_);
        for (int k = 0; k < m_; ++k) {
            fill(re);
            fill(im);
            for (int j = 0; j < M_; ++j) power[j] += re[j] * re[j] + im[j] * im[j];
        }
        for (auto& p : power) p /= m_;
        return power;
    }

    double draw_sum(double mean) {
        double s = 0.0;
        for (double p : draw()) s += p;
        return s * mean;
    }

private:
    // One real component per antenna, each N(0, 1/2).
    void fill(std::vector<double>& v) {
        const double s = std::sqrt(0.5);
        if (ec_) {
            v[0] = s * n_(eng_);
            for (int j = 1; j < M_; ++j) v[j] = c_ * v[j - 1] + std::sqrt(1.0 - c_ * c_) * s * n_(eng_);
        } else {
            const double x0 = s * n_(eng_);
            for (int j = 0; j < M_; ++j) v[j] = std::sqrt(c_) * x0 + std::sqrt(1.0 - c_) * s * n_(eng_);
        }
    }

    int M_;
    bool ec_;
    double c_;
    int m_;
    std::mt19937_64 eng_;
    std::normal_distribution<double> n_{0.0, 1.0};
};

} // namespace oracle
