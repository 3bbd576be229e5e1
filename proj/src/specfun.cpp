#include "vcoop/specfun.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "vcoop/errors.hpp"
#include "vcoop/numeric.hpp"

namespace vcoop::specfun {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;
constexpr int kGammaMaxIter = 1000000;

bool is_nonpositive_integer(double v) {
    return v <= 0.0 && std::floor(v) == v;
}

// exp(-x + a log x - log Gamma(a)), the common prefactor of P and Q.
double gamma_prefactor(double a, double x) {
    return std::exp(-x + a * std::log(x) - log_gamma(a));
}

double lower_series(double a, double x) {
    double ap = a;
    double del = 1.0 / a;
    double sum = del;
    for (int n = 0; n < kGammaMaxIter; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * kEps) {
            return sum * gamma_prefactor(a, x);
        }
    }
    throw SeriesNotConverged("reg_lower_gamma series", sum, del);
}

// Modified Lentz evaluation of the continued fraction for Q(a, x).
double upper_continued_fraction(double a, double x) {
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kGammaMaxIter; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) {
            return h * gamma_prefactor(a, x);
        }
    }
    throw SeriesNotConverged("reg_upper_gamma continued fraction", h, 0.0);
}

void check_gamma_args(double a, double x, const char* who) {
    if (!(a > 0.0) || !std::isfinite(a)) {
        throw DomainError(std::string(who) + ": shape must be positive and finite");
    }
    if (!(x >= 0.0)) {
        throw DomainError(std::string(who) + ": argument must be non-negative");
    }
}

bool converged(double term, double sum, const SeriesControl& ctl) {
    return std::abs(term) <= std::max(ctl.rel_tol * std::abs(sum), ctl.abs_tol);
}

double log_kummer_asymptotic(double a, double b, double x) {
    // 1F1(a;b;x) ~ Gamma(b)/Gamma(a) e^x x^(a-b) sum_k (b-a)_k (1-a)_k / (k! x^k)
    NeumaierSum sum;
    double term = 1.0;
    sum.add(term);
    double previous = std::abs(term);
    for (int k = 0; k < 200; ++k) {
        term *= (b - a + k) * (1.0 - a + k) / ((k + 1.0) * x);
        if (std::abs(term) > previous) break;
        sum.add(term);
        if (std::abs(term) < kEps * std::abs(sum.value())) break;
        previous = std::abs(term);
    }
    return log_gamma(b) - log_gamma(a) + x + (a - b) * std::log(x) + std::log(sum.value());
}

} // namespace

void SeriesControl::validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0) || max_terms < 1) {
        throw DomainError("SeriesControl: tolerances must be positive and max_terms >= 1");
    }
}

double reg_lower_gamma(double a, double x) {
    check_gamma_args(a, x, "reg_lower_gamma");
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    if (x < a + 1.0) return lower_series(a, x);
    return 1.0 - upper_continued_fraction(a, x);
}

double reg_upper_gamma(double a, double x) {
    check_gamma_args(a, x, "reg_upper_gamma");
    if (x == 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    if (x < a + 1.0) return 1.0 - lower_series(a, x);
    return upper_continued_fraction(a, x);
}

double kummer_1f1(double a, double b, double x, const SeriesControl& ctl) {
    ctl.validate();
    if (is_nonpositive_integer(b)) {
        throw DomainError("kummer_1f1: b must not be a non-positive integer");
    }
    NeumaierSum sum;
    double term = 1.0;
    sum.add(term);
    for (int k = 0; k < ctl.max_terms; ++k) {
        term *= (a + k) * x / ((b + k) * (k + 1.0));
        sum.add(term);
        if (term == 0.0 || converged(term, sum.value(), ctl)) {
            return sum.value();
        }
    }
    throw SeriesNotConverged("kummer_1f1", sum.value(), term);
}

double log_kummer_1f1_positive(double a, double b, double x, const SeriesControl& ctl) {
    ctl.validate();
    if (!(a > 0.0) || !(b > 0.0) || !(x >= 0.0)) {
        throw DomainError("log_kummer_1f1_positive: requires a > 0, b > 0, x >= 0");
    }
    if (x == 0.0) return 0.0;
    if (x > 50.0 + 20.0 * (a + b)) return log_kummer_asymptotic(a, b, x);

    // All terms are positive; rescale whenever the running term gets large.
    constexpr double kRescale = 1e-250;
    const double log_rescale = -std::log(kRescale);
    double log_scale = 0.0;
    NeumaierSum sum;
    double term = 1.0;
    sum.add(term);
    for (int k = 0; k < ctl.max_terms; ++k) {
        term *= (a + k) * x / ((b + k) * (k + 1.0));
        sum.add(term);
        if (converged(term, sum.value(), ctl)) {
            return std::log(sum.value()) + log_scale;
        }
        if (term > 1.0 / kRescale) {
            term *= kRescale;
            sum.scale(kRescale);
            log_scale += log_rescale;
        }
    }
    throw SeriesNotConverged("log_kummer_1f1_positive", sum.value(), term);
}

double gauss_2f1(double a, double b, double c, double x, const SeriesControl& ctl) {
    ctl.validate();
    if (!(std::abs(x) < 1.0)) throw DomainError("gauss_2f1: requires |x| < 1");
    if (is_nonpositive_integer(c)) {
        throw DomainError("gauss_2f1: c must not be a non-positive integer");
    }
    NeumaierSum sum;
    double term = 1.0;
    sum.add(term);
    for (int k = 0; k < ctl.max_terms; ++k) {
        term *= (a + k) * (b + k) * x / ((c + k) * (k + 1.0));
        sum.add(term);
        if (term == 0.0 || converged(term, sum.value(), ctl)) {
            return sum.value();
        }
    }
    throw SeriesNotConverged("gauss_2f1", sum.value(), term);
}

double humbert_phi1(double a, double b, double c, double x, double y, const SeriesControl& ctl) {
    ctl.validate();
    if (!(std::abs(x) < 1.0)) throw DomainError("humbert_phi1: requires |x| < 1");
    if (is_nonpositive_integer(c)) {
        throw DomainError("humbert_phi1: c must not be a non-positive integer");
    }

    // Diagonal s collects every (m, n) with m + n = s:
    //   D_s = (a)_s / (c)_s * sum_m u_m v_{s-m},  u_m = (b)_m x^m / m!,  v_n = y^n / n!
    std::vector<double> u{1.0};
    std::vector<double> v{1.0};
    NeumaierSum total;
    total.add(1.0);
    double ratio = 1.0; // (a)_s / (c)_s
    double last = 1.0;
    int small_run = 0;
    for (int s = 1; s < ctl.max_terms; ++s) {
        u.push_back(u.back() * (b + s - 1) * x / s);
        v.push_back(v.back() * y / s);
        ratio *= (a + s - 1) / (c + s - 1);

        NeumaierSum diagonal;
        for (int m = 0; m <= s; ++m) diagonal.add(u[m] * v[s - m]);
        last = ratio * diagonal.value();
        total.add(last);

        // A single diagonal can cancel by accident; require two in a row.
        small_run = converged(last, total.value(), ctl) ? small_run + 1 : 0;
        if (small_run >= 2 || ratio == 0.0) return total.value();
    }
    throw SeriesNotConverged("humbert_phi1", total.value(), last);
}

} // namespace vcoop::specfun
