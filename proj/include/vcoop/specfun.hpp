#pragma once

// Special functions used by the SNR distributions: regularized incomplete
// gamma, Kummer's confluent hypergeometric series and Humbert's Phi1 double
// series. Everything is double precision and free of shared state.

namespace vcoop::specfun {

/// Truncation policy for the hypergeometric series.
struct SeriesControl {
    double rel_tol = 1e-12;
    double abs_tol = 1e-300;
    int max_terms = 10000;

    /// Throws DomainError unless every field is positive.
    void validate() const;
};

/// P(a, x) = gamma(a, x) / Gamma(a). Series for x < a + 1, continued fraction otherwise.
double reg_lower_gamma(double a, double x);

/// Q(a, x) = 1 - P(a, x), computed directly in the upper tail.
double reg_upper_gamma(double a, double x);

/// 1F1(a; b; x) by the ascending Pochhammer series with compensated summation.
/// Throws SeriesNotConverged when max_terms is exhausted.
double kummer_1f1(double a, double b, double x, const SeriesControl& ctl = {});

/// log 1F1(a; b; x) for a > 0, b > 0, x >= 0, safe for arguments where the
/// function itself overflows. Switches to the large-x asymptotic expansion
/// once the series would need more terms than it is worth.
double log_kummer_1f1_positive(double a, double b, double x, const SeriesControl& ctl = {});

/// Gauss 2F1(a, b; c; x) for |x| < 1 by its plain series.
double gauss_2f1(double a, double b, double c, double x, const SeriesControl& ctl = {});

/// Humbert Phi1(a, b; c; x, y) = sum (a)_{m+n} (b)_m / ((c)_{m+n} m! n!) x^m y^n
/// for |x| < 1, summed diagonal by diagonal (m + n = const).
double humbert_phi1(double a, double b, double c, double x, double y,
                    const SeriesControl& ctl = {});

} // namespace vcoop::specfun
