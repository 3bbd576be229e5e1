#include "vcoop/quadrature.hpp"

#include <array>
#include <cmath>
#include <algorithm>
#include <vector>

#include "vcoop/errors.hpp"

namespace vcoop::quad {

namespace {

// Kronrod abscissae (positive half) and weights; every odd node is a Gauss node.
constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double lo;
    double hi;
    double value;
    double error;
    bool operator<(const Segment& other) const { return error < other.error; }
};

Segment kronrod15(const Integrand& f, double lo, double hi) {
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const double fc = f(center);
    double kronrod = fc * kKronrodWeights[7];
    double gauss = fc * kGaussWeights[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kNodes[j];
        const double pair = f(center - dx) + f(center + dx);
        kronrod += kKronrodWeights[j] * pair;
        if (j % 2 == 1) gauss += kGaussWeights[j / 2] * pair;
    }
    kronrod *= half;
    gauss *= half;
    if (!std::isfinite(kronrod)) {
        throw QuadratureError("integrand is not finite on [" + std::to_string(lo) + ", " +
                              std::to_string(hi) + "]");
    }
    return {lo, hi, kronrod, std::abs(kronrod - gauss)};
}

} // namespace

QuadratureResult integrate(const Integrand& f, double lo, double hi,
                           const QuadratureControl& ctl) {
    if (!(ctl.abs_tol > 0.0) || !(ctl.rel_tol > 0.0) || ctl.max_intervals < 1) {
        throw DomainError("QuadratureControl: tolerances must be positive");
    }
    if (lo == hi) return {};
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
        throw DomainError("integrate: requires finite lo < hi");
    }

    std::vector<Segment> heap{kronrod15(f, lo, hi)};
    double value = heap.front().value;
    double error = heap.front().error;
    int evaluations = 15;

    const auto resum = [&] {
        value = 0.0;
        error = 0.0;
        for (const Segment& s : heap) {
            value += s.value;
            error += s.error;
        }
    };

    int iteration = 0;
    while (error > std::max(ctl.abs_tol, ctl.rel_tol * std::abs(value))) {
        if (static_cast<int>(heap.size()) >= ctl.max_intervals) {
            throw QuadratureError("integrate: interval budget exhausted with error estimate " +
                                  std::to_string(error));
        }
        std::pop_heap(heap.begin(), heap.end());
        const Segment worst = heap.back();
        heap.pop_back();
        const double mid = 0.5 * (worst.lo + worst.hi);
        for (const Segment& half : {kronrod15(f, worst.lo, mid), kronrod15(f, mid, worst.hi)}) {
            heap.push_back(half);
            std::push_heap(heap.begin(), heap.end());
            value += half.value;
            error += half.error;
        }
        value -= worst.value;
        error -= worst.error;
        evaluations += 30;
        // Incremental totals drift; refresh them now and then.
        if (++iteration % 64 == 0) resum();
    }
    resum();
    return {value, error, evaluations, static_cast<int>(heap.size())};
}

QuadratureResult integrate_to_infinity(const Integrand& f, double lo,
                                       const QuadratureControl& ctl) {
    const auto mapped = [&](double t) {
        if (t >= 1.0) return 0.0;
        const double s = 1.0 - t;
        const double v = f(lo + t / s);
        return v == 0.0 ? 0.0 : v / (s * s);
    };
    return integrate(mapped, 0.0, 1.0, ctl);
}

} // namespace vcoop::quad
