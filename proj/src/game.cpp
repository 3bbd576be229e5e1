#include "vcoop/game.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/tools/minima.hpp>

#include "vcoop/errors.hpp"

namespace vcoop::game {

namespace {

struct Sigmoid {
    double value;  // sigma
    double slope;  // sigma (1 - sigma)
};

// Both branches avoid exp overflow for large |x|.
Sigmoid sigmoid(double x) {
    const double e = std::exp(-std::abs(x));
    const double s = 1.0 / (1.0 + e);
    return {x >= 0.0 ? s : e * s, e * s * s};
}

double hop_power(const ChannelRealization& ch, double d) { return std::pow(d, ch.alpha); }

} // namespace

void ChannelRealization::validate() const {
    if (!(h_sq_first > 0.0) || !(eta > 0.0)) {
        throw DomainError("ChannelRealization: channel gains must be positive");
    }
    if (!(d_first > 0.0) || !(d_second > 0.0)) {
        throw DomainError("ChannelRealization: distances must be positive");
    }
    if (!(alpha > 0.0)) throw DomainError("ChannelRealization: path-loss exponent must be positive");
    if (!(noise > 0.0)) throw DomainError("ChannelRealization: noise must be positive");
}

void GameParams::validate() const {
    if (!(steepness > 0.0)) throw DomainError("GameParams: steepness must be positive");
    if (!(revenue_weight >= 0.0)) throw DomainError("GameParams: revenue weight must be >= 0");
    if (!(helper_cost > 0.0)) throw DomainError("GameParams: helper cost must be positive");
    if (!(price >= 0.0)) throw DomainError("GameParams: price must be non-negative");
    if (!(gamma0 >= 0.0)) throw DomainError("GameParams: gamma0 must be non-negative");
    if (!(max_power > 0.0)) throw DomainError("GameParams: power cap must be positive");
}

double satisfaction(double e2e_snr, const GameParams& params) {
    return sigmoid(params.steepness * (e2e_snr - params.gamma0)).value;
}

double optimal_phi(const ChannelRealization& ch) {
    ch.validate();
    const double a = ch.eta * hop_power(ch, ch.d_first);
    const double b = ch.h_sq_first * hop_power(ch, ch.d_second);
    return a / (a + b);
}

double varpi(const ChannelRealization& ch) {
    ch.validate();
    return ch.noise * (ch.eta * hop_power(ch, ch.d_first) +
                       ch.h_sq_first * hop_power(ch, ch.d_second));
}

double effective_gain(const ChannelRealization& ch) {
    return ch.eta * ch.h_sq_first / varpi(ch);
}

double first_hop_snr(const ChannelRealization& ch, double phi, double power) {
    return phi * power * ch.h_sq_first / (hop_power(ch, ch.d_first) * ch.noise);
}

double second_hop_snr(const ChannelRealization& ch, double phi, double power) {
    return (1.0 - phi) * power * ch.eta / (hop_power(ch, ch.d_second) * ch.noise);
}

double utility_source_at(double power, double phi, const ChannelRealization& ch,
                         const GameParams& params) {
    ch.validate();
    const double snr = std::min(first_hop_snr(ch, phi, power), second_hop_snr(ch, phi, power));
    return params.revenue_weight * satisfaction(snr, params) - params.price * (1.0 - phi) * power;
}

double utility_source(double power, const ChannelRealization& ch, const GameParams& params) {
    const double k = effective_gain(ch);
    const double phi = optimal_phi(ch);
    return params.revenue_weight * satisfaction(k * power, params) -
           params.price * (1.0 - phi) * power;
}

double utility_helper(double power, double phi, double price, double cost) {
    return (price * (1.0 - phi) - cost) * power;
}

double source_marginal(double power, const ChannelRealization& ch, const GameParams& params) {
    const double k = effective_gain(ch);
    const double a = params.steepness;
    const Sigmoid s = sigmoid(a * (k * power - params.gamma0));
    return a * k * params.revenue_weight * s.slope - params.price * (1.0 - optimal_phi(ch));
}

double source_curvature(double power, const ChannelRealization& ch, const GameParams& params) {
    const double k = effective_gain(ch);
    const double a = params.steepness;
    const Sigmoid s = sigmoid(a * (k * power - params.gamma0));
    return a * a * k * k * params.revenue_weight * s.slope * (1.0 - 2.0 * s.value);
}

double feasibility_ratio(const ChannelRealization& ch, const GameParams& params) {
    ch.validate();
    params.validate();
    if (params.revenue_weight == 0.0) return HUGE_VAL;
    return params.price * hop_power(ch, ch.d_second) * ch.noise /
           (params.revenue_weight * params.steepness * ch.eta);
}

double price_ceiling(const ChannelRealization& ch, const GameParams& params) {
    ch.validate();
    params.validate();
    return params.revenue_weight * params.steepness * ch.eta /
           (4.0 * hop_power(ch, ch.d_second) * ch.noise);
}

double interior_power(const ChannelRealization& ch, const GameParams& params) {
    const double q = feasibility_ratio(ch, params);
    if (!(q <= 0.25)) {
        throw NoInteriorOptimum("price too high: no stationary point of the source utility");
    }
    if (q == 0.0) throw NoInteriorOptimum("zero price: source utility increases without bound");
    const double root = std::sqrt(1.0 - 4.0 * q);
    const double log_arg = ((1.0 - 2.0 * q) + root) / (2.0 * q);
    if (!(log_arg > 0.0)) throw NoInteriorOptimum("non-positive logarithm argument");
    return (params.gamma0 + std::log(log_arg) / params.steepness) / effective_gain(ch);
}

double optimal_power(const ChannelRealization& ch, const GameParams& params) {
    return std::min(std::max(interior_power(ch, params), 0.0), params.max_power);
}

bool source_participates(const ChannelRealization& ch, const GameParams& params) {
    const double power = optimal_power(ch, params);
    return utility_source(power, ch, params) >= utility_source(0.0, ch, params);
}

double optimal_price(const ChannelRealization& ch, const GameParams& params) {
    ch.validate();
    params.validate();
    const double c = params.helper_cost;
    const double first = ch.eta * hop_power(ch, ch.d_first);
    const double second = ch.h_sq_first * hop_power(ch, ch.d_second);
    return (first * c + c * second) / second;
}

PriceResponseGap price_response_gap(const ChannelRealization& ch, const GameParams& params) {
    const double phi = optimal_phi(ch);
    const double c = params.helper_cost;

    const auto helper_value = [&](double price) {
        GameParams at = params;
        at.price = price;
        try {
            if (!source_participates(ch, at)) return 0.0;
            return utility_helper(optimal_power(ch, at), phi, price, c);
        } catch (const NoInteriorOptimum&) {
            return 0.0;
        }
    };

    PriceResponseGap out;
    out.closed_form_price = optimal_price(ch, params);
    out.closed_form_utility = helper_value(out.closed_form_price);

    const double lo = c / (1.0 - phi);
    const double hi = price_ceiling(ch, params);
    if (!(hi > lo)) {
        out.numeric_price = out.closed_form_price;
        out.numeric_utility = out.closed_form_utility;
        return out;
    }

    // Coarse scan to bracket the best price, then Brent within the bracket.
    constexpr int kScan = 256;
    int best = 0;
    double best_value = -HUGE_VAL;
    for (int i = 0; i <= kScan; ++i) {
        const double v = helper_value(lo + (hi - lo) * i / kScan);
        if (v > best_value) {
            best_value = v;
            best = i;
        }
    }
    const double a = lo + (hi - lo) * std::max(best - 1, 0) / kScan;
    const double b = lo + (hi - lo) * std::min(best + 1, kScan) / kScan;
    const auto [price, neg_value] = boost::math::tools::brent_find_minima(
        [&](double p) { return -helper_value(p); }, a, b, 52);

    out.numeric_price = price;
    out.numeric_utility = -neg_value;
    if (best_value > out.numeric_utility) {
        out.numeric_price = lo + (hi - lo) * best / kScan;
        out.numeric_utility = best_value;
    }
    out.gap = out.numeric_price - out.closed_form_price;
    return out;
}

Equilibrium stackelberg_equilibrium(const ChannelRealization& ch, const GameParams& params) {
    Equilibrium eq;
    eq.phi_star = optimal_phi(ch);
    eq.p_star = optimal_price(ch, params);

    GameParams at = params;
    at.price = eq.p_star;
    try {
        eq.P_star = optimal_power(ch, at);
        eq.foc_residual = source_marginal(eq.P_star, ch, at);
    } catch (const NoInteriorOptimum&) {
        eq.P_star = 0.0;
        eq.no_trade = true;
    }
    eq.U_s = utility_source(eq.P_star, ch, at);
    eq.U_H = utility_helper(eq.P_star, eq.phi_star, eq.p_star, params.helper_cost);
    return eq;
}

} // namespace vcoop::game
