#pragma once

// Leader/follower pricing game between the source vehicle (buys relay power)
// and the selected helper (sets the price per Watt).
//
// With the split at its optimum both hops see the same SNR k P, where
// k = eta |h|^2 / varpi and varpi = N0 (eta d1^alpha + |h|^2 d2^alpha).

#include <limits>

namespace vcoop::game {

struct ChannelRealization {
    double h_sq_first = 1.0;  // |h|^2 from source to the selected helper
    double eta = 1.0;         // sum over RSU antennas of |h_j|^2
    double d_first = 10.0;
    double d_second = 10.0;
    double alpha = 2.0;
    double noise = 1.0;

    void validate() const;
};

struct GameParams {
    double steepness = 1.0;       // a
    double revenue_weight = 1.0;  // w_p
    double helper_cost = 1.0;     // c, per Watt
    double price = 10.0;          // p_i, per Watt
    double gamma0 = 0.1;
    double max_power = std::numeric_limits<double>::infinity();

    void validate() const;
};

/// 1 / (1 + exp(-a (snr - gamma0))), evaluated without overflow.
double satisfaction(double e2e_snr, const GameParams& params);

/// eta d1^a / (eta d1^a + |h|^2 d2^a): the split that equalizes both hop SNRs.
double optimal_phi(const ChannelRealization& ch);

/// N0 (eta d1^a + |h|^2 d2^a).
double varpi(const ChannelRealization& ch);

/// SNR per Watt at the optimal split.
double effective_gain(const ChannelRealization& ch);

double first_hop_snr(const ChannelRealization& ch, double phi, double power);
double second_hop_snr(const ChannelRealization& ch, double phi, double power);

/// w_p U_R(min of hop SNRs) - p (1 - phi) P for an arbitrary split.
double utility_source_at(double power, double phi, const ChannelRealization& ch,
                         const GameParams& params);

/// Source utility with phi = phi*.
double utility_source(double power, const ChannelRealization& ch, const GameParams& params);

/// (p (1 - phi) - c) P.
double utility_helper(double power, double phi, double price, double cost);

/// dU_s/dP = a k w sigma (1 - sigma) - p (1 - phi*).
double source_marginal(double power, const ChannelRealization& ch, const GameParams& params);

/// d2U_s/dP2 = a^2 k^2 w sigma (1 - sigma)(1 - 2 sigma); negative only once kP > gamma0.
double source_curvature(double power, const ChannelRealization& ch, const GameParams& params);

/// q = p d2^a N0 / (w a eta). A stationary point exists iff q <= 1/4.
double feasibility_ratio(const ChannelRealization& ch, const GameParams& params);

/// Largest price with an interior optimum: w a eta / (4 d2^a N0).
double price_ceiling(const ChannelRealization& ch, const GameParams& params);

/// (gamma0 + log(((1 - 2q) + sqrt(1 - 4q)) / (2q)) / a) / k.
/// Throws NoInteriorOptimum when q > 1/4.
double interior_power(const ChannelRealization& ch, const GameParams& params);

/// max(P_bar, 0), capped at params.max_power. Throws NoInteriorOptimum like
/// interior_power.
double optimal_power(const ChannelRealization& ch, const GameParams& params);

/// True when buying the interior optimum beats buying nothing.
bool source_participates(const ChannelRealization& ch, const GameParams& params);

/// (eta c d1^a + c |h|^2 d2^a) / (|h|^2 d2^a) = c / (1 - phi*).
double optimal_price(const ChannelRealization& ch, const GameParams& params);

struct PriceResponseGap {
    double closed_form_price = 0.0;
    double numeric_price = 0.0;
    double closed_form_utility = 0.0;  // helper utility at the closed-form price
    double numeric_utility = 0.0;
    double gap = 0.0;                  // numeric_price - closed_form_price
};

/// Maximizes the helper utility over the price with the source responding
/// optimally (no purchase when it does not pay), and compares with
/// optimal_price.
PriceResponseGap price_response_gap(const ChannelRealization& ch, const GameParams& params);

struct Equilibrium {
    double phi_star = 0.0;
    double p_star = 0.0;
    double P_star = 0.0;
    double U_s = 0.0;
    double U_H = 0.0;
    double foc_residual = 0.0;
    bool no_trade = false;
};

/// phi*, then p*, then P*(p*). The price in params is ignored. When no
/// interior optimum exists at p*, P* = 0 and no_trade is set.
Equilibrium stackelberg_equilibrium(const ChannelRealization& ch, const GameParams& params);

} // namespace vcoop::game
