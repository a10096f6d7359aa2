#pragma once

#include <cstdint>

#include "perfmm/dynamics.hpp"

namespace perfmm {

/// A strategy's output for one step. Quotes are posted at s + ask_premium and
/// s - bid_premium; the reservation price is the midpoint of the two quotes,
/// so reservation = s + (ask_premium - bid_premium)/2 always holds.
struct QuoteDecision {
    double reservation = 0.0;
    double ask_premium = 0.0;
    double bid_premium = 0.0;

    double spread() const { return ask_premium + bid_premium; }
};

/// Coefficients of the inventory expansion of the performative value function.
/// theta1 is the expected terminal price from the current state; theta2 <= 0
/// for tau > 0 and vanishes at the horizon.
struct HjbCoefficients {
    double theta1 = 0.0;
    double theta2 = 0.0;
};

/// Learnable multipliers on the three reservation-price terms of the
/// performative strategy. (1,1,1) reproduces the analytic strategy.
struct ThetaParams {
    double theta0 = 1.0;  // scales the decayed-price term
    double theta1 = 1.0;  // scales the driver-inventory term
    double theta2 = 1.0;  // scales the own-inventory term
};

enum class QuoteRegime { AlignedBuy, AlignedSell, ArbitrageBuy, ArbitrageSell };

/// Critical own-inventory thresholds at which the performative agent's stance
/// flips, together with the regime of the supplied (q, q_perf) pair relative
/// to the prevailing strategy.
struct ThresholdReport {
    double h = 0.0;      // threshold base h(s, t)
    double lower = 0.0;  // h - |q| * delta_xi / e_xi
    double upper = 0.0;  // h + |q| * delta_xi / e_xi
    QuoteRegime regime = QuoteRegime::AlignedBuy;
};

/// Inventory strategy: r = s - gamma*q*sigma^2*tau,
/// spread = (2/gamma)*ln(1 + gamma/k) + gamma*sigma^2*tau.
QuoteDecision as_quotes(double s, int q, double gamma, double sigma, double k, double tau);

/// Fixed symmetric quotes around the mid-price, half-spread (1/gamma)*ln(1 + gamma/k).
QuoteDecision symmetric_quotes(double s, double gamma, double k);

/// theta1 = exp(-xi*tau)*s - gamma*sigma^2*q*delta_xi;
/// theta2 = (gamma*sigma^2/(4*xi)) * (exp(-2*xi*tau) - 1).
HjbCoefficients hjb_coefficients(double s, int q, double xi, double gamma, double sigma,
                                 double tau);

/// Performativity-aware quotes: r = theta1 + 2*q_perf*theta2, quotes symmetric
/// about r with half-spread (1/gamma)*ln(1 + gamma/k) - theta2. q is the
/// prevailing (driver) inventory, q_perf the agent's own.
QuoteDecision performative_quotes(double s, int q, int q_perf, double xi, double gamma,
                                  double sigma, double k, double tau);

/// Performative quotes with the reservation terms rescaled by theta; the
/// spread is unchanged.
QuoteDecision theta_quotes(double s, int q, int q_perf, double xi, double gamma, double sigma,
                           double k, double tau, const ThetaParams& theta);

/// Stance thresholds on q_perf around h(s,t) = -s*(1 - exp(-xi*tau))/(gamma*sigma^2*e_xi).
/// Throws std::domain_error at tau = 0 where e_xi vanishes.
ThresholdReport critical_thresholds(double s, int q, int q_perf, double xi, double gamma,
                                    double sigma, double tau);

/// log(-u) for the performative agent's exponential-utility value function.
/// Finite for every finite input; the exponentiated form overflows first.
double log_neg_value_function(double x, double s, int q_perf, int q, double xi, double gamma,
                              double sigma, double tau);

/// Closed-form value function, always negative. Evaluated in log space;
/// returns -infinity when the exponentiation would overflow.
double value_function(double x, double s, int q_perf, int q, double xi, double gamma,
                      double sigma, double tau);

}  // namespace perfmm
