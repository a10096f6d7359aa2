#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "perfmm/params.hpp"

namespace perfmm {

struct QuoteDecision;  // strategies.hpp

/// Gaussian law of the terminal mid-price conditional on the current state,
/// valid while the driver inventory is held constant over the remaining horizon.
struct TransitionLaw {
    double mean = 0.0;      // price units
    double variance = 0.0;  // price units squared
    double tau = 0.0;       // remaining horizon
};

/// One simulation path's evolving state on the discrete grid t_n = n*dt.
struct PathState {
    int step = 0;              // n in [0, N]
    double mid_price = 0.0;    // s_n
    int driver_inventory = 0;  // q_n of the price-driving agent

    double time(double dt) const { return step * dt; }
};

/// Inventory-pressure drift of the prevailing quoting rule: -gamma*sigma^2*q*tau.
double as_impact(double gamma, double sigma, int q, double tau);

/// Closed form of the drift-weighting integral: int_0^tau v*exp(-xi*v) dv
/// = (1/xi^2) * (1 - exp(-xi*tau)*(1 + xi*tau)). Non-negative.
double delta_xi(double xi, double tau);

/// Closed form of int_0^tau exp(-2*xi*v) dv = (1 - exp(-2*xi*tau)) / (2*xi).
/// Non-negative, bounded by 1/(2*xi).
double e_xi(double xi, double tau);

/// int_0^h exp(-xi*v) dv, the one-step decay weight used by the exact stepper.
double decay_integral(double xi, double h);

/// Terminal-price law over horizon tau with the driver inventory frozen at q:
///   mean = exp(-xi*tau)*s - gamma*sigma^2*q*delta_xi(xi, tau)
///   var  = sigma^2 * e_xi(xi, tau)
TransitionLaw transition_law(double s_t, int q, double xi, double gamma, double sigma,
                             double tau);

/// One Euler-Maruyama step of the discrete dynamics
///   s' = s + [impact_multiplier*(-gamma*sigma^2*q*(T - t)) - xi*s]*dt + sigma*sqrt(dt)*z.
/// Inventory is left untouched; fills mutate it separately.
PathState euler_step(const PathState& state, const ProcessParams& p, double z);

/// One step of the exact transition with q frozen across the step:
///   s' = exp(-xi*dt)*s - impact_multiplier*gamma*sigma^2*q*I + sqrt(v)*z
/// where I integrates the impact against the decay kernel over [t, t+dt] and
/// v = sigma^2 * e_xi(xi, dt).
PathState exact_step(const PathState& state, const ProcessParams& p, double z);

enum class Stepper { Euler, Exact };

inline PathState advance(const PathState& state, const ProcessParams& p, double z, Stepper s) {
    return s == Stepper::Euler ? euler_step(state, p, z) : exact_step(state, p, z);
}

/// The three per-step series behind price-formation analysis. All series have
/// length N+1; full equals deterministic when the noise stream is identically zero.
struct PathDecomposition {
    std::vector<double> impact;         // impact_multiplier * g(t_n) with the realised q_n
    std::vector<double> deterministic;  // path integrated with the noise term zeroed
    std::vector<double> full;           // complete path
    std::vector<int> driver_inventory;  // realised q_n
};

enum class FillRule;  // execution.hpp

struct SimulatePathOptions {
    double s0 = 0.0;
    double impact_multiplier = 1.0;
    bool zero_noise = false;
    Stepper stepper = Stepper::Euler;
    int fill_rule = 0;  // FillRule value; kept integral to avoid a header cycle
};

/// Quoting policy of the price-driving agent: maps the current state and the
/// remaining horizon to a quote decision.
using DriverPolicy = std::function<QuoteDecision(const PathState&, double tau)>;

/// Runs the full closed loop (driver quotes, probabilistic fills, inventory
/// update, price update) for N steps and returns the decomposition series.
/// Deterministic for a fixed seed.
PathDecomposition simulate_price_path(const MarketParams& market, double xi, double gamma,
                                      const DriverPolicy& driver, std::uint64_t seed,
                                      const SimulatePathOptions& options = {});

}  // namespace perfmm
