#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace perfmm {

/// Ambient market constants shared by every module.
///
/// A and k come from the exponential fill intensity lambda(delta) = A*exp(-k*delta);
/// sigma is the diffusion volatility, T the session horizon and dt the grid step.
struct MarketParams {
    double A = 140.0;      // market order arrival scale, per unit time
    double k = 1.5;        // book decay, per price unit
    double sigma = 2.0;    // volatility, price units per sqrt(time)
    double T = 1.0;        // horizon, time units
    double dt = 0.005;     // grid step, time units

    /// Number of grid steps N = round(T/dt).
    int step_count() const { return static_cast<int>(std::llround(T / dt)); }

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

/// Mean-reversion speed of the price toward the prevailing strategy's target.
struct PerformativityParams {
    double xi = 1.0;       // > 0

    void validate() const {
        if (!(xi > 0.0)) throw std::invalid_argument("PerformativityParams: xi must be > 0");
    }
};

/// Exponential-utility risk aversion.
struct RiskParams {
    double gamma = 0.5;    // > 0

    void validate() const {
        if (!(gamma > 0.0)) throw std::invalid_argument("RiskParams: gamma must be > 0");
    }
};

/// Everything the price steppers need for one path: market constants plus the
/// (xi, gamma) cell and the drift amplification knob.
struct ProcessParams {
    double xi = 1.0;
    double gamma = 0.5;
    double sigma = 2.0;
    double T = 1.0;
    double dt = 0.005;
    double impact_multiplier = 1.0;
};

inline void MarketParams::validate() const {
    // A = 0 and sigma = 0 are admitted as degenerate markets (no fills, no
    // noise); they are useful as analytic fixtures.
    if (!(A >= 0.0)) throw std::invalid_argument("MarketParams: A must be >= 0");
    if (!(k > 0.0)) throw std::invalid_argument("MarketParams: k must be > 0");
    if (!(sigma >= 0.0)) throw std::invalid_argument("MarketParams: sigma must be >= 0");
    if (!(T > 0.0)) throw std::invalid_argument("MarketParams: T must be > 0");
    if (!(dt > 0.0 && dt <= T)) throw std::invalid_argument("MarketParams: dt must satisfy 0 < dt <= T");
    const int n = step_count();
    if (n < 1 || std::abs(n * dt - T) > 1e-12 * T)
        throw std::invalid_argument("MarketParams: T/dt must be a positive integer (dt does not divide T)");
}

}  // namespace perfmm
