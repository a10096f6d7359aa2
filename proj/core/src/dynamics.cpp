#include "perfmm/dynamics.hpp"

#include <cmath>

namespace perfmm {

double as_impact(double gamma, double sigma, int q, double tau) {
    return -gamma * sigma * sigma * q * tau;
}

double delta_xi(double xi, double tau) {
    const double x = xi * tau;
    if (x < 1.0) {
        // 1 - (1+x)e^{-x} loses all leading digits for small x; use its series
        //   sum_{n>=2} (-1)^n (n-1)/n! x^n  =  x^2/2 - x^3/3 + x^4/8 - ...
        // and note delta_xi = tau^2 * sum / x^2.
        double sum = 0.0;
        double x_pow = 1.0;       // x^{n-2}
        double factorial = 2.0;   // n!
        double sign = 1.0;
        for (int n = 2; n <= 48; ++n) {
            const double term = sign * (n - 1) / factorial * x_pow;
            sum += term;
            if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
            x_pow *= x;
            factorial *= (n + 1);
            sign = -sign;
        }
        return tau * tau * sum;
    }
    return (1.0 - std::exp(-x) * (1.0 + x)) / (xi * xi);
}

double e_xi(double xi, double tau) {
    return -std::expm1(-2.0 * xi * tau) / (2.0 * xi);
}

double decay_integral(double xi, double h) {
    return -std::expm1(-xi * h) / xi;
}

TransitionLaw transition_law(double s_t, int q, double xi, double gamma, double sigma,
                             double tau) {
    TransitionLaw law;
    law.tau = tau;
    law.mean = std::exp(-xi * tau) * s_t - gamma * sigma * sigma * q * delta_xi(xi, tau);
    law.variance = sigma * sigma * e_xi(xi, tau);
    return law;
}

PathState euler_step(const PathState& state, const ProcessParams& p, double z) {
    const double tau = p.T - state.time(p.dt);
    const double g =
        p.impact_multiplier * as_impact(p.gamma, p.sigma, state.driver_inventory, tau);
    PathState next = state;
    next.step = state.step + 1;
    next.mid_price =
        state.mid_price + (g - p.xi * state.mid_price) * p.dt + p.sigma * std::sqrt(p.dt) * z;
    return next;
}

PathState exact_step(const PathState& state, const ProcessParams& p, double z) {
    const double tau_next = p.T - (state.step + 1) * p.dt;
    // Impact integrated against the decay kernel over one step:
    //   I = int_t^{t+dt} e^{-xi (t+dt-u)} (T-u) du = tau_next * D(xi,dt) + delta_xi(xi,dt).
    const double impact_weight = tau_next * decay_integral(p.xi, p.dt) + delta_xi(p.xi, p.dt);
    const double step_var = p.sigma * p.sigma * e_xi(p.xi, p.dt);
    PathState next = state;
    next.step = state.step + 1;
    next.mid_price = std::exp(-p.xi * p.dt) * state.mid_price -
                     p.impact_multiplier * p.gamma * p.sigma * p.sigma *
                         state.driver_inventory * impact_weight +
                     std::sqrt(step_var) * z;
    return next;
}

}  // namespace perfmm
