#include "perfmm/strategies.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace perfmm {

namespace {

QuoteDecision symmetric_about(double s, double reservation, double half_spread) {
    const double skew = reservation - s;
    return QuoteDecision{reservation, half_spread + skew, half_spread - skew};
}

}  // namespace

QuoteDecision as_quotes(double s, int q, double gamma, double sigma, double k, double tau) {
    const double reservation = s - gamma * q * sigma * sigma * tau;
    const double half_spread = std::log1p(gamma / k) / gamma + 0.5 * gamma * sigma * sigma * tau;
    return symmetric_about(s, reservation, half_spread);
}

QuoteDecision symmetric_quotes(double s, double gamma, double k) {
    const double half_spread = std::log1p(gamma / k) / gamma;
    return QuoteDecision{s, half_spread, half_spread};
}

HjbCoefficients hjb_coefficients(double s, int q, double xi, double gamma, double sigma,
                                 double tau) {
    HjbCoefficients c;
    c.theta1 = std::exp(-xi * tau) * s - gamma * sigma * sigma * q * delta_xi(xi, tau);
    c.theta2 = gamma * sigma * sigma / (4.0 * xi) * std::expm1(-2.0 * xi * tau);
    return c;
}

QuoteDecision performative_quotes(double s, int q, int q_perf, double xi, double gamma,
                                  double sigma, double k, double tau) {
    const HjbCoefficients c = hjb_coefficients(s, q, xi, gamma, sigma, tau);
    const double reservation = c.theta1 + 2.0 * q_perf * c.theta2;
    const double half_spread = std::log1p(gamma / k) / gamma - c.theta2;
    return symmetric_about(s, reservation, half_spread);
}

QuoteDecision theta_quotes(double s, int q, int q_perf, double xi, double gamma, double sigma,
                           double k, double tau, const ThetaParams& theta) {
    const double reservation =
        theta.theta0 * std::exp(-xi * tau) * s -
        gamma * sigma * sigma *
            (theta.theta1 * q * delta_xi(xi, tau) + theta.theta2 * q_perf * e_xi(xi, tau));
    const double theta2 = gamma * sigma * sigma / (4.0 * xi) * std::expm1(-2.0 * xi * tau);
    const double half_spread = std::log1p(gamma / k) / gamma - theta2;
    return symmetric_about(s, reservation, half_spread);
}

ThresholdReport critical_thresholds(double s, int q, int q_perf, double xi, double gamma,
                                    double sigma, double tau) {
    if (!(tau > 0.0))
        throw std::domain_error("critical_thresholds: degenerate horizon (tau = 0)");
    const double e = e_xi(xi, tau);
    const double d = delta_xi(xi, tau);
    ThresholdReport report;
    report.h = -s * (-std::expm1(-xi * tau)) / (gamma * sigma * sigma * e);
    const double width = std::abs(q) * d / e;
    report.lower = report.h - width;
    report.upper = report.h + width;

    const HjbCoefficients c = hjb_coefficients(s, q, xi, gamma, sigma, tau);
    const double reservation = c.theta1 + 2.0 * q_perf * c.theta2;
    // Stance: reservation below mid means the agent wants to sell. The driver's
    // stance follows the sign of its inventory. Ties count as aligned.
    const int perf_stance = reservation < s ? -1 : (reservation > s ? 1 : 0);
    const int driver_stance = q > 0 ? -1 : (q < 0 ? 1 : 0);
    const bool aligned = perf_stance * driver_stance >= 0;
    if (aligned) {
        const int direction = perf_stance != 0 ? perf_stance : driver_stance;
        report.regime = direction >= 0 ? QuoteRegime::AlignedBuy : QuoteRegime::AlignedSell;
    } else {
        report.regime =
            perf_stance > 0 ? QuoteRegime::ArbitrageBuy : QuoteRegime::ArbitrageSell;
    }
    return report;
}

double log_neg_value_function(double x, double s, int q_perf, int q, double xi, double gamma,
                              double sigma, double tau) {
    const double expected_terminal =
        std::exp(-xi * tau) * s - gamma * sigma * sigma * q * delta_xi(xi, tau);
    const double variance_term = gamma * gamma * static_cast<double>(q_perf) * q_perf * sigma *
                                 sigma * (-std::expm1(-2.0 * xi * tau)) / (4.0 * xi);
    return -gamma * x - gamma * q_perf * expected_terminal + variance_term;
}

double value_function(double x, double s, int q_perf, int q, double xi, double gamma,
                      double sigma, double tau) {
    const double log_neg = log_neg_value_function(x, s, q_perf, q, xi, gamma, sigma, tau);
    if (log_neg > std::log(std::numeric_limits<double>::max()))
        return -std::numeric_limits<double>::infinity();
    return -std::exp(log_neg);
}

}  // namespace perfmm
