#include <cmath>
#include <random>

#include "doctest.h"
#include "perfmm/dynamics.hpp"
#include "perfmm/rng.hpp"
#include "perfmm/strategies.hpp"
#include "support/quadrature.hpp"
#include "support/stats.hpp"

using namespace perfmm;

TEST_CASE("as_impact evaluates -gamma sigma^2 q tau") {
    CHECK(as_impact(0.5, 2.0, 0, 1.0) == 0.0);
    CHECK(as_impact(0.5, 2.0, 2, 1.0) == doctest::Approx(-4.0).epsilon(1e-14));
    CHECK(as_impact(0.5, 2.0, -2, 1.0) == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("delta_xi closed form matches quadrature") {
    CHECK(delta_xi(1.0, 0.0) == 0.0);
    CHECK(delta_xi(1.0, 1.0) == doctest::Approx(0.264241117657).epsilon(1e-10));
    CHECK(delta_xi(20.0, 1.0) ==
          doctest::Approx(0.0025 - 21.0 * std::exp(-20.0) / 400.0).epsilon(1e-12));

    for (double xi : {1e-3, 1e-2, 0.3, 1.0, 7.0, 1e2, 1e3}) {
        for (double tau : {0.01, 0.25, 1.0, 4.0}) {
            const double oracle = testsupport::integrate(
                [xi](double v) { return v * std::exp(-xi * v); }, 0.0, tau);
            CHECK(std::abs(delta_xi(xi, tau) - oracle) < 1e-10);
        }
    }
}

TEST_CASE("e_xi closed form matches quadrature and its bound") {
    CHECK(e_xi(1.0, 0.0) == 0.0);
    CHECK(e_xi(1.0, 1.0) == doctest::Approx(0.432332358382).epsilon(1e-10));
    CHECK(e_xi(5.0, 1.0) == doctest::Approx(0.0999954600070).epsilon(1e-10));

    for (double xi : {1e-3, 0.5, 3.0, 1e3}) {
        for (double tau : {0.05, 0.5, 2.0}) {
            const double oracle = testsupport::integrate(
                [xi](double v) { return std::exp(-2.0 * xi * v); }, 0.0, tau);
            CHECK(std::abs(e_xi(xi, tau) - oracle) < 1e-10);
            CHECK(e_xi(xi, tau) >= 0.0);
            // open bound 1/(2 xi) saturates in floating point for large xi*tau
            CHECK(e_xi(xi, tau) <= 0.5 / xi);
        }
    }
}

TEST_CASE("delta_xi and e_xi are non-negative over wide parameter ranges") {
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> log_xi(std::log(1e-3), std::log(1e3));
    std::uniform_real_distribution<double> tau_dist(0.0, 10.0);
    for (int i = 0; i < 2000; ++i) {
        const double xi = std::exp(log_xi(rng));
        const double tau = tau_dist(rng);
        CHECK(delta_xi(xi, tau) >= 0.0);
        CHECK(e_xi(xi, tau) >= 0.0);
    }
}

TEST_CASE("transition law mean and variance") {
    SUBCASE("zero horizon") {
        const TransitionLaw law = transition_law(10.0, 0, 1.0, 0.5, 2.0, 0.0);
        CHECK(law.mean == doctest::Approx(10.0).epsilon(1e-14));
        CHECK(law.variance == 0.0);
    }
    SUBCASE("pure decay") {
        const TransitionLaw law = transition_law(10.0, 0, 1.0, 0.5, 2.0, 1.0);
        CHECK(law.mean == doctest::Approx(10.0 * std::exp(-1.0)).epsilon(1e-14));
        CHECK(law.variance == doctest::Approx(2.0 * (1.0 - std::exp(-2.0))).epsilon(1e-14));
    }
    SUBCASE("inventory drift") {
        const TransitionLaw law = transition_law(0.0, 2, 1.0, 0.5, 2.0, 1.0);
        const double oracle =
            testsupport::integrate([](double v) { return v * std::exp(-v); }, 0.0, 1.0);
        CHECK(law.mean == doctest::Approx(-4.0 * oracle).epsilon(1e-12));
        CHECK(law.variance == doctest::Approx(1.72932943352677).epsilon(1e-10));
    }
}

TEST_CASE("euler step reproduces the discrete update") {
    const ProcessParams p{1.0, 0.5, 2.0, 1.0, 0.005, 1.0};
    SUBCASE("deterministic decay") {
        const PathState next = euler_step({0, 10.0, 0}, p, 0.0);
        CHECK(next.mid_price == doctest::Approx(9.95).epsilon(1e-14));
        CHECK(next.step == 1);
        CHECK(next.driver_inventory == 0);
    }
    SUBCASE("zero state is a fixed point") {
        CHECK(euler_step({7, 0.0, 0}, p, 0.0).mid_price == 0.0);
    }
    SUBCASE("impact and noise") {
        const PathState next = euler_step({0, 0.0, 2}, p, 1.0);
        CHECK(next.mid_price ==
              doctest::Approx(-4.0 * 0.005 + 2.0 * std::sqrt(0.005)).epsilon(1e-12));
    }
}

TEST_CASE("exact step agrees with the integrating-factor solution") {
    const ProcessParams p{1.0, 0.5, 2.0, 1.0, 0.005, 1.0};
    CHECK(exact_step({0, 10.0, 0}, p, 0.0).mid_price ==
          doctest::Approx(10.0 * std::exp(-0.005)).epsilon(1e-14));
    CHECK(exact_step({0, 0.0, 0}, p, 0.0).mid_price == 0.0);
}

TEST_CASE("exact minus euler drift difference is second order in dt") {
    double previous_scaled = 0.0;
    bool have_previous = false;
    for (double dt : {1e-2, 1e-3, 1e-4}) {
        const ProcessParams p{1.3, 0.5, 2.0, 1.0, dt, 1.0};
        const PathState state{0, 10.0, 3};
        const double diff =
            std::abs(exact_step(state, p, 0.0).mid_price - euler_step(state, p, 0.0).mid_price);
        const double scaled = diff / (dt * dt);  // should approach a constant
        if (have_previous) CHECK(scaled == doctest::Approx(previous_scaled).epsilon(0.05));
        previous_scaled = scaled;
        have_previous = true;
    }
}

TEST_CASE("composed exact steps reproduce the whole-horizon transition law") {
    const double xi = 0.8, gamma = 0.5, sigma = 2.0, T = 1.0, dt = 0.005;
    const ProcessParams p{xi, gamma, sigma, T, dt, 1.0};
    const int q = 3;
    PathState state{0, 4.0, q};
    double variance = 0.0;
    const double decay2 = std::exp(-2.0 * xi * dt);
    for (int n = 0; n < 200; ++n) {
        state = exact_step(state, p, 0.0);
        variance = variance * decay2 + sigma * sigma * e_xi(xi, dt);
    }
    const TransitionLaw law = transition_law(4.0, q, xi, gamma, sigma, T);
    CHECK(state.mid_price == doctest::Approx(law.mean).epsilon(1e-12));
    CHECK(variance == doctest::Approx(law.variance).epsilon(1e-12));
}

TEST_CASE("euler terminal mean error shrinks at least linearly in dt") {
    const double xi = 1.0, gamma = 0.5, sigma = 2.0, T = 1.0;
    const TransitionLaw law = transition_law(5.0, 2, xi, gamma, sigma, T);
    const auto terminal_error = [&](double dt) {
        const ProcessParams p{xi, gamma, sigma, T, dt, 1.0};
        PathState state{0, 5.0, 2};
        const int steps = static_cast<int>(std::llround(T / dt));
        for (int n = 0; n < steps; ++n) state = euler_step(state, p, 0.0);
        return std::abs(state.mid_price - law.mean);
    };
    const double coarse = terminal_error(0.01);
    const double fine = terminal_error(0.005);
    CHECK(coarse / fine >= 1.8);
}

TEST_CASE("theta2 algebra: quarter-rate form equals -(gamma sigma^2/2) e_xi") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> xi_dist(1e-3, 50.0);
    std::uniform_real_distribution<double> tau_dist(0.0, 2.0);
    std::uniform_real_distribution<double> g_dist(0.05, 2.0);
    for (int i = 0; i < 500; ++i) {
        const double xi = xi_dist(rng), tau = tau_dist(rng);
        const double gamma = g_dist(rng), sigma = g_dist(rng) + 0.5;
        const double lhs = gamma * sigma * sigma / (4.0 * xi) * std::expm1(-2.0 * xi * tau);
        const double rhs = -(gamma * sigma * sigma / 2.0) * e_xi(xi, tau);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
    }
}

TEST_CASE("martingale violation: constant inventory bends the expected terminal price") {
    const double xi = 1.0, gamma = 0.5, sigma = 2.0, tau = 1.0, s = 5.0;
    const int q = 2;
    const TransitionLaw law = transition_law(s, q, xi, gamma, sigma, tau);
    RandomStream stream(99, 0, 1);
    const int n = 100000;
    std::vector<double> draws(n);
    const double sd = std::sqrt(law.variance);
    for (int i = 0; i < n; ++i) draws[i] = law.mean + sd * stream.normal();
    const auto mv = testsupport::mean_var(draws);
    const double deviation = std::abs(mv.mean - std::exp(-xi * tau) * s);
    const double predicted = gamma * sigma * sigma * std::abs(q) * delta_xi(xi, tau);
    CHECK(deviation > 0.0);
    CHECK(std::abs(deviation - predicted) <= 3.0 * mv.se_mean());
}

TEST_CASE("large xi collapses the transition mean toward the instantaneous target") {
    const double xi = 1e3, tau = 1.0, gamma = 0.5, sigma = 2.0, s = 25.0;
    const int q = 4;
    const TransitionLaw law = transition_law(s, q, xi, gamma, sigma, tau);
    CHECK(std::abs(law.mean) <=
          1e-2 * std::abs(s) + 1e-2 * gamma * sigma * sigma * std::abs(q));
    CHECK(delta_xi(xi, tau) <= 1e-5);
}

namespace {

// Driver that never trades: quotes so deep they cannot fill.
DriverPolicy inert_driver() {
    return [](const PathState& state, double) {
        return QuoteDecision{state.mid_price, 1e9, 1e9};
    };
}

}  // namespace

TEST_CASE("simulate_price_path: noiseless zero-inventory path decays exponentially") {
    MarketParams market;
    SimulatePathOptions options;
    options.s0 = 10.0;
    options.zero_noise = true;
    options.stepper = Stepper::Exact;
    const PathDecomposition d =
        simulate_price_path(market, 2.0, 0.5, inert_driver(), 42, options);
    REQUIRE(d.full.size() == 201);
    for (int n = 0; n <= 200; ++n) {
        CHECK(d.full[n] == doctest::Approx(10.0 * std::exp(-2.0 * n * 0.005)).epsilon(1e-12));
        CHECK(d.full[n] == d.deterministic[n]);
        CHECK(d.driver_inventory[n] == 0);
        CHECK(d.impact[n] == 0.0);
    }
}

TEST_CASE("simulate_price_path is deterministic per seed") {
    MarketParams market;
    const auto policy = [](const PathState& state, double tau) {
        return as_quotes(state.mid_price, state.driver_inventory, 0.5, 2.0, 1.5, tau);
    };
    const PathDecomposition a = simulate_price_path(market, 5.0, 0.5, policy, 7);
    const PathDecomposition b = simulate_price_path(market, 5.0, 0.5, policy, 7);
    CHECK(a.full == b.full);
    CHECK(a.deterministic == b.deterministic);
    CHECK(a.impact == b.impact);
    CHECK(a.driver_inventory == b.driver_inventory);
}

TEST_CASE("simulate_price_path Monte Carlo terminal mean matches the transition law") {
    MarketParams market;
    const double xi = 1.0, gamma = 0.5;
    SimulatePathOptions options;
    options.s0 = 3.0;
    options.stepper = Stepper::Exact;  // unbiased per-step transitions
    const int paths = 10000;
    std::vector<double> terminal(paths);
    for (int i = 0; i < paths; ++i) {
        // one path per seed; the driver never fills so q stays 0
        const PathDecomposition d =
            simulate_price_path(market, xi, gamma, inert_driver(),
                                substream_seed(4242, i, 77), options);
        terminal[i] = d.full.back();
    }
    const TransitionLaw law = transition_law(3.0, 0, xi, gamma, market.sigma, market.T);
    const auto mv = testsupport::mean_var(terminal);
    CHECK(std::abs(mv.mean - law.mean) <= 3.0 * mv.se_mean());
    CHECK(std::abs(mv.var - law.variance) <= 3.0 * mv.se_var());
}
