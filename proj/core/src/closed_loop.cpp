#include "closed_loop.hpp"

#include <cmath>

#include "perfmm/rng.hpp"
#include "perfmm/strategies.hpp"

namespace perfmm::detail {

namespace {

QuoteDecision shadow_decision(StrategyKind kind, double s, double tau, int own_q, int driver_q,
                              const LoopConfig& c) {
    switch (kind) {
        case StrategyKind::As:
            return as_quotes(s, own_q, c.gamma, c.market.sigma, c.market.k, tau);
        case StrategyKind::Symmetric:
            return symmetric_quotes(s, c.gamma, c.market.k);
        case StrategyKind::Performative:
            return performative_quotes(s, driver_q, own_q, c.xi, c.gamma, c.market.sigma,
                                       c.market.k, tau);
        case StrategyKind::Theta:
            return theta_quotes(s, driver_q, own_q, c.xi, c.gamma, c.market.sigma, c.market.k,
                                tau, c.theta);
    }
    return {};
}

struct AgentSlot {
    StrategyKind kind;
    RandomStream fills;
    LoopAgentResult result;
};

void record_quote(AgentSeries& series, const QuoteDecision& d, double s, double offset) {
    series.reservation.push_back(d.reservation + offset);
    series.ask_price.push_back(s + offset + d.ask_premium);
    series.bid_price.push_back(s + offset - d.bid_premium);
}

void record_state(AgentSeries& series, const AgentLedger& ledger, double exec_mid) {
    series.inventory.push_back(ledger.inventory);
    series.pnl.push_back(mark_to_market(ledger, exec_mid));
}

}  // namespace

LoopResult run_closed_loop(const LoopConfig& config, const DriverPolicy& driver,
                           const std::vector<ShadowSpec>& shadows) {
    config.market.validate();
    const int n_steps = config.market.step_count();
    const double dt = config.market.dt;
    const double horizon = config.market.T;
    const ProcessParams process{config.xi,    config.gamma, config.market.sigma,
                                horizon,      dt,           config.impact_multiplier};
    const FillModel fill_model{config.market.A, config.market.k, config.fill_rule};

    RandomStream price_noise(config.master_seed, config.path_index, stream_tag::price);

    LoopResult out;
    AgentSlot driver_slot{StrategyKind::As,
                          RandomStream(config.master_seed, config.path_index,
                                       stream_tag::fills_driver),
                          {}};
    driver_slot.result.ledger.record_fills = config.record_fills;

    std::vector<AgentSlot> shadow_slots;
    shadow_slots.reserve(shadows.size());
    for (const ShadowSpec& spec : shadows) {
        shadow_slots.push_back(AgentSlot{
            spec.kind, RandomStream(config.master_seed, config.path_index, spec.stream_tag), {}});
        shadow_slots.back().result.ledger.record_fills = config.record_fills;
    }

    PathState state{0, config.s0, 0};
    PathState det_state = state;  // same inventory sequence, noise zeroed

    if (config.record_series) {
        const int rows = n_steps + 1;
        out.decomposition.impact.reserve(rows);
        out.decomposition.deterministic.reserve(rows);
        out.decomposition.full.reserve(rows);
        out.decomposition.driver_inventory.reserve(rows);
        record_state(driver_slot.result.series, driver_slot.result.ledger,
                     state.mid_price + config.price_offset);
        for (AgentSlot& slot : shadow_slots)
            record_state(slot.result.series, slot.result.ledger,
                         state.mid_price + config.price_offset);
    }

    for (int n = 0; n < n_steps; ++n) {
        const double tau = horizon - state.time(dt);
        const double s = state.mid_price;
        const double exec_mid = s + config.price_offset;
        const int driver_q = driver_slot.result.ledger.inventory;
        state.driver_inventory = driver_q;

        if (config.record_series) {
            out.decomposition.driver_inventory.push_back(driver_q);
            out.decomposition.impact.push_back(
                config.impact_multiplier *
                as_impact(config.gamma, config.market.sigma, driver_q, tau));
            out.decomposition.deterministic.push_back(det_state.mid_price);
            out.decomposition.full.push_back(s);
        }

        // All agents decide on the state at n before any fill lands.
        const QuoteDecision driver_decision = driver(state, tau);
        std::vector<QuoteDecision> shadow_decisions(shadow_slots.size());
        for (std::size_t i = 0; i < shadow_slots.size(); ++i)
            shadow_decisions[i] =
                shadow_decision(shadow_slots[i].kind, s, tau,
                                shadow_slots[i].result.ledger.inventory, driver_q, config);

        if (config.record_series) {
            record_quote(driver_slot.result.series, driver_decision, s, config.price_offset);
            for (std::size_t i = 0; i < shadow_slots.size(); ++i)
                record_quote(shadow_slots[i].result.series, shadow_decisions[i], s,
                             config.price_offset);
        }

        {
            const double u_ask = driver_slot.fills.uniform();
            const double u_bid = driver_slot.fills.uniform();
            step_fills(driver_decision, driver_slot.result.ledger, exec_mid, u_ask, u_bid,
                       fill_model, dt, n);
        }
        for (std::size_t i = 0; i < shadow_slots.size(); ++i) {
            const double u_ask = shadow_slots[i].fills.uniform();
            const double u_bid = shadow_slots[i].fills.uniform();
            step_fills(shadow_decisions[i], shadow_slots[i].result.ledger, exec_mid, u_ask,
                       u_bid, fill_model, dt, n);
        }

        // Price update uses the pre-fill inventory q_n; this step's fills only
        // enter the drift from the next step on.
        const double z = config.zero_noise ? 0.0 : price_noise.normal();
        state = advance(state, process, z, config.stepper);
        if (config.record_series) {
            det_state.driver_inventory = driver_q;
            det_state = advance(det_state, process, 0.0, config.stepper);
        }
        state.driver_inventory = driver_slot.result.ledger.inventory;

        if (config.record_series) {
            const double new_exec_mid = state.mid_price + config.price_offset;
            record_state(driver_slot.result.series, driver_slot.result.ledger, new_exec_mid);
            for (AgentSlot& slot : shadow_slots)
                record_state(slot.result.series, slot.result.ledger, new_exec_mid);
        }
    }

    if (config.record_series) {
        // Terminal row: tau = 0 quotes are well defined but never executed.
        const double s = state.mid_price;
        out.decomposition.driver_inventory.push_back(state.driver_inventory);
        out.decomposition.impact.push_back(0.0);
        out.decomposition.deterministic.push_back(det_state.mid_price);
        out.decomposition.full.push_back(s);
        record_quote(driver_slot.result.series, driver(state, 0.0), s, config.price_offset);
        for (std::size_t i = 0; i < shadow_slots.size(); ++i)
            record_quote(shadow_slots[i].result.series,
                         shadow_decision(shadow_slots[i].kind, s, 0.0,
                                         shadow_slots[i].result.ledger.inventory,
                                         state.driver_inventory, config),
                         s, config.price_offset);
    }

    const double terminal_exec_mid = state.mid_price + config.price_offset;
    out.terminal_mid = state.mid_price;
    driver_slot.result.terminal_pnl =
        mark_to_market(driver_slot.result.ledger, terminal_exec_mid);
    out.driver = std::move(driver_slot.result);
    out.shadows.reserve(shadow_slots.size());
    for (AgentSlot& slot : shadow_slots) {
        slot.result.terminal_pnl = mark_to_market(slot.result.ledger, terminal_exec_mid);
        out.shadows.push_back(std::move(slot.result));
    }
    return out;
}

}  // namespace perfmm::detail

namespace perfmm {

PathDecomposition simulate_price_path(const MarketParams& market, double xi, double gamma,
                                      const DriverPolicy& driver, std::uint64_t seed,
                                      const SimulatePathOptions& options) {
    detail::LoopConfig config;
    config.market = market;
    config.xi = xi;
    config.gamma = gamma;
    config.s0 = options.s0;
    config.impact_multiplier = options.impact_multiplier;
    config.zero_noise = options.zero_noise;
    config.stepper = options.stepper;
    config.fill_rule = static_cast<FillRule>(options.fill_rule);
    config.master_seed = seed;
    config.path_index = 0;
    config.record_series = true;
    detail::LoopResult result = detail::run_closed_loop(config, driver, {});
    return std::move(result.decomposition);
}

}  // namespace perfmm
