#include "perfmm/harness.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "closed_loop.hpp"
#include "perfmm/rng.hpp"

namespace perfmm {

const char* strategy_label(StrategyKind kind) {
    switch (kind) {
        case StrategyKind::As: return "as";
        case StrategyKind::Symmetric: return "symmetric";
        case StrategyKind::Performative: return "performative";
        case StrategyKind::Theta: return "theta";
    }
    return "?";
}

std::optional<StrategyKind> parse_strategy(const std::string& label) {
    if (label == "as") return StrategyKind::As;
    if (label == "symmetric") return StrategyKind::Symmetric;
    if (label == "performative") return StrategyKind::Performative;
    if (label == "theta") return StrategyKind::Theta;
    return std::nullopt;
}

std::vector<double> log_spaced(double lo, double hi, int count) {
    std::vector<double> out;
    if (count <= 0) return out;
    if (count == 1) return {lo};
    out.reserve(count);
    const double step = (std::log(hi) - std::log(lo)) / (count - 1);
    for (int i = 0; i < count; ++i) out.push_back(std::exp(std::log(lo) + i * step));
    out.front() = lo;
    out.back() = hi;
    return out;
}

std::vector<double> lin_spaced(double lo, double hi, int count) {
    std::vector<double> out;
    if (count <= 0) return out;
    if (count == 1) return {lo};
    out.reserve(count);
    const double step = (hi - lo) / (count - 1);
    for (int i = 0; i < count; ++i) out.push_back(lo + i * step);
    out.back() = hi;
    return out;
}

ExperimentConfig::ExperimentConfig() : xis(log_spaced(0.3, 20.0, 20)) {}

void ExperimentConfig::validate() const {
    market.validate();
    if (gammas.empty()) throw std::invalid_argument("config: gammas must not be empty");
    for (double g : gammas)
        if (!(g > 0.0)) throw std::invalid_argument("config: gammas must all be > 0");
    if (xis.empty()) throw std::invalid_argument("config: xis must not be empty");
    for (double x : xis)
        if (!(x > 0.0)) throw std::invalid_argument("config: xis must all be > 0");
    if (paths_per_cell < 1)
        throw std::invalid_argument("config: paths_per_cell must be >= 1");
    if (strategies.empty())
        throw std::invalid_argument("config: strategies must not be empty");
    if (!(impact_multiplier > 0.0))
        throw std::invalid_argument("config: impact_multiplier must be > 0");
}

CellConfig ExperimentConfig::cell(double gamma, double xi) const {
    CellConfig c;
    c.market = market;
    c.gamma = gamma;
    c.xi = xi;
    c.theta = theta;
    for (const auto& [key, value] : theta_table) {
        const auto close = [](double a, double b) {
            return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
        };
        if (close(key.first, gamma) && close(key.second, xi)) c.theta = value;
    }
    c.strategies = strategies;
    c.fill_rule = fill_rule;
    c.stepper = stepper;
    c.s0 = s0;
    c.impact_multiplier = impact_multiplier;
    c.price_offset = price_offset;
    c.zero_noise = zero_noise;
    c.driver_as_shadow = driver_as_shadow;
    c.master_seed = master_seed;
    return c;
}

SummaryStats aggregate(std::span<const double> samples) {
    if (samples.empty()) throw std::invalid_argument("aggregate: empty sample");
    SummaryStats stats;
    double sum = 0.0;
    for (double v : samples) sum += v;
    stats.mean = sum / samples.size();
    if (samples.size() == 1) return stats;
    double ss = 0.0;
    for (double v : samples) {
        const double d = v - stats.mean;
        ss += d * d;
    }
    stats.stddev = std::sqrt(ss / (samples.size() - 1));
    if (stats.stddev > 0.0) stats.sharpe = stats.mean / stats.stddev;
    return stats;
}

namespace {

std::uint64_t shadow_tag(StrategyKind kind, bool driver_as_shadow) {
    switch (kind) {
        case StrategyKind::As:
            return driver_as_shadow ? stream_tag::fills_shadow_driver : stream_tag::fills_driver;
        case StrategyKind::Symmetric: return stream_tag::fills_symmetric;
        case StrategyKind::Performative: return stream_tag::fills_performative;
        case StrategyKind::Theta: return stream_tag::fills_theta;
    }
    return 0;
}

detail::LoopConfig loop_config(const CellConfig& cell, std::uint64_t path_index,
                               bool record_series) {
    detail::LoopConfig c;
    c.market = cell.market;
    c.xi = cell.xi;
    c.gamma = cell.gamma;
    c.theta = cell.theta;
    c.s0 = cell.s0;
    c.impact_multiplier = cell.impact_multiplier;
    c.price_offset = cell.price_offset;
    c.zero_noise = cell.zero_noise;
    c.stepper = cell.stepper;
    c.fill_rule = cell.fill_rule;
    c.master_seed = cell.master_seed;
    c.path_index = path_index;
    c.record_series = record_series;
    c.record_fills = record_series;
    return c;
}

DriverPolicy as_driver_policy(const CellConfig& cell) {
    const double gamma = cell.gamma;
    const double sigma = cell.market.sigma;
    const double k = cell.market.k;
    return [gamma, sigma, k](const PathState& state, double tau) {
        return as_quotes(state.mid_price, state.driver_inventory, gamma, sigma, k, tau);
    };
}

void parallel_for(int n, int threads, const std::function<void(int)>& body) {
    if (threads <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    const int workers = std::min(threads, n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (int i = w; i < n; i += workers) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace

PathRunResult run_path(const CellConfig& cell, std::uint64_t path_index, bool record_series) {
    std::vector<detail::ShadowSpec> shadows;
    std::vector<int> shadow_index(cell.strategies.size(), -1);
    for (std::size_t i = 0; i < cell.strategies.size(); ++i) {
        const StrategyKind kind = cell.strategies[i];
        if (kind == StrategyKind::As && !cell.driver_as_shadow) continue;  // driver's own ledger
        shadow_index[i] = static_cast<int>(shadows.size());
        shadows.push_back({kind, shadow_tag(kind, cell.driver_as_shadow)});
    }

    detail::LoopResult loop = detail::run_closed_loop(
        loop_config(cell, path_index, record_series), as_driver_policy(cell), shadows);

    PathRunResult result;
    result.outcomes.reserve(cell.strategies.size());
    if (record_series) {
        result.decomposition = std::move(loop.decomposition);
        result.series.resize(cell.strategies.size());
        result.ledgers.resize(cell.strategies.size());
    }
    for (std::size_t i = 0; i < cell.strategies.size(); ++i) {
        const detail::LoopAgentResult& agent =
            shadow_index[i] < 0 ? loop.driver : loop.shadows[shadow_index[i]];
        result.outcomes.push_back(StrategyOutcome{cell.strategies[i], agent.terminal_pnl,
                                                  agent.ledger.inventory});
        if (record_series) {
            result.series[i] = agent.series;
            result.ledgers[i] = agent.ledger;
        }
    }
    return result;
}

CellSamples run_cell(const CellConfig& cell, int paths, int threads) {
    CellSamples samples;
    samples.strategies = cell.strategies;
    samples.pnl.assign(cell.strategies.size(), std::vector<double>(paths));
    samples.inventory.assign(cell.strategies.size(), std::vector<double>(paths));
    parallel_for(paths, threads, [&](int p) {
        const PathRunResult r = run_path(cell, static_cast<std::uint64_t>(p));
        for (std::size_t s = 0; s < r.outcomes.size(); ++s) {
            samples.pnl[s][p] = r.outcomes[s].terminal_pnl;
            samples.inventory[s][p] = r.outcomes[s].terminal_inventory;
        }
    });
    return samples;
}

std::vector<SweepRecord> run_sweep(const ExperimentConfig& config, int threads) {
    config.validate();
    std::vector<SweepRecord> records;
    records.reserve(config.strategies.size() * config.gammas.size() * config.xis.size());

    // Cells are simulated once and sliced per strategy afterwards, so the
    // record order (strategy-major) costs nothing extra.
    std::vector<CellSamples> cells;
    cells.reserve(config.gammas.size() * config.xis.size());
    for (double gamma : config.gammas)
        for (double xi : config.xis)
            cells.push_back(run_cell(config.cell(gamma, xi), config.paths_per_cell, threads));

    for (std::size_t s = 0; s < config.strategies.size(); ++s) {
        std::size_t cell_index = 0;
        for (double gamma : config.gammas) {
            for (double xi : config.xis) {
                const CellSamples& cell = cells[cell_index++];
                const SummaryStats pnl = aggregate(cell.pnl[s]);
                const SummaryStats inv = aggregate(cell.inventory[s]);
                SweepRecord rec;
                rec.strategy = strategy_label(config.strategies[s]);
                rec.gamma = gamma;
                rec.xi = xi;
                rec.mean_pnl = pnl.mean;
                rec.std_pnl = pnl.stddev;
                rec.sharpe = pnl.sharpe;
                rec.mean_term_inv = inv.mean;
                rec.std_term_inv = inv.stddev;
                rec.paths = config.paths_per_cell;
                rec.master_seed = config.master_seed;
                records.push_back(std::move(rec));
            }
        }
    }
    return records;
}

DecomposeBundle decompose_run(const CellConfig& cell, std::uint64_t seed) {
    CellConfig run = cell;
    run.master_seed = seed;
    run.strategies = {StrategyKind::As, StrategyKind::Performative};

    const PathRunResult path = run_path(run, 0, true);

    DecomposeBundle bundle;
    bundle.decomposition = path.decomposition;
    const int rows = static_cast<int>(bundle.decomposition.full.size());
    bundle.times.reserve(rows);
    for (int n = 0; n < rows; ++n) bundle.times.push_back(n * run.market.dt);
    bundle.driver = path.series[0];
    bundle.performative = path.series[1];
    return bundle;
}

}  // namespace perfmm
