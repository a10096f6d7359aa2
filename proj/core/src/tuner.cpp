#include "perfmm/tuner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace perfmm {

const char* objective_label(TuneObjective o) {
    switch (o) {
        case TuneObjective::MeanPnl: return "mean-pnl";
        case TuneObjective::Sharpe: return "sharpe";
        case TuneObjective::MeanUtility: return "mean-utility";
    }
    return "?";
}

std::optional<TuneObjective> parse_objective(const std::string& label) {
    if (label == "mean-pnl") return TuneObjective::MeanPnl;
    if (label == "sharpe") return TuneObjective::Sharpe;
    if (label == "mean-utility") return TuneObjective::MeanUtility;
    return std::nullopt;
}

void TuneConfig::validate() const {
    for (int i = 0; i < 3; ++i) {
        if (!(box[i][0] <= 1.0 && 1.0 <= box[i][1]))
            throw std::invalid_argument(
                "tune: each search box component must contain the identity value 1");
        if (!(box[i][0] < box[i][1]))
            throw std::invalid_argument("tune: box bounds must satisfy lo < hi");
    }
    if (budget < 1) throw std::invalid_argument("tune: budget must be >= 1");
    if (train_paths < 1 || test_paths < 1)
        throw std::invalid_argument("tune: train_paths and test_paths must be >= 1");
    if (train_seed == test_seed)
        throw std::invalid_argument("tune: train_seed and test_seed must differ");
}

namespace {

double log_sum_exp(std::span<const double> values) {
    double hi = -std::numeric_limits<double>::infinity();
    for (double v : values) hi = std::max(hi, v);
    if (!std::isfinite(hi)) return hi;
    double sum = 0.0;
    for (double v : values) sum += std::exp(v - hi);
    return hi + std::log(sum);
}

double reduce_objective(std::span<const double> pnls, TuneObjective objective, double gamma) {
    switch (objective) {
        case TuneObjective::MeanPnl:
            return aggregate(pnls).mean;
        case TuneObjective::Sharpe: {
            const SummaryStats s = aggregate(pnls);
            return s.sharpe.value_or(0.0);
        }
        case TuneObjective::MeanUtility: {
            // log-domain certainty comparison: maximizing E[-exp(-gamma PnL)]
            // is minimizing logsumexp(-gamma PnL_i) - log n.
            std::vector<double> scaled(pnls.size());
            for (std::size_t i = 0; i < pnls.size(); ++i) scaled[i] = -gamma * pnls[i];
            return -(log_sum_exp(scaled) - std::log(static_cast<double>(pnls.size())));
        }
    }
    return 0.0;
}

double halton(std::uint32_t index, std::uint32_t base) {
    double f = 1.0, r = 0.0;
    while (index > 0) {
        f /= base;
        r += f * (index % base);
        index /= base;
    }
    return r;
}

using Point = std::array<double, 3>;

Point clamp_to_box(Point p, const std::array<std::array<double, 2>, 3>& box) {
    for (int i = 0; i < 3; ++i) p[i] = std::clamp(p[i], box[i][0], box[i][1]);
    return p;
}

ThetaParams to_theta(const Point& p) { return ThetaParams{p[0], p[1], p[2]}; }

}  // namespace

double evaluate_candidate(const ThetaParams& theta, const CellConfig& cell,
                          std::uint64_t master_seed, int paths, TuneObjective objective,
                          int threads) {
    CellConfig run = cell;
    run.theta = theta;
    run.strategies = {StrategyKind::Theta};
    run.master_seed = master_seed;
    const CellSamples samples = run_cell(run, paths, threads);
    return reduce_objective(samples.pnl[0], objective, cell.gamma);
}

TuneReport tune(const TuneConfig& config, const CellConfig& cell, const EvalHook& hook) {
    config.validate();

    int evaluations = 0;
    Point best_point{1.0, 1.0, 1.0};
    double best_value = -std::numeric_limits<double>::infinity();

    const auto evaluate = [&](const Point& p) {
        const ThetaParams theta = to_theta(p);
        if (hook) hook(theta, SeedRole::Train);
        const double value = evaluate_candidate(theta, cell, config.train_seed,
                                                config.train_paths, config.objective,
                                                config.threads);
        ++evaluations;
        if (value > best_value) {
            best_value = value;
            best_point = p;
        }
        return value;
    };

    // Phase 1: space-filling sweep of the box. The identity point goes first so
    // the analytic strategy is always the fallback incumbent.
    const int space_filling = (config.budget + 1) / 2;
    evaluate(Point{1.0, 1.0, 1.0});
    static constexpr std::uint32_t bases[3] = {2, 3, 5};
    for (int i = 1; i < space_filling; ++i) {
        Point p;
        for (int d = 0; d < 3; ++d) {
            const double u = halton(static_cast<std::uint32_t>(i), bases[d]);
            p[d] = config.box[d][0] + u * (config.box[d][1] - config.box[d][0]);
        }
        evaluate(p);
    }

    // Phase 2: Nelder-Mead polish around the incumbent, projected to the box.
    bool converged = false;
    int remaining = config.budget - evaluations;
    if (remaining > 0) {
        struct Vertex {
            Point x;
            double f;
        };
        std::vector<Vertex> simplex;
        simplex.push_back({best_point, best_value});
        for (int d = 0; d < 3 && remaining > 0; ++d) {
            Point p = best_point;
            const double span = config.box[d][1] - config.box[d][0];
            double step = 0.15 * span;
            if (p[d] + step > config.box[d][1]) step = -step;
            p[d] = std::clamp(p[d] + step, config.box[d][0], config.box[d][1]);
            simplex.push_back({p, evaluate(p)});
            --remaining;
        }

        const auto order = [&] {
            std::sort(simplex.begin(), simplex.end(),
                      [](const Vertex& a, const Vertex& b) { return a.f > b.f; });
        };
        const double span_scale =
            std::max({config.box[0][1] - config.box[0][0], config.box[1][1] - config.box[1][0],
                      config.box[2][1] - config.box[2][0]});

        while (remaining > 0 && simplex.size() == 4) {
            order();
            double diameter = 0.0;
            for (const Vertex& v : simplex)
                for (int d = 0; d < 3; ++d)
                    diameter = std::max(diameter, std::abs(v.x[d] - simplex[0].x[d]));
            if (diameter < 1e-6 * span_scale) {
                converged = true;
                break;
            }

            Point centroid{0, 0, 0};
            for (int v = 0; v < 3; ++v)
                for (int d = 0; d < 3; ++d) centroid[d] += simplex[v].x[d] / 3.0;
            const Vertex& worst = simplex[3];

            const auto affine = [&](double coef) {
                Point p;
                for (int d = 0; d < 3; ++d)
                    p[d] = centroid[d] + coef * (worst.x[d] - centroid[d]);
                return clamp_to_box(p, config.box);
            };

            const Point reflected = affine(-1.0);
            const double f_reflected = evaluate(reflected);
            --remaining;
            if (f_reflected > simplex[0].f && remaining > 0) {
                const Point expanded = affine(-2.0);
                const double f_expanded = evaluate(expanded);
                --remaining;
                simplex[3] = f_expanded > f_reflected ? Vertex{expanded, f_expanded}
                                                      : Vertex{reflected, f_reflected};
                continue;
            }
            if (f_reflected > simplex[2].f) {
                simplex[3] = {reflected, f_reflected};
                continue;
            }
            if (remaining <= 0) break;
            const Point contracted = affine(0.5);
            const double f_contracted = evaluate(contracted);
            --remaining;
            if (f_contracted > worst.f) {
                simplex[3] = {contracted, f_contracted};
                continue;
            }
            // Shrink toward the best vertex.
            for (int v = 1; v < 4 && remaining > 0; ++v) {
                for (int d = 0; d < 3; ++d)
                    simplex[v].x[d] = simplex[0].x[d] + 0.5 * (simplex[v].x[d] - simplex[0].x[d]);
                simplex[v].x = clamp_to_box(simplex[v].x, config.box);
                simplex[v].f = evaluate(simplex[v].x);
                --remaining;
            }
        }
    }

    TuneReport report;
    report.best = to_theta(best_point);
    report.train_objective = best_value;
    report.evaluations = evaluations;
    report.budget_exhausted = !converged && config.budget > space_filling;
    if (hook) hook(report.best, SeedRole::Test);
    report.test_objective = evaluate_candidate(report.best, cell, config.test_seed,
                                               config.test_paths, config.objective,
                                               config.threads);
    return report;
}

}  // namespace perfmm
