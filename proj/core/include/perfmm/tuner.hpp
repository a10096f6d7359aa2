#pragma once

#include <array>
#include <cstdint>
#include <functional>

#include "perfmm/harness.hpp"

namespace perfmm {

enum class TuneObjective { MeanPnl, Sharpe, MeanUtility };

const char* objective_label(TuneObjective o);
std::optional<TuneObjective> parse_objective(const std::string& label);

/// Search configuration for the theta multipliers. The box must contain the
/// identity point (1,1,1) so the analytic strategy is always feasible.
struct TuneConfig {
    std::array<std::array<double, 2>, 3> box{{{0.0, 2.0}, {0.0, 2.0}, {0.0, 2.0}}};
    int budget = 100;          // total candidate evaluations, >= 1
    int train_paths = 1000;
    int test_paths = 1000;
    std::uint64_t train_seed = 1001;
    std::uint64_t test_seed = 2002;
    TuneObjective objective = TuneObjective::MeanPnl;
    int threads = 1;

    void validate() const;
};

enum class SeedRole { Train, Test };

/// Observes every candidate evaluation; used to assert that test seeds are
/// never consumed during the search.
using EvalHook = std::function<void(const ThetaParams&, SeedRole)>;

struct TuneReport {
    ThetaParams best;
    double train_objective = 0.0;
    double test_objective = 0.0;
    int evaluations = 0;
    bool budget_exhausted = false;  // local refinement stopped by budget, not convergence
};

/// Objective of one theta candidate on the cell: simulates `paths` paths with
/// the theta strategy as the only shadow and reduces its terminal PnLs.
/// Deterministic per (theta, seed).
double evaluate_candidate(const ThetaParams& theta, const CellConfig& cell,
                          std::uint64_t master_seed, int paths, TuneObjective objective,
                          int threads = 1);

/// Two-phase derivative-free search: quasi-random space filling over the box
/// (the identity point is always evaluated first and kept as fallback), then
/// simplex refinement around the incumbent. The returned candidate is never
/// worse than the identity on the training objective. The held-out test
/// objective is evaluated once, for the final incumbent only.
TuneReport tune(const TuneConfig& config, const CellConfig& cell, const EvalHook& hook = {});

}  // namespace perfmm
