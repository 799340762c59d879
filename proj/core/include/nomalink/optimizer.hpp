#pragma once

#include <cstdint>
#include <vector>

#include "nomalink/channel.hpp"
#include "nomalink/code.hpp"
#include "nomalink/exit_engine.hpp"

namespace nomalink {

struct OptimizerConfig {
    SystemDims dims{8, 8};
    double sigma_n = 4.58;                          // design noise level
    std::vector<int> degree_set{3, 10, 30, 50, 80, 100};
    int alpha_min = 1, alpha_max = 5;
    int q_max = 5;
    int population = 12;   // differential-evolution population per rate probe
    int generations = 8;   // generations per rate probe
    std::uint64_t seed = 1;

    int rate_bisect_steps = 6;
    double min_rate = 0.05;            // rate-search floor
    double feasible_gap = 1e-3;        // tunnel margin required of a feasible code
    AnalyticCurveConfig search_curve;  // candidate-curve fidelity during search
    ThresholdConfig verify;            // final bisection check of the winner
};

struct PairLog {
    int q = 0, alpha = 0;
    double best_rate = 0.0;  // best feasible rate found for this pair (0 = none)
    double best_gap = 0.0;   // tunnel margin of that code
    int evaluations = 0;     // candidate curves measured
    bool pruned = false;     // skipped: rate ceiling below the incumbent
};

struct OptimizerResult {
    bool feasible = false;       // some candidate cleared the search margin
    bool verified = false;       // winner re-checked by full-fidelity recursion
    CodeParams best;             // winner (best infeasible candidate when !feasible)
    double best_gap = 0.0;
    double design_ebn0_db = 0.0;         // E_b/N_0 of (sigma_n, winner rate)
    double verified_threshold_db = 0.0;  // bisected threshold of the winner
    bool threshold_found = false;
    std::vector<PairLog> log;
};

// Maximizes the code rate subject to an open EXIT tunnel at (dims, sigma_n):
// per (q, alpha) pair, bisects the largest rate at which a differential
// evolution over the degree distribution finds a tunnel margin of at least
// feasible_gap, scoring candidates with the density-evolution curve; pairs
// are visited in decreasing order of their rate ceiling and pruned against
// the incumbent.  The winner is re-verified by an independent threshold
// bisection; if verification fails the rate is stepped down and the search
// refit before giving up.
OptimizerResult optimize_degree_distribution(const OptimizerConfig& config);

}  // namespace nomalink
