#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "mdvrp/genetic.hpp"
#include "mdvrp/local_search.hpp"
#include "mdvrp/neighborhood.hpp"
#include "mdvrp/population.hpp"

namespace mdvrp {

struct EngineConfig {
    int max_generations = 5000;
    int patience = 500;
    double time_limit = kInfinity;  // seconds
    int mu = 20;
    int theta = 50;
    int depth = 500;
    double kappa = 0.5;
    double xi = 0.7;
    bool multi_move = true;
    std::uint64_t seed = 1;

    double bandit_gamma = 0.99;
    int pair_pool = 5;
    bool persist_penalties = true;  // false resets the coefficients before each local search
    int workers = 1;                // threads for candidate evaluation

    void validate() const;
};

struct RunStats {
    bool feasible = false;               // a feasible solution was found
    double best_cost = kInfinity;        // objective of the best feasible solution
    Solution best;                       // best feasible, or best infeasible when none
    EvalBreakdown best_eval;             // breakdown of `best` under the final coefficients
    int generations = 0;
    int last_improvement = 0;            // generation of the last strict improvement
    double wall_time = 0.0;              // seconds
    double time_to_best = 0.0;
    std::vector<double> best_curve;      // best feasible cost after each generation
    std::vector<int> stagnation_trace;   // stagnation counter after each generation
};

using ProgressCallback = std::function<void(int generation, const RunStats&)>;

RunStats run(const Instance& inst, const EngineConfig& cfg, const ProgressCallback& progress = {});

// Relative gap to a best-known value, in percent.
double gap(double value, double bks);

}  // namespace mdvrp
