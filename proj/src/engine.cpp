#include "mdvrp/engine.hpp"

#include <chrono>
#include <numeric>
#include <stdexcept>

namespace mdvrp {

void EngineConfig::validate() const {
    if (max_generations < 0 || patience < 0) throw std::invalid_argument("generation limits must be non-negative");
    if (!(time_limit >= 0.0)) throw std::invalid_argument("time limit must be non-negative");
    if (mu < 2) throw std::invalid_argument("population size must be at least 2");
    if (theta < 1) throw std::invalid_argument("granularity must be at least 1");
    if (depth < 1) throw std::invalid_argument("search depth must be at least 1");
    if (!(kappa > 0.0 && kappa < 1.0)) throw std::invalid_argument("kappa must lie in (0, 1)");
    if (!(xi >= 0.0)) throw std::invalid_argument("xi must be non-negative");
    if (!(bandit_gamma > 0.0 && bandit_gamma <= 1.0)) throw std::invalid_argument("bandit discount must lie in (0, 1]");
    if (pair_pool < 1 || workers < 1) throw std::invalid_argument("pair pool and workers must be positive");
}

double gap(double value, double bks) {
    if (!(bks > 0.0)) throw std::invalid_argument("best-known value must be positive");
    return 100.0 * (value - bks) / bks;
}

RunStats run(const Instance& inst, const EngineConfig& cfg, const ProgressCallback& progress) {
    cfg.validate();
    using Clock = std::chrono::steady_clock;
    const auto start = Clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - start).count(); };

    Rng rng(cfg.seed);
    const ScalingConstants k = scaling_constants(inst);
    const NeighborLists nbr(inst, NeighborConfig{cfg.theta, 1.0, 10.0}, k);
    PenaltyState fresh;
    fresh.kappa = cfg.kappa;
    PenaltyState pen = fresh;

    SearchConfig scfg;
    scfg.depth = cfg.depth;
    scfg.multi_move = cfg.multi_move;
    scfg.workers = cfg.workers;
    CrossoverConfig xcfg;
    xcfg.pair_pool = cfg.pair_pool;

    RunStats stats;
    double best_infeasible = kInfinity;
    auto consider = [&](const Solution& s, const EvalBreakdown& e) {
        if (e.feasible()) {
            if (stats.feasible && e.distance >= stats.best_cost - 1e-9) return false;
            stats.feasible = true;
            stats.best_cost = e.distance;
            stats.best = s;
            stats.time_to_best = elapsed();
            return true;
        }
        if (!stats.feasible && e.penalized < best_infeasible) {
            best_infeasible = e.penalized;
            stats.best = s;
        }
        return false;
    };

    Population pop(inst, cfg.mu, cfg.xi);
    for (auto& s : initialize_population(inst, cfg.mu, k, pen, rng)) {
        const EvalBreakdown e = evaluate(s, pen, k, inst);
        consider(s, e);
        pop.add(std::move(s), e);
    }

    DiscountedUcb diversity_bandit(kDiversityLevels, cfg.bandit_gamma);
    DiscountedUcb insertion_bandit(kInsertionOperators, cfg.bandit_gamma);
    int generation = 0;
    int stagnation = 0;
    std::vector<const Solution*> donors;

    while (generation <= cfg.max_generations && stagnation <= cfg.patience && elapsed() <= cfg.time_limit) {
        std::uniform_int_distribution<int> pick(0, pop.size() - 1);
        const int main_index = pick(rng);
        donors.clear();
        for (int i = 0; i < pop.size(); ++i)
            if (i != main_index) donors.push_back(&pop[i].sol);
        std::shuffle(donors.begin(), donors.end(), rng);

        const int sigma_index = diversity_bandit.select();
        const auto op = static_cast<InsertionOperator>(insertion_bandit.select());
        const Solution& parent = pop[main_index].sol;
        Solution child = dcrex(parent, donors, sigma_index, op, inst, k, pen, rng, xcfg);
        child.meta.generation = generation;

        if (!cfg.persist_penalties) pen = fresh;
        mdfis(child, inst, nbr, k, pen, rng, scfg);

        const EvalBreakdown ce = evaluate(child, pen, k, inst);
        const EvalBreakdown pe = evaluate(parent, pen, k, inst);
        const bool plain = ce.feasible() && pe.feasible();
        const double reward = improvement_reward(plain ? pe.distance : pe.penalized, plain ? ce.distance : ce.penalized);
        diversity_bandit.update(sigma_index, reward);
        insertion_bandit.update(static_cast<int>(op), reward);

        const bool improved = consider(child, ce);
        pop.add(std::move(child), ce);
        if (pop.full()) pop.select_survivors(pen);

        if (improved) {
            stagnation = 0;
            stats.last_improvement = generation;
        } else {
            ++stagnation;
        }
        ++generation;
        stats.best_curve.push_back(stats.best_cost);
        stats.stagnation_trace.push_back(stagnation);
        if (progress) {
            stats.generations = generation;
            progress(generation, stats);
        }
    }

    stats.generations = generation;
    stats.wall_time = elapsed();
    stats.best_eval = evaluate(stats.best, pen, k, inst);
    return stats;
}

}  // namespace mdvrp
