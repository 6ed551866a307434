#pragma once

#include <cstdint>
#include <vector>

#include "mdvrp/evaluation.hpp"
#include "mdvrp/solution.hpp"

namespace mdvrp {

// Sorted, deduplicated undirected edge keys of a solution.
std::vector<std::uint64_t> solution_edges(const Solution& sol, const Instance& inst);

// Broken-pairs style distance in percent: 100 * (1 - |E1 ∩ E2| / max(|E1|, |E2|)).
double edge_distance(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b);
double solution_distance(const Solution& a, const Solution& b, const Instance& inst);

inline constexpr int kNearestForDiversity = 5;

struct Member {
    Solution sol;
    EvalBreakdown eval;               // distance and violations; penalized value refreshed on demand
    std::vector<std::uint64_t> edges;
    std::uint64_t birth = 0;          // insertion order, smaller is older
};

class Population {
public:
    Population(const Instance& inst, int mu = 20, double xi = 0.7);

    void add(Solution sol, const EvalBreakdown& eval);

    int size() const { return static_cast<int>(members_.size()); }
    int mu() const { return mu_; }
    double xi() const { return xi_; }
    const Member& operator[](int i) const { return members_[static_cast<std::size_t>(i)]; }
    const std::vector<Member>& members() const { return members_; }

    // Mean distance to the 5 nearest other members (all others when fewer).
    double diversity(int i) const;

    // Biased fitness of every member; higher is fitter.
    std::vector<double> biased_fitness(const PenaltyState& pen) const;

    // Iteratively removes the lowest-fitness member (oldest on ties) until
    // the size is mu. Returns the number removed.
    int select_survivors(const PenaltyState& pen);

    // True once the population has grown to 1.5 mu.
    bool full() const { return size() >= mu_ + mu_ / 2; }

private:
    const Instance* inst_;
    int mu_;
    double xi_;
    std::uint64_t next_birth_ = 0;
    std::vector<Member> members_;
    std::vector<std::vector<double>> dist_;  // pairwise distance cache
};

// Biased fitness from precomputed penalized values and diversity values.
// Ranks are 0-based: best value and largest diversity get rank 0.
std::vector<double> biased_fitness(const std::vector<double>& value, const std::vector<double>& diversity, double xi);

}  // namespace mdvrp
