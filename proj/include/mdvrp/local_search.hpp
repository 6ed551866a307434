#pragma once

#include <functional>
#include <random>

#include "mdvrp/moves.hpp"

namespace mdvrp {

struct SearchConfig {
    int depth = 500;          // maximum number of accepted move applications
    bool multi_move = true;   // apply followers alongside the leader
    int workers = 1;          // threads used to evaluate a candidate batch
};

struct SearchStats {
    int applications = 0;  // accepted leader (or leader + follower) applications
    int moves = 0;         // individual moves applied
    int passes = 0;
};

// Called after each application with the pre-application state, the applied
// moves and the post-application state.
using SearchObserver = std::function<void(const SearchState& before, std::span<const Move> applied,
                                          const SearchState& after)>;

using Rng = std::mt19937_64;

// Multi-depot feasibility-infeasibility search. Operators are visited in a
// freshly shuffled order on every pass; after each application the penalty
// weights adapt to the constraints the new solution violates. Stops after a
// pass with no improving move or once `depth` applications were made.
SearchStats mdfis(Solution& sol, const Instance& inst, const NeighborLists& nbr, const ScalingConstants& k,
                  PenaltyState& pen, Rng& rng, const SearchConfig& cfg = {},
                  const SearchObserver& observer = {});

}  // namespace mdvrp
