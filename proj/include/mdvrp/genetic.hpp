#pragma once

#include <array>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "mdvrp/evaluation.hpp"
#include "mdvrp/solution.hpp"

namespace mdvrp {

using Rng = std::mt19937_64;

// --- initialization ---------------------------------------------------------

// Nearest-depot clustering, randomized greedy feasible insertion per depot
// (opening routes up to the fleet limit), then relaxed insertion of whatever
// is left. The result always covers every customer but may be infeasible.
Solution initial_solution(const Instance& inst, const ScalingConstants& k, const PenaltyState& pen, Rng& rng);

std::vector<Solution> initialize_population(const Instance& inst, int mu, const ScalingConstants& k,
                                            const PenaltyState& pen, Rng& rng);

// --- discounted UCB1 --------------------------------------------------------

class DiscountedUcb {
public:
    explicit DiscountedUcb(int actions, double gamma = 0.99);

    // Unplayed actions first (lowest index), then argmax of
    // mean + sqrt(2 ln(total) / count); ties go to the lower index.
    int select() const;
    void update(int action, double reward);

    int actions() const { return static_cast<int>(reward_.size()); }
    double reward_sum(int a) const { return reward_[static_cast<std::size_t>(a)]; }
    double count(int a) const { return count_[static_cast<std::size_t>(a)]; }
    double gamma() const { return gamma_; }

private:
    double gamma_;
    std::vector<double> reward_;
    std::vector<double> count_;
};

inline constexpr int kDiversityLevels = 20;

// Reward for both bandits: relative improvement of the offspring over the
// main parent, in percent.
double improvement_reward(double parent_value, double offspring_value);

// --- insertion operators ----------------------------------------------------

enum class InsertionOperator : int { FBI = 0, IBI = 1, FRI = 2, IRI = 3, RI = 4 };
inline constexpr int kInsertionOperators = 5;
const char* to_string(InsertionOperator op);

// Inserts every customer of `unrouted` into `sol`.
//   FBI  cheapest feasible slot, new route when none exists
//   IBI  cheapest slot by penalized cost, existing routes only
//   FRI  largest regret first over feasible options (new route counts as one)
//   IRI  largest regret first over penalized options, existing routes only
//   RI   uniformly random route, then uniformly random position
// Regret is the gap between the best and second-best route for a customer.
void repair_insert(Solution& sol, std::vector<int> unrouted, InsertionOperator op, const Instance& inst,
                   const ScalingConstants& k, const PenaltyState& pen, Rng& rng);

// Cost of the best insertion of `customer` into `route` (slot after position
// `pos` of the driven sequence). Exposed for tests.
struct InsertionOption {
    int route = -1;      // -1 = open a new route from `depot`
    int pos = 0;
    int depot = -1;
    double cost = 0.0;   // distance increase (feasible ops) or penalized increase
    bool feasible = false;
};
std::vector<InsertionOption> route_insertion_options(const Solution& sol, int customer, bool penalized,
                                                     const Instance& inst, const ScalingConstants& k,
                                                     const PenaltyState& pen);

// --- DCREX ------------------------------------------------------------------

struct DiversityBounds {
    int index = 0;
    double sigma_min = 0.0;
    double sigma_max = 0.0;
};
DiversityBounds diversity_bounds(int index, int num_customers, int main_routes);

struct RoutePairScore {
    int main_route = -1;   // index into the main parent's routes
    int donor_route = -1;  // index into the donor's routes
    int introduced = 0;    // edges of the donor route absent from the main parent
    int missing = 0;       // customers of the main route not in the donor route
    int redundant = 0;     // donor customers already in other main-parent routes
    int conflicting = 0;   // donor customers already in introduced routes
    int score() const { return -(introduced - missing - redundant - 10 * conflicting); }
    int delta_sigma() const { return introduced + missing + redundant; }
};

// Offspring under construction: routes tagged with their origin.
struct OffspringDraft {
    std::vector<Route> routes;
    std::vector<int> origin;  // main-parent route index, or -1 for introduced routes
};

OffspringDraft make_draft(const Solution& main_parent);

// Undirected edge keys of a route (depot arcs included, return arc omitted
// for open routes).
std::vector<std::uint64_t> route_edges(const Route& r, const Instance& inst);
inline std::uint64_t edge_key(int a, int b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
}

// Scores exchanging draft route `draft_route` (which must still be an
// original main-parent route) for `donor`.
RoutePairScore score_route_pair(const OffspringDraft& draft, int draft_route, const Route& donor,
                                const std::vector<std::uint64_t>& main_edges, const Instance& inst);

struct CrossoverConfig {
    int pair_pool = 5;  // exchange picked uniformly among this many lowest scores
};

struct CrossoverTrace {
    DiversityBounds bounds;
    int sigma_cur = 0;
    std::vector<RoutePairScore> exchanges;  // one entry per donor that gave a route
    std::vector<int> removed;               // duplicate occurrences deleted during repair
    std::vector<int> inserted;              // unrouted customers reinserted
};

// Route-exchange crossover with donors visited in the given order. The result covers every
// customer exactly once.
Solution dcrex(const Solution& main_parent, std::span<const Solution* const> donors, int sigma_index,
               InsertionOperator op, const Instance& inst, const ScalingConstants& k, const PenaltyState& pen,
               Rng& rng, const CrossoverConfig& cfg = {}, CrossoverTrace* trace = nullptr);

}  // namespace mdvrp
