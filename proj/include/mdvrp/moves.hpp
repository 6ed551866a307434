#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mdvrp/evaluation.hpp"
#include "mdvrp/neighborhood.hpp"
#include "mdvrp/seq_attr.hpp"
#include "mdvrp/solution.hpp"

namespace mdvrp {

enum class OperatorKind : std::uint8_t { Relocate, Swap, TwoOptStar, TwoOpt, DepotInsert, DepotReplace };

inline constexpr std::array<OperatorKind, 6> kAllOperators{
    OperatorKind::Relocate, OperatorKind::Swap,        OperatorKind::TwoOptStar,
    OperatorKind::TwoOpt,   OperatorKind::DepotInsert, OperatorKind::DepotReplace};

const char* to_string(OperatorKind k);

// Operators usable on an instance; 2-opt is left out when time windows apply.
std::vector<OperatorKind> operators_for(const Instance& inst);

enum class DepotMode : std::uint8_t { None, Depart, Arrive, Both };

// One neighborhood transition. Positions index a route's driven sequence
// (0 = departure depot, customers at 1..L, arrival depot at L+1 when closed).
//
//   Relocate     segment (route_a, pos_a, len_a, rev_a) moves into route_b
//                right after position pos_b
//   Swap         segments (route_a, pos_a, len_a, rev_a) and
//                (route_b, pos_b, len_b, rev_b) trade places
//   TwoOptStar   route_a cut after pos_a, route_b cut after pos_b, tails exchanged
//   TwoOpt       positions pos_a..pos_b of route_a reversed
//   DepotInsert  route_a split after pos_a; the remainder becomes a new route
//                departing from and returning to `depot`
//   DepotReplace route_a's departure and/or arrival depot becomes `depot`
struct Move {
    OperatorKind kind = OperatorKind::Relocate;
    int route_a = -1;
    int pos_a = 0;
    int len_a = 0;
    bool rev_a = false;
    int route_b = -1;
    int pos_b = 0;
    int len_b = 0;
    bool rev_b = false;
    int depot = -1;
    DepotMode mode = DepotMode::None;

    EvalBreakdown delta;
    // Depots whose route count the move changes (-1 for unused slots).
    std::array<int, 4> fleet_depots{-1, -1, -1, -1};

    bool touches_route(int r) const { return r >= 0 && (route_a == r || route_b == r); }
    bool conflicts_with(const Move& other) const;
};

// Canonical candidate order: operator, route indices, then positions.
bool canonical_less(const Move& a, const Move& b);

// Solution plus per-route subsequence attribute tables, kept in sync with
// every applied move.
class SearchState {
public:
    SearchState(const Instance& inst, const ScalingConstants& k, Solution sol);

    const Instance& instance() const { return *inst_; }
    const ScalingConstants& constants() const { return k_; }
    const Solution& solution() const { return sol_; }

    int num_routes() const { return static_cast<int>(sol_.routes.size()); }
    const Route& route(int r) const { return sol_.routes[static_cast<std::size_t>(r)]; }
    int route_len(int r) const { return static_cast<int>(route(r).customers.size()); }
    // Last index of the driven sequence of route r.
    int last_pos(int r) const { return route_len(r) + (inst_->open_routes() ? 0 : 1); }
    int node_at(int r, int pos) const {
        return seq_[static_cast<std::size_t>(r)][static_cast<std::size_t>(pos)];
    }

    int route_of(int customer) const { return route_of_[static_cast<std::size_t>(customer)]; }
    int position_of(int customer) const { return pos_of_[static_cast<std::size_t>(customer)]; }

    // Attributes of positions i..j of route r (identity when i > j).
    const SeqAttr& segment(int r, int i, int j) const;
    const SeqAttr& full(int r) const { return segment(r, 0, last_pos(r)); }
    const RouteTerms& terms(int r) const { return terms_[static_cast<std::size_t>(r)]; }
    std::span<const int> routes_per_depot() const { return per_depot_; }

    EvalBreakdown breakdown(const PenaltyState& pen) const;

    // Fills move.delta and move.fleet_depots.
    void evaluate_move(Move& move, const PenaltyState& pen) const;

    // Like evaluate_move, but returns false without filling the delta when a
    // cheap lower bound shows the move can neither reach a penalized delta
    // at or below `threshold` nor shorten the distance.
    bool evaluate_move_bounded(Move& move, const PenaltyState& pen, double threshold) const;

    // Routes the move would produce, in the order replaced-then-new.
    std::vector<Route> resulting_routes(const Move& move) const;

    // Applies pairwise non-conflicting moves; throws std::logic_error otherwise.
    void apply(std::span<const Move> moves);

private:
    void rebuild();
    void rebuild_route(int r);

    const Instance* inst_;
    ScalingConstants k_;
    Solution sol_;
    std::vector<std::vector<int>> seq_;  // driven sequence per route
    std::vector<std::vector<SeqAttr>> tables_;
    std::vector<RouteTerms> terms_;
    std::vector<int> per_depot_;
    std::vector<int> route_of_;
    std::vector<int> pos_of_;
    SeqAttr identity_;
};

// All candidates of one operator (deltas unset), generated from the granular
// neighbor lists plus route-boundary and depot positions.
std::vector<Move> enumerate(const SearchState& state, OperatorKind op, const NeighborLists& nbr);
void enumerate(const SearchState& state, OperatorKind op, const NeighborLists& nbr, std::vector<Move>& out);

struct BatchResult {
    std::optional<Move> leader;
    std::vector<Move> followers;
};

inline constexpr double kImprovementEps = 1e-9;

struct BatchOptions {
    bool collect_followers = true;
    // Skip the full evaluation of candidates that provably cannot be leader
    // or follower; their deltas are left at +infinity.
    bool prune = false;
    int workers = 1;
};

// Computes candidate deltas in place and picks the leader (best strictly
// improving penalized delta) and the followers (distance-improving,
// penalty-neutral, leader excluded). The result does not depend on the
// worker count or on pruning.
BatchResult evaluate_batch(const SearchState& state, std::span<Move> candidates, const PenaltyState& pen,
                           const BatchOptions& opt = {});

// Streaming equivalent of enumerate + evaluate_batch for one operator:
// identical leader and followers, but candidates that a closed-form bound
// rules out are never materialized.
BatchResult search_operator(const SearchState& state, OperatorKind op, const NeighborLists& nbr,
                            const PenaltyState& pen, bool collect_followers = true);

// Leader first, then followers by ascending penalized delta, skipping any
// that conflicts with a move already chosen.
std::vector<Move> select_moves(const Move& leader, std::vector<Move> followers);

void apply_moves(SearchState& state, std::span<const Move> moves);

}  // namespace mdvrp
