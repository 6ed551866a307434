#include "mdvrp/local_search.hpp"

#include <algorithm>
#include <optional>

namespace mdvrp {

SearchStats mdfis(Solution& sol, const Instance& inst, const NeighborLists& nbr, const ScalingConstants& k,
                  PenaltyState& pen, Rng& rng, const SearchConfig& cfg, const SearchObserver& observer) {
    SearchStats stats;
    std::optional<SearchState> state(std::in_place, inst, k, std::move(sol));
    auto ops = operators_for(inst);
    std::vector<Move> cands;

    while (stats.applications < cfg.depth) {
        std::shuffle(ops.begin(), ops.end(), rng);
        ++stats.passes;
        bool improved = false;
        for (OperatorKind op : ops) {
            if (stats.applications >= cfg.depth) break;
            BatchResult res;
            if (cfg.workers > 1) {
                enumerate(*state, op, nbr, cands);
                res = evaluate_batch(*state, cands, pen, BatchOptions{cfg.multi_move, true, cfg.workers});
            } else {
                res = search_operator(*state, op, nbr, pen, cfg.multi_move);
            }
            if (!res.leader) continue;
            std::vector<Move> chosen =
                cfg.multi_move ? select_moves(*res.leader, std::move(res.followers)) : std::vector<Move>{*res.leader};
            if (observer) {
                SearchState before = *state;
                state->apply(chosen);
                observer(before, chosen, *state);
            } else {
                state->apply(chosen);
            }
            ++stats.applications;
            stats.moves += static_cast<int>(chosen.size());
            pen = adapt_penalties(pen, state->breakdown(pen).violated());
            improved = true;
        }
        if (!improved) break;
    }
    sol = state->solution();
    return stats;
}

}  // namespace mdvrp
