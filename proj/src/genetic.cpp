#include "mdvrp/genetic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mdvrp {

// --- route cache used by the insertion heuristics ---------------------------

namespace {

struct RouteCache {
    std::vector<int> seq;
    std::vector<SeqAttr> prefix;  // prefix[q] = seq[0..q]
    std::vector<SeqAttr> suffix;  // suffix[q] = seq[q..end]
    RouteTerms terms;
};

RouteCache build_cache(const Route& r, const Instance& inst) {
    RouteCache c;
    c.seq = driven_sequence(r, inst);
    const std::size_t n = c.seq.size();
    c.prefix.resize(n);
    c.suffix.resize(n + 1);
    SeqAttr acc;
    for (std::size_t i = 0; i < n; ++i) {
        acc = concat(acc, single_attr(c.seq[i], inst), inst);
        c.prefix[i] = acc;
    }
    acc = SeqAttr{};
    for (std::size_t i = n; i-- > 0;) {
        acc = concat(single_attr(c.seq[i], inst), acc, inst);
        c.suffix[i] = acc;
    }
    c.terms = route_terms(c.prefix.back(), static_cast<int>(r.customers.size()), inst);
    return c;
}

double penalized_route(const RouteTerms& t, const ScalingConstants& k, const PenaltyState& pen, const Instance& inst) {
    double v = t.distance;
    if (inst.has_time_windows()) v += pen.lambda[kTimeWindow] * k.gamma * t.time_warp;
    v += pen.lambda[kCapacity] * k.theta * t.capacity_ratio;
    v += pen.lambda[kDuration] * k.theta * t.duration_ratio;
    v += pen.lambda[kDepot] * k.theta * t.closure;
    return v;
}

bool route_feasible(const RouteTerms& t) {
    return t.time_warp <= 1e-9 && t.capacity_ratio <= 1e-12 && t.duration_ratio <= 1e-12 && t.closure == 0;
}

// Best slot of `customer` in one cached route.
InsertionOption best_in_route(const RouteCache& rc, int route_index, int route_len, int customer, bool penalized,
                              const Instance& inst, const ScalingConstants& k, const PenaltyState& pen) {
    InsertionOption best;
    const SeqAttr mid = single_attr(customer, inst);
    const double before = penalized ? penalized_route(rc.terms, k, pen, inst) : rc.terms.distance;
    bool have_feasible = false;
    for (int q = 0; q <= route_len; ++q) {
        const SeqAttr a = concat(concat(rc.prefix[static_cast<std::size_t>(q)], mid, inst),
                                 rc.suffix[static_cast<std::size_t>(q) + 1], inst);
        const RouteTerms t = route_terms(a, route_len + 1, inst);
        const bool feas = route_feasible(t);
        const double cost = (penalized ? penalized_route(t, k, pen, inst) : t.distance) - before;
        // Feasible slots dominate unless costs are penalized; then cheaper
        // slots; then earlier slots.
        const bool better = best.route < 0 ||
                            (penalized ? cost < best.cost
                                       : (feas && !have_feasible) || (feas == have_feasible && cost < best.cost));
        if (better) {
            best = InsertionOption{route_index, q, -1, cost, feas};
            have_feasible = feas;
        }
    }
    return best;
}

InsertionOption new_route_option(const Solution& sol, int customer, const Instance& inst) {
    std::vector<int> per_depot(static_cast<std::size_t>(inst.num_depots()), 0);
    for (const auto& r : sol.routes)
        if (!r.empty()) ++per_depot[static_cast<std::size_t>(r.depart_depot)];
    InsertionOption best;
    bool best_spare = false;
    for (int d = 0; d < inst.num_depots(); ++d) {
        const bool spare = inst.unlimited_fleet() || per_depot[static_cast<std::size_t>(d)] < inst.fleet_per_depot();
        Route r{d, d, {customer}};
        const RouteTerms t = route_terms(route_attr(r, inst), 1, inst);
        const bool better = best.depot < 0 || (spare && !best_spare) ||
                            (spare == best_spare && t.distance < best.cost);
        if (better) {
            best = InsertionOption{-1, 0, d, t.distance, route_feasible(t) && spare};
            best_spare = spare;
        }
    }
    return best;
}

void insert_at(Solution& sol, const InsertionOption& o, int customer) {
    if (o.route < 0) {
        sol.routes.push_back(Route{o.depot, o.depot, {customer}});
        return;
    }
    auto& cs = sol.routes[static_cast<std::size_t>(o.route)].customers;
    cs.insert(cs.begin() + o.pos, customer);
}

}  // namespace

std::vector<InsertionOption> route_insertion_options(const Solution& sol, int customer, bool penalized,
                                                     const Instance& inst, const ScalingConstants& k,
                                                     const PenaltyState& pen) {
    std::vector<InsertionOption> out;
    for (int r = 0; r < static_cast<int>(sol.routes.size()); ++r) {
        const Route& rt = sol.routes[static_cast<std::size_t>(r)];
        const RouteCache rc = build_cache(rt, inst);
        out.push_back(best_in_route(rc, r, static_cast<int>(rt.customers.size()), customer, penalized, inst, k, pen));
    }
    return out;
}

// --- insertion operators ----------------------------------------------------

const char* to_string(InsertionOperator op) {
    switch (op) {
        case InsertionOperator::FBI: return "FBI";
        case InsertionOperator::IBI: return "IBI";
        case InsertionOperator::FRI: return "FRI";
        case InsertionOperator::IRI: return "IRI";
        case InsertionOperator::RI: return "RI";
    }
    return "?";
}

namespace {

class InsertionContext {
public:
    InsertionContext(Solution& sol, const Instance& inst, const ScalingConstants& k, const PenaltyState& pen)
        : sol_(sol), inst_(inst), k_(k), pen_(pen) {
        for (const auto& r : sol_.routes) caches_.push_back(build_cache(r, inst_));
    }

    // Per-route best options (feasible ones only when `feasible_only`).
    std::vector<InsertionOption> options(int customer, bool penalized, bool feasible_only) const {
        std::vector<InsertionOption> out;
        for (int r = 0; r < static_cast<int>(sol_.routes.size()); ++r) {
            const auto o = best_in_route(caches_[static_cast<std::size_t>(r)], r,
                                         static_cast<int>(sol_.routes[static_cast<std::size_t>(r)].customers.size()),
                                         customer, penalized, inst_, k_, pen_);
            if (feasible_only && !o.feasible) continue;
            out.push_back(o);
        }
        return out;
    }

    InsertionOption new_route(int customer) const { return new_route_option(sol_, customer, inst_); }

    void insert(const InsertionOption& o, int customer) {
        insert_at(sol_, o, customer);
        if (o.route < 0) {
            caches_.push_back(build_cache(sol_.routes.back(), inst_));
        } else {
            caches_[static_cast<std::size_t>(o.route)] = build_cache(sol_.routes[static_cast<std::size_t>(o.route)], inst_);
        }
    }

    int num_routes() const { return static_cast<int>(sol_.routes.size()); }
    int route_len(int r) const { return static_cast<int>(sol_.routes[static_cast<std::size_t>(r)].customers.size()); }

private:
    Solution& sol_;
    const Instance& inst_;
    const ScalingConstants& k_;
    const PenaltyState& pen_;
    std::vector<RouteCache> caches_;
};

const InsertionOption* cheapest(const std::vector<InsertionOption>& opts) {
    const InsertionOption* best = nullptr;
    for (const auto& o : opts)
        if (!best || o.cost < best->cost) best = &o;
    return best;
}

void best_insertion(InsertionContext& ctx, std::vector<int>& pending, bool feasible, Rng& rng) {
    std::shuffle(pending.begin(), pending.end(), rng);
    for (int c : pending) {
        const auto opts = ctx.options(c, !feasible, feasible);
        const InsertionOption* best = cheapest(opts);
        ctx.insert(best ? *best : ctx.new_route(c), c);
    }
}

void regret_insertion(InsertionContext& ctx, std::vector<int>& pending, bool feasible) {
    std::sort(pending.begin(), pending.end());
    while (!pending.empty()) {
        std::size_t pick = 0;
        InsertionOption pick_opt;
        double pick_regret = -1.0;
        for (std::size_t i = 0; i < pending.size(); ++i) {
            auto opts = ctx.options(pending[i], !feasible, feasible);
            if (feasible || opts.empty()) opts.push_back(ctx.new_route(pending[i]));
            std::sort(opts.begin(), opts.end(), [](const auto& a, const auto& b) { return a.cost < b.cost; });
            const double regret =
                opts.size() < 2 ? std::numeric_limits<double>::infinity() : opts[1].cost - opts[0].cost;
            // Larger regret first; ties go to the cheaper best option, then the lower id.
            if (regret > pick_regret || (regret == pick_regret && opts[0].cost < pick_opt.cost)) {
                pick = i;
                pick_opt = opts[0];
                pick_regret = regret;
            }
        }
        ctx.insert(pick_opt, pending[pick]);
        pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(pick));
    }
}

void random_insertion(InsertionContext& ctx, std::vector<int>& pending, Rng& rng) {
    std::shuffle(pending.begin(), pending.end(), rng);
    for (int c : pending) {
        if (ctx.num_routes() == 0) {
            ctx.insert(ctx.new_route(c), c);
            continue;
        }
        std::uniform_int_distribution<int> pick_route(0, ctx.num_routes() - 1);
        const int r = pick_route(rng);
        std::uniform_int_distribution<int> pick_pos(0, ctx.route_len(r));
        ctx.insert(InsertionOption{r, pick_pos(rng), -1, 0.0, false}, c);
    }
}

}  // namespace

void repair_insert(Solution& sol, std::vector<int> unrouted, InsertionOperator op, const Instance& inst,
                   const ScalingConstants& k, const PenaltyState& pen, Rng& rng) {
    sol.drop_empty_routes();
    InsertionContext ctx(sol, inst, k, pen);
    switch (op) {
        case InsertionOperator::FBI: best_insertion(ctx, unrouted, true, rng); break;
        case InsertionOperator::IBI: best_insertion(ctx, unrouted, false, rng); break;
        case InsertionOperator::FRI: regret_insertion(ctx, unrouted, true); break;
        case InsertionOperator::IRI: regret_insertion(ctx, unrouted, false); break;
        case InsertionOperator::RI: random_insertion(ctx, unrouted, rng); break;
    }
}

// --- initialization ---------------------------------------------------------

Solution initial_solution(const Instance& inst, const ScalingConstants& k, const PenaltyState& pen, Rng& rng) {
    std::vector<std::vector<int>> cluster(static_cast<std::size_t>(inst.num_depots()));
    for (int c = inst.first_customer(); c < inst.num_nodes(); ++c) {
        int best = 0;
        for (int d = 1; d < inst.num_depots(); ++d)
            if (inst.dist(d, c) < inst.dist(best, c)) best = d;
        cluster[static_cast<std::size_t>(best)].push_back(c);
    }

    Solution sol;
    std::vector<int> leftover;
    for (int d = 0; d < inst.num_depots(); ++d) {
        auto& members = cluster[static_cast<std::size_t>(d)];
        std::shuffle(members.begin(), members.end(), rng);
        Solution local;
        InsertionContext ctx(local, inst, k, pen);
        for (int c : members) {
            const auto opts = ctx.options(c, false, true);
            if (const InsertionOption* best = cheapest(opts)) {
                ctx.insert(*best, c);
                continue;
            }
            Route single{d, d, {c}};
            const bool alone_ok = route_feasible(route_terms(route_attr(single, inst), 1, inst));
            if (alone_ok && (inst.unlimited_fleet() || ctx.num_routes() < inst.fleet_per_depot()))
                ctx.insert(InsertionOption{-1, 0, d, 0.0, true}, c);
            else
                leftover.push_back(c);
        }
        for (auto& r : local.routes) sol.routes.push_back(std::move(r));
    }
    if (!leftover.empty()) {
        InsertionContext ctx(sol, inst, k, pen);
        best_insertion(ctx, leftover, false, rng);
    }
    return sol;
}

std::vector<Solution> initialize_population(const Instance& inst, int mu, const ScalingConstants& k,
                                            const PenaltyState& pen, Rng& rng) {
    if (mu < 2) throw std::invalid_argument("population size must be at least 2");
    std::vector<Solution> pop;
    pop.reserve(static_cast<std::size_t>(mu));
    for (int i = 0; i < mu; ++i) pop.push_back(initial_solution(inst, k, pen, rng));
    return pop;
}

// --- discounted UCB1 --------------------------------------------------------

DiscountedUcb::DiscountedUcb(int actions, double gamma)
    : gamma_(gamma), reward_(static_cast<std::size_t>(actions), 0.0), count_(static_cast<std::size_t>(actions), 0.0) {
    if (actions < 1) throw std::invalid_argument("bandit needs at least one action");
}

int DiscountedUcb::select() const {
    double total = 0.0;
    for (std::size_t a = 0; a < count_.size(); ++a) {
        if (count_[a] == 0.0) return static_cast<int>(a);
        total += count_[a];
    }
    int best = 0;
    double best_v = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < count_.size(); ++a) {
        const double v = reward_[a] / count_[a] + std::sqrt(2.0 * std::log(total) / count_[a]);
        if (v > best_v) {
            best_v = v;
            best = static_cast<int>(a);
        }
    }
    return best;
}

void DiscountedUcb::update(int action, double reward) {
    for (std::size_t a = 0; a < count_.size(); ++a) {
        reward_[a] *= gamma_;
        count_[a] *= gamma_;
    }
    reward_.at(static_cast<std::size_t>(action)) += reward;
    count_.at(static_cast<std::size_t>(action)) += 1.0;
}

double improvement_reward(double parent_value, double offspring_value) {
    if (parent_value == 0.0) return 0.0;
    return 100.0 * (parent_value - offspring_value) / parent_value;
}

// --- DCREX ------------------------------------------------------------------

DiversityBounds diversity_bounds(int index, int num_customers, int main_routes) {
    if (index < 0 || index >= kDiversityLevels) throw std::out_of_range("diversity index");
    const double base = static_cast<double>(num_customers + main_routes);
    return {index, index / static_cast<double>(kDiversityLevels) * base,
            (index + 1) / static_cast<double>(kDiversityLevels) * base};
}

OffspringDraft make_draft(const Solution& main_parent) {
    OffspringDraft d;
    for (std::size_t r = 0; r < main_parent.routes.size(); ++r) {
        if (main_parent.routes[r].empty()) continue;
        d.routes.push_back(main_parent.routes[r]);
        d.origin.push_back(static_cast<int>(r));
    }
    return d;
}

std::vector<std::uint64_t> route_edges(const Route& r, const Instance& inst) {
    std::vector<std::uint64_t> e;
    if (r.empty()) return e;
    const auto seq = driven_sequence(r, inst);
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) e.push_back(edge_key(seq[i], seq[i + 1]));
    return e;
}

RoutePairScore score_route_pair(const OffspringDraft& draft, int draft_route, const Route& donor,
                                const std::vector<std::uint64_t>& main_edges, const Instance& inst) {
    RoutePairScore s;
    s.main_route = draft.origin[static_cast<std::size_t>(draft_route)];
    for (auto e : route_edges(donor, inst))
        if (!std::binary_search(main_edges.begin(), main_edges.end(), e)) ++s.introduced;

    const auto& mine = draft.routes[static_cast<std::size_t>(draft_route)].customers;
    for (int c : mine)
        if (std::find(donor.customers.begin(), donor.customers.end(), c) == donor.customers.end()) ++s.missing;
    for (int c : donor.customers) {
        bool in_introduced = false, in_other_main = false;
        for (std::size_t r = 0; r < draft.routes.size(); ++r) {
            const auto& cs = draft.routes[r].customers;
            if (std::find(cs.begin(), cs.end(), c) == cs.end()) continue;
            if (draft.origin[r] < 0)
                in_introduced = true;
            else if (static_cast<int>(r) != draft_route)
                in_other_main = true;
        }
        if (in_introduced)
            ++s.conflicting;
        else if (in_other_main)
            ++s.redundant;
    }
    return s;
}

namespace {

double removal_saving(const std::vector<int>& seq, std::size_t idx, const Instance& inst) {
    const int prev = seq[idx - 1];
    const int cur = seq[idx];
    if (idx + 1 >= seq.size()) return inst.dist(prev, cur);
    const int next = seq[idx + 1];
    return inst.dist(prev, cur) + inst.dist(cur, next) - inst.dist(prev, next);
}

}  // namespace

Solution dcrex(const Solution& main_parent, std::span<const Solution* const> donors, int sigma_index,
               InsertionOperator op, const Instance& inst, const ScalingConstants& k, const PenaltyState& pen,
               Rng& rng, const CrossoverConfig& cfg, CrossoverTrace* trace) {
    OffspringDraft draft = make_draft(main_parent);
    const DiversityBounds bounds =
        diversity_bounds(sigma_index, inst.num_customers(), static_cast<int>(draft.routes.size()));
    std::vector<std::uint64_t> main_edges;
    for (const auto& r : draft.routes)
        for (auto e : route_edges(r, inst)) main_edges.push_back(e);
    std::sort(main_edges.begin(), main_edges.end());
    main_edges.erase(std::unique(main_edges.begin(), main_edges.end()), main_edges.end());

    CrossoverTrace local;
    CrossoverTrace& tr = trace ? *trace : local;
    tr = CrossoverTrace{};
    tr.bounds = bounds;

    std::vector<RoutePairScore> pairs;
    for (const Solution* donor : donors) {
        pairs.clear();
        for (int i = 0; i < static_cast<int>(draft.routes.size()); ++i) {
            if (draft.origin[static_cast<std::size_t>(i)] < 0) continue;
            for (int j = 0; j < static_cast<int>(donor->routes.size()); ++j) {
                if (donor->routes[static_cast<std::size_t>(j)].empty()) continue;
                RoutePairScore s = score_route_pair(draft, i, donor->routes[static_cast<std::size_t>(j)], main_edges, inst);
                s.donor_route = j;
                pairs.push_back(s);
            }
        }
        if (pairs.empty()) break;  // every main-parent route already replaced
        std::sort(pairs.begin(), pairs.end(), [](const RoutePairScore& a, const RoutePairScore& b) {
            if (a.score() != b.score()) return a.score() < b.score();
            if (a.main_route != b.main_route) return a.main_route < b.main_route;
            return a.donor_route < b.donor_route;
        });
        const auto pool = std::min<std::size_t>(static_cast<std::size_t>(std::max(1, cfg.pair_pool)), pairs.size());
        std::uniform_int_distribution<std::size_t> pick(0, pool - 1);
        const RoutePairScore chosen = pairs[pick(rng)];

        for (std::size_t r = 0; r < draft.routes.size(); ++r) {
            if (draft.origin[r] == chosen.main_route) {
                draft.routes.erase(draft.routes.begin() + static_cast<std::ptrdiff_t>(r));
                draft.origin.erase(draft.origin.begin() + static_cast<std::ptrdiff_t>(r));
                break;
            }
        }
        draft.routes.push_back(donor->routes[static_cast<std::size_t>(chosen.donor_route)]);
        draft.origin.push_back(-1);
        tr.exchanges.push_back(chosen);
        tr.sigma_cur += chosen.delta_sigma();

        // Target reached (overshooting sigma_max included); otherwise the
        // next donor gets its turn.
        if (tr.sigma_cur >= bounds.sigma_min) break;
    }

    // Duplicates: keep a copy in an introduced route (the one whose removal
    // saves least), delete the rest.
    struct Occ {
        std::size_t route;
        std::size_t idx;  // index in the driven sequence
        double saving;
    };
    std::vector<std::vector<Occ>> occ(static_cast<std::size_t>(inst.num_nodes()));
    for (std::size_t r = 0; r < draft.routes.size(); ++r) {
        const auto seq = driven_sequence(draft.routes[r], inst);
        for (std::size_t i = 1; i <= draft.routes[r].customers.size(); ++i)
            occ[static_cast<std::size_t>(seq[i])].push_back({r, i, removal_saving(seq, i, inst)});
    }
    std::vector<std::vector<char>> drop(draft.routes.size());
    for (std::size_t r = 0; r < draft.routes.size(); ++r) drop[r].assign(draft.routes[r].customers.size(), 0);
    std::vector<int> unrouted;
    for (int c = inst.first_customer(); c < inst.num_nodes(); ++c) {
        auto& list = occ[static_cast<std::size_t>(c)];
        if (list.empty()) {
            unrouted.push_back(c);
            continue;
        }
        if (list.size() == 1) continue;
        const Occ* keep = nullptr;
        for (const auto& o : list) {
            const bool intro = draft.origin[o.route] < 0;
            if (!keep) {
                keep = &o;
                continue;
            }
            const bool keep_intro = draft.origin[keep->route] < 0;
            if ((intro && !keep_intro) || (intro == keep_intro && o.saving < keep->saving)) keep = &o;
        }
        for (const auto& o : list) {
            if (&o == keep) continue;
            drop[o.route][o.idx - 1] = 1;
            tr.removed.push_back(c);
        }
    }

    Solution child;
    child.meta = main_parent.meta;
    for (std::size_t r = 0; r < draft.routes.size(); ++r) {
        Route nr = draft.routes[r];
        nr.customers.clear();
        for (std::size_t i = 0; i < draft.routes[r].customers.size(); ++i)
            if (!drop[r][i]) nr.customers.push_back(draft.routes[r].customers[i]);
        if (!nr.empty()) child.routes.push_back(std::move(nr));
    }
    tr.inserted = unrouted;
    repair_insert(child, std::move(unrouted), op, inst, k, pen, rng);
    return child;
}

}  // namespace mdvrp
