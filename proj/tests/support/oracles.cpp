#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace mdvrp::testing {

std::vector<Route> normalized(const Solution& sol, const Instance& inst) {
    std::vector<Route> out;
    for (auto r : sol.routes) {
        if (r.empty()) continue;
        if (inst.open_routes()) r.arrive_depot = r.depart_depot;
        out.push_back(std::move(r));
    }
    std::sort(out.begin(), out.end(), [](const Route& a, const Route& b) {
        return std::tie(a.depart_depot, a.arrive_depot, a.customers) < std::tie(b.depart_depot, b.arrive_depot, b.customers);
    });
    return out;
}

namespace {

using Seq = std::vector<int>;

// Customers at driven positions first..last (1-based), optionally reversed.
Seq piece(const Route& r, int first, int last, bool rev = false) {
    Seq s;
    for (int p = first; p <= last; ++p) s.push_back(r.customers[static_cast<std::size_t>(p - 1)]);
    if (rev) std::reverse(s.begin(), s.end());
    return s;
}

Seq join(std::initializer_list<Seq> parts) {
    Seq out;
    for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
}

}  // namespace

Solution reference_apply(const Solution& sol, const Move& m, const Instance& inst) {
    Solution out = sol;
    auto& routes = out.routes;
    const Route a = m.route_a >= 0 ? sol.routes[static_cast<std::size_t>(m.route_a)] : Route{};
    const Route b = m.route_b >= 0 ? sol.routes[static_cast<std::size_t>(m.route_b)] : Route{};
    const int la = static_cast<int>(a.customers.size());
    const int lb = static_cast<int>(b.customers.size());
    auto& ra = routes[static_cast<std::size_t>(m.route_a)];

    switch (m.kind) {
        case OperatorKind::Relocate: {
            const int ea = m.pos_a + m.len_a - 1;
            const Seq seg = piece(a, m.pos_a, ea, m.rev_a);
            if (m.route_a != m.route_b) {
                ra.customers = join({piece(a, 1, m.pos_a - 1), piece(a, ea + 1, la)});
                routes[static_cast<std::size_t>(m.route_b)].customers =
                    join({piece(b, 1, m.pos_b), seg, piece(b, m.pos_b + 1, lb)});
            } else {
                // Walk the original positions, skipping the segment, and drop
                // it in after position pos_b.
                Seq s;
                if (m.pos_b == 0) s = seg;
                for (int p = 1; p <= la; ++p) {
                    if (p >= m.pos_a && p <= ea) continue;
                    s.push_back(a.customers[static_cast<std::size_t>(p - 1)]);
                    if (p == m.pos_b) s.insert(s.end(), seg.begin(), seg.end());
                }
                ra.customers = s;
            }
            break;
        }
        case OperatorKind::Swap: {
            const int ea = m.pos_a + m.len_a - 1, eb = m.pos_b + m.len_b - 1;
            if (m.route_a != m.route_b) {
                ra.customers = join({piece(a, 1, m.pos_a - 1), piece(b, m.pos_b, eb, m.rev_b), piece(a, ea + 1, la)});
                routes[static_cast<std::size_t>(m.route_b)].customers =
                    join({piece(b, 1, m.pos_b - 1), piece(a, m.pos_a, ea, m.rev_a), piece(b, eb + 1, lb)});
            } else {
                ra.customers = join({piece(a, 1, m.pos_a - 1), piece(a, m.pos_b, eb, m.rev_b), piece(a, ea + 1, m.pos_b - 1),
                                     piece(a, m.pos_a, ea, m.rev_a), piece(a, eb + 1, la)});
            }
            break;
        }
        case OperatorKind::TwoOptStar: {
            auto& rb = routes[static_cast<std::size_t>(m.route_b)];
            ra.customers = join({piece(a, 1, m.pos_a), piece(b, m.pos_b + 1, lb)});
            ra.arrive_depot = b.arrive_depot;
            rb.customers = join({piece(b, 1, m.pos_b), piece(a, m.pos_a + 1, la)});
            rb.arrive_depot = a.arrive_depot;
            break;
        }
        case OperatorKind::TwoOpt:
            ra.customers = join({piece(a, 1, m.pos_a - 1), piece(a, m.pos_a, m.pos_b, true), piece(a, m.pos_b + 1, la)});
            break;
        case OperatorKind::DepotInsert:
            ra.customers = piece(a, 1, m.pos_a);
            routes.push_back(Route{m.depot, m.depot, piece(a, m.pos_a + 1, la)});
            break;
        case OperatorKind::DepotReplace:
            if (m.mode == DepotMode::Depart || m.mode == DepotMode::Both) ra.depart_depot = m.depot;
            if (m.mode == DepotMode::Arrive || m.mode == DepotMode::Both) ra.arrive_depot = m.depot;
            break;
    }
    if (inst.open_routes())
        for (auto& r : out.routes) r.arrive_depot = r.depart_depot;
    out.drop_empty_routes();
    return out;
}

std::vector<Move> all_moves(const Solution& sol, OperatorKind op, const Instance& inst) {
    std::vector<Move> out;
    const bool rev_ok = !inst.has_time_windows();
    const int nr = static_cast<int>(sol.routes.size());
    auto len = [&](int r) { return static_cast<int>(sol.routes[static_cast<std::size_t>(r)].customers.size()); };

    switch (op) {
        case OperatorKind::Relocate:
            for (int ra = 0; ra < nr; ++ra)
                for (int pa = 1; pa <= len(ra); ++pa)
                    for (int l = 1; l <= 2 && pa + l - 1 <= len(ra); ++l)
                        for (int rev = 0; rev <= (l == 2 && rev_ok ? 1 : 0); ++rev)
                            for (int rb = 0; rb < nr; ++rb)
                                for (int q = 0; q <= len(rb); ++q) {
                                    // Same-route targets inside or next to the segment leave it in place.
                                    if (ra == rb && q >= pa - 1 && q <= pa + l - 1) continue;
                                    Move m;
                                    m.kind = op;
                                    m.route_a = ra;
                                    m.pos_a = pa;
                                    m.len_a = l;
                                    m.rev_a = rev != 0;
                                    m.route_b = rb;
                                    m.pos_b = q;
                                    out.push_back(m);
                                }
            break;
        case OperatorKind::Swap:
            for (int r1 = 0; r1 < nr; ++r1)
                for (int p1 = 1; p1 <= len(r1); ++p1)
                    for (int r2 = r1; r2 < nr; ++r2)
                        for (int p2 = (r2 == r1 ? p1 + 1 : 1); p2 <= len(r2); ++p2)
                            for (int l1 = 1; l1 <= 2 && p1 + l1 - 1 <= len(r1); ++l1) {
                                if (r1 == r2 && p1 + l1 > p2) continue;
                                for (int l2 = 1; l2 <= 2 && p2 + l2 - 1 <= len(r2); ++l2)
                                    for (int v1 = 0; v1 <= (l1 == 2 && rev_ok ? 1 : 0); ++v1)
                                        for (int v2 = 0; v2 <= (l2 == 2 && rev_ok ? 1 : 0); ++v2) {
                                            Move m;
                                            m.kind = op;
                                            m.route_a = r1;
                                            m.pos_a = p1;
                                            m.len_a = l1;
                                            m.rev_a = v1 != 0;
                                            m.route_b = r2;
                                            m.pos_b = p2;
                                            m.len_b = l2;
                                            m.rev_b = v2 != 0;
                                            out.push_back(m);
                                        }
                            }
            break;
        case OperatorKind::TwoOptStar:
            for (int ra = 0; ra < nr; ++ra)
                for (int rb = ra + 1; rb < nr; ++rb)
                    for (int i = 0; i <= len(ra); ++i)
                        for (int j = 0; j <= len(rb); ++j) {
                            const Route& x = sol.routes[static_cast<std::size_t>(ra)];
                            const Route& y = sol.routes[static_cast<std::size_t>(rb)];
                            if (i == 0 && j == 0 && x.depart_depot == y.depart_depot) continue;
                            if (i == len(ra) && j == len(rb) && (inst.open_routes() || x.arrive_depot == y.arrive_depot))
                                continue;
                            Move m;
                            m.kind = op;
                            m.route_a = ra;
                            m.pos_a = i;
                            m.route_b = rb;
                            m.pos_b = j;
                            out.push_back(m);
                        }
            break;
        case OperatorKind::TwoOpt:
            for (int r = 0; r < nr; ++r)
                for (int i = 1; i <= len(r); ++i)
                    for (int j = i + 1; j <= len(r); ++j) {
                        // A closed route reversed end to end is the same tour.
                        if (!inst.open_routes() && i == 1 && j == len(r)) continue;
                        Move m;
                        m.kind = op;
                        m.route_a = r;
                        m.pos_a = i;
                        m.pos_b = j;
                        out.push_back(m);
                    }
            break;
        case OperatorKind::DepotInsert:
            for (int r = 0; r < nr; ++r)
                for (int k = 0; k < len(r); ++k)
                    for (int d = 0; d < inst.num_depots(); ++d) {
                        Move m;
                        m.kind = op;
                        m.route_a = r;
                        m.pos_a = k;
                        m.depot = d;
                        out.push_back(m);
                    }
            break;
        case OperatorKind::DepotReplace:
            for (int r = 0; r < nr; ++r) {
                const Route& rt = sol.routes[static_cast<std::size_t>(r)];
                for (int d = 0; d < inst.num_depots(); ++d)
                    for (auto mode : {DepotMode::Depart, DepotMode::Arrive, DepotMode::Both}) {
                        if (inst.open_routes() && mode != DepotMode::Depart) continue;
                        const bool dep_same = d == rt.depart_depot, arr_same = d == rt.arrive_depot;
                        if (mode == DepotMode::Depart && dep_same) continue;
                        if (mode == DepotMode::Arrive && arr_same) continue;
                        if (mode == DepotMode::Both && dep_same && arr_same) continue;
                        Move m;
                        m.kind = op;
                        m.route_a = r;
                        m.depot = d;
                        m.mode = mode;
                        out.push_back(m);
                    }
            }
            break;
    }
    return out;
}

EvalBreakdown recomputed_delta(const Solution& sol, const Move& m, const PenaltyState& pen,
                               const ScalingConstants& k, const Instance& inst) {
    const EvalBreakdown before = evaluate(sol, pen, k, inst);
    const EvalBreakdown after = evaluate(reference_apply(sol, m, inst), pen, k, inst);
    EvalBreakdown d;
    d.distance = after.distance - before.distance;
    for (int i = 0; i < kNumPenalties; ++i) d.violation[static_cast<std::size_t>(i)] = after.violation[static_cast<std::size_t>(i)] - before.violation[static_cast<std::size_t>(i)];
    d.penalized = after.penalized - before.penalized;
    return d;
}

bool route_ok(const Route& r, const Instance& inst) {
    double load = 0.0;
    for (int c : r.customers) load += inst.node(c).demand;
    if (load > inst.capacity() + 1e-9) return false;
    if (!inst.open_routes() && r.arrive_depot != r.depart_depot) return false;

    std::vector<int> seq{r.depart_depot};
    seq.insert(seq.end(), r.customers.begin(), r.customers.end());
    if (!inst.open_routes()) seq.push_back(r.arrive_depot);
    double t = inst.node(seq.front()).ready;
    const double start = t;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        const Node& n = inst.node(seq[i]);
        if (i > 0) t += inst.time(seq[i - 1], seq[i]);
        if (inst.has_time_windows()) {
            t = std::max(t, n.ready);
            if (t > n.due + 1e-9) return false;
        }
        t += n.service;
    }
    return t - start <= inst.max_duration() + 1e-9;
}

std::optional<ExhaustiveResult> exhaustive_optimum(const Instance& inst) {
    const int nc = inst.num_customers();
    const int nd = inst.num_depots();
    const int full = (1 << nc) - 1;
    const int fc = inst.first_customer();

    // Cheapest feasible route per (customer subset, depot).
    std::vector<std::vector<double>> best(static_cast<std::size_t>(full + 1), std::vector<double>(static_cast<std::size_t>(nd), kInfinity));
    std::vector<std::vector<Route>> best_route(static_cast<std::size_t>(full + 1), std::vector<Route>(static_cast<std::size_t>(nd)));
    for (int mask = 1; mask <= full; ++mask) {
        std::vector<int> cs;
        for (int i = 0; i < nc; ++i)
            if (mask & (1 << i)) cs.push_back(fc + i);
        for (int d = 0; d < nd; ++d) {
            std::vector<int> perm = cs;
            do {
                Route r{d, d, perm};
                if (!route_ok(r, inst)) continue;
                const double c = route_distance(r, inst);
                if (c < best[static_cast<std::size_t>(mask)][static_cast<std::size_t>(d)]) {
                    best[static_cast<std::size_t>(mask)][static_cast<std::size_t>(d)] = c;
                    best_route[static_cast<std::size_t>(mask)][static_cast<std::size_t>(d)] = r;
                }
            } while (std::next_permutation(perm.begin(), perm.end()));
        }
    }

    const int limit = inst.unlimited_fleet() ? nc : inst.fleet_per_depot();
    ExhaustiveResult res;
    std::vector<int> used(static_cast<std::size_t>(nd), 0);
    std::vector<Route> current;
    std::function<void(int, double)> rec = [&](int remaining, double cost) {
        if (cost >= res.cost - 1e-12) return;
        if (remaining == 0) {
            res.cost = cost;
            res.best.routes = current;
            return;
        }
        const int low = remaining & -remaining;
        const int rest = remaining ^ low;
        // Subsets of `rest`, each joined with the lowest remaining customer.
        for (int sub = rest;; sub = (sub - 1) & rest) {
            const int mask = sub | low;
            for (int d = 0; d < nd; ++d) {
                const double c = best[static_cast<std::size_t>(mask)][static_cast<std::size_t>(d)];
                if (c == kInfinity || used[static_cast<std::size_t>(d)] >= limit) continue;
                ++used[static_cast<std::size_t>(d)];
                current.push_back(best_route[static_cast<std::size_t>(mask)][static_cast<std::size_t>(d)]);
                rec(remaining ^ mask, cost + c);
                current.pop_back();
                --used[static_cast<std::size_t>(d)];
            }
            if (sub == 0) break;
        }
    };
    rec(full, 0.0);
    if (res.cost == kInfinity) return std::nullopt;
    return res;
}

bool is_local_optimum(const Solution& sol, const PenaltyState& pen, const ScalingConstants& k,
                      const Instance& inst, double eps) {
    Solution norm;
    norm.routes = normalized(sol, inst);
    for (OperatorKind op : operators_for(inst))
        for (const Move& m : all_moves(norm, op, inst))
            if (recomputed_delta(norm, m, pen, k, inst).penalized < -eps) return false;
    return true;
}

int TextbookUcb1::select() const {
    int total = 0;
    for (std::size_t a = 0; a < n_.size(); ++a) {
        if (n_[a] == 0) return static_cast<int>(a);
        total += n_[a];
    }
    int best = 0;
    double best_v = -kInfinity;
    for (std::size_t a = 0; a < n_.size(); ++a) {
        const double v = sum_[a] / n_[a] + std::sqrt(2.0 * std::log(static_cast<double>(total)) / n_[a]);
        if (v > best_v) {
            best_v = v;
            best = static_cast<int>(a);
        }
    }
    return best;
}

void TextbookUcb1::update(int a, double r) {
    ++n_[static_cast<std::size_t>(a)];
    sum_[static_cast<std::size_t>(a)] += r;
}

namespace {

double route_value(const Route& r, bool penalized, const Instance& inst, const ScalingConstants& k,
                   const PenaltyState& pen) {
    if (!penalized) return route_distance(r, inst);
    Solution s;
    s.routes.push_back(r);
    return evaluate(s, pen, k, inst).penalized;
}

InsertionOption brute_new_route(const Solution& sol, int customer, const Instance& inst) {
    std::vector<int> per(static_cast<std::size_t>(inst.num_depots()), 0);
    for (const auto& r : sol.routes)
        if (!r.empty()) ++per[static_cast<std::size_t>(r.depart_depot)];
    InsertionOption best;
    bool best_spare = false;
    for (int d = 0; d < inst.num_depots(); ++d) {
        const bool spare = inst.unlimited_fleet() || per[static_cast<std::size_t>(d)] < inst.fleet_per_depot();
        const Route r{d, d, {customer}};
        const double c = route_distance(r, inst);
        if (best.depot < 0 || (spare && !best_spare) || (spare == best_spare && c < best.cost)) {
            best = InsertionOption{-1, 0, d, c, route_ok(r, inst) && spare};
            best_spare = spare;
        }
    }
    return best;
}

}  // namespace

std::vector<InsertionOption> brute_insertion_options(const Solution& sol, int customer, bool penalized,
                                                     const Instance& inst, const ScalingConstants& k,
                                                     const PenaltyState& pen) {
    std::vector<InsertionOption> out;
    for (int r = 0; r < static_cast<int>(sol.routes.size()); ++r) {
        const Route& old = sol.routes[static_cast<std::size_t>(r)];
        const double before = route_value(old, penalized, inst, k, pen);
        InsertionOption best;
        for (int q = 0; q <= static_cast<int>(old.customers.size()); ++q) {
            Route nr = old;
            nr.customers.insert(nr.customers.begin() + q, customer);
            const bool feas = route_ok(nr, inst);
            const double cost = route_value(nr, penalized, inst, k, pen) - before;
            bool better = best.route < 0;
            if (!better && penalized) better = cost < best.cost;
            if (!better && !penalized) better = (feas && !best.feasible) || (feas == best.feasible && cost < best.cost);
            if (better) best = InsertionOption{r, q, -1, cost, feas};
        }
        out.push_back(best);
    }
    return out;
}

std::vector<int> reference_regret_insert(Solution& sol, std::vector<int> pending, bool feasible,
                                         const Instance& inst, const ScalingConstants& k,
                                         const PenaltyState& pen) {
    std::vector<int> order;
    std::sort(pending.begin(), pending.end());
    while (!pending.empty()) {
        double top_regret = -1.0;
        InsertionOption top_opt;
        std::size_t top = 0;
        for (std::size_t i = 0; i < pending.size(); ++i) {
            std::vector<InsertionOption> opts;
            for (const auto& o : brute_insertion_options(sol, pending[i], !feasible, inst, k, pen))
                if (!feasible || o.feasible) opts.push_back(o);
            if (feasible || opts.empty()) opts.push_back(brute_new_route(sol, pending[i], inst));
            std::sort(opts.begin(), opts.end(), [](const auto& a, const auto& b) { return a.cost < b.cost; });
            const double regret = opts.size() < 2 ? std::numeric_limits<double>::infinity() : opts[1].cost - opts[0].cost;
            if (regret > top_regret || (regret == top_regret && opts[0].cost < top_opt.cost)) {
                top_regret = regret;
                top_opt = opts[0];
                top = i;
            }
        }
        const int c = pending[top];
        if (top_opt.route < 0)
            sol.routes.push_back(Route{top_opt.depot, top_opt.depot, {c}});
        else {
            auto& cs = sol.routes[static_cast<std::size_t>(top_opt.route)].customers;
            cs.insert(cs.begin() + top_opt.pos, c);
        }
        order.push_back(c);
        pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(top));
    }
    return order;
}

std::vector<double> reference_biased_fitness(const std::vector<double>& value, const std::vector<double>& diversity,
                                             double xi) {
    const std::size_t n = value.size();
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        int rf = 0, rd = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (value[j] < value[i] || (value[j] == value[i] && j < i)) ++rf;
            if (diversity[j] > diversity[i] || (diversity[j] == diversity[i] && j < i)) ++rd;
        }
        const double p = static_cast<double>(n);
        out[i] = (p - rf) / p + xi * (p - rd) / p;
    }
    return out;
}

}  // namespace mdvrp::testing
