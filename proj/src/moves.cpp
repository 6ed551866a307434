#include "mdvrp/moves.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>
#include <tuple>

namespace mdvrp {

const char* to_string(OperatorKind k) {
    switch (k) {
        case OperatorKind::Relocate: return "relocate";
        case OperatorKind::Swap: return "swap";
        case OperatorKind::TwoOptStar: return "2-opt*";
        case OperatorKind::TwoOpt: return "2-opt";
        case OperatorKind::DepotInsert: return "depot-insert";
        case OperatorKind::DepotReplace: return "depot-replace";
    }
    return "?";
}

std::vector<OperatorKind> operators_for(const Instance& inst) {
    std::vector<OperatorKind> ops;
    for (auto k : kAllOperators) {
        if (k == OperatorKind::TwoOpt && inst.has_time_windows()) continue;
        ops.push_back(k);
    }
    return ops;
}

bool Move::conflicts_with(const Move& other) const {
    if (other.touches_route(route_a) || other.touches_route(route_b)) return true;
    for (int d : fleet_depots) {
        if (d < 0) continue;
        for (int e : other.fleet_depots)
            if (e == d) return true;
    }
    return false;
}

namespace {

auto key_of(const Move& m) {
    return std::make_tuple(static_cast<int>(m.kind), m.route_a, m.route_b, m.pos_a, m.pos_b, m.len_a, m.len_b,
                           m.rev_a, m.rev_b, m.depot, static_cast<int>(m.mode));
}

}  // namespace

bool canonical_less(const Move& a, const Move& b) { return key_of(a) < key_of(b); }

// ---------------------------------------------------------------------------
// Move plans: every resulting route is a short concatenation of pieces of the
// current routes (possibly reversed) and lone depots. Deltas and application
// share the same plan so they cannot drift apart.

namespace {

struct Piece {
    int route;
    int from;
    int to;
    bool reversed;
    int node;  // lone node when >= 0
};

struct RoutePlan {
    std::array<Piece, 5> pieces;
    int n = 0;

    void seg(int r, int from, int to, bool rev = false) {
        if (from > to) return;
        pieces[static_cast<std::size_t>(n++)] = Piece{r, from, to, rev, -1};
    }
    void node(int id) { pieces[static_cast<std::size_t>(n++)] = Piece{-1, 0, -1, false, id}; }
};

struct MovePlan {
    std::array<int, 2> old{-1, -1};
    int n_old = 0;
    std::array<RoutePlan, 3> routes;
    int n_new = 0;

    RoutePlan& add() { return routes[static_cast<std::size_t>(n_new++)]; }
};

MovePlan plan_of(const SearchState& s, const Move& m) {
    MovePlan p;
    const bool closed = !s.instance().open_routes();
    const int ra = m.route_a;
    const int rb = m.route_b;
    switch (m.kind) {
        case OperatorKind::Relocate: {
            const int pa = m.pos_a, end_a = m.pos_a + m.len_a - 1, q = m.pos_b;
            if (ra != rb) {
                p.old = {ra, rb};
                p.n_old = 2;
                auto& a = p.add();
                a.seg(ra, 0, pa - 1);
                a.seg(ra, end_a + 1, s.last_pos(ra));
                auto& b = p.add();
                b.seg(rb, 0, q);
                b.seg(ra, pa, end_a, m.rev_a);
                b.seg(rb, q + 1, s.last_pos(rb));
            } else {
                p.old = {ra, -1};
                p.n_old = 1;
                auto& a = p.add();
                if (q < pa) {
                    a.seg(ra, 0, q);
                    a.seg(ra, pa, end_a, m.rev_a);
                    a.seg(ra, q + 1, pa - 1);
                    a.seg(ra, end_a + 1, s.last_pos(ra));
                } else {
                    a.seg(ra, 0, pa - 1);
                    a.seg(ra, end_a + 1, q);
                    a.seg(ra, pa, end_a, m.rev_a);
                    a.seg(ra, q + 1, s.last_pos(ra));
                }
            }
            break;
        }
        case OperatorKind::Swap: {
            const int ea = m.pos_a + m.len_a - 1, eb = m.pos_b + m.len_b - 1;
            if (ra != rb) {
                p.old = {ra, rb};
                p.n_old = 2;
                auto& a = p.add();
                a.seg(ra, 0, m.pos_a - 1);
                a.seg(rb, m.pos_b, eb, m.rev_b);
                a.seg(ra, ea + 1, s.last_pos(ra));
                auto& b = p.add();
                b.seg(rb, 0, m.pos_b - 1);
                b.seg(ra, m.pos_a, ea, m.rev_a);
                b.seg(rb, eb + 1, s.last_pos(rb));
            } else {
                p.old = {ra, -1};
                p.n_old = 1;
                auto& a = p.add();
                a.seg(ra, 0, m.pos_a - 1);
                a.seg(ra, m.pos_b, eb, m.rev_b);
                a.seg(ra, ea + 1, m.pos_b - 1);
                a.seg(ra, m.pos_a, ea, m.rev_a);
                a.seg(ra, eb + 1, s.last_pos(ra));
            }
            break;
        }
        case OperatorKind::TwoOptStar: {
            p.old = {ra, rb};
            p.n_old = 2;
            auto& a = p.add();
            a.seg(ra, 0, m.pos_a);
            a.seg(rb, m.pos_b + 1, s.last_pos(rb));
            auto& b = p.add();
            b.seg(rb, 0, m.pos_b);
            b.seg(ra, m.pos_a + 1, s.last_pos(ra));
            break;
        }
        case OperatorKind::TwoOpt: {
            p.old = {ra, -1};
            p.n_old = 1;
            auto& a = p.add();
            a.seg(ra, 0, m.pos_a - 1);
            a.seg(ra, m.pos_a, m.pos_b, true);
            a.seg(ra, m.pos_b + 1, s.last_pos(ra));
            break;
        }
        case OperatorKind::DepotInsert: {
            p.old = {ra, -1};
            p.n_old = 1;
            const int len = s.route_len(ra);
            auto& a = p.add();
            a.seg(ra, 0, m.pos_a);
            if (closed) a.seg(ra, len + 1, len + 1);
            auto& b = p.add();
            b.node(m.depot);
            b.seg(ra, m.pos_a + 1, len);
            if (closed) b.node(m.depot);
            break;
        }
        case OperatorKind::DepotReplace: {
            p.old = {ra, -1};
            p.n_old = 1;
            const int len = s.route_len(ra);
            auto& a = p.add();
            if (m.mode == DepotMode::Arrive) {
                a.seg(ra, 0, len);
            } else {
                a.node(m.depot);
                a.seg(ra, 1, m.mode == DepotMode::Depart ? s.last_pos(ra) : len);
            }
            if (closed && m.mode != DepotMode::Depart) a.node(m.depot);
            break;
        }
    }
    return p;
}

}  // namespace

// ---------------------------------------------------------------------------

SearchState::SearchState(const Instance& inst, const ScalingConstants& k, Solution sol)
    : inst_(&inst), k_(k), sol_(std::move(sol)) {
    sol_.drop_empty_routes();
    if (inst.open_routes())
        for (auto& r : sol_.routes) r.arrive_depot = r.depart_depot;
    rebuild();
}

const SeqAttr& SearchState::segment(int r, int i, int j) const {
    if (i > j) return identity_;
    const auto n = static_cast<std::size_t>(last_pos(r) + 1);
    return tables_[static_cast<std::size_t>(r)][static_cast<std::size_t>(i) * n + static_cast<std::size_t>(j)];
}

void SearchState::rebuild_route(int r) {
    seq_[static_cast<std::size_t>(r)] = driven_sequence(route(r), *inst_);
    const auto n = static_cast<std::size_t>(last_pos(r) + 1);
    auto& t = tables_[static_cast<std::size_t>(r)];
    t.assign(n * n, SeqAttr{});
    for (std::size_t i = 0; i < n; ++i) {
        SeqAttr acc = single_attr(node_at(r, static_cast<int>(i)), *inst_);
        t[i * n + i] = acc;
        for (std::size_t j = i + 1; j < n; ++j) {
            acc = concat(acc, single_attr(node_at(r, static_cast<int>(j)), *inst_), *inst_);
            t[i * n + j] = acc;
        }
    }
    terms_[static_cast<std::size_t>(r)] = route_terms(full(r), route_len(r), *inst_);
}

void SearchState::rebuild() {
    seq_.assign(sol_.routes.size(), {});
    tables_.assign(sol_.routes.size(), {});
    terms_.assign(sol_.routes.size(), {});
    for (int r = 0; r < num_routes(); ++r) rebuild_route(r);
    route_of_.assign(static_cast<std::size_t>(inst_->num_nodes()), -1);
    pos_of_.assign(static_cast<std::size_t>(inst_->num_nodes()), -1);
    per_depot_.assign(static_cast<std::size_t>(inst_->num_depots()), 0);
    for (int r = 0; r < num_routes(); ++r) {
        const auto& cs = route(r).customers;
        for (std::size_t p = 0; p < cs.size(); ++p) {
            route_of_[static_cast<std::size_t>(cs[p])] = r;
            pos_of_[static_cast<std::size_t>(cs[p])] = static_cast<int>(p) + 1;
        }
        if (terms(r).depot >= 0) ++per_depot_[static_cast<std::size_t>(terms(r).depot)];
    }
}

EvalBreakdown SearchState::breakdown(const PenaltyState& pen) const {
    double dist = 0.0, tw = 0.0, cap = 0.0, dur = 0.0;
    int closure = 0;
    for (const auto& t : terms_) {
        dist += t.distance;
        tw += t.time_warp;
        cap += t.capacity_ratio;
        dur += t.duration_ratio;
        closure += t.closure;
    }
    return combine_terms(dist, tw, cap, dur, closure, fleet_excess(per_depot_, *inst_), pen, k_, *inst_);
}

namespace {

void eval_plan(const SearchState& s, const MovePlan& p, Move& m, const PenaltyState& pen) {
    const Instance& inst = s.instance();
    double dist = 0.0, tw = 0.0, cap = 0.0, dur = 0.0;
    int closure = 0;

    // Depot count changes: at most two removals and three additions.
    std::array<int, 5> dep{-1, -1, -1, -1, -1};
    std::array<int, 5> chg{0, 0, 0, 0, 0};
    int nd = 0;
    auto bump = [&](int d, int by) {
        if (d < 0) return;
        for (int i = 0; i < nd; ++i)
            if (dep[static_cast<std::size_t>(i)] == d) {
                chg[static_cast<std::size_t>(i)] += by;
                return;
            }
        dep[static_cast<std::size_t>(nd)] = d;
        chg[static_cast<std::size_t>(nd++)] = by;
    };

    for (int i = 0; i < p.n_old; ++i) {
        const RouteTerms& t = s.terms(p.old[static_cast<std::size_t>(i)]);
        dist -= t.distance;
        tw -= t.time_warp;
        cap -= t.capacity_ratio;
        dur -= t.duration_ratio;
        closure -= t.closure;
        bump(t.depot, -1);
    }
    for (int i = 0; i < p.n_new; ++i) {
        const RoutePlan& rp = p.routes[static_cast<std::size_t>(i)];
        SeqAttr acc;
        int customers = 0;
        for (int k = 0; k < rp.n; ++k) {
            const Piece& pc = rp.pieces[static_cast<std::size_t>(k)];
            if (pc.node >= 0) {
                acc = concat(acc, single_attr(pc.node, inst), inst);
                if (inst.is_customer(pc.node)) ++customers;
            } else {
                const SeqAttr& a = s.segment(pc.route, pc.from, pc.to);
                acc = concat(acc, pc.reversed ? reversed_attr(a) : a, inst);
                customers += std::max(0, std::min(pc.to, s.route_len(pc.route)) - std::max(pc.from, 1) + 1);
            }
        }
        const RouteTerms t = route_terms(acc, customers, inst);
        dist += t.distance;
        tw += t.time_warp;
        cap += t.capacity_ratio;
        dur += t.duration_ratio;
        closure += t.closure;
        bump(t.depot, +1);
    }

    int fleet = 0;
    m.fleet_depots = {-1, -1, -1, -1};
    int nf = 0;
    if (!inst.unlimited_fleet()) {
        const int cap_v = inst.fleet_per_depot();
        for (int i = 0; i < nd; ++i) {
            const int c = chg[static_cast<std::size_t>(i)];
            if (c == 0) continue;
            const int before = s.routes_per_depot()[static_cast<std::size_t>(dep[static_cast<std::size_t>(i)])];
            fleet += std::max(before + c - cap_v, 0) - std::max(before - cap_v, 0);
            if (nf < 4) m.fleet_depots[static_cast<std::size_t>(nf++)] = dep[static_cast<std::size_t>(i)];
        }
    }
    m.delta = combine_terms(dist, tw, cap, dur, closure, fleet, pen, s.constants(), inst);
}

}  // namespace

void SearchState::evaluate_move(Move& m, const PenaltyState& pen) const { eval_plan(*this, plan_of(*this, m), m, pen); }

bool SearchState::evaluate_move_bounded(Move& m, const PenaltyState& pen, double threshold) const {
    const MovePlan p = plan_of(*this, m);
    const Instance& inst = *inst_;
    double dd = 0.0;
    double relief = 0.0;
    const bool fleet_limited = !inst.unlimited_fleet();
    for (int i = 0; i < p.n_old; ++i) {
        const RouteTerms& t = terms(p.old[static_cast<std::size_t>(i)]);
        dd -= t.distance;
        relief += pen.lambda[kTimeWindow] * k_.gamma * t.time_warp + pen.lambda[kCapacity] * k_.theta * t.capacity_ratio +
                  pen.lambda[kDuration] * k_.theta * t.duration_ratio + pen.lambda[kDepot] * k_.theta * t.closure;
        if (fleet_limited && t.depot >= 0 && per_depot_[static_cast<std::size_t>(t.depot)] > inst.fleet_per_depot())
            relief += pen.lambda[kDepot] * k_.theta;
    }
    for (int i = 0; i < p.n_new; ++i) {
        const RoutePlan& rp = p.routes[static_cast<std::size_t>(i)];
        double d = 0.0;
        int last = -1;
        int customers = 0;
        for (int k = 0; k < rp.n; ++k) {
            const Piece& pc = rp.pieces[static_cast<std::size_t>(k)];
            int first = pc.node, end = pc.node;
            if (pc.node >= 0) {
                if (inst.is_customer(pc.node)) ++customers;
            } else {
                const SeqAttr& a = segment(pc.route, pc.from, pc.to);
                d += a.dist;
                first = pc.reversed ? a.last : a.first;
                end = pc.reversed ? a.first : a.last;
                customers += std::max(0, std::min(pc.to, route_len(pc.route)) - std::max(pc.from, 1) + 1);
            }
            if (last >= 0) d += inst.dist(last, first);
            last = end;
        }
        if (customers > 0) dd += d;
    }
    if (dd - relief > threshold + 1e-7 && dd > 1e-7) return false;
    eval_plan(*this, p, m, pen);
    return true;
}


std::vector<Route> SearchState::resulting_routes(const Move& m) const {
    const MovePlan p = plan_of(*this, m);
    std::vector<Route> out;
    std::vector<int> nodes;
    for (int i = 0; i < p.n_new; ++i) {
        const RoutePlan& rp = p.routes[static_cast<std::size_t>(i)];
        nodes.clear();
        for (int k = 0; k < rp.n; ++k) {
            const Piece& pc = rp.pieces[static_cast<std::size_t>(k)];
            if (pc.node >= 0) {
                nodes.push_back(pc.node);
            } else if (pc.reversed) {
                for (int q = pc.to; q >= pc.from; --q) nodes.push_back(node_at(pc.route, q));
            } else {
                for (int q = pc.from; q <= pc.to; ++q) nodes.push_back(node_at(pc.route, q));
            }
        }
        Route r;
        r.depart_depot = nodes.front();
        const bool closed = !inst_->open_routes();
        r.arrive_depot = closed ? nodes.back() : nodes.front();
        const auto stop = nodes.size() - (closed ? 1U : 0U);
        r.customers.assign(nodes.begin() + 1, nodes.begin() + static_cast<std::ptrdiff_t>(stop));
        out.push_back(std::move(r));
    }
    return out;
}

void SearchState::apply(std::span<const Move> moves) {
    for (std::size_t i = 0; i < moves.size(); ++i)
        for (std::size_t j = i + 1; j < moves.size(); ++j)
            if (moves[i].conflicts_with(moves[j])) throw std::logic_error("conflicting moves in one application");

    std::vector<std::pair<int, Route>> replaced;
    std::vector<Route> appended;
    for (const Move& m : moves) {
        const MovePlan p = plan_of(*this, m);
        auto routes = resulting_routes(m);
        for (int i = 0; i < static_cast<int>(routes.size()); ++i) {
            if (i < p.n_old)
                replaced.emplace_back(p.old[static_cast<std::size_t>(i)], std::move(routes[static_cast<std::size_t>(i)]));
            else
                appended.push_back(std::move(routes[static_cast<std::size_t>(i)]));
        }
    }
    std::vector<char> changed(sol_.routes.size(), 0);
    for (auto& [r, route] : replaced) {
        sol_.routes[static_cast<std::size_t>(r)] = std::move(route);
        changed[static_cast<std::size_t>(r)] = 1;
    }
    for (auto& r : appended) {
        sol_.routes.push_back(std::move(r));
        changed.push_back(1);
    }
    seq_.resize(sol_.routes.size());
    tables_.resize(sol_.routes.size());
    terms_.resize(sol_.routes.size());

    // Compact away emptied routes, rebuilding tables only where needed.
    std::size_t w = 0;
    for (std::size_t r = 0; r < sol_.routes.size(); ++r) {
        if (sol_.routes[r].empty()) continue;
        if (w != r) {
            sol_.routes[w] = std::move(sol_.routes[r]);
            seq_[w] = std::move(seq_[r]);
            tables_[w] = std::move(tables_[r]);
            terms_[w] = terms_[r];
            changed[w] = changed[r];
        }
        ++w;
    }
    sol_.routes.resize(w);
    seq_.resize(w);
    tables_.resize(w);
    terms_.resize(w);
    for (std::size_t r = 0; r < w; ++r)
        if (changed[r]) rebuild_route(static_cast<int>(r));

    std::fill(route_of_.begin(), route_of_.end(), -1);
    std::fill(pos_of_.begin(), pos_of_.end(), -1);
    std::fill(per_depot_.begin(), per_depot_.end(), 0);
    for (int r = 0; r < num_routes(); ++r) {
        const auto& cs = route(r).customers;
        for (std::size_t p = 0; p < cs.size(); ++p) {
            route_of_[static_cast<std::size_t>(cs[p])] = r;
            pos_of_[static_cast<std::size_t>(cs[p])] = static_cast<int>(p) + 1;
        }
        ++per_depot_[static_cast<std::size_t>(terms(r).depot)];
    }
}

// ---------------------------------------------------------------------------
// Enumeration

namespace {

template <class Sink>
void enum_relocate(const SearchState& s, const NeighborLists& nbr, Sink& sink) {
    const Instance& inst = s.instance();
    const bool may_reverse = !inst.has_time_windows();
    const int nr = s.num_routes();
    std::vector<int> offset(static_cast<std::size_t>(nr) + 1, 0);
    for (int r = 0; r < nr; ++r) offset[static_cast<std::size_t>(r) + 1] = offset[static_cast<std::size_t>(r)] + s.route_len(r) + 1;
    std::vector<int> stamp(static_cast<std::size_t>(offset.back()), -1);
    std::vector<std::pair<int, int>> slots;

    for (int u = inst.first_customer(); u < inst.num_nodes(); ++u) {
        const int ra = s.route_of(u);
        if (ra < 0) continue;
        const int pa = s.position_of(u);
        slots.clear();
        auto add = [&](int r, int q) {
            auto& st = stamp[static_cast<std::size_t>(offset[static_cast<std::size_t>(r)] + q)];
            if (st == u) return;
            st = u;
            slots.emplace_back(r, q);
        };
        for (int v : nbr.of(u)) {
            if (!inst.is_customer(v)) continue;
            const int rv = s.route_of(v);
            if (rv < 0) continue;
            if (nbr.allowed(v, u)) add(rv, s.position_of(v));
            add(rv, s.position_of(v) - 1);
        }
        for (int r = 0; r < nr; ++r) {
            add(r, 0);
            add(r, s.route_len(r));
        }
        const int la = s.route_len(ra);
        for (auto [r, q] : slots) {
            for (int len = 1; len <= 2 && pa + len - 1 <= la; ++len) {
                if (r == ra && q >= pa - 1 && q <= pa + len - 1) continue;
                for (int rev = 0; rev <= (len == 2 && may_reverse ? 1 : 0); ++rev) {
                    Move m;
                    m.kind = OperatorKind::Relocate;
                    m.route_a = ra;
                    m.pos_a = pa;
                    m.len_a = len;
                    m.rev_a = rev != 0;
                    m.route_b = r;
                    m.pos_b = q;
                    sink(m);
                }
            }
        }
    }
}

template <class Sink>
void enum_swap(const SearchState& s, const NeighborLists& nbr, Sink& sink) {
    const Instance& inst = s.instance();
    const bool may_reverse = !inst.has_time_windows();
    for (int u = inst.first_customer(); u < inst.num_nodes(); ++u) {
        const int ru = s.route_of(u);
        if (ru < 0) continue;
        for (int v : nbr.of(u)) {
            if (!inst.is_customer(v) || v == u) continue;
            if (v < u && nbr.listed(v, u)) continue;  // produced from v's list
            const int rv = s.route_of(v);
            if (rv < 0) continue;
            int r1 = ru, p1 = s.position_of(u), r2 = rv, p2 = s.position_of(v);
            if (std::tie(r2, p2) < std::tie(r1, p1)) {
                std::swap(r1, r2);
                std::swap(p1, p2);
            }
            for (int l1 = 1; l1 <= 2 && p1 + l1 - 1 <= s.route_len(r1); ++l1) {
                if (r1 == r2 && p1 + l1 > p2) continue;
                for (int l2 = 1; l2 <= 2 && p2 + l2 - 1 <= s.route_len(r2); ++l2) {
                    for (int v1 = 0; v1 <= (l1 == 2 && may_reverse ? 1 : 0); ++v1) {
                        for (int v2 = 0; v2 <= (l2 == 2 && may_reverse ? 1 : 0); ++v2) {
                            Move m;
                            m.kind = OperatorKind::Swap;
                            m.route_a = r1;
                            m.pos_a = p1;
                            m.len_a = l1;
                            m.rev_a = v1 != 0;
                            m.route_b = r2;
                            m.pos_b = p2;
                            m.len_b = l2;
                            m.rev_b = v2 != 0;
                            sink(m);
                        }
                    }
                }
            }
        }
    }
}

std::uint64_t pack4(int a, int b, int c, int d) {
    return (static_cast<std::uint64_t>(a) << 48) | (static_cast<std::uint64_t>(b) << 32) |
           (static_cast<std::uint64_t>(c) << 16) | static_cast<std::uint64_t>(d);
}

template <class Sink>
void enum_two_opt_star(const SearchState& s, const NeighborLists& nbr, Sink& sink) {
    const Instance& inst = s.instance();
    const int nr = s.num_routes();
    std::vector<std::uint64_t> keys;
    auto add = [&](int ra, int i, int rb, int j) {
        if (ra == rb) return;
        if (ra > rb) {
            std::swap(ra, rb);
            std::swap(i, j);
        }
        keys.push_back(pack4(ra, i, rb, j));
    };
    for (int u = inst.first_customer(); u < inst.num_nodes(); ++u) {
        const int ru = s.route_of(u);
        if (ru < 0) continue;
        const int pu = s.position_of(u);
        for (int v : nbr.of(u)) {
            if (!inst.is_customer(v)) continue;
            const int rv = s.route_of(v);
            if (rv < 0 || rv == ru) continue;
            add(ru, pu, rv, s.position_of(v) - 1);
        }
        for (int r = 0; r < nr; ++r) {
            if (r == ru) continue;
            add(r, 0, ru, pu - 1);             // depot of r followed by u
            add(ru, pu, r, s.route_len(r));    // u followed by the end of r
        }
    }
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    for (auto key : keys) {
        const int ra = static_cast<int>(key >> 48), i = static_cast<int>((key >> 32) & 0xFFFF);
        const int rb = static_cast<int>((key >> 16) & 0xFFFF), j = static_cast<int>(key & 0xFFFF);
        // Exchanging whole routes or bare endings between identical depots changes nothing.
        if (i == 0 && j == 0 && s.route(ra).depart_depot == s.route(rb).depart_depot) continue;
        if (i == s.route_len(ra) && j == s.route_len(rb) &&
            (inst.open_routes() || s.route(ra).arrive_depot == s.route(rb).arrive_depot))
            continue;
        Move m;
        m.kind = OperatorKind::TwoOptStar;
        m.route_a = ra;
        m.pos_a = i;
        m.route_b = rb;
        m.pos_b = j;
        sink(m);
    }
}

template <class Sink>
void enum_two_opt(const SearchState& s, const NeighborLists& nbr, Sink& sink) {
    const Instance& inst = s.instance();
    std::vector<std::uint64_t> keys;
    for (int u = inst.first_customer(); u < inst.num_nodes(); ++u) {
        const int ru = s.route_of(u);
        if (ru < 0) continue;
        for (int v : nbr.of(u)) {
            if (!inst.is_customer(v) || s.route_of(v) != ru) continue;
            const int a = std::min(s.position_of(u), s.position_of(v));
            const int b = std::max(s.position_of(u), s.position_of(v));
            if (b <= a + 1) continue;
            keys.push_back(pack4(ru, a + 1, b, 0));
            keys.push_back(pack4(ru, a, b - 1, 0));
        }
    }
    // Reversing a whole open route only changes its first arc.
    if (inst.open_routes())
        for (int r = 0; r < s.num_routes(); ++r)
            if (s.route_len(r) >= 2) keys.push_back(pack4(r, 1, s.route_len(r), 0));
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    for (auto key : keys) {
        Move m;
        m.kind = OperatorKind::TwoOpt;
        m.route_a = static_cast<int>(key >> 48);
        m.pos_a = static_cast<int>((key >> 32) & 0xFFFF);
        m.pos_b = static_cast<int>((key >> 16) & 0xFFFF);
        sink(m);
    }
}

template <class Sink>
void enum_depot_insert(const SearchState& s, Sink& sink) {
    for (int r = 0; r < s.num_routes(); ++r) {
        for (int k = 0; k < s.route_len(r); ++k) {
            for (int d = 0; d < s.instance().num_depots(); ++d) {
                Move m;
                m.kind = OperatorKind::DepotInsert;
                m.route_a = r;
                m.pos_a = k;
                m.depot = d;
                sink(m);
            }
        }
    }
}

template <class Sink>
void enum_depot_replace(const SearchState& s, Sink& sink) {
    const bool open = s.instance().open_routes();
    for (int r = 0; r < s.num_routes(); ++r) {
        const Route& rt = s.route(r);
        for (int d = 0; d < s.instance().num_depots(); ++d) {
            for (auto mode : {DepotMode::Depart, DepotMode::Arrive, DepotMode::Both}) {
                if (open && mode != DepotMode::Depart) continue;
                if (mode == DepotMode::Depart && d == rt.depart_depot) continue;
                if (mode == DepotMode::Arrive && d == rt.arrive_depot) continue;
                if (mode == DepotMode::Both && d == rt.depart_depot && d == rt.arrive_depot) continue;
                Move m;
                m.kind = OperatorKind::DepotReplace;
                m.route_a = r;
                m.depot = d;
                m.mode = mode;
                sink(m);
            }
        }
    }
}

}  // namespace

namespace {

template <class Sink>
void for_each_candidate(const SearchState& s, OperatorKind op, const NeighborLists& nbr, Sink& sink) {
    switch (op) {
        case OperatorKind::Relocate: enum_relocate(s, nbr, sink); break;
        case OperatorKind::Swap: enum_swap(s, nbr, sink); break;
        case OperatorKind::TwoOptStar: enum_two_opt_star(s, nbr, sink); break;
        case OperatorKind::TwoOpt:
            if (!s.instance().has_time_windows()) enum_two_opt(s, nbr, sink);
            break;
        case OperatorKind::DepotInsert: enum_depot_insert(s, sink); break;
        case OperatorKind::DepotReplace: enum_depot_replace(s, sink); break;
    }
}

}  // namespace

void enumerate(const SearchState& s, OperatorKind op, const NeighborLists& nbr, std::vector<Move>& out) {
    out.clear();
    auto sink = [&out](const Move& m) { out.push_back(m); };
    for_each_candidate(s, op, nbr, sink);
}

std::vector<Move> enumerate(const SearchState& s, OperatorKind op, const NeighborLists& nbr) {
    std::vector<Move> out;
    enumerate(s, op, nbr, out);
    return out;
}

// ---------------------------------------------------------------------------

BatchResult evaluate_batch(const SearchState& s, std::span<Move> cands, const PenaltyState& pen,
                           const BatchOptions& opt) {
    const std::size_t n = cands.size();
    auto run_range = [&s, &pen, &opt, cands](std::size_t lo, std::size_t hi) {
        double threshold = -kImprovementEps;
        for (std::size_t i = lo; i < hi; ++i) {
            Move& m = cands[i];
            if (!opt.prune) {
                s.evaluate_move(m, pen);
            } else if (!s.evaluate_move_bounded(m, pen, threshold)) {
                m.delta = EvalBreakdown{};
                m.delta.distance = kInfinity;
                m.delta.penalized = kInfinity;
                continue;
            }
            threshold = std::min(threshold, m.delta.penalized);
        }
    };
    const auto w = static_cast<std::size_t>(std::max(1, opt.workers));
    if (w == 1 || n < 256) {
        run_range(0, n);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (n + w - 1) / w;
        for (std::size_t t = 0; t < w; ++t) {
            const std::size_t lo = t * chunk, hi = std::min(n, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back(run_range, lo, hi);
        }
        for (auto& th : pool) th.join();
    }

    BatchResult res;
    const Move* best = nullptr;
    for (const Move& m : cands) {
        if (m.delta.penalized < -kImprovementEps) {
            if (!best || m.delta.penalized < best->delta.penalized ||
                (m.delta.penalized == best->delta.penalized && canonical_less(m, *best)))
                best = &m;
        }
    }
    if (best) res.leader = *best;
    if (opt.collect_followers) {
        for (const Move& m : cands) {
            if (&m == best) continue;
            if (m.delta.distance < -kImprovementEps &&
                std::all_of(m.delta.violation.begin(), m.delta.violation.end(),
                            [](double v) { return std::abs(v) <= kImprovementEps; }))
                res.followers.push_back(m);
        }
    }
    return res;
}

namespace {

// Exact distance delta of relocations and inter-route swaps from the arcs
// they break and create; NaN for every other move.
double quick_distance_delta(const SearchState& s, const Move& m) {
    const Instance& inst = s.instance();
    const bool closed = !inst.open_routes();
    auto d = [&inst](int a, int b) { return inst.dist(a, b); };
    if (m.kind == OperatorKind::Relocate) {
        const int ra = m.route_a, rb = m.route_b, pa = m.pos_a;
        const int la = s.route_len(ra);
        const int end = pa + m.len_a - 1;
        const int u1 = s.node_at(ra, pa), u2 = s.node_at(ra, end), p = s.node_at(ra, pa - 1);
        double delta;
        if (ra != rb && m.len_a == la) {
            delta = -s.terms(ra).distance;
        } else {
            delta = -d(p, u1);
            if (end < la || closed) {
                const int n = s.node_at(ra, end + 1);
                delta += d(p, n) - d(u2, n);
            }
        }
        const int f = m.rev_a ? u2 : u1, l = m.rev_a ? u1 : u2;
        const int x = s.node_at(rb, m.pos_b);
        delta += d(x, f);
        if (m.pos_b < s.route_len(rb) || closed) {
            const int y = s.node_at(rb, m.pos_b + 1);
            delta += d(l, y) - d(x, y);
        }
        return delta;
    }
    if (m.kind == OperatorKind::Swap && m.route_a != m.route_b) {
        double delta = 0.0;
        auto side = [&](int r, int pos, int len, bool rev_in, int other_first, int other_last) {
            const int a1 = s.node_at(r, pos), a2 = s.node_at(r, pos + len - 1), pr = s.node_at(r, pos - 1);
            (void)rev_in;
            delta += d(pr, other_first) - d(pr, a1);
            if (pos + len - 1 < s.route_len(r) || closed) {
                const int nx = s.node_at(r, pos + len);
                delta += d(other_last, nx) - d(a2, nx);
            }
        };
        const int a1 = s.node_at(m.route_a, m.pos_a), a2 = s.node_at(m.route_a, m.pos_a + m.len_a - 1);
        const int b1 = s.node_at(m.route_b, m.pos_b), b2 = s.node_at(m.route_b, m.pos_b + m.len_b - 1);
        side(m.route_a, m.pos_a, m.len_a, m.rev_b, m.rev_b ? b2 : b1, m.rev_b ? b1 : b2);
        side(m.route_b, m.pos_b, m.len_b, m.rev_a, m.rev_a ? a2 : a1, m.rev_a ? a1 : a2);
        return delta;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

bool same_move(const Move& a, const Move& b) { return key_of(a) == key_of(b); }

}  // namespace

BatchResult search_operator(const SearchState& s, OperatorKind op, const NeighborLists& nbr, const PenaltyState& pen,
                            bool collect_followers) {
    const Instance& inst = s.instance();
    const ScalingConstants& k = s.constants();
    std::vector<double> relief(static_cast<std::size_t>(s.num_routes()));
    for (int r = 0; r < s.num_routes(); ++r) {
        const RouteTerms& t = s.terms(r);
        double v = pen.lambda[kTimeWindow] * k.gamma * t.time_warp + pen.lambda[kCapacity] * k.theta * t.capacity_ratio +
                   pen.lambda[kDuration] * k.theta * t.duration_ratio + pen.lambda[kDepot] * k.theta * t.closure;
        if (!inst.unlimited_fleet() && s.routes_per_depot()[static_cast<std::size_t>(t.depot)] > inst.fleet_per_depot())
            v += pen.lambda[kDepot] * k.theta;
        relief[static_cast<std::size_t>(r)] = v;
    }

    BatchResult res;
    double threshold = -kImprovementEps;
    auto sink = [&](Move& m) {
        const double dd = quick_distance_delta(s, m);
        if (dd == dd) {
            double lb = dd - relief[static_cast<std::size_t>(m.route_a)];
            if (m.route_b >= 0 && m.route_b != m.route_a) lb -= relief[static_cast<std::size_t>(m.route_b)];
            if (lb > threshold + 1e-7 && dd > 1e-7) return;
            s.evaluate_move(m, pen);
        } else if (!s.evaluate_move_bounded(m, pen, threshold)) {
            return;
        }
        if (m.delta.penalized < -kImprovementEps) {
            if (!res.leader || m.delta.penalized < res.leader->delta.penalized ||
                (m.delta.penalized == res.leader->delta.penalized && canonical_less(m, *res.leader)))
                res.leader = m;
            threshold = std::min(threshold, m.delta.penalized);
        }
        if (collect_followers && m.delta.distance < -kImprovementEps &&
            std::all_of(m.delta.violation.begin(), m.delta.violation.end(),
                        [](double v) { return std::abs(v) <= kImprovementEps; }))
            res.followers.push_back(m);
    };
    for_each_candidate(s, op, nbr, sink);
    if (res.leader) {
        std::erase_if(res.followers, [&](const Move& f) { return same_move(f, *res.leader); });
    }
    return res;
}

std::vector<Move> select_moves(const Move& leader, std::vector<Move> followers) {
    std::sort(followers.begin(), followers.end(), [](const Move& a, const Move& b) {
        if (a.delta.penalized != b.delta.penalized) return a.delta.penalized < b.delta.penalized;
        return canonical_less(a, b);
    });
    std::vector<Move> chosen{leader};
    for (auto& f : followers) {
        const bool clash = std::any_of(chosen.begin(), chosen.end(), [&](const Move& c) { return c.conflicts_with(f); });
        if (!clash) chosen.push_back(std::move(f));
    }
    return chosen;
}

void apply_moves(SearchState& state, std::span<const Move> moves) { state.apply(moves); }

}  // namespace mdvrp
