#include "mdvrp/seq_attr.hpp"

#include <algorithm>

namespace mdvrp {

SeqAttr single_attr(int node_id, const Instance& inst) {
    const Node& n = inst.node(node_id);
    SeqAttr a;
    a.dist = 0.0;
    a.load = n.demand;
    a.duration = n.service;
    a.earliest = n.ready;
    a.latest = n.due;
    a.time_warp = 0.0;
    a.first = node_id;
    a.last = node_id;
    return a;
}

SeqAttr concat(const SeqAttr& a, const SeqAttr& b, const Instance& inst) {
    if (a.empty()) return b;
    if (b.empty()) return a;
    const double travel = inst.time(a.last, b.first);
    const double delta = a.duration - a.time_warp + travel;
    const double wait = std::max(b.earliest - delta - a.latest, 0.0);
    const double warp = std::max(a.earliest + delta - b.latest, 0.0);

    SeqAttr r;
    r.dist = a.dist + inst.dist(a.last, b.first) + b.dist;
    r.load = a.load + b.load;
    r.duration = a.duration + b.duration + travel + wait;
    r.time_warp = a.time_warp + b.time_warp + warp;
    r.earliest = std::max(b.earliest - delta, a.earliest) - wait;
    r.latest = std::min(b.latest - delta, a.latest) + warp;
    r.first = a.first;
    r.last = b.last;
    return r;
}

}  // namespace mdvrp
