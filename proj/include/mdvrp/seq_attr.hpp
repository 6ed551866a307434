#pragma once

#include "mdvrp/instance.hpp"

namespace mdvrp {

// Attributes of a node subsequence, closed under concatenation.
// T counts travel, service and waiting; E/L bound the service start at the
// first node for a schedule of minimum time warp and duration.
struct SeqAttr {
    double dist = 0.0;
    double load = 0.0;
    double duration = 0.0;
    double earliest = 0.0;
    double latest = kInfinity;
    double time_warp = 0.0;
    int first = -1;
    int last = -1;

    bool empty() const { return first < 0; }

    // Identity element of concat.
    static SeqAttr identity() { return {}; }
};

SeqAttr single_attr(int node_id, const Instance& inst);

SeqAttr concat(const SeqAttr& a, const SeqAttr& b, const Instance& inst);

// Left fold of single_attr over a node sequence.
template <typename Range>
SeqAttr fold_attr(const Range& ids, const Instance& inst) {
    SeqAttr acc = SeqAttr::identity();
    for (int id : ids) acc = concat(acc, single_attr(id, inst), inst);
    return acc;
}

// Attributes of the reversed sequence. Exact only for window-free instances
// with symmetric matrices, which is the only case reversal moves are used in.
inline SeqAttr reversed_attr(SeqAttr a) {
    std::swap(a.first, a.last);
    return a;
}

}  // namespace mdvrp
