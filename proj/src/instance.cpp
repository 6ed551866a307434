#include "mdvrp/instance.hpp"

#include <cmath>
#include <utility>

namespace mdvrp {

const char* to_string(Variant v) {
    switch (v) {
        case Variant::MDVRP: return "mdvrp";
        case Variant::MDVRPTW: return "mdvrptw";
        case Variant::MDOVRP: return "mdovrp";
    }
    return "?";
}

Variant parse_variant(const std::string& name) {
    if (name == "mdvrp") return Variant::MDVRP;
    if (name == "mdvrptw") return Variant::MDVRPTW;
    if (name == "mdovrp") return Variant::MDOVRP;
    throw InstanceError("unknown variant '" + name + "' (expected mdvrp, mdvrptw or mdovrp)");
}

namespace {

std::vector<Node> concat_nodes(std::vector<Node> depots, std::vector<Node> customers) {
    for (auto& d : depots) d.kind = NodeKind::Depot;
    for (auto& c : customers) c.kind = NodeKind::Customer;
    depots.insert(depots.end(), customers.begin(), customers.end());
    return depots;
}

Matrix euclidean(const std::vector<Node>& nodes) {
    Matrix m(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        for (std::size_t j = i + 1; j < nodes.size(); ++j) {
            const double d = std::hypot(nodes[i].x - nodes[j].x, nodes[i].y - nodes[j].y);
            m(i, j) = d;
            m(j, i) = d;
        }
    }
    return m;
}

}  // namespace

Instance::Instance(Variant variant, std::string name, std::vector<Node> depots,
                   std::vector<Node> customers, FleetSpec fleet)
    : variant_(variant),
      name_(std::move(name)),
      num_depots_(static_cast<int>(depots.size())),
      nodes_(concat_nodes(std::move(depots), std::move(customers))),
      fleet_(fleet) {
    normalize_nodes();
    dist_ = euclidean(nodes_);
    time_ = dist_;
    validate();
}

Instance::Instance(Variant variant, std::string name, std::vector<Node> depots,
                   std::vector<Node> customers, FleetSpec fleet, Matrix dist, Matrix time)
    : variant_(variant),
      name_(std::move(name)),
      num_depots_(static_cast<int>(depots.size())),
      nodes_(concat_nodes(std::move(depots), std::move(customers))),
      fleet_(fleet),
      dist_(std::move(dist)),
      time_(std::move(time)) {
    normalize_nodes();
    validate();
}

void Instance::normalize_nodes() {
    if (variant_ == Variant::MDOVRP) {
        fleet_.vehicles_per_depot = kUnlimitedFleet;
        fleet_.max_duration = kInfinity;
    }
    for (auto& n : nodes_) {
        if (n.kind == NodeKind::Depot) {
            n.demand = 0.0;
            n.service = 0.0;
        }
        if (!has_time_windows()) {
            n.ready = 0.0;
            n.due = kInfinity;
        }
    }
}

void Instance::validate() const {
    if (num_depots_ < 1) throw InstanceError("instance needs at least one depot");
    if (num_customers() < 1) throw InstanceError("instance needs at least one customer");
    const auto n = nodes_.size();
    if (dist_.size() != n || time_.size() != n) throw InstanceError("matrix size does not match node count");
    for (std::size_t i = 0; i < n; ++i) {
        if (dist_(i, i) != 0.0 || time_(i, i) != 0.0) throw InstanceError("matrix diagonal must be zero");
        for (std::size_t j = 0; j < i; ++j) {
            if (dist_(i, j) != dist_(j, i) || time_(i, j) != time_(j, i))
                throw InstanceError("matrices must be symmetric");
        }
        const Node& nd = nodes_[i];
        if (nd.demand < 0.0) throw InstanceError("negative demand at node " + std::to_string(nd.label));
        if (nd.ready > nd.due) throw InstanceError("empty time window at node " + std::to_string(nd.label));
    }
    if (!(fleet_.capacity > 0.0)) throw InstanceError("capacity must be positive");
    if (!(fleet_.max_duration > 0.0)) throw InstanceError("max duration must be positive");
    if (fleet_.vehicles_per_depot < 1) throw InstanceError("fleet per depot must be at least 1");
}

int Instance::id_of_label(int label) const {
    for (int i = 0; i < num_nodes(); ++i) {
        if (nodes_[static_cast<std::size_t>(i)].label == label) return i;
    }
    return -1;
}

}  // namespace mdvrp
