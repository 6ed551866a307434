#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mdvrp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();
inline constexpr int kUnlimitedFleet = std::numeric_limits<int>::max();

enum class Variant { MDVRP, MDVRPTW, MDOVRP };

const char* to_string(Variant v);
Variant parse_variant(const std::string& name);

enum class NodeKind { Depot, Customer };

struct Node {
    int label = 0;  // identifier used by the source file
    NodeKind kind = NodeKind::Customer;
    double x = 0.0;
    double y = 0.0;
    double demand = 0.0;
    double service = 0.0;
    double ready = 0.0;       // e_i
    double due = kInfinity;   // l_i
};

class InstanceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Dense row-major square matrix.
class Matrix {
public:
    Matrix() = default;
    explicit Matrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}

    double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
    std::size_t size() const { return n_; }

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

struct FleetSpec {
    int vehicles_per_depot = kUnlimitedFleet;
    double capacity = kInfinity;
    double max_duration = kInfinity;
};

// Immutable problem data. Node ids are dense: depots occupy [0, num_depots),
// customers occupy [num_depots, num_nodes).
class Instance {
public:
    // Builds an instance with Euclidean distances; travel time equals distance.
    Instance(Variant variant, std::string name, std::vector<Node> depots,
             std::vector<Node> customers, FleetSpec fleet);

    // Builds an instance from explicit matrices (rows follow depots then customers).
    Instance(Variant variant, std::string name, std::vector<Node> depots,
             std::vector<Node> customers, FleetSpec fleet, Matrix dist, Matrix time);

    Variant variant() const { return variant_; }
    const std::string& name() const { return name_; }

    int num_depots() const { return num_depots_; }
    int num_customers() const { return static_cast<int>(nodes_.size()) - num_depots_; }
    int num_nodes() const { return static_cast<int>(nodes_.size()); }
    int first_customer() const { return num_depots_; }

    bool is_depot(int id) const { return id >= 0 && id < num_depots_; }
    bool is_customer(int id) const { return id >= num_depots_ && id < num_nodes(); }
    bool valid_id(int id) const { return id >= 0 && id < num_nodes(); }

    const Node& node(int id) const { return nodes_[static_cast<std::size_t>(id)]; }
    std::span<const Node> nodes() const { return nodes_; }

    double dist(int i, int j) const { return dist_(static_cast<std::size_t>(i), static_cast<std::size_t>(j)); }
    double time(int i, int j) const { return time_(static_cast<std::size_t>(i), static_cast<std::size_t>(j)); }

    int fleet_per_depot() const { return fleet_.vehicles_per_depot; }
    double capacity() const { return fleet_.capacity; }
    double max_duration() const { return fleet_.max_duration; }
    bool unlimited_fleet() const { return fleet_.vehicles_per_depot == kUnlimitedFleet; }
    bool unlimited_duration() const { return fleet_.max_duration == kInfinity; }

    bool open_routes() const { return variant_ == Variant::MDOVRP; }
    bool has_time_windows() const { return variant_ == Variant::MDVRPTW; }

    // Looks up the dense id of a node by its file label; -1 when absent.
    int id_of_label(int label) const;

private:
    void validate() const;
    void normalize_nodes();

    Variant variant_;
    std::string name_;
    int num_depots_ = 0;
    std::vector<Node> nodes_;
    FleetSpec fleet_;
    Matrix dist_;
    Matrix time_;
};

}  // namespace mdvrp
