#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "mdvrp/instance.hpp"
#include "mdvrp/solution.hpp"

namespace mdvrp {

class ParseError : public InstanceError {
public:
    ParseError(const std::string& source, int line, const std::string& what);
    int line() const { return line_; }

private:
    int line_;
};

struct ParseOptions {
    std::optional<int> vehicles_per_depot;  // replaces the header's vehicle count
    bool relax_fleet = false;               // ignore vehicle limits entirely
};

// Header type code expected for a variant (2 for MDVRP/MDOVRP, 6 for MDVRPTW).
int expected_type_code(Variant v);

// Cordeau text format:
//   type m n t
//   t lines "D Q"              (0 means unlimited)
//   n customer lines "id x y d q f a <a ints> [e l]"
//   t depot lines in the same layout
// Window fields are read only for MDVRPTW.
Instance parse_instance_text(const std::string& text, const std::string& name, Variant variant,
                             const ParseOptions& opt = {});
Instance parse_instance(const std::filesystem::path& path, Variant variant, const ParseOptions& opt = {});

// Line 1: total cost with 2 decimals. Then one line per route:
//   "depart arrive cost load: c1 c2 ..." (arrive omitted for open routes)
// Node references are the labels from the instance file.
void write_solution(std::ostream& out, const Solution& sol, const Instance& inst);
void write_solution(const std::filesystem::path& path, const Solution& sol, const Instance& inst);
Solution read_solution(std::istream& in, const Instance& inst);
Solution read_solution(const std::filesystem::path& path, const Instance& inst);

struct BksEntry {
    double cost = 0.0;
    bool optimal = false;
};
using BksTable = std::map<std::string, BksEntry>;

// CSV with header "name,cost,optimal_flag".
BksTable load_bks(const std::filesystem::path& path);

// CSV with header "name,vehicles_per_depot".
std::map<std::string, int> load_fleet_table(const std::filesystem::path& path);

}  // namespace mdvrp
