#include "mdvrp/instance_io.hpp"

#include <fmt/format.h>

#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <vector>

namespace mdvrp {

ParseError::ParseError(const std::string& source, int line, const std::string& what)
    : InstanceError(fmt::format("{}:{}: {}", source, line, what)), line_(line) {}

int expected_type_code(Variant v) { return v == Variant::MDVRPTW ? 6 : 2; }

namespace {

struct LineReader {
    std::istringstream in;
    std::string source;
    int line = 0;

    // Next non-blank line split into tokens; empty at end of input.
    std::vector<std::string> next() {
        std::string s;
        while (std::getline(in, s)) {
            ++line;
            std::istringstream ls(s);
            std::vector<std::string> tok;
            for (std::string t; ls >> t;) tok.push_back(t);
            if (!tok.empty()) return tok;
        }
        ++line;
        return {};
    }

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(source, line, what); }

    double num(const std::string& t) const {
        try {
            std::size_t used = 0;
            const double v = std::stod(t, &used);
            if (used != t.size()) throw std::invalid_argument(t);
            return v;
        } catch (const std::exception&) {
            fail("expected a number, found '" + t + "'");
        }
    }
    int integer(const std::string& t) const {
        const double v = num(t);
        if (v != static_cast<double>(static_cast<int>(v))) fail("expected an integer, found '" + t + "'");
        return static_cast<int>(v);
    }
};

Node read_node(LineReader& r, bool windows, const char* what) {
    const auto tok = r.next();
    if (tok.empty()) r.fail(fmt::format("unexpected end of file while reading {} line", what));
    if (tok.size() < 7) r.fail(fmt::format("{} line needs at least 7 fields, found {}", what, tok.size()));
    Node n;
    n.label = r.integer(tok[0]);
    n.x = r.num(tok[1]);
    n.y = r.num(tok[2]);
    n.service = r.num(tok[3]);
    n.demand = r.num(tok[4]);
    const int combos = r.integer(tok[6]);
    if (combos < 0) r.fail("negative visit-combination count");
    const std::size_t need = 7 + static_cast<std::size_t>(combos) + (windows ? 2U : 0U);
    if (tok.size() < need) r.fail(fmt::format("{} line needs {} fields, found {}", what, need, tok.size()));
    if (windows) {
        n.ready = r.num(tok[need - 2]);
        n.due = r.num(tok[need - 1]);
    }
    return n;
}

}  // namespace

Instance parse_instance_text(const std::string& text, const std::string& name, Variant variant,
                             const ParseOptions& opt) {
    LineReader r{std::istringstream(text), name, 0};
    const auto head = r.next();
    if (head.size() != 4) r.fail("header must be 'type m n t'");
    const int type = r.integer(head[0]);
    const int m = r.integer(head[1]);
    const int n = r.integer(head[2]);
    const int t = r.integer(head[3]);
    if (type != expected_type_code(variant))
        r.fail(fmt::format("type code {} does not match variant {} (expected {} for mdvrp/mdovrp, {} for mdvrptw)", type,
                           to_string(variant), expected_type_code(Variant::MDVRP),
                           expected_type_code(Variant::MDVRPTW)));
    if (n < 1 || t < 1) r.fail("customer and depot counts must be positive");
    if (m < 1) r.fail("vehicle count must be positive");

    FleetSpec fleet;
    fleet.vehicles_per_depot = m;
    for (int d = 0; d < t; ++d) {
        const auto tok = r.next();
        if (tok.size() != 2) r.fail("depot limit line must be 'D Q'");
        const double dur = r.num(tok[0]);
        const double cap = r.num(tok[1]);
        const double dur_v = dur == 0.0 ? kInfinity : dur;
        const double cap_v = cap == 0.0 ? kInfinity : cap;
        if (d > 0 && (dur_v != fleet.max_duration || cap_v != fleet.capacity))
            r.fail("per-depot limits differ; only a homogeneous fleet is supported");
        fleet.max_duration = dur_v;
        fleet.capacity = cap_v;
    }
    if (opt.vehicles_per_depot) fleet.vehicles_per_depot = *opt.vehicles_per_depot;
    if (opt.relax_fleet) fleet.vehicles_per_depot = kUnlimitedFleet;

    const bool windows = variant == Variant::MDVRPTW;
    std::vector<Node> customers, depots;
    std::set<int> labels;
    for (int i = 0; i < n; ++i) {
        customers.push_back(read_node(r, windows, "customer"));
        if (!labels.insert(customers.back().label).second) r.fail("duplicate node id");
    }
    for (int i = 0; i < t; ++i) {
        depots.push_back(read_node(r, windows, "depot"));
        if (!labels.insert(depots.back().label).second) r.fail("duplicate node id");
    }
    if (!r.next().empty()) r.fail("trailing data after the last depot line");
    try {
        return Instance(variant, name, std::move(depots), std::move(customers), fleet);
    } catch (const ParseError&) {
        throw;
    } catch (const InstanceError& e) {
        throw ParseError(name, r.line, e.what());
    }
}

Instance parse_instance(const std::filesystem::path& path, Variant variant, const ParseOptions& opt) {
    std::ifstream in(path);
    if (!in) throw ParseError(path.string(), 0, "cannot open file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_instance_text(ss.str(), path.filename().string(), variant, opt);
}

void write_solution(std::ostream& out, const Solution& sol, const Instance& inst) {
    out << fmt::format("{:.2f}\n", objective(sol, inst));
    for (const auto& r : sol.routes) {
        if (r.empty()) continue;
        double load = 0.0;
        for (int c : r.customers) load += inst.node(c).demand;
        std::string line = fmt::format("{}", inst.node(r.depart_depot).label);
        if (!inst.open_routes()) line += fmt::format(" {}", inst.node(r.arrive_depot).label);
        line += fmt::format(" {:.2f} {:g}:", route_distance(r, inst), load);
        for (int c : r.customers) line += fmt::format(" {}", inst.node(c).label);
        out << line << '\n';
    }
    if (!out) throw std::runtime_error("failed to write solution");
}

void write_solution(const std::filesystem::path& path, const Solution& sol, const Instance& inst) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_solution(out, sol, inst);
}

Solution read_solution(std::istream& in, const Instance& inst) {
    Solution sol;
    std::string line;
    int ln = 0;
    bool header = false;
    auto lookup = [&](const std::string& tok, bool depot) {
        int label = 0;
        try {
            label = std::stoi(tok);
        } catch (const std::exception&) {
            throw ParseError("solution", ln, "bad node reference '" + tok + "'");
        }
        const int id = inst.id_of_label(label);
        if (id < 0 || inst.is_depot(id) != depot)
            throw ParseError("solution", ln, fmt::format("{} {} not in instance", depot ? "depot" : "customer", label));
        return id;
    };
    while (std::getline(in, line)) {
        ++ln;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        if (!header) {
            header = true;
            continue;
        }
        const auto colon = line.find(':');
        if (colon == std::string::npos) throw ParseError("solution", ln, "route line lacks ':'");
        std::istringstream lhs(line.substr(0, colon)), rhs(line.substr(colon + 1));
        std::vector<std::string> head;
        for (std::string t; lhs >> t;) head.push_back(t);
        const std::size_t expect = inst.open_routes() ? 3 : 4;
        if (head.size() != expect) throw ParseError("solution", ln, fmt::format("expected {} fields before ':'", expect));
        Route r;
        r.depart_depot = lookup(head[0], true);
        r.arrive_depot = inst.open_routes() ? r.depart_depot : lookup(head[1], true);
        for (std::string t; rhs >> t;) r.customers.push_back(lookup(t, false));
        sol.routes.push_back(std::move(r));
    }
    if (!header) throw ParseError("solution", ln, "empty solution file");
    return sol;
}

Solution read_solution(const std::filesystem::path& path, const Instance& inst) {
    std::ifstream in(path);
    if (!in) throw ParseError(path.string(), 0, "cannot open file");
    return read_solution(in, inst);
}

namespace {

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path, std::size_t columns) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::vector<std::vector<std::string>> rows;
    std::string line;
    int ln = 0;
    while (std::getline(in, line)) {
        ++ln;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
        if (cells.size() != columns) throw ParseError(path.string(), ln, fmt::format("expected {} columns", columns));
        if (ln == 1) continue;  // header
        rows.push_back(std::move(cells));
    }
    return rows;
}

}  // namespace

BksTable load_bks(const std::filesystem::path& path) {
    BksTable t;
    for (auto& row : read_csv(path, 3)) {
        const double cost = std::stod(row[1]);
        if (!(cost > 0.0)) throw std::runtime_error("BKS cost must be positive for " + row[0]);
        t[row[0]] = BksEntry{cost, row[2] == "1"};
    }
    return t;
}

std::map<std::string, int> load_fleet_table(const std::filesystem::path& path) {
    std::map<std::string, int> t;
    for (auto& row : read_csv(path, 2)) t[row[0]] = std::stoi(row[1]);
    return t;
}

}  // namespace mdvrp
