#pragma once

// Radial distribution network: buses, tree branches, open tie switches, and the
// Thevenin short-circuit power derived from cumulative root-path impedance.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <fstream>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "capres/detail/text.hpp"
#include "capres/error.hpp"

namespace capres {

using BusId = std::size_t;

struct Bus {
    BusId id = 0;
    double p_load_kw = 0.0;
    double q_load_kvar = 0.0;
};

struct Branch {
    BusId from_bus = 0;
    BusId to_bus = 0;
    double r_ohm = 0.0;
    double x_ohm = 0.0;
    /// Line of the source file this branch came from; 0 for programmatic input.
    std::size_t source_row = 0;
};

/// Immutable radial network rooted at bus 0. Construct with Network::build or load_network.
class Network {
public:
    static constexpr BusId root = 0;

    /// Validates and indexes a network. `branches` are the closed (flow-carrying)
    /// tree branches; `tie_switches` are open arcs kept only for reference.
    /// `scc_override_va`, when non-empty, holds one optional measured S_cc per bus.
    static Network build(std::vector<Bus> buses, std::vector<Branch> branches, double v_nom_kv,
                         std::vector<Branch> tie_switches = {},
                         std::vector<std::optional<double>> scc_override_va = {});

    std::size_t bus_count() const { return buses_.size(); }
    std::span<const Bus> buses() const { return buses_; }
    std::span<const Branch> branches() const { return branches_; }
    std::span<const Branch> tie_switches() const { return ties_; }
    double v_nom_kv() const { return v_nom_kv_; }

    const Bus& bus(BusId id) const { return buses_.at(check(id)); }

    /// Parent bus, or nullopt for the root.
    std::optional<BusId> parent(BusId id) const {
        check(id);
        if (id == root)
            return std::nullopt;
        return branches_[incoming_[id]].from_bus;
    }

    /// Children in increasing bus id.
    std::span<const BusId> children(BusId id) const { return children_[check(id)]; }

    /// Index into branches() of the branch entering `id`. The root has none.
    std::size_t incoming_branch(BusId id) const {
        if (check(id) == root)
            throw InvalidArgument("the root bus has no incoming branch");
        return incoming_[id];
    }

    /// Breadth-first order from the root; every parent precedes its children.
    std::span<const BusId> topological_order() const { return order_; }

    std::complex<double> cumulative_impedance(BusId id) const { return path_z_[check(id)]; }

    std::optional<double> scc_override(BusId id) const {
        return scc_override_.empty() ? std::nullopt : scc_override_[check(id)];
    }

    bool operator==(const Network&) const = default;

private:
    BusId check(BusId id) const {
        if (id >= buses_.size())
            throw InvalidArgument("unknown bus id " + std::to_string(id));
        return id;
    }

    std::vector<Bus> buses_;
    std::vector<Branch> branches_;
    std::vector<Branch> ties_;
    double v_nom_kv_ = 0.0;
    std::vector<std::optional<double>> scc_override_;

    std::vector<std::size_t> incoming_;
    std::vector<std::vector<BusId>> children_;
    std::vector<BusId> order_;
    std::vector<std::complex<double>> path_z_;
};

inline Network Network::build(std::vector<Bus> buses, std::vector<Branch> branches, double v_nom_kv,
                              std::vector<Branch> tie_switches,
                              std::vector<std::optional<double>> scc_override_va) {
    const std::size_t n = buses.size();
    if (n == 0)
        throw StructureError(0, "network has no buses");
    if (!(v_nom_kv > 0.0) || !std::isfinite(v_nom_kv))
        throw InvalidArgument("nominal voltage must be positive");
    for (std::size_t i = 0; i < n; ++i) {
        if (buses[i].id != i)
            throw StructureError(0, "bus ids must be dense 0..N-1, found " + std::to_string(buses[i].id) +
                                        " at position " + std::to_string(i));
        if (!(buses[i].p_load_kw >= 0.0) || !(buses[i].q_load_kvar >= 0.0))
            throw InvalidArgument("negative load at bus " + std::to_string(i));
    }
    if (!scc_override_va.empty() && scc_override_va.size() != n)
        throw InvalidArgument("scc override must have one entry per bus");
    for (const auto& s : scc_override_va)
        if (s && !(*s > 0.0 && std::isfinite(*s)))
            throw InvalidArgument("scc override must be positive and finite");

    constexpr std::size_t none = static_cast<std::size_t>(-1);
    std::vector<std::size_t> incoming(n, none);
    for (std::size_t b = 0; b < branches.size(); ++b) {
        const auto& br = branches[b];
        const auto row = br.source_row;
        if (br.from_bus >= n || br.to_bus >= n)
            throw StructureError(row, "branch references unknown bus");
        if (br.from_bus == br.to_bus)
            throw StructureError(row, "self-loop at bus " + std::to_string(br.to_bus));
        if (!(br.r_ohm > 0.0) || !(br.x_ohm >= 0.0))
            throw InvalidArgument((row ? "row " + std::to_string(row) + ": " : std::string{}) +
                                  "branch into bus " + std::to_string(br.to_bus) + " needs r > 0 and x >= 0");
        if (br.to_bus == root)
            throw StructureError(row, "branch enters the root bus 0");
        if (incoming[br.to_bus] != none)
            throw StructureError(row, "duplicate branch into bus " + std::to_string(br.to_bus));
        incoming[br.to_bus] = b;
    }
    for (BusId i = 1; i < n; ++i)
        if (incoming[i] == none)
            throw StructureError(0, "bus " + std::to_string(i) + " is disconnected (no incoming branch)");

    Network net;
    net.children_.resize(n);
    for (BusId i = 1; i < n; ++i)
        net.children_[branches[incoming[i]].from_bus].push_back(i);
    for (auto& c : net.children_)
        std::sort(c.begin(), c.end());

    // One parent per bus, so anything unreachable from the root sits on a cycle.
    net.order_.reserve(n);
    net.order_.push_back(root);
    for (std::size_t head = 0; head < net.order_.size(); ++head)
        for (BusId c : net.children_[net.order_[head]])
            net.order_.push_back(c);
    if (net.order_.size() != n) {
        std::vector<bool> seen(n, false);
        for (BusId b : net.order_)
            seen[b] = true;
        for (BusId i = 0; i < n; ++i)
            if (!seen[i])
                throw StructureError(branches[incoming[i]].source_row,
                                     "cycle through bus " + std::to_string(i) + " (not reachable from root)");
    }

    net.path_z_.assign(n, {0.0, 0.0});
    for (BusId b : net.order_) {
        if (b == root)
            continue;
        const auto& br = branches[incoming[b]];
        net.path_z_[b] = net.path_z_[br.from_bus] + std::complex<double>(br.r_ohm, br.x_ohm);
    }

    net.buses_ = std::move(buses);
    net.branches_ = std::move(branches);
    net.ties_ = std::move(tie_switches);
    net.v_nom_kv_ = v_nom_kv;
    net.scc_override_ = std::move(scc_override_va);
    net.incoming_ = std::move(incoming);
    return net;
}

/// Reads the network CSV: a `# v_nom_kv=<float>` comment line, then the header
/// `from,to,r_ohm,x_ohm,p_kw,q_kvar,open[,scc_va]` and one row per branch. Load
/// columns describe the `to` bus; rows with open=1 are tie switches.
inline Network load_network(std::istream& in) {
    std::optional<double> v_nom;
    std::optional<detail::Header> header;
    std::size_t c_from = 0, c_to = 0, c_r = 0, c_x = 0, c_p = 0, c_q = 0, c_open = 0;
    std::optional<std::size_t> c_scc;

    struct Row {
        Branch branch;
        double p = 0, q = 0;
        std::optional<double> scc;
    };
    std::vector<Row> closed;
    std::vector<Branch> ties;
    BusId max_bus = 0;

    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        auto text = detail::trim(line);
        if (text.empty())
            continue;
        if (text.front() == '#') {
            auto body = detail::trim(text.substr(1));
            constexpr std::string_view key = "v_nom_kv=";
            if (body.substr(0, key.size()) == key)
                v_nom = detail::parse_double(body.substr(key.size()), row, "v_nom_kv");
            continue;
        }
        if (!header) {
            header.emplace(text);
            c_from = header->require("from", row);
            c_to = header->require("to", row);
            c_r = header->require("r_ohm", row);
            c_x = header->require("x_ohm", row);
            c_p = header->require("p_kw", row);
            c_q = header->require("q_kvar", row);
            c_open = header->require("open", row);
            c_scc = header->find("scc_va");
            continue;
        }
        auto f = detail::split(text);
        if (f.size() != header->size())
            throw ParseError(row, "expected " + std::to_string(header->size()) + " fields, got " +
                                      std::to_string(f.size()));
        auto from = detail::parse_int(f[c_from], row, "from");
        auto to = detail::parse_int(f[c_to], row, "to");
        if (from < 0 || to < 0)
            throw ParseError(row, "negative bus id");
        auto open = detail::parse_int(f[c_open], row, "open");
        if (open != 0 && open != 1)
            throw ParseError(row, "open must be 0 or 1");
        Row r;
        r.branch = Branch{static_cast<BusId>(from), static_cast<BusId>(to), detail::parse_double(f[c_r], row, "r_ohm"),
                          detail::parse_double(f[c_x], row, "x_ohm"), row};
        r.p = detail::parse_double(f[c_p], row, "p_kw");
        r.q = detail::parse_double(f[c_q], row, "q_kvar");
        if (r.p < 0 || r.q < 0)
            throw ParseError(row, "negative load");
        if (c_scc && !detail::trim(f[*c_scc]).empty())
            r.scc = detail::parse_double(f[*c_scc], row, "scc_va");
        if (r.branch.from_bus == r.branch.to_bus)
            throw StructureError(row, "self-loop at bus " + std::to_string(r.branch.to_bus));
        max_bus = std::max({max_bus, r.branch.from_bus, r.branch.to_bus});
        if (open)
            ties.push_back(r.branch);
        else
            closed.push_back(std::move(r));
    }
    if (!header)
        throw ParseError(row, "missing header row");
    if (!v_nom)
        throw ParseError(0, "missing '# v_nom_kv=<float>' metadata line");

    const std::size_t n = max_bus + 1;
    std::vector<Bus> buses(n);
    for (BusId i = 0; i < n; ++i)
        buses[i].id = i;
    std::vector<Branch> branches;
    std::vector<std::optional<double>> scc(n);
    bool any_scc = false;
    for (auto& r : closed) {
        auto to = r.branch.to_bus;
        buses[to].p_load_kw = r.p;
        buses[to].q_load_kvar = r.q;
        if (r.scc) {
            scc[to] = r.scc;
            any_scc = true;
        }
        branches.push_back(r.branch);
    }
    if (!any_scc)
        scc.clear();
    return Network::build(std::move(buses), std::move(branches), *v_nom, std::move(ties), std::move(scc));
}

inline Network load_network_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open network file '" + path + "'");
    return load_network(in);
}

/// Series sum of branch impedances (ohms) on the root-to-bus path.
inline std::complex<double> path_impedance(const Network& net, BusId bus) {
    return net.cumulative_impedance(bus);
}

/// Three-phase short-circuit power in VA, V_nom^2 / |Z_path|, unless the file
/// supplied a measured value. Throws InfiniteShortCircuit at the root.
inline double short_circuit_power(const Network& net, BusId bus) {
    if (auto measured = net.scc_override(bus))
        return *measured;
    if (bus == Network::root)
        throw InfiniteShortCircuit();
    const double v = net.v_nom_kv() * 1e3;
    return v * v / std::abs(net.cumulative_impedance(bus));
}

/// The bus and all its descendants, in increasing id.
inline std::vector<BusId> subtree(const Network& net, BusId bus) {
    std::vector<BusId> out{bus};
    for (std::size_t head = 0; head < out.size(); ++head)
        for (BusId c : net.children(out[head]))
            out.push_back(c);
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace capres
