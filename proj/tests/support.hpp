#pragma once

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "capres/capres.hpp"

namespace capres::test {

inline std::string data_path(const std::string& name) { return std::string(CAPRES_DATA_DIR) + "/" + name; }

inline const Network& bw33() {
    static const Network net = load_network_file(data_path("bw33.csv"));
    return net;
}

inline const Network& syn7() {
    static const Network net = load_network_file(data_path("syn7.csv"));
    return net;
}

inline Network parse(const std::string& text) {
    std::istringstream in(text);
    return load_network(in);
}

/// One branch 0->1, r = 0.1, x = 0.05 at 12.66 kV, load 100 kW / 60 kvar.
inline Network two_bus() {
    return Network::build({{0, 0, 0}, {1, 100, 60}}, {{0, 1, 0.1, 0.05}}, 12.66);
}

/// Random radial tree: bus i > 0 hangs off a uniformly chosen earlier bus.
inline Network random_tree(std::mt19937_64& rng, std::size_t n, double v_nom_kv = 12.66) {
    std::uniform_real_distribution<double> load(0.0, 500.0), r(0.01, 2.0), x(0.0, 2.0);
    std::vector<Bus> buses{{0, 0, 0}};
    std::vector<Branch> branches;
    for (BusId i = 1; i < n; ++i) {
        buses.push_back({i, load(rng), load(rng)});
        std::uniform_int_distribution<BusId> up(0, i - 1);
        branches.push_back({up(rng), i, r(rng), x(rng)});
    }
    std::shuffle(branches.begin(), branches.end(), rng);
    return Network::build(std::move(buses), std::move(branches), v_nom_kv);
}

/// Net load of every bus after compensation, summed over its subtree by
/// walking each bus up to the root. Independent of the solver's sweep order.
inline std::vector<std::pair<double, double>> brute_force_flows(const Network& net, const Placement& p,
                                                                const CapacitorCatalog& catalog) {
    std::vector<std::pair<double, double>> into(net.bus_count(), {0.0, 0.0});
    for (BusId b = 1; b < net.bus_count(); ++b) {
        const double pl = net.bus(b).p_load_kw;
        const double ql = net.bus(b).q_load_kvar - (p[b] ? catalog.size_kvar(p[b]) : 0.0);
        for (BusId v = b; v != Network::root; v = *net.parent(v)) {
            into[v].first += pl;
            into[v].second += ql;
        }
    }
    return into;
}

} // namespace capres::test
