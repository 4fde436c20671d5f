#pragma once

// Simplified Baran-Wu load flow: voltages pinned at 1 pu, one backward sweep
// that aggregates active/reactive demand up the tree, and branch losses
// r (P^2 + Q^2) / V^2 that are not fed back into the upstream flows.

#include <cstddef>
#include <vector>

#include "capres/catalog.hpp"
#include "capres/netmodel.hpp"
#include "capres/placement.hpp"

namespace capres {

/// Per-branch flows and losses, indexed like Network::branches().
struct FlowState {
    std::vector<double> p_flow_kw;
    std::vector<double> q_flow_kvar; // negative when capacitors over-compensate
    std::vector<double> branch_loss_kw;
    double total_loss_kw = 0.0;
};

namespace detail {

inline constexpr double s_base_kva = 1000.0; // 1 MVA

// Loss of one branch in kW, computed in per unit on (S_base, V_nom).
inline double branch_loss_kw(double r_ohm, double v_nom_kv, double p_kw, double q_kvar) {
    const double z_base = v_nom_kv * v_nom_kv / (s_base_kva / 1000.0);
    const double r_pu = r_ohm / z_base;
    const double p_pu = p_kw / s_base_kva;
    const double q_pu = q_kvar / s_base_kva;
    return r_pu * (p_pu * p_pu + q_pu * q_pu) * s_base_kva;
}

} // namespace detail

inline FlowState solve_flows(const Network& net, const Placement& placement, const CapacitorCatalog& catalog) {
    validate_placement(net, placement, catalog);
    const std::size_t n = net.bus_count();

    // Net demand seen at each bus, then accumulated leaf-to-root.
    std::vector<double> p(n), q(n);
    for (BusId b = 0; b < n; ++b) {
        const auto& bus = net.bus(b);
        p[b] = bus.p_load_kw;
        q[b] = bus.q_load_kvar - (placement[b] ? catalog.size_kvar(placement[b]) : 0.0);
    }
    auto order = net.topological_order();
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        BusId b = *it;
        if (b == Network::root)
            continue;
        BusId up = *net.parent(b);
        p[up] += p[b];
        q[up] += q[b];
    }

    FlowState fs;
    const auto branches = net.branches();
    fs.p_flow_kw.resize(branches.size());
    fs.q_flow_kvar.resize(branches.size());
    fs.branch_loss_kw.resize(branches.size());
    for (std::size_t a = 0; a < branches.size(); ++a) {
        const auto& br = branches[a];
        fs.p_flow_kw[a] = p[br.to_bus];
        fs.q_flow_kvar[a] = q[br.to_bus];
        fs.branch_loss_kw[a] = detail::branch_loss_kw(br.r_ohm, net.v_nom_kv(), p[br.to_bus], q[br.to_bus]);
        fs.total_loss_kw += fs.branch_loss_kw[a];
    }
    return fs;
}

/// Loss of the subnetwork hanging from every bus: the bus's incoming branch
/// plus all branches below it. Element 0 (root) is the total loss.
inline std::vector<double> subtree_losses(const Network& net, const FlowState& flow) {
    if (flow.branch_loss_kw.size() != net.branches().size())
        throw InvalidArgument("flow state does not belong to this network");
    std::vector<double> acc(net.bus_count(), 0.0);
    auto order = net.topological_order();
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        BusId b = *it;
        if (b == Network::root)
            continue;
        acc[b] += flow.branch_loss_kw[net.incoming_branch(b)];
        acc[*net.parent(b)] += acc[b];
    }
    acc[Network::root] = flow.total_loss_kw; // same summation order as solve_flows
    return acc;
}

inline double subtree_loss(const Network& net, const FlowState& flow, BusId bus) {
    if (bus >= net.bus_count())
        throw InvalidArgument("unknown bus id " + std::to_string(bus));
    return subtree_losses(net, flow)[bus];
}

/// Literal algebraic loss form sum r_a (P^2 + Q^2 - Qc^2) / V^2, where P and Q are the
/// uncompensated flows in `flow_base` and Qc is the capacitor kvar installed
/// downstream of each arc. Only for comparison with solve_flows; it can go negative.
inline double loss_eq5(const Network& net, const FlowState& flow_base, const Placement& placement,
                       const CapacitorCatalog& catalog) {
    validate_placement(net, placement, catalog);
    if (flow_base.p_flow_kw.size() != net.branches().size())
        throw InvalidArgument("flow state does not belong to this network");

    std::vector<double> qc(net.bus_count(), 0.0);
    for (BusId b = 0; b < net.bus_count(); ++b)
        qc[b] = placement[b] ? catalog.size_kvar(placement[b]) : 0.0;
    auto order = net.topological_order();
    for (auto it = order.rbegin(); it != order.rend(); ++it)
        if (*it != Network::root)
            qc[*net.parent(*it)] += qc[*it];

    const double v2 = net.v_nom_kv() * net.v_nom_kv();
    double total = 0.0;
    const auto branches = net.branches();
    for (std::size_t a = 0; a < branches.size(); ++a) {
        const double p = flow_base.p_flow_kw[a];
        const double q = flow_base.q_flow_kvar[a];
        const double c = qc[branches[a].to_bus];
        total += branches[a].r_ohm * (p * p + q * q - c * c) / v2 / 1000.0;
    }
    return total;
}

} // namespace capres
