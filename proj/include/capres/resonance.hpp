#pragma once

// Parallel-resonance screening of shunt capacitors. The harmonic order at which
// a capacitor resonates with the upstream system is h = sqrt(S_cc / Q_c).

#include <array>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "capres/catalog.hpp"
#include "capres/error.hpp"
#include "capres/netmodel.hpp"
#include "capres/placement.hpp"

namespace capres {

enum class ResonanceMode {
    /// Round f_p / f_1 half away from zero; feasible iff the result is even.
    round_check,
    /// Infeasible iff f_p lies within band_hz of the 3rd, 5th or 7th harmonic.
    band_check,
};

inline ResonanceMode parse_resonance_mode(std::string_view s) {
    if (s == "round")
        return ResonanceMode::round_check;
    if (s == "band")
        return ResonanceMode::band_check;
    throw InvalidArgument("resonance mode must be 'round' or 'band', got '" + std::string(s) + "'");
}

inline std::string to_string(ResonanceMode m) { return m == ResonanceMode::round_check ? "round" : "band"; }

struct ResonancePolicy {
    ResonanceMode mode = ResonanceMode::round_check;
    double fundamental_hz = 60.0;
    double band_hz = 10.0;

    static constexpr std::array<int, 3> screened_harmonics{3, 5, 7};

    void validate() const {
        if (!(fundamental_hz > 0.0))
            throw InvalidArgument("fundamental_hz must be > 0");
        if (!(band_hz >= 0.0))
            throw InvalidArgument("band_hz must be >= 0");
    }
};

inline double harmonic_order(double scc_va, double qc_var) {
    if (!(scc_va > 0.0) || !(qc_var > 0.0))
        throw InvalidArgument("harmonic_order needs positive short-circuit power and capacitor size");
    return std::sqrt(scc_va / qc_var);
}

inline double resonance_frequency(double scc_va, double qc_var, const ResonancePolicy& policy) {
    policy.validate();
    return policy.fundamental_hz * harmonic_order(scc_va, qc_var);
}

inline bool check_feasible(double scc_va, double qc_var, const ResonancePolicy& policy) {
    const double fp = resonance_frequency(scc_va, qc_var, policy);
    if (policy.mode == ResonanceMode::round_check) {
        // std::round rounds halfway cases away from zero.
        const double h = std::round(fp / policy.fundamental_hz);
        return std::fmod(h, 2.0) == 0.0;
    }
    for (int n : ResonancePolicy::screened_harmonics) {
        const double centre = n * policy.fundamental_hz;
        if (fp >= centre - policy.band_hz && fp <= centre + policy.band_hz)
            return false;
    }
    return true;
}

/// Resonance check for a single bus holding `slot`. Empty slots pass. The root
/// has infinite S_cc and is exempt when root placement is allowed, forbidden otherwise.
inline bool bus_feasible(const Network& net, BusId bus, int slot, const CapacitorCatalog& catalog,
                         const ResonancePolicy& policy, bool allow_root) {
    if (slot == 0)
        return true;
    if (bus == Network::root && !net.scc_override(bus))
        return allow_root;
    return check_feasible(short_circuit_power(net, bus), catalog.size_kvar(slot) * 1e3, policy);
}

struct FeasibilityReport {
    bool feasible = true;
    std::vector<BusId> violators; // increasing bus id

    explicit operator bool() const { return feasible; }
};

inline FeasibilityReport placement_feasible(const Network& net, const Placement& placement,
                                            const CapacitorCatalog& catalog, const ResonancePolicy& policy,
                                            bool allow_root = false) {
    validate_placement(net, placement, catalog, allow_root);
    FeasibilityReport report;
    for (BusId b = 0; b < placement.size(); ++b)
        if (!bus_feasible(net, b, placement[b], catalog, policy, allow_root))
            report.violators.push_back(b);
    report.feasible = report.violators.empty();
    return report;
}

} // namespace capres
