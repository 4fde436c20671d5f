#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "capres/catalog.hpp"
#include "capres/error.hpp"
#include "capres/netmodel.hpp"

namespace capres {

/// One catalog slot per bus: 0 = no capacitor, k = catalog row k.
class Placement {
public:
    Placement() = default;
    explicit Placement(std::size_t bus_count) : slots_(bus_count, 0) {}
    Placement(std::initializer_list<int> slots) {
        for (int s : slots)
            slots_.push_back(static_cast<std::uint8_t>(s));
    }

    std::size_t size() const { return slots_.size(); }
    int operator[](BusId bus) const { return slots_[bus]; }
    void set(BusId bus, int slot) { slots_.at(bus) = static_cast<std::uint8_t>(slot); }

    std::size_t installed_count() const {
        return static_cast<std::size_t>(std::count_if(slots_.begin(), slots_.end(), [](auto s) { return s != 0; }));
    }
    bool empty_of_capacitors() const { return installed_count() == 0; }

    const std::vector<std::uint8_t>& slots() const { return slots_; }

    auto operator<=>(const Placement&) const = default;

private:
    std::vector<std::uint8_t> slots_;
};

/// Throws InvalidArgument unless the placement has one slot per bus, every
/// slot is within the catalog, and the root is empty when root placement is off.
inline void validate_placement(const Network& net, const Placement& s, const CapacitorCatalog& catalog,
                               bool allow_root = true) {
    if (s.size() != net.bus_count())
        throw InvalidArgument("placement has " + std::to_string(s.size()) + " slots for " +
                              std::to_string(net.bus_count()) + " buses");
    for (BusId b = 0; b < s.size(); ++b)
        if (static_cast<std::size_t>(s[b]) > catalog.type_count())
            throw InvalidArgument("placement slot " + std::to_string(s[b]) + " at bus " + std::to_string(b) +
                                  " outside 0.." + std::to_string(catalog.type_count()));
    if (!allow_root && s[Network::root] != 0)
        throw InvalidArgument("capacitor placed at the substation root while root placement is disabled");
}

} // namespace capres
