#pragma once

#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <string>
#include <vector>

#include "capres/detail/text.hpp"
#include "capres/error.hpp"

namespace capres {

struct CapacitorType {
    int type_id = 0;
    double size_kvar = 0.0;
    double cost_usd = 0.0;

    bool operator==(const CapacitorType&) const = default;
};

/// Ordered list of installable capacitor types. Placement slot k (1-based)
/// selects row k; slot 0 means no capacitor. All costs are multiplied by
/// price_scale.
class CapacitorCatalog {
public:
    CapacitorCatalog() : CapacitorCatalog(table_one_rows()) {}

    explicit CapacitorCatalog(std::vector<CapacitorType> rows, double price_scale = 1.0)
        : rows_(std::move(rows)), price_scale_(price_scale) {
        if (rows_.empty())
            throw InvalidArgument("capacitor catalog is empty");
        if (!(price_scale_ > 0.0) || !std::isfinite(price_scale_))
            throw InvalidArgument("price_scale must be positive");
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            if (!(rows_[i].size_kvar > 0.0) || !(rows_[i].cost_usd >= 0.0))
                throw InvalidArgument("catalog row " + std::to_string(i + 1) + " needs size > 0 and cost >= 0");
            if (i > 0 && !(rows_[i].size_kvar > rows_[i - 1].size_kvar))
                throw InvalidArgument("catalog sizes must be strictly increasing");
        }
    }

    /// The six standard capacitor banks (150..1200 kvar).
    static CapacitorCatalog table_one() { return CapacitorCatalog(table_one_rows()); }

    static std::vector<CapacitorType> table_one_rows() {
        return {{1, 150, 1498}, {2, 300, 1604}, {3, 450, 1620}, {4, 600, 1823}, {5, 900, 2550}, {6, 1200, 2955}};
    }

    /// Keeps only the listed type ids, in catalog order.
    CapacitorCatalog subset(const std::vector<int>& type_ids) const {
        std::vector<CapacitorType> kept;
        for (const auto& r : rows_)
            for (int id : type_ids)
                if (r.type_id == id)
                    kept.push_back(r);
        if (kept.size() != type_ids.size())
            throw InvalidArgument("subset names a type id not in the catalog");
        return CapacitorCatalog(std::move(kept), price_scale_);
    }

    CapacitorCatalog with_price_scale(double scale) const { return CapacitorCatalog(rows_, scale); }

    /// Number of capacitor types; valid slots are 0..type_count().
    std::size_t type_count() const { return rows_.size(); }
    double price_scale() const { return price_scale_; }
    const std::vector<CapacitorType>& rows() const { return rows_; }

    const CapacitorType& row(int slot) const { return rows_[check(slot) - 1]; }
    double size_kvar(int slot) const { return row(slot).size_kvar; }
    /// Purchase cost after price scaling.
    double cost_usd(int slot) const { return price_scale_ * row(slot).cost_usd; }

    bool operator==(const CapacitorCatalog&) const = default;

private:
    std::size_t check(int slot) const {
        if (slot < 1 || static_cast<std::size_t>(slot) > rows_.size())
            throw InvalidArgument("capacitor slot " + std::to_string(slot) + " outside 1.." +
                                  std::to_string(rows_.size()));
        return static_cast<std::size_t>(slot);
    }

    std::vector<CapacitorType> rows_;
    double price_scale_ = 1.0;
};

/// Reads `type,size_kvar,cost_usd` rows.
inline CapacitorCatalog load_catalog(std::istream& in) {
    std::string line;
    std::size_t row = 0;
    bool have_header = false;
    std::size_t c_type = 0, c_size = 0, c_cost = 0, width = 0;
    std::vector<CapacitorType> rows;
    while (std::getline(in, line)) {
        ++row;
        auto text = detail::trim(line);
        if (text.empty() || text.front() == '#')
            continue;
        if (!have_header) {
            detail::Header h(text);
            c_type = h.require("type", row);
            c_size = h.require("size_kvar", row);
            c_cost = h.require("cost_usd", row);
            width = h.size();
            have_header = true;
            continue;
        }
        auto f = detail::split(text);
        if (f.size() != width)
            throw ParseError(row, "wrong field count");
        rows.push_back({static_cast<int>(detail::parse_int(f[c_type], row, "type")),
                        detail::parse_double(f[c_size], row, "size_kvar"),
                        detail::parse_double(f[c_cost], row, "cost_usd")});
    }
    return CapacitorCatalog(std::move(rows));
}

inline CapacitorCatalog load_catalog_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open catalog file '" + path + "'");
    return load_catalog(in);
}

} // namespace capres
