#pragma once

#include <charconv>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "capres/error.hpp"

namespace capres::detail {

inline std::string_view trim(std::string_view s) {
    constexpr std::string_view ws = " \t\r\n";
    auto first = s.find_first_not_of(ws);
    if (first == std::string_view::npos)
        return {};
    auto last = s.find_last_not_of(ws);
    return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split(std::string_view line, char sep = ',') {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find(sep, start);
        out.push_back(trim(line.substr(start, pos - start)));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return out;
}

inline double parse_double(std::string_view field, std::size_t row, std::string_view what) {
    field = trim(field);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size())
        throw ParseError(row, "bad " + std::string(what) + " '" + std::string(field) + "'");
    return value;
}

inline std::int64_t parse_int(std::string_view field, std::size_t row, std::string_view what) {
    field = trim(field);
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size())
        throw ParseError(row, "bad " + std::string(what) + " '" + std::string(field) + "'");
    return value;
}

/// Shortest decimal text that round-trips to the same double.
inline std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

/// Column lookup over a CSV header row.
class Header {
public:
    explicit Header(std::string_view line) {
        for (auto name : split(line))
            names_.emplace_back(name);
    }

    std::optional<std::size_t> find(std::string_view name) const {
        for (std::size_t i = 0; i < names_.size(); ++i)
            if (names_[i] == name)
                return i;
        return std::nullopt;
    }

    std::size_t require(std::string_view name, std::size_t row) const {
        if (auto i = find(name))
            return *i;
        throw ParseError(row, "missing column '" + std::string(name) + "'");
    }

    std::size_t size() const { return names_.size(); }

private:
    std::vector<std::string> names_;
};

} // namespace capres::detail
