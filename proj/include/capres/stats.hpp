#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "capres/error.hpp"
#include "capres/placement.hpp"

namespace capres {

inline double mean(std::span<const double> xs) {
    if (xs.empty())
        throw InvalidArgument("mean of an empty sample");
    double s = 0.0;
    for (double x : xs)
        s += x;
    return s / static_cast<double>(xs.size());
}

/// Sample (n - 1) standard deviation; 0 for a single observation.
inline double sample_stddev(std::span<const double> xs) {
    if (xs.size() < 2)
        return 0.0;
    const double m = mean(xs);
    double ss = 0.0;
    for (double x : xs)
        ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

/// Two-sided Welch unequal-variance t-test. If both samples are constant the
/// p-value is 1 when their values match and 0 otherwise.
inline double welch_t_test(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2)
        throw InvalidArgument("welch_t_test needs at least two observations per sample");
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    const double ma = mean(a), mb = mean(b);
    const double sa = sample_stddev(a), sb = sample_stddev(b);
    const double va = sa * sa / na;
    const double vb = sb * sb / nb;
    if (va == 0.0 && vb == 0.0)
        return ma == mb ? 1.0 : 0.0;

    const double t = (ma - mb) / std::sqrt(va + vb);
    const double df = (va + vb) * (va + vb) / (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
    boost::math::students_t dist(df);
    const double p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t)));
    return std::clamp(p, 0.0, 1.0);
}

struct TypeCount {
    double mean = 0.0;
    double stddev = 0.0;
};

/// Mean and sample std of the number of installed capacitors of each slot
/// 1..type_count across placements. Element k-1 describes slot k.
inline std::vector<TypeCount> census(std::span<const Placement> placements, std::size_t type_count) {
    if (placements.empty())
        throw InvalidArgument("census of an empty list");
    std::vector<TypeCount> out(type_count);
    std::vector<double> counts(placements.size());
    for (std::size_t t = 1; t <= type_count; ++t) {
        for (std::size_t i = 0; i < placements.size(); ++i) {
            const auto& slots = placements[i].slots();
            counts[i] = static_cast<double>(std::count(slots.begin(), slots.end(), t));
        }
        out[t - 1] = {mean(counts), sample_stddev(counts)};
    }
    return out;
}

} // namespace capres
