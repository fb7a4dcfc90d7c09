#pragma once

#include "convmeasure/geometry.hpp"
#include "convmeasure/rng.hpp"

#include <random>
#include <vector>

namespace testutil {

inline convmeasure::Vec random_unit(int dim, convmeasure::Rng& rng)
{
    std::normal_distribution<double> normal(0.0, 1.0);
    convmeasure::Vec u(dim);
    for (int j = 0; j < dim; ++j) u(j) = normal(rng);
    return u.normalized();
}

inline std::vector<convmeasure::Vec> random_points(int dim, std::size_t count, convmeasure::Rng& rng)
{
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<convmeasure::Vec> out(count, convmeasure::Vec(dim));
    for (auto& v : out)
        for (int j = 0; j < dim; ++j) v(j) = normal(rng);
    return out;
}

/// sup of |h_a - h_b| over `count` random directions.
template <typename A, typename B>
double sampled_support_gap(const A& a, const B& b, int dim, std::size_t count, convmeasure::Rng& rng)
{
    double worst = 0.0;
    for (std::size_t k = 0; k < count; ++k) {
        const auto u = random_unit(dim, rng);
        worst = std::max(worst, std::abs(convmeasure::support(a, u) - convmeasure::support(b, u)));
    }
    return worst;
}

inline convmeasure::Vec e(int dim, int axis)
{
    convmeasure::Vec v = convmeasure::Vec::Zero(dim);
    v(axis) = 1.0;
    return v;
}

} // namespace testutil
