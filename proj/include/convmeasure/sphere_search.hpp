#pragma once

#include "convmeasure/parallel.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

namespace convmeasure {

/// Knobs for the grid-plus-polish optimizer on the unit sphere.
struct SearchOptions {
    std::size_t grid_size = 0; ///< 0 selects default_grid_size(dim)
    double tolerance = 1e-8;   ///< relative stopping tolerance of the polish
    int starts = 3;            ///< separated grid optima that get polished
    Execution execution = Execution::parallel;
};

/// 2^12 directions for n <= 3, 2^14 above.
std::size_t default_grid_size(int dim);

/// Deterministic low-discrepancy point set on S^{dim-1}.
struct DirectionGrid {
    int dim = 0;
    std::size_t count = 0;
    double spacing = 0.0;       ///< typical angular distance between neighbours
    std::vector<double> coords; ///< count * dim, direction-major

    const double* operator[](std::size_t i) const { return coords.data() + i * static_cast<std::size_t>(dim); }
};

/// Cached; safe to call from several threads.
std::shared_ptr<const DirectionGrid> direction_grid(int dim, std::size_t count);

struct SphereOptimum {
    double value = 0.0;
    Eigen::VectorXd direction;
};

using SphereFunction = std::function<double(const double*)>;

/// Writes f(grid[i]) into values[i]; parallel or serial reference.
template <typename F>
void evaluate_on_grid(const DirectionGrid& grid, const F& f, std::vector<double>& values, Execution mode)
{
    values.resize(grid.count);
    for_each_index(mode, grid.count, [&](std::size_t i) { values[i] = f(grid[i]); });
}

/// Indices of up to `starts` grid maxima that are pairwise separated by a few
/// grid spacings. The first entry is the global grid maximum.
std::vector<std::size_t> separated_maxima(const DirectionGrid& grid, const std::vector<double>& values, int starts);

/// Nelder-Mead on a tangent chart around `start`, maximizing f.
SphereOptimum polish_maximum(int dim, const SphereFunction& f, const Eigen::VectorXd& start, double step,
                             double tolerance);

/// sup of f over the unit sphere.
template <typename F>
SphereOptimum maximize_on_sphere(int dim, const F& f, const SearchOptions& options = {})
{
    const auto grid = direction_grid(dim, options.grid_size ? options.grid_size : default_grid_size(dim));
    std::vector<double> values;
    evaluate_on_grid(*grid, f, values, options.execution);

    SphereOptimum best;
    const auto starts = separated_maxima(*grid, values, options.starts);
    best.value = values[starts.front()];
    best.direction = Eigen::Map<const Eigen::VectorXd>(grid->operator[](starts.front()), dim);

    const SphereFunction wrapped = [&f](const double* u) { return f(u); };
    for (auto s : starts) {
        const Eigen::VectorXd u0 = Eigen::Map<const Eigen::VectorXd>(grid->operator[](s), dim);
        auto polished = polish_maximum(dim, wrapped, u0, grid->spacing, options.tolerance);
        if (polished.value > best.value) best = std::move(polished);
    }
    return best;
}

/// inf of f over the unit sphere.
template <typename F>
SphereOptimum minimize_on_sphere(int dim, const F& f, const SearchOptions& options = {})
{
    auto negated = [&f](const double* u) { return -f(u); };
    auto result = maximize_on_sphere(dim, negated, options);
    result.value = -result.value;
    return result;
}

} // namespace convmeasure
