#include "convmeasure/sphere_search.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace convmeasure {

std::size_t default_grid_size(int dim)
{
    return dim <= 3 ? std::size_t{1} << 12 : std::size_t{1} << 14;
}

namespace {

// Surface area of S^{dim-1}.
double sphere_area(int dim)
{
    const double half = 0.5 * dim;
    return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

DirectionGrid build_grid(int dim, std::size_t count)
{
    if (dim < 2) throw std::invalid_argument("direction grid needs dim >= 2");
    if (count < 4) throw std::invalid_argument("direction grid needs at least 4 points");

    DirectionGrid grid;
    grid.dim = dim;
    grid.count = count;
    grid.coords.resize(count * static_cast<std::size_t>(dim));
    grid.spacing = std::pow(sphere_area(dim) / static_cast<double>(count), 1.0 / (dim - 1));

    const double n = static_cast<double>(count);
    if (dim == 2) {
        for (std::size_t i = 0; i < count; ++i) {
            const double phi = 2.0 * std::numbers::pi * (static_cast<double>(i) + 0.5) / n;
            grid.coords[2 * i] = std::cos(phi);
            grid.coords[2 * i + 1] = std::sin(phi);
        }
        return grid;
    }
    if (dim == 3) {
        // spherical Fibonacci lattice
        const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
        for (std::size_t i = 0; i < count; ++i) {
            const double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / n;
            const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
            const double phi = golden_angle * static_cast<double>(i);
            grid.coords[3 * i] = rho * std::cos(phi);
            grid.coords[3 * i + 1] = rho * std::sin(phi);
            grid.coords[3 * i + 2] = z;
        }
        return grid;
    }

    // Kronecker sequence with the generalized golden ratio, pushed through the
    // normal quantile and projected; the Gaussian is rotation invariant so the
    // projected points are quasi-uniform on the sphere.
    double phi = 2.0;
    for (int it = 0; it < 64; ++it) phi = std::pow(1.0 + phi, 1.0 / (dim + 1));
    std::vector<double> step(static_cast<std::size_t>(dim));
    for (int j = 0; j < dim; ++j) step[static_cast<std::size_t>(j)] = std::fmod(std::pow(1.0 / phi, j + 1), 1.0);
    for (std::size_t i = 0; i < count; ++i) {
        double* u = grid.coords.data() + i * static_cast<std::size_t>(dim);
        double norm2 = 0.0;
        for (int j = 0; j < dim; ++j) {
            double p = std::fmod(0.5 + step[static_cast<std::size_t>(j)] * static_cast<double>(i + 1), 1.0);
            p = std::clamp(p, 1e-12, 1.0 - 1e-12);
            u[j] = std::numbers::sqrt2 * boost::math::erf_inv(2.0 * p - 1.0);
            norm2 += u[j] * u[j];
        }
        const double inv = 1.0 / std::sqrt(norm2);
        for (int j = 0; j < dim; ++j) u[j] *= inv;
    }
    return grid;
}

double dot(const double* a, const double* b, int dim)
{
    double s = 0.0;
    for (int j = 0; j < dim; ++j) s += a[j] * b[j];
    return s;
}

} // namespace

std::shared_ptr<const DirectionGrid> direction_grid(int dim, std::size_t count)
{
    static std::mutex mutex;
    static std::map<std::pair<int, std::size_t>, std::shared_ptr<const DirectionGrid>> cache;

    std::lock_guard lock(mutex);
    auto& slot = cache[{dim, count}];
    if (!slot) slot = std::make_shared<const DirectionGrid>(build_grid(dim, count));
    return slot;
}

std::vector<std::size_t> separated_maxima(const DirectionGrid& grid, const std::vector<double>& values, int starts)
{
    std::vector<std::size_t> chosen;
    const double cos_separation = std::cos(std::min(4.0 * grid.spacing, std::numbers::pi));
    for (int s = 0; s < std::max(starts, 1); ++s) {
        std::size_t best = grid.count;
        for (std::size_t i = 0; i < grid.count; ++i) {
            if (best != grid.count && !(values[i] > values[best])) continue;
            bool far = true;
            for (auto c : chosen) {
                if (dot(grid[i], grid[c], grid.dim) > cos_separation) {
                    far = false;
                    break;
                }
            }
            if (far) best = i;
        }
        if (best == grid.count) break;
        chosen.push_back(best);
    }
    return chosen;
}

namespace {

struct Chart {
    Eigen::VectorXd origin;
    Eigen::MatrixXd tangent; // dim x (dim-1), orthonormal, orthogonal to origin

    Eigen::VectorXd point(const Eigen::VectorXd& x) const
    {
        Eigen::VectorXd u = origin + tangent * x;
        return u / u.norm();
    }
};

Chart make_chart(const Eigen::VectorXd& origin)
{
    const auto dim = origin.size();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr{Eigen::MatrixXd(origin)};
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(dim, dim);
    return {origin / origin.norm(), q.rightCols(dim - 1)};
}

// One Nelder-Mead run maximizing f(chart.point(x)); returns (x, value).
std::pair<Eigen::VectorXd, double> nelder_mead(const Chart& chart, const SphereFunction& f, double step,
                                               double tolerance)
{
    const auto k = chart.tangent.cols();
    auto g = [&](const Eigen::VectorXd& x) {
        const Eigen::VectorXd u = chart.point(x);
        return -f(u.data());
    };

    std::vector<Eigen::VectorXd> simplex(static_cast<std::size_t>(k + 1), Eigen::VectorXd::Zero(k));
    for (Eigen::Index j = 0; j < k; ++j) simplex[static_cast<std::size_t>(j + 1)](j) = step;
    std::vector<double> value(simplex.size());
    for (std::size_t i = 0; i < simplex.size(); ++i) value[i] = g(simplex[i]);

    std::vector<std::size_t> order(simplex.size());
    const int max_iterations = 400 * static_cast<int>(k);
    const double xtol = 1e-10;
    for (int it = 0; it < max_iterations; ++it) {
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](auto a, auto b) { return value[a] < value[b]; });
        const auto best = order.front();
        const auto worst = order.back();
        const auto second = order[order.size() - 2];

        double size = 0.0;
        for (const auto& v : simplex) size = std::max(size, (v - simplex[best]).lpNorm<Eigen::Infinity>());
        const double spread = value[worst] - value[best];
        if (spread <= 1e-3 * tolerance * std::max(1.0, std::abs(value[best])) && size <= xtol) break;

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(k);
        for (std::size_t i = 0; i < simplex.size(); ++i)
            if (i != worst) centroid += simplex[i];
        centroid /= static_cast<double>(k);

        const Eigen::VectorXd reflected = centroid + (centroid - simplex[worst]);
        const double fr = g(reflected);
        if (fr < value[best]) {
            const Eigen::VectorXd expanded = centroid + 2.0 * (centroid - simplex[worst]);
            const double fe = g(expanded);
            if (fe < fr) {
                simplex[worst] = expanded;
                value[worst] = fe;
            } else {
                simplex[worst] = reflected;
                value[worst] = fr;
            }
            continue;
        }
        if (fr < value[second]) {
            simplex[worst] = reflected;
            value[worst] = fr;
            continue;
        }
        const bool outside = fr < value[worst];
        const Eigen::VectorXd contracted = outside ? Eigen::VectorXd(centroid + 0.5 * (reflected - centroid))
                                                   : Eigen::VectorXd(centroid + 0.5 * (simplex[worst] - centroid));
        const double fc = g(contracted);
        if (outside ? fc <= fr : fc < value[worst]) {
            simplex[worst] = contracted;
            value[worst] = fc;
            continue;
        }
        for (std::size_t i = 0; i < simplex.size(); ++i) {
            if (i == best) continue;
            simplex[i] = simplex[best] + 0.5 * (simplex[i] - simplex[best]);
            value[i] = g(simplex[i]);
        }
    }
    const auto best = static_cast<std::size_t>(std::min_element(value.begin(), value.end()) - value.begin());
    return {simplex[best], -value[best]};
}

} // namespace

SphereOptimum polish_maximum(int dim, const SphereFunction& f, const Eigen::VectorXd& start, double step,
                             double tolerance)
{
    if (start.size() != dim) throw std::invalid_argument("polish start has wrong dimension");

    SphereOptimum result{f(start.data()), start};
    Eigen::VectorXd origin = start;
    double current_step = step;
    // A restart around the first optimum with a fresh, smaller simplex
    // escapes the occasional collapse onto a ridge.
    for (int round = 0; round < 2; ++round) {
        const Chart chart = make_chart(origin);
        auto [x, value] = nelder_mead(chart, f, current_step, tolerance);
        if (value > result.value) {
            result.value = value;
            result.direction = chart.point(x);
        }
        origin = result.direction;
        current_step = 0.25 * step;
    }
    return result;
}

} // namespace convmeasure
