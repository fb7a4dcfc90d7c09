#include "convmeasure/dense_family.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace convmeasure {

double SmoothCapParams::epsilon() const
{
    return std::ldexp(index.m(), -l);
}

BallHullBody smooth_cap_body(const SmoothCapParams& params, int dim)
{
    if (dim < 2) throw GeometryError("smooth cap body needs dimension >= 2");
    if (params.l < 1) throw GeometryError("smoothing level must be >= 1");
    const double m = params.index.m();
    const double eps = params.epsilon();
    if (!(m > 0.0 && m <= 2.0)) throw GeometryError("smooth cap radius must lie in (0, 2]");
    Vec axis = Vec::Zero(dim);
    axis(dim - 1) = 2.0 - eps;
    return BallHullBody({{Vec::Zero(dim), m}, {axis, eps}, {-axis, eps}});
}

PointSystem::PointSystem(std::vector<Vec> points, std::uint64_t seed, double separation)
    : points_(std::move(points)), seed_(seed), separation_(separation)
{
    if (points_.empty()) throw GeometryError("point system needs at least P_1");
    const int n = static_cast<int>(points_.front().size());
    if (n < 2) throw GeometryError("point system needs dimension >= 2");
    Vec first = Vec::Zero(n);
    first(n - 1) = 2.0;
    if (points_.front() != first) throw GeometryError("P_1 must be 2 e_n");
    for (const auto& p : points_) {
        if (p.size() != n) throw GeometryError("point system: dimension mismatch");
        if (p.norm() > 2.0 + 1e-12) throw GeometryError("point system: point outside the ball of radius 2");
        if (!(p.norm() > 0.0)) throw GeometryError("point system: the origin is not allowed");
    }
}

const Vec& PointSystem::point(std::size_t i) const
{
    if (i < 1 || i > points_.size())
        throw std::out_of_range("point index " + std::to_string(i) + " outside 1.." + std::to_string(points_.size()));
    return points_[i - 1];
}

std::vector<Vec> PointSystem::all_points() const
{
    std::vector<Vec> out;
    out.reserve(2 * points_.size());
    for (const auto& p : points_) {
        out.push_back(p);
        out.push_back(-p);
    }
    return out;
}

double min_distance_gap(const std::vector<Vec>& points)
{
    std::vector<double> distances;
    for (std::size_t a = 0; a < points.size(); ++a)
        for (std::size_t b = a + 1; b < points.size(); ++b) distances.push_back((points[a] - points[b]).norm());
    if (distances.size() < 2) return std::numeric_limits<double>::infinity();
    std::sort(distances.begin(), distances.end());
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < distances.size(); ++i) gap = std::min(gap, distances[i] - distances[i - 1]);
    return gap;
}

namespace {

// True when every value in `fresh` is more than delta away from every other
// value in `fresh` and in the sorted `existing`.
bool distances_separated(const std::vector<double>& existing, std::vector<double> fresh, double delta)
{
    std::sort(fresh.begin(), fresh.end());
    for (std::size_t i = 0; i < fresh.size(); ++i) {
        if (!(fresh[i] > delta)) return false;
        if (i > 0 && fresh[i] - fresh[i - 1] <= delta) return false;
        const auto it = std::lower_bound(existing.begin(), existing.end(), fresh[i]);
        if (it != existing.end() && *it - fresh[i] <= delta) return false;
        if (it != existing.begin() && fresh[i] - *(it - 1) <= delta) return false;
    }
    return true;
}

} // namespace

PointSystem generate_point_system(std::size_t count, std::uint64_t seed, double delta_dist, int dim)
{
    if (count < 1) throw std::invalid_argument("point system needs count >= 1");
    if (dim < 2) throw std::invalid_argument("point system needs dimension >= 2");
    if (!(delta_dist > 0.0)) throw std::invalid_argument("delta_dist must be positive");

    std::vector<Vec> points;
    std::vector<Vec> stored; // points and antipodes
    std::vector<double> distances;

    Vec first = Vec::Zero(dim);
    first(dim - 1) = 2.0;
    points.push_back(first);
    stored.push_back(first);
    stored.push_back(-first);
    distances.push_back(4.0);

    // Kronecker sequence in [-2, 2]^dim with a seeded Cranley-Patterson shift
    double phi = 2.0;
    for (int it = 0; it < 64; ++it) phi = std::pow(1.0 + phi, 1.0 / (dim + 1));
    auto rng = stream(seed, 0);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    Vec shift(dim);
    Vec step(dim);
    for (int j = 0; j < dim; ++j) {
        shift(j) = uniform(rng);
        step(j) = std::fmod(std::pow(1.0 / phi, j + 1), 1.0);
    }

    const std::size_t max_candidates = 10000 * count + 1000;
    for (std::size_t c = 1; points.size() < count; ++c) {
        if (c > max_candidates)
            throw std::runtime_error("could not place " + std::to_string(count) +
                                     " points with distinct distances; lower delta_dist");
        Vec x(dim);
        for (int j = 0; j < dim; ++j) x(j) = 4.0 * std::fmod(shift(j) + step(j) * static_cast<double>(c), 1.0) - 2.0;
        const double norm = x.norm();
        if (norm >= 2.0 || norm < 1e-3) continue;

        std::vector<double> fresh{2.0 * norm};
        for (const auto& s : stored) fresh.push_back((x - s).norm());
        if (!distances_separated(distances, fresh, delta_dist)) continue;

        points.push_back(x);
        stored.push_back(x);
        stored.push_back(-x);
        distances.insert(distances.end(), fresh.begin(), fresh.end());
        std::sort(distances.begin(), distances.end());
    }
    return PointSystem(std::move(points), seed, delta_dist);
}

Mat rotation_between(const Vec& from, const Vec& to)
{
    const auto n = from.size();
    if (to.size() != n) throw GeometryError("rotation_between: dimension mismatch");
    const Vec a = from.normalized();
    const Vec b = to.normalized();
    const double c = a.dot(b);
    const Mat identity = Mat::Identity(n, n);
    if (c > -1.0 + 1e-12) {
        const Mat k = b * a.transpose() - a * b.transpose();
        return identity + k + (k * k) / (1.0 + c);
    }
    // antipodal: half turn in a plane containing a
    Eigen::Index axis = 0;
    a.cwiseAbs().minCoeff(&axis);
    Vec e = Vec::Zero(n);
    e(axis) = 1.0;
    e -= e.dot(a) * a;
    e.normalize();
    return identity - 2.0 * a * a.transpose() - 2.0 * e * e.transpose();
}

BallHullBody similarity_copy(const BallHullBody& body, std::size_t i, const PointSystem& system)
{
    const Vec& target = system.point(i);
    const Vec& first = system.point(1);
    if (i == 1) return body;
    const Mat rotation = rotation_between(first, target);
    const double factor = target.norm() / first.norm();
    auto balls = body.balls();
    for (auto& b : balls) {
        b.center = factor * (rotation * b.center);
        b.radius *= factor;
    }
    return BallHullBody(balls);
}

namespace {

std::size_t binomial(std::size_t n, std::size_t k)
{
    if (k > n) return 0;
    std::size_t result = 1;
    for (std::size_t j = 1; j <= k; ++j) result = result * (n - k + j) / j;
    return result;
}

} // namespace

std::vector<std::size_t> stratum_points(int r, std::size_t i)
{
    if (r < 1) throw std::invalid_argument("stratum r must be >= 1");
    if (i < 1) throw std::invalid_argument("member index i must be >= 1");
    if (r == 1) {
        if (i != 1) throw std::out_of_range("stratum 1 has a single member");
        return {1};
    }
    // unrank i-1 in the combinatorial number system
    const auto k = static_cast<std::size_t>(r - 1);
    std::size_t rank = i - 1;
    std::vector<std::size_t> subset;
    for (std::size_t j = k; j >= 1; --j) {
        std::size_t c = j - 1;
        while (binomial(c + 1, j) <= rank) ++c;
        subset.push_back(c);
        rank -= binomial(c, j);
    }
    std::vector<std::size_t> points{1};
    for (auto it = subset.rbegin(); it != subset.rend(); ++it) points.push_back(*it + 2);
    return points;
}

std::size_t stratum_size(int r)
{
    if (r < 1) throw std::invalid_argument("stratum r must be >= 1");
    return r == 1 ? 1 : std::numeric_limits<std::size_t>::max();
}

HullFamilyIndex make_hull_index(const SmoothCapParams& cap, int r, std::size_t i)
{
    return {cap, r, i, stratum_points(r, i)};
}

BallHullBody hull_family_member(const HullFamilyIndex& index, const PointSystem& system)
{
    const bool has_long_copy = std::any_of(index.points.begin(), index.points.end(), [&](std::size_t p) {
        return std::abs(system.point(p).norm() - 2.0) <= 1e-12;
    });
    if (!has_long_copy) throw GeometryError("hull family member needs a copy of diameter 4");
    const auto base = smooth_cap_body(index.cap, system.dim());
    std::vector<BallHullBody> copies;
    copies.reserve(index.points.size());
    for (auto p : index.points) copies.push_back(similarity_copy(base, p, system));
    return prune_contained(hull_union(copies));
}

void validate(const DenseTruncation& t)
{
    if (t.level < 0 || t.level > 16) throw std::invalid_argument("dense level must lie in [0, 16]");
    if (t.l_max < 1) throw std::invalid_argument("l_max must be >= 1");
    if (t.r_max < 1) throw std::invalid_argument("r_max must be >= 1");
    if (t.i_max < 1) throw std::invalid_argument("i_max must be >= 1");
}

std::size_t required_points(const DenseTruncation& t)
{
    validate(t);
    std::size_t needed = 1;
    for (int r = 2; r <= t.r_max; ++r)
        for (std::size_t i = 1; i <= t.i_max; ++i) needed = std::max(needed, stratum_points(r, i).back());
    return needed;
}

WeightTables WeightTables::defaults()
{
    return {[](int l) { return std::ldexp(1.0, -l); },
            [](int r, std::size_t i) { return r == 1 ? (i == 1 ? 1.0 : 0.0) : std::ldexp(1.0, -static_cast<int>(i)); }};
}

double dense_weight(int level, int r, double beta_l, double alpha_ir)
{
    return beta_l * alpha_ir * std::ldexp(1.0, -(level + 1 + r));
}

DenseMeasure dense_measure(const DenseTruncation& t, const PointSystem& system, const WeightTables& tables,
                           const SearchOptions& options, Execution mode)
{
    validate(t);
    if (system.size() < required_points(t))
        throw std::invalid_argument("point system has " + std::to_string(system.size()) + " points, truncation needs " +
                                    std::to_string(required_points(t)));

    std::vector<HullFamilyIndex> indices;
    std::vector<double> raw;
    const std::int64_t ks = std::int64_t{1} << (t.level + 1);
    for (std::int64_t k = 1; k <= ks; ++k)
        for (int l = 1; l <= t.l_max; ++l)
            for (int r = 1; r <= t.r_max; ++r)
                for (std::size_t i = 1; i <= std::min(t.i_max, stratum_size(r)); ++i) {
                    const SmoothCapParams cap{make_dyadic(t.level, k), l};
                    indices.push_back(make_hull_index(cap, r, i));
                    raw.push_back(dense_weight(t.level, r, tables.beta(l), tables.alpha(r, i)));
                }

    std::vector<BallHullBody> bodies(indices.size(), unit_ball(system.dim()));
    for_each_index(mode, indices.size(), [&](std::size_t a) { bodies[a] = hull_family_member(indices[a], system); });

    std::vector<std::string> ids;
    ids.reserve(indices.size());
    double total = 0.0;
    for (std::size_t a = 0; a < indices.size(); ++a) {
        const auto& x = indices[a];
        ids.push_back("dense(n=" + std::to_string(x.cap.index.level) + ",k=" + std::to_string(x.cap.index.k) +
                      ",l=" + std::to_string(x.cap.l) + ",r=" + std::to_string(x.r) + ",i=" + std::to_string(x.i) + ")");
        total += raw[a];
    }
    auto atoms = make_atoms(std::move(ids), std::move(bodies), raw, options, mode);
    return {DiscreteMeasure::normalized(std::move(atoms)), std::move(indices), 1.0 - total};
}

double closed_form_truncated_mass(const DenseTruncation& t)
{
    validate(t);
    const double betas = 1.0 - std::ldexp(1.0, -t.l_max);
    const double strata = 0.5 + (0.5 - std::ldexp(1.0, -t.r_max)) * (1.0 - std::ldexp(1.0, -static_cast<int>(t.i_max)));
    return 1.0 - betas * strata;
}

DiscreteMeasure dense_nu(const DenseMeasure& dense)
{
    return reweight_nu(dense.measure);
}

std::vector<PSample> sample_dense_P(const DenseMeasure& dense, const SamplerConfig& config, Execution mode)
{
    return sample_P_batch(dense_nu(dense), config, mode);
}

SmoothnessProbe probe_smoothness(const BallHullBody& body, Rng& rng, std::size_t directions)
{
    SmoothnessProbe probe;
    probe.positive_radii = body.min_radius() > 0.0;
    probe.gradient_defined = true;
    probe.curved = true;
    probe.polyhedral = true;

    const int n = body.dim();
    std::normal_distribution<double> normal(0.0, 1.0);
    auto random_unit = [&] {
        Vec v(n);
        for (int j = 0; j < n; ++j) v(j) = normal(rng);
        return Vec(v / v.norm());
    };

    constexpr double tie_gap = 1e-4;
    constexpr double step = 1e-7;
    while (probe.directions < directions) {
        const Vec u = random_unit();
        // best and runner-up support values
        double first = -std::numeric_limits<double>::infinity();
        double second = first;
        std::size_t active = 0;
        for (std::size_t i = 0; i < body.size(); ++i) {
            const double v = body.center(i).dot(u) + body.radius(i);
            if (v > first) {
                second = first;
                first = v;
                active = i;
            } else if (v > second) {
                second = v;
            }
        }
        // near a ridge between two balls; resample
        if (first - second < tie_gap) continue;
        ++probe.directions;

        const double r = body.radius(active);
        const Vec gradient = body.center(active) + r * u;
        Vec t = random_unit();
        t -= t.dot(u) * u;
        t.normalize();
        const double fd = (body.support(Vec(u + step * t)) - body.support(Vec(u - step * t))) / (2.0 * step);
        if (std::abs(fd - gradient.dot(t)) > 1e-6) probe.gradient_defined = false;
        if (r > 0.0)
            probe.polyhedral = false;
        else
            probe.curved = false;
    }
    return probe;
}

Fingerprint fingerprint(const BallHullBody& body, const SearchOptions& options)
{
    Fingerprint f;
    f.diameter = diameter(body);
    f.width = width(body, options);
    f.max_support = max_support(body);
    const auto grid = direction_grid(body.dim(), options.grid_size ? options.grid_size : default_grid_size(body.dim()));
    double sum = 0.0;
    for (std::size_t i = 0; i < grid->count; ++i) sum += body.support_unit((*grid)[i]);
    f.mean_support = sum / static_cast<double>(grid->count);
    return f;
}

bool same_fingerprint(const Fingerprint& a, const Fingerprint& b, double tol)
{
    return std::abs(a.diameter - b.diameter) <= tol && std::abs(a.width - b.width) <= tol &&
           std::abs(a.mean_support - b.mean_support) <= tol && std::abs(a.max_support - b.max_support) <= tol;
}

NearestResult nearest_in_family(const Body& target, const DenseTruncation& t, const PointSystem& system,
                                std::size_t budget, const SearchOptions& options)
{
    validate(t);
    const int n = dimension(target);
    if (n != system.dim()) throw GeometryError("target and point system differ in dimension");
    if (system.size() < required_points(t)) throw std::invalid_argument("point system too small for the truncation");
    const auto hull = as_ball_hull(target);
    if (diameter(hull) > 4.0 + 1e-9) throw GeometryError("target diameter exceeds 4");

    // Turn the target so its farthest generator lies on +e_n, the axis of every family member.
    std::size_t far = 0;
    for (std::size_t i = 1; i < hull.size(); ++i)
        if (hull.center(i).norm() + hull.radius(i) > hull.center(far).norm() + hull.radius(far)) far = i;
    Vec axis = Vec::Zero(n);
    axis(n - 1) = 1.0;
    const Vec far_point = hull.center(far);
    const Mat to_axis = far_point.norm() > 0.0 ? rotation_between(far_point, axis) : Mat(Mat::Identity(n, n));
    std::vector<Ball> turned;
    for (const auto& b : hull.balls()) turned.push_back({to_axis * b.center, b.radius});
    const BallHullBody aligned(turned);

    const double inradius = min_support(aligned, options);

    // Greedy score: |m - inradius| plus how far each target generator is from the nearest copy tip.
    struct Candidate {
        HullFamilyIndex index;
        double score;
    };
    std::vector<Candidate> candidates;
    const std::int64_t ks = std::int64_t{1} << (t.level + 1);
    for (std::int64_t k = 1; k <= ks; ++k)
        for (int l = 1; l <= t.l_max; ++l)
            for (int r = 1; r <= t.r_max; ++r)
                for (std::size_t i = 1; i <= std::min(t.i_max, stratum_size(r)); ++i) {
                    auto index = make_hull_index({make_dyadic(t.level, k), l}, r, i);
                    double score = std::abs(index.cap.index.m() - inradius) + std::ldexp(1.0, -l);
                    for (std::size_t g = 0; g < aligned.size(); ++g) {
                        const Vec c = aligned.center(g);
                        if (c.norm() <= index.cap.index.m()) continue;
                        double nearest = std::numeric_limits<double>::infinity();
                        for (auto p : index.points) {
                            nearest = std::min(nearest, (c - system.point(p)).norm());
                            nearest = std::min(nearest, (c + system.point(p)).norm());
                        }
                        score += nearest;
                    }
                    candidates.push_back({std::move(index), score});
                }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Candidate& a, const Candidate& b) { return a.score < b.score; });

    NearestResult best;
    best.rotation = to_axis.transpose();
    const Body aligned_body = aligned;
    for (const auto& c : candidates) {
        if (best.examined >= budget) break;
        const Body member = hull_family_member(c.index, system);
        const double d = hausdorff(aligned_body, member, options);
        ++best.examined;
        if (d < best.distance) {
            best.distance = d;
            best.index = c.index;
        }
    }
    return best;
}

} // namespace convmeasure
