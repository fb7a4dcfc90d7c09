#pragma once

#include "convmeasure/geometry.hpp"
#include "convmeasure/measure.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

namespace convmeasure {

/// Cap body smoothed at level l: end balls of radius m / 2^l.
struct SmoothCapParams {
    DyadicIndex index;
    int l = 1;

    double epsilon() const;
};

/// Hull of the ball of radius m at the origin and the balls of radius eps
/// centred at +-(2 - eps) e_n. Diameter 4, width 2m.
BallHullBody smooth_cap_body(const SmoothCapParams& params, int dim = 3);

/// Centrally symmetric point system P_1, -P_1, P_2, -P_2, ... in the closed
/// ball of radius 2 with P_1 = 2 e_n. Only P_i is stored; -P_i is implied.
class PointSystem {
public:
    PointSystem(std::vector<Vec> points, std::uint64_t seed, double separation);

    int dim() const { return static_cast<int>(points_.front().size()); }
    std::size_t size() const { return points_.size(); }
    /// 1-based, as in P_1, P_2, ...
    const Vec& point(std::size_t i) const;
    /// P_1, -P_1, P_2, -P_2, ...
    std::vector<Vec> all_points() const;
    std::uint64_t seed() const { return seed_; }
    double separation() const { return separation_; }

private:
    std::vector<Vec> points_;
    std::uint64_t seed_;
    double separation_;
};

/// Smallest gap between two pairwise distances of the point set (pairs of
/// distinct points only). Infinite for fewer than three points.
double min_distance_gap(const std::vector<Vec>& points);

/// Quasi-random points with a seeded shift; a candidate is rejected when it
/// would bring two pairwise distances within delta_dist of each other.
/// Throws std::runtime_error after too many rejections.
PointSystem generate_point_system(std::size_t count, std::uint64_t seed, double delta_dist = 1e-4, int dim = 3);

/// Rotation in the plane of two unit vectors taking `from` to `to`.
Mat rotation_between(const Vec& from, const Vec& to);

/// Image of `body` under the origin-fixing similarity sending P_1 to P_i.
BallHullBody similarity_copy(const BallHullBody& body, std::size_t i, const PointSystem& system);

/// L_i^r(l): i-th hull of r similarity copies of a smooth cap body.
struct HullFamilyIndex {
    SmoothCapParams cap;
    int r = 1;
    std::size_t i = 1;
    std::vector<std::size_t> points; ///< point indices of the copies, always starting with 1
};

/// Point indices of the i-th member (1-based) of stratum r. Stratum 1 holds
/// only {1}; for r >= 2 the tuple is {1} plus the i-th (r-1)-subset of
/// {2, 3, ...} in colexicographic order.
std::vector<std::size_t> stratum_points(int r, std::size_t i);

/// Number of members of stratum r (unbounded for r >= 2).
std::size_t stratum_size(int r);

HullFamilyIndex make_hull_index(const SmoothCapParams& cap, int r, std::size_t i);

/// Ball hull of all copies listed in the index. One copy must have |P| = 2.
BallHullBody hull_family_member(const HullFamilyIndex& index, const PointSystem& system);

struct DenseTruncation {
    int level = 6;
    int l_max = 6;
    int r_max = 3;
    std::size_t i_max = 16;
};

void validate(const DenseTruncation& truncation);

/// Largest point index any member of the truncation refers to.
std::size_t required_points(const DenseTruncation& truncation);

/// beta_l and alpha_i^r. Each must sum to 1 over its untruncated index.
struct WeightTables {
    std::function<double(int)> beta;
    std::function<double(int, std::size_t)> alpha;

    /// beta_l = 2^-l; alpha_i^r = 2^-i for r >= 2 and alpha_1^1 = 1, since
    /// stratum 1 has a single member.
    static WeightTables defaults();
};

/// beta_l alpha_i^r / 2^(level + 1 + r).
double dense_weight(int level, int r, double beta_l, double alpha_ir);

struct DenseMeasure {
    DiscreteMeasure measure;
    std::vector<HullFamilyIndex> indices; ///< parallel to measure.atoms()
    double truncated_mass = 0.0;          ///< 1 - total weight before renormalization
};

DenseMeasure dense_measure(const DenseTruncation& truncation, const PointSystem& system,
                           const WeightTables& tables = WeightTables::defaults(), const SearchOptions& options = {},
                           Execution mode = Execution::parallel);

/// Mass cut off by the truncation under the default tables:
/// 1 - (1 - 2^-l_max) (1/2 + (1/2 - 2^-r_max)(1 - 2^-i_max)).
double closed_form_truncated_mass(const DenseTruncation& truncation);

/// dense.measure with width_density applied to the measured widths.
DiscreteMeasure dense_nu(const DenseMeasure& dense);

/// sample_P_batch over dense_nu(dense).
std::vector<PSample> sample_dense_P(const DenseMeasure& dense, const SamplerConfig& config,
                                    Execution mode = Execution::parallel);

/// Differentiability and curvature proxy for the boundary of a ball hull.
struct SmoothnessProbe {
    bool positive_radii = false;   ///< every ball has radius > 0
    bool gradient_defined = false; ///< finite differences match the active ball's gradient
    bool curved = false;           ///< every probed direction is supported by a ball of radius > 0
    std::size_t directions = 0;

    bool smooth() const { return positive_radii && gradient_defined && curved; }
    /// No probed direction sees curvature: the support function looks piecewise linear.
    bool polyhedral = false;
};

SmoothnessProbe probe_smoothness(const BallHullBody& body, Rng& rng, std::size_t directions = 1000);

/// Congruence-invariant numbers used to spot-check that atoms differ.
struct Fingerprint {
    double diameter = 0.0;
    double width = 0.0;
    double mean_support = 0.0;
    double max_support = 0.0;
};

Fingerprint fingerprint(const BallHullBody& body, const SearchOptions& options = {});

bool same_fingerprint(const Fingerprint& a, const Fingerprint& b, double tol = 1e-9);

struct NearestResult {
    HullFamilyIndex index;
    Mat rotation;        ///< applied to the member to compare it with the target
    double distance = std::numeric_limits<double>::infinity();
    std::size_t examined = 0;
};

/// Best-effort search for a family member close to an O-symmetric target of
/// diameter <= 4. Candidates are ranked by a greedy match of target vertices
/// to copy tips and the first `budget` of them are measured; the returned
/// distance is an upper bound on the true minimum over the truncation.
NearestResult nearest_in_family(const Body& target, const DenseTruncation& truncation, const PointSystem& system,
                                std::size_t budget = 4096, const SearchOptions& options = {});

} // namespace convmeasure
