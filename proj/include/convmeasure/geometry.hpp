#pragma once

#include "convmeasure/sphere_search.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <variant>
#include <vector>

namespace convmeasure {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Invalid body, direction, or functional argument.
class GeometryError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct Ball {
    Vec center;
    double radius = 0.0;
};

/// Convex hull of finitely many balls. Radius-0 balls are points, so segments
/// and polytopes live in the same representation.
///
/// The support function is h(x) = max_i (<c_i, x> + r_i |x|).
class BallHullBody {
public:
    explicit BallHullBody(const std::vector<Ball>& balls);

    int dim() const { return dim_; }
    std::size_t size() const { return radii_.size(); }
    Vec center(std::size_t i) const;
    double radius(std::size_t i) const { return radii_[i]; }
    Ball ball(std::size_t i) const { return {center(i), radius(i)}; }
    std::vector<Ball> balls() const;
    const std::vector<double>& radii() const { return radii_; }
    double min_radius() const;

    /// Support value at a unit direction; no dimension check.
    double support_unit(const double* u) const noexcept
    {
        const auto n = static_cast<std::size_t>(dim_);
        const double* c = coords_.data();
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < radii_.size(); ++i, c += n) {
            double v = radii_[i];
            for (std::size_t j = 0; j < n; ++j) v += c[j] * u[j];
            if (v > best) best = v;
        }
        return best;
    }

    /// h(u) + h(-u) at a unit direction, in one pass over the balls.
    double breadth_unit(const double* u) const noexcept
    {
        const auto n = static_cast<std::size_t>(dim_);
        const double* c = coords_.data();
        double plus = -std::numeric_limits<double>::infinity();
        double minus = plus;
        for (std::size_t i = 0; i < radii_.size(); ++i, c += n) {
            double d = 0.0;
            for (std::size_t j = 0; j < n; ++j) d += c[j] * u[j];
            plus = std::max(plus, d + radii_[i]);
            minus = std::max(minus, radii_[i] - d);
        }
        return plus + minus;
    }

    /// Index of the ball attaining the support at a unit direction.
    std::size_t active_ball(const double* u) const noexcept;

    /// Homogeneous support function, any nonzero x of the right dimension.
    double support(const Vec& x) const;

private:
    int dim_ = 0;
    std::vector<double> coords_; // size() * dim, ball-major
    std::vector<double> radii_;
};

/// Convex hull of a vertex list.
class PolytopeBody {
public:
    explicit PolytopeBody(const std::vector<Vec>& vertices);

    int dim() const { return hull_.dim(); }
    std::size_t size() const { return hull_.size(); }
    Vec vertex(std::size_t i) const { return hull_.center(i); }
    std::vector<Vec> vertices() const;

    double support_unit(const double* u) const noexcept { return hull_.support_unit(u); }
    double support(const Vec& x) const { return hull_.support(x); }

    /// Same body with every vertex as a radius-0 ball.
    const BallHullBody& as_ball_hull() const { return hull_; }

private:
    BallHullBody hull_;
};

/// scale * rotation * base, with rotation in SO(n) and scale > 0.
class TransformedBody {
public:
    TransformedBody(Mat rotation, double scale, BallHullBody base);

    int dim() const { return base_.dim(); }
    const Mat& rotation() const { return rotation_; }
    double scale() const { return scale_; }
    const BallHullBody& base() const { return base_; }

    /// scale * h_base(rotation^T x).
    double support(const Vec& x) const;

    /// The same set written out as a plain ball hull.
    BallHullBody materialize() const;

private:
    Mat rotation_;
    double scale_;
    BallHullBody base_;
};

using Body = std::variant<BallHullBody, PolytopeBody, TransformedBody>;

int dimension(const Body& body);

/// Throws GeometryError on dimension mismatch or a zero direction.
double support(const Body& body, const Vec& u);

/// Every representation as an explicit ball hull with the same support function.
BallHullBody as_ball_hull(const Body& body);

/// True when (-c, r) is present for every ball (c, r), within tol.
bool has_symmetric_generators(const BallHullBody& body, double tol = 1e-12);

bool is_rotation(const Mat& q, double tol = 1e-10);

BallHullBody unit_ball(int dim);

/// Hull of the ball of radius m about the origin and the segment [-2 e_n, 2 e_n].
BallHullBody cap_body(int dim, double m);

BallHullBody scaled(const BallHullBody& body, double factor);
BallHullBody translated(const BallHullBody& body, const Vec& offset);

/// Hull of the union of the balls of several hulls.
BallHullBody hull_union(const std::vector<BallHullBody>& parts);

/// Drops balls contained in another ball; support function unchanged.
BallHullBody prune_contained(const BallHullBody& body);

/// Diameter, width, thinness and distance to the unit ball of one body.
struct BodyFunctionals {
    double diameter = 0.0;
    double width = 0.0;
    double alpha0 = 0.0;
    double dist_to_unit_ball = 0.0;
};

/// min over unit u of h(u) + h(-u), by sphere search. Zero for flat bodies.
double width(const Body& body, const SearchOptions& options = {});

/// Exact: max over ball pairs of |c_i - c_j| + r_i + r_j.
double diameter(const Body& body);

/// max over unit u of h(u) + h(-u), by sphere search. Cross-check for diameter().
double diameter_by_search(const Body& body, const SearchOptions& options = {});

/// d / (w + d). A flat body reports 1; a single point is an error.
double thinness(const Body& body, const SearchOptions& options = {});
double thinness(double diameter, double width);

/// sup over unit u of |h_a(u) - h_b(u)|.
double hausdorff(const Body& a, const Body& b, const SearchOptions& options = {});

/// Hausdorff distance to the Euclidean unit ball: max(|R - 1|, |1 - min h|)
/// with R = max h computed exactly and min h by sphere search.
double distance_to_unit_ball(const Body& body, const SearchOptions& options = {});

/// min over unit u of h(u).
double min_support(const Body& body, const SearchOptions& options = {});

/// max over unit u of h(u), exact for ball hulls: max_i |c_i| + r_i.
double max_support(const Body& body);

BodyFunctionals functionals(const Body& body, const SearchOptions& options = {});

/// Closed form of delta^h(alpha K, B_E) for K at distance 1 from B_E with
/// thinness alpha0: 2a - 1 when a >= alpha0, else 2a + 1 - 2a / alpha0.
double lemma1_distance(double alpha0, double alpha);

/// (K + (-K)) / 2. Support function (h(u) + h(-u)) / 2.
Body minkowski_symmetrize(const Body& body);

} // namespace convmeasure
