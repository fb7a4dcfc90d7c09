#include "convmeasure/geometry.hpp"

#include <cmath>
#include <string>

namespace convmeasure {

namespace {

void require_dim(int expected, Eigen::Index actual, const char* what)
{
    if (actual != expected)
        throw GeometryError(std::string(what) + ": dimension mismatch (expected " + std::to_string(expected) +
                            ", got " + std::to_string(actual) + ")");
}

} // namespace

BallHullBody::BallHullBody(const std::vector<Ball>& balls)
{
    if (balls.empty()) throw GeometryError("ball hull needs at least one ball");
    dim_ = static_cast<int>(balls.front().center.size());
    if (dim_ < 1) throw GeometryError("ball center has dimension 0");
    coords_.reserve(balls.size() * static_cast<std::size_t>(dim_));
    radii_.reserve(balls.size());
    for (const auto& b : balls) {
        require_dim(dim_, b.center.size(), "ball hull");
        if (!(b.radius >= 0.0) || !std::isfinite(b.radius)) throw GeometryError("ball radius must be finite and >= 0");
        if (!b.center.allFinite()) throw GeometryError("ball center must be finite");
        coords_.insert(coords_.end(), b.center.data(), b.center.data() + dim_);
        radii_.push_back(b.radius);
    }
}

Vec BallHullBody::center(std::size_t i) const
{
    return Eigen::Map<const Vec>(coords_.data() + i * static_cast<std::size_t>(dim_), dim_);
}

std::vector<Ball> BallHullBody::balls() const
{
    std::vector<Ball> out;
    out.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) out.push_back(ball(i));
    return out;
}

double BallHullBody::min_radius() const
{
    return *std::min_element(radii_.begin(), radii_.end());
}

std::size_t BallHullBody::active_ball(const double* u) const noexcept
{
    const auto n = static_cast<std::size_t>(dim_);
    std::size_t arg = 0;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < radii_.size(); ++i) {
        double v = radii_[i];
        for (std::size_t j = 0; j < n; ++j) v += coords_[i * n + j] * u[j];
        if (v > best) {
            best = v;
            arg = i;
        }
    }
    return arg;
}

double BallHullBody::support(const Vec& x) const
{
    require_dim(dim_, x.size(), "support");
    const double norm = x.norm();
    if (!(norm > 0.0)) throw GeometryError("support direction must be nonzero");
    const Vec u = x / norm;
    return norm * support_unit(u.data());
}

PolytopeBody::PolytopeBody(const std::vector<Vec>& vertices)
    : hull_([&] {
          if (vertices.empty()) throw GeometryError("polytope needs at least one vertex");
          std::vector<Ball> balls;
          balls.reserve(vertices.size());
          for (const auto& v : vertices) balls.push_back({v, 0.0});
          return BallHullBody(balls);
      }())
{
}

std::vector<Vec> PolytopeBody::vertices() const
{
    std::vector<Vec> out;
    out.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) out.push_back(vertex(i));
    return out;
}

TransformedBody::TransformedBody(Mat rotation, double scale, BallHullBody base)
    : rotation_(std::move(rotation)), scale_(scale), base_(std::move(base))
{
    if (rotation_.rows() != base_.dim() || rotation_.cols() != base_.dim())
        throw GeometryError("rotation size does not match the base body dimension");
    if (!is_rotation(rotation_, 1e-10)) throw GeometryError("rotation must be orthogonal with determinant +1");
    if (!(scale_ > 0.0) || !std::isfinite(scale_)) throw GeometryError("scale must be positive and finite");
}

double TransformedBody::support(const Vec& x) const
{
    require_dim(dim(), x.size(), "support");
    return scale_ * base_.support(rotation_.transpose() * x);
}

BallHullBody TransformedBody::materialize() const
{
    std::vector<Ball> balls;
    balls.reserve(base_.size());
    for (std::size_t i = 0; i < base_.size(); ++i)
        balls.push_back({scale_ * (rotation_ * base_.center(i)), scale_ * base_.radius(i)});
    return BallHullBody(balls);
}

int dimension(const Body& body)
{
    return std::visit([](const auto& b) { return b.dim(); }, body);
}

double support(const Body& body, const Vec& u)
{
    return std::visit([&](const auto& b) { return b.support(u); }, body);
}

BallHullBody as_ball_hull(const Body& body)
{
    if (const auto* hull = std::get_if<BallHullBody>(&body)) return *hull;
    if (const auto* poly = std::get_if<PolytopeBody>(&body)) return poly->as_ball_hull();
    return std::get<TransformedBody>(body).materialize();
}

bool has_symmetric_generators(const BallHullBody& body, double tol)
{
    for (std::size_t i = 0; i < body.size(); ++i) {
        const Vec c = body.center(i);
        bool found = false;
        for (std::size_t j = 0; j < body.size() && !found; ++j)
            found = (body.center(j) + c).lpNorm<Eigen::Infinity>() <= tol &&
                    std::abs(body.radius(j) - body.radius(i)) <= tol;
        if (!found) return false;
    }
    return true;
}

bool is_rotation(const Mat& q, double tol)
{
    if (q.rows() != q.cols() || q.rows() == 0) return false;
    const Mat gram = q.transpose() * q;
    if ((gram - Mat::Identity(q.rows(), q.cols())).lpNorm<Eigen::Infinity>() > tol) return false;
    return std::abs(q.determinant() - 1.0) <= tol;
}

BallHullBody unit_ball(int dim)
{
    if (dim < 1) throw GeometryError("dimension must be positive");
    return BallHullBody({{Vec::Zero(dim), 1.0}});
}

BallHullBody cap_body(int dim, double m)
{
    if (dim < 2) throw GeometryError("cap body needs dimension >= 2");
    if (!(m > 0.0)) throw GeometryError("cap body radius must be positive");
    Vec tip = Vec::Zero(dim);
    tip(dim - 1) = 2.0;
    return BallHullBody({{Vec::Zero(dim), m}, {tip, 0.0}, {-tip, 0.0}});
}

BallHullBody scaled(const BallHullBody& body, double factor)
{
    if (!(factor >= 0.0)) throw GeometryError("scale factor must be >= 0");
    auto balls = body.balls();
    for (auto& b : balls) {
        b.center *= factor;
        b.radius *= factor;
    }
    return BallHullBody(balls);
}

BallHullBody translated(const BallHullBody& body, const Vec& offset)
{
    require_dim(body.dim(), offset.size(), "translate");
    auto balls = body.balls();
    for (auto& b : balls) b.center += offset;
    return BallHullBody(balls);
}

BallHullBody hull_union(const std::vector<BallHullBody>& parts)
{
    std::vector<Ball> balls;
    for (const auto& p : parts) {
        auto bs = p.balls();
        balls.insert(balls.end(), bs.begin(), bs.end());
    }
    return BallHullBody(balls);
}

BallHullBody prune_contained(const BallHullBody& body)
{
    // Largest balls first, each tested only against balls already kept, so a
    // ball is never dropped in favour of one that was itself dropped.
    const auto balls = body.balls();
    std::vector<std::size_t> order(balls.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return balls[a].radius > balls[b].radius; });

    std::vector<std::size_t> kept_index;
    std::vector<bool> keep(balls.size(), false);
    for (auto i : order) {
        bool inside = false;
        for (std::size_t k = 0; k < kept_index.size() && !inside; ++k) {
            const auto& outer = balls[kept_index[k]];
            inside = (balls[i].center - outer.center).norm() + balls[i].radius - outer.radius <= 0.0;
        }
        if (!inside) {
            kept_index.push_back(i);
            keep[i] = true;
        }
    }
    std::vector<Ball> kept;
    for (std::size_t i = 0; i < balls.size(); ++i)
        if (keep[i]) kept.push_back(balls[i]);
    return BallHullBody(kept);
}

double width(const Body& body, const SearchOptions& options)
{
    const auto hull = as_ball_hull(body);
    auto breadth = [&hull](const double* u) { return hull.breadth_unit(u); };
    return std::max(0.0, minimize_on_sphere(hull.dim(), breadth, options).value);
}

double diameter(const Body& body)
{
    const auto hull = as_ball_hull(body);
    double best = 0.0;
    for (std::size_t i = 0; i < hull.size(); ++i)
        for (std::size_t j = i; j < hull.size(); ++j)
            best = std::max(best, (hull.center(i) - hull.center(j)).norm() + hull.radius(i) + hull.radius(j));
    return best;
}

double diameter_by_search(const Body& body, const SearchOptions& options)
{
    const auto hull = as_ball_hull(body);
    auto breadth = [&hull](const double* u) { return hull.breadth_unit(u); };
    return maximize_on_sphere(hull.dim(), breadth, options).value;
}

double thinness(double diameter, double width)
{
    if (!(diameter > 0.0)) throw GeometryError("thinness undefined for a body of diameter 0");
    if (!(width >= 0.0)) throw GeometryError("width must be >= 0");
    return diameter / (width + diameter);
}

double thinness(const Body& body, const SearchOptions& options)
{
    const double d = diameter(body);
    if (!(d > 0.0)) throw GeometryError("thinness undefined for a body of diameter 0");
    return thinness(d, width(body, options));
}

double hausdorff(const Body& a, const Body& b, const SearchOptions& options)
{
    if (dimension(a) != dimension(b)) throw GeometryError("hausdorff: dimension mismatch");
    const auto ha = as_ball_hull(a);
    const auto hb = as_ball_hull(b);
    auto gap = [&](const double* u) { return std::abs(ha.support_unit(u) - hb.support_unit(u)); };
    return maximize_on_sphere(ha.dim(), gap, options).value;
}

double min_support(const Body& body, const SearchOptions& options)
{
    const auto hull = as_ball_hull(body);
    auto h = [&hull](const double* u) { return hull.support_unit(u); };
    return minimize_on_sphere(hull.dim(), h, options).value;
}

double max_support(const Body& body)
{
    const auto hull = as_ball_hull(body);
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < hull.size(); ++i) best = std::max(best, hull.center(i).norm() + hull.radius(i));
    return best;
}

double distance_to_unit_ball(const Body& body, const SearchOptions& options)
{
    // h ranges continuously over [min h, max h] on the sphere
    const double high = max_support(body);
    const double low = min_support(body, options);
    return std::max(std::abs(high - 1.0), std::abs(1.0 - low));
}

BodyFunctionals functionals(const Body& body, const SearchOptions& options)
{
    BodyFunctionals f;
    f.diameter = diameter(body);
    f.width = width(body, options);
    f.alpha0 = thinness(f.diameter, f.width);
    f.dist_to_unit_ball = distance_to_unit_ball(body, options);
    return f;
}

double lemma1_distance(double alpha0, double alpha)
{
    if (!(alpha0 >= 0.5 && alpha0 < 1.0)) throw GeometryError("lemma1_distance: alpha0 must lie in [1/2, 1)");
    if (!(alpha >= 0.0)) throw GeometryError("lemma1_distance: alpha must be >= 0");
    if (alpha >= alpha0) return 2.0 * alpha - 1.0;
    return 2.0 * alpha + 1.0 - 2.0 * alpha / alpha0;
}

namespace {

BallHullBody symmetrize_hull(const BallHullBody& body)
{
    std::vector<Ball> balls;
    balls.reserve(body.size() * body.size());
    for (std::size_t i = 0; i < body.size(); ++i)
        for (std::size_t j = 0; j < body.size(); ++j)
            balls.push_back({0.5 * (body.center(i) - body.center(j)), 0.5 * (body.radius(i) + body.radius(j))});
    return prune_contained(BallHullBody(balls));
}

} // namespace

Body minkowski_symmetrize(const Body& body)
{
    if (const auto* hull = std::get_if<BallHullBody>(&body)) return symmetrize_hull(*hull);
    if (const auto* poly = std::get_if<PolytopeBody>(&body)) {
        std::vector<Vec> vertices;
        vertices.reserve(poly->size() * poly->size());
        for (std::size_t i = 0; i < poly->size(); ++i)
            for (std::size_t j = 0; j < poly->size(); ++j) vertices.push_back(0.5 * (poly->vertex(i) - poly->vertex(j)));
        return PolytopeBody(vertices);
    }
    const auto& t = std::get<TransformedBody>(body);
    return TransformedBody(t.rotation(), t.scale(), symmetrize_hull(t.base()));
}

} // namespace convmeasure
