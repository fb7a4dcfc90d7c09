#include "convmeasure/measure.hpp"

#include "convmeasure/haar.hpp"
#include "convmeasure/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>

namespace convmeasure {

double DyadicIndex::m() const
{
    return std::ldexp(static_cast<double>(k), -level);
}

DyadicIndex make_dyadic(int level, std::int64_t k)
{
    if (level < 0 || level > 60) throw std::invalid_argument("dyadic level must lie in [0, 60]");
    if (k < 1 || k > (std::int64_t{1} << (level + 1))) throw std::invalid_argument("dyadic k must lie in [1, 2^(level+1)]");
    return {level, k};
}

AtomFunctionals atom_functionals(const BallHullBody& body, const SearchOptions& options)
{
    AtomFunctionals f;
    f.diameter = diameter(body);
    f.width = width(body, options);
    f.alpha0 = thinness(f.diameter, f.width);
    return f;
}

DiscreteMeasure::DiscreteMeasure(std::vector<Atom> atoms) : atoms_(std::move(atoms))
{
    if (atoms_.empty()) throw std::invalid_argument("a discrete measure needs at least one atom");
    cumulative_.reserve(atoms_.size());
    double total = 0.0;
    for (const auto& a : atoms_) {
        if (!(a.weight >= 0.0) || !std::isfinite(a.weight)) throw std::invalid_argument("atom weights must be >= 0");
        total += a.weight;
        cumulative_.push_back(total);
    }
    if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("atom weights must sum to 1");
}

DiscreteMeasure DiscreteMeasure::normalized(std::vector<Atom> atoms)
{
    double total = 0.0;
    for (const auto& a : atoms) total += a.weight;
    if (!(total > 0.0)) throw std::invalid_argument("atom weights sum to zero");
    for (auto& a : atoms) a.weight /= total;
    return DiscreteMeasure(std::move(atoms));
}

std::vector<double> DiscreteMeasure::weights() const
{
    std::vector<double> w;
    w.reserve(atoms_.size());
    for (const auto& a : atoms_) w.push_back(a.weight);
    return w;
}

std::size_t DiscreteMeasure::draw(Rng& rng) const
{
    std::uniform_real_distribution<double> uniform(0.0, cumulative_.back());
    const double u = uniform(rng);
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    return std::min(static_cast<std::size_t>(it - cumulative_.begin()), atoms_.size() - 1);
}

std::vector<Atom> make_atoms(std::vector<std::string> ids, std::vector<BallHullBody> bodies,
                             const std::vector<double>& weights, const SearchOptions& options, Execution mode)
{
    if (ids.size() != bodies.size() || ids.size() != weights.size())
        throw std::invalid_argument("atom ids, bodies and weights differ in length");
    std::vector<AtomFunctionals> f(bodies.size());
    SearchOptions inner = options;
    inner.execution = Execution::serial;
    for_each_index(mode, bodies.size(), [&](std::size_t i) { f[i] = atom_functionals(bodies[i], inner); });

    std::vector<Atom> atoms;
    atoms.reserve(bodies.size());
    for (std::size_t i = 0; i < bodies.size(); ++i)
        atoms.push_back({std::move(ids[i]), std::move(bodies[i]), weights[i], f[i]});
    return atoms;
}

std::vector<DyadicBody> dyadic_family(int level, int dim)
{
    if (level < 0 || level > 24) throw std::invalid_argument("dyadic level must lie in [0, 24]");
    const std::int64_t count = std::int64_t{1} << (level + 1);
    std::vector<DyadicBody> family;
    family.reserve(static_cast<std::size_t>(count));
    for (std::int64_t k = 1; k <= count; ++k) {
        const auto index = make_dyadic(level, k);
        family.push_back({index, cap_body(dim, index.m())});
    }
    return family;
}

DiscreteMeasure base_measure_mu(int level, int dim, const SearchOptions& options, Execution mode)
{
    auto family = dyadic_family(level, dim);
    std::vector<std::string> ids;
    std::vector<BallHullBody> bodies;
    for (auto& member : family) {
        ids.push_back("cap(n=" + std::to_string(member.index.level) + ",k=" + std::to_string(member.index.k) + ")");
        bodies.push_back(std::move(member.body));
    }
    const std::vector<double> weights(bodies.size(), std::ldexp(1.0, -(level + 1)));
    return DiscreteMeasure(make_atoms(std::move(ids), std::move(bodies), weights, options, mode));
}

double width_density(double width)
{
    if (!(width >= 0.0)) throw std::invalid_argument("width must be >= 0");
    return 4.0 / ((width + 4.0) * (width + 4.0));
}

DiscreteMeasure reweight_nu(const DiscreteMeasure& mu)
{
    auto atoms = mu.atoms();
    for (auto& a : atoms) a.weight *= width_density(a.functionals.width);
    return DiscreteMeasure::normalized(std::move(atoms));
}

double tau(double t)
{
    if (!(t >= 0.5 && t < 1.0)) throw std::domain_error("tau: t must lie in [1/2, 1)");
    return 4.0 / t - 4.0;
}

double tau_inverse(double w)
{
    if (!(w > 0.0 && w <= 4.0)) throw std::domain_error("tau_inverse: w must lie in (0, 4]");
    return 4.0 / (w + 4.0);
}

double ScaleDistribution::sample(Rng& rng) const
{
    if (kind == Kind::exponential) {
        std::exponential_distribution<double> exponential(1.0);
        double a = 0.0;
        while (!(a > 0.0)) a = exponential(rng);
        return a;
    }
    std::uniform_real_distribution<double> uniform(0.0, 2.0);
    double a = 0.0;
    while (!(a > 0.0)) a = uniform(rng);
    return a;
}

std::string ScaleDistribution::name() const
{
    return kind == Kind::exponential ? "exp" : "unif";
}

ScaleDistribution ScaleDistribution::parse(const std::string& name)
{
    if (name == "exp") return {Kind::exponential};
    if (name == "unif") return {Kind::uniform};
    throw std::invalid_argument("unknown scale distribution '" + name + "' (expected exp or unif)");
}

void validate(const SamplerConfig& config)
{
    if (config.level < 0 || config.level > 24) throw std::invalid_argument("level must lie in [0, 24]");
    if (config.dim < 2) throw std::invalid_argument("dimension must be >= 2");
    if (!(config.sigma > 0.0) || !std::isfinite(config.sigma)) throw std::invalid_argument("sigma must be positive");
}

NuDraw sample_nu01(const DiscreteMeasure& measure, int dim, Rng& rng)
{
    const auto atom = measure.draw(rng);
    const auto& base = measure.atom(atom).body;
    if (base.dim() != dim) throw GeometryError("measure atoms do not match the requested dimension");
    return {TransformedBody(sample_rotation(dim, rng), 1.0, base), atom};
}

TransformedBody phi4_apply(const TransformedBody& base, double alpha, bool check, const SearchOptions& options)
{
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw GeometryError("phi4: alpha must be positive");
    if (check) {
        const double distance = distance_to_unit_ball(base, options);
        if (std::abs(distance - 1.0) > 1e-6) throw GeometryError("phi4: base body is not at distance 1 from B_E");
    }
    return TransformedBody(base.rotation(), base.scale() * alpha, base.base());
}

DecomposedBody phi4_invert(const Body& scaled_body, const SearchOptions& options)
{
    const double d = diameter(scaled_body);
    const double w = width(scaled_body, options);
    const double alpha0 = thinness(d, w);
    if (alpha0 >= 1.0) throw GeometryError("phi4_invert: flat body (thinness 1)");

    const double high = max_support(scaled_body);
    const double low = min_support(scaled_body, options);
    const double alpha_prime = std::max(std::abs(high - 1.0), std::abs(1.0 - low));

    // distance of scaled_body / c to B_E, from the support range [low, high]
    auto base_distance = [&](double c) { return std::max(std::abs(high / c - 1.0), std::abs(1.0 - low / c)); };

    double alpha = 0.0;
    const double boundary = 2.0 * alpha0 - 1.0;
    if (std::abs(alpha_prime - boundary) <= 1e-9) {
        alpha = alpha0;
    } else {
        std::vector<double> candidates;
        const double outer = 0.5 * (alpha_prime + 1.0);
        if (outer >= alpha0) candidates.push_back(outer);
        const double inner = alpha0 * (alpha_prime - 1.0) / (2.0 * (alpha0 - 1.0));
        if (inner > 0.0 && inner <= alpha0) candidates.push_back(inner);
        if (candidates.empty()) throw GeometryError("phi4_invert: no consistent scale");
        alpha = *std::min_element(candidates.begin(), candidates.end(), [&](double a, double b) {
            return std::abs(base_distance(a) - 1.0) < std::abs(base_distance(b) - 1.0);
        });
    }
    if (!(alpha > 0.0) || std::abs(base_distance(alpha) - 1.0) > 1e-6)
        throw GeometryError("phi4_invert: recovered base is not at distance 1 from B_E");

    const int n = dimension(scaled_body);
    auto base = [&] {
        if (const auto* t = std::get_if<TransformedBody>(&scaled_body))
            return TransformedBody(t->rotation(), 1.0, scaled(t->base(), t->scale() / alpha));
        return TransformedBody(Mat::Identity(n, n), 1.0, scaled(as_ball_hull(scaled_body), 1.0 / alpha));
    }();
    DecomposedBody out{std::move(base), alpha, alpha0, alpha_prime};
    return out;
}

double truncated_normal_cdf(double c, double sigma)
{
    if (!(sigma > 0.0)) throw std::domain_error("truncated_normal_cdf: sigma must be positive");
    if (!(c >= 0.5 && c <= 1.0)) throw std::domain_error("truncated_normal_cdf: c must lie in [1/2, 1]");
    const double low = normal_cdf(0.0);
    return (normal_cdf((c - 0.5) / (0.5 * sigma)) - low) / (normal_cdf(1.0 / sigma) - low);
}

double acceptance_probability(double alpha0, double sigma)
{
    const double x = 2.0 * alpha0 - 1.0;
    return std::exp(-x * x / (2.0 * sigma * sigma));
}

DiscreteMeasure kernel_reweight(const DiscreteMeasure& nu, double sigma)
{
    auto atoms = nu.atoms();
    for (auto& a : atoms) a.weight *= acceptance_probability(a.functionals.alpha0, sigma);
    return DiscreteMeasure::normalized(std::move(atoms));
}

PSample sample_P(const DiscreteMeasure& nu, const SamplerConfig& config, Rng& rng)
{
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    for (std::size_t proposals = 1;; ++proposals) {
        const auto atom = nu.draw(rng);
        Mat rotation = sample_rotation(config.dim, rng);
        const double alpha = config.scale.sample(rng);
        const double alpha0 = nu.atom(atom).functionals.alpha0;
        if (uniform(rng) < acceptance_probability(alpha0, config.sigma))
            return {TransformedBody(std::move(rotation), alpha, nu.atom(atom).body), atom, alpha, alpha0, proposals};
    }
}

std::vector<PSample> sample_P_batch(const DiscreteMeasure& nu, const SamplerConfig& config, Execution mode)
{
    validate(config);
    std::vector<std::optional<PSample>> slots(config.count);
    for_each_index(mode, config.count, [&](std::size_t i) {
        auto rng = stream(config.seed, i);
        slots[i] = sample_P(nu, config, rng);
    });
    std::vector<PSample> out;
    out.reserve(slots.size());
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

double acceptance_rate(const std::vector<PSample>& samples)
{
    std::size_t proposals = 0;
    for (const auto& s : samples) proposals += s.proposals;
    return proposals ? static_cast<double>(samples.size()) / static_cast<double>(proposals) : 0.0;
}

PullbackSample pullback_sample_general(const DiscreteMeasure& nu, const SamplerConfig& config, Rng& rng,
                                       const SearchOptions& options)
{
    const auto p = sample_P(nu, config, rng);
    std::normal_distribution<double> normal(0.0, 1.0);
    Vec offset(config.dim);
    for (Eigen::Index j = 0; j < offset.size(); ++j) offset(j) = normal(rng);

    PullbackSample out{translated(p.body.materialize(), offset), unit_ball(config.dim), offset, p.atom, p.alpha0, 0.0};
    out.symmetrized = std::get<BallHullBody>(minkowski_symmetrize(out.general));
    out.alpha0_symmetrized = thinness(out.symmetrized, options);
    return out;
}

std::vector<PullbackSample> pullback_batch(const DiscreteMeasure& nu, const SamplerConfig& config,
                                           const SearchOptions& options, Execution mode)
{
    validate(config);
    SearchOptions inner = options;
    inner.execution = Execution::serial;
    std::vector<std::optional<PullbackSample>> slots(config.count);
    for_each_index(mode, config.count, [&](std::size_t i) {
        auto rng = stream(config.seed, i);
        slots[i] = pullback_sample_general(nu, config, rng, inner);
    });
    std::vector<PullbackSample> out;
    out.reserve(slots.size());
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

} // namespace convmeasure
