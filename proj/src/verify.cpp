#include "convmeasure/verify.hpp"

#include "convmeasure/haar.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace convmeasure {

using nlohmann::json;

WeightedCdf exact_weighted_cdf(const DiscreteMeasure& measure, const std::function<double(const Atom&)>& functional)
{
    std::vector<double> values;
    std::vector<double> weights;
    values.reserve(measure.size());
    weights.reserve(measure.size());
    for (const auto& a : measure.atoms()) {
        values.push_back(functional(a));
        weights.push_back(a.weight);
    }
    return WeightedCdf(values, weights);
}

double atom_width(const Atom& atom)
{
    return atom.functionals.width;
}

double atom_alpha0(const Atom& atom)
{
    return atom.functionals.alpha0;
}

double uniform_width_cdf(double x)
{
    return std::clamp(x / 4.0, 0.0, 1.0);
}

double uniform_alpha0_cdf(double c)
{
    return std::clamp(2.0 * (c - 0.5), 0.0, 1.0);
}

double sampled_threshold(std::size_t n, int level)
{
    return ks_critical_value(n) + 3.0 * std::ldexp(1.0, -level);
}

namespace {

constexpr std::uint64_t kAlternateSeed = 1000003;

SearchOptions serial(SearchOptions options)
{
    options.execution = Execution::serial;
    return options;
}

json base_params(const VerifyOptions& o)
{
    return {{"seed", o.seed}, {"level", o.level}, {"dim", o.dim}};
}

double sampled_limit(const VerifyOptions& o, std::size_t n)
{
    return o.threshold.value_or(sampled_threshold(n, o.level));
}

double truncnorm_clamped(double c, double sigma)
{
    return truncated_normal_cdf(std::clamp(c, 0.5, 1.0), sigma);
}

double max_of(const std::vector<double>& v)
{
    return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

SamplerConfig sampler(const VerifyOptions& o, double sigma, ScaleDistribution scale, std::uint64_t seed)
{
    SamplerConfig c;
    c.level = o.level;
    c.dim = o.dim;
    c.sigma = sigma;
    c.scale = scale;
    c.seed = seed;
    c.count = o.count;
    return c;
}

std::vector<double> alpha0_values(const std::vector<PSample>& samples)
{
    std::vector<double> out;
    out.reserve(samples.size());
    for (const auto& s : samples) out.push_back(s.alpha0);
    return out;
}

ScaleDistribution other_scale(ScaleDistribution s)
{
    s.kind = s.kind == ScaleDistribution::Kind::exponential ? ScaleDistribution::Kind::uniform
                                                              : ScaleDistribution::Kind::exponential;
    return s;
}

// KS against the target plus agreement with the exact atom-level law.
void add_sampled(VerificationSuite& suite, const VerifyOptions& o, const std::string& name, const std::vector<double>& values,
                 const Cdf& target, const WeightedCdf& exact, json params)
{
    const EmpiricalCdf ecdf(values);
    suite.reports.push_back(make_report(name, values.size(), ks_statistic(ecdf, target), sampled_limit(o, values.size()),
                                        params, ecdf.table(o.ecdf_points)));
    const Cdf exact_cdf = [&exact](double x) { return exact(x); };
    params["reference"] = "exact atom-level law";
    suite.reports.push_back(make_report(name + ".vs-exact", values.size(), ks_statistic(ecdf, exact_cdf),
                                        3.0 / std::sqrt(static_cast<double>(values.size())), std::move(params)));
}

} // namespace

const std::vector<std::string>& suite_names()
{
    static const std::vector<std::string> names{"lemma1", "lemma2", "lemma3", "thm1", "thm2", "cor1", "haar", "thm3"};
    return names;
}

VerificationSuite run_suite(const std::string& name, const VerifyOptions& options)
{
    if (name == "lemma1") return verify_lemma1(options);
    if (name == "lemma2") return verify_lemma2(options);
    if (name == "lemma3") return verify_lemma3(options);
    if (name == "thm1") return verify_thm1(options);
    if (name == "thm2") return verify_thm2(options);
    if (name == "cor1") return verify_cor1(options);
    if (name == "haar") return verify_haar(options);
    if (name == "thm3") return verify_thm3(options);
    throw std::invalid_argument("unknown suite '" + name + "'");
}

VerificationSuite verify_lemma1(const VerifyOptions& o)
{
    constexpr std::size_t trials = 100;
    const auto inner = serial(o.search);
    const auto ball = unit_ball(o.dim);
    std::vector<double> errors(trials);
    for_each_index(o.execution, trials, [&](std::size_t i) {
        auto rng = stream(o.seed, i);
        std::uniform_real_distribution<double> uniform(0.0, 1.0);
        const double m = 2.0 * (1.0 - uniform(rng));
        const double alpha = 3.0 * uniform(rng);
        const double numeric = hausdorff(scaled(cap_body(o.dim, m), alpha), ball, inner);
        const double closed = lemma1_distance(4.0 / (2.0 * m + 4.0), alpha);
        errors[i] = std::abs(numeric - closed);
    });
    VerificationSuite suite{"lemma1", {}};
    suite.reports.push_back(make_report("scaled-distance.closed-form", trials, max_of(errors), 1e-6,
                                        {{"seed", o.seed}, {"dim", o.dim}, {"statistic", "max abs error"}}));
    return suite;
}

VerificationSuite verify_lemma2(const VerifyOptions& o)
{
    const auto mu = base_measure_mu(o.level, o.dim, o.search, o.execution);
    const auto cdf = exact_weighted_cdf(mu, atom_width);
    const std::vector<double> checkpoints{0.5, 1.0, 2.0, 3.0, 4.0};
    json values = json::array();
    double worst = 0.0;
    for (double x : checkpoints) {
        worst = std::max(worst, std::abs(cdf(x) - uniform_width_cdf(x)));
        values.push_back({x, cdf(x)});
    }
    auto params = base_params(o);
    params["checkpoints"] = values;
    params["statistic"] = "max abs error at checkpoints";

    VerificationSuite suite{"lemma2", {}};
    const double resolution = std::ldexp(1.0, -o.level);
    suite.reports.push_back(make_report("width.checkpoints", mu.size(), worst, resolution, params, cdf.table(o.ecdf_points)));
    params.erase("checkpoints");
    params["statistic"] = "sup distance";
    suite.reports.push_back(make_report("width.sup", mu.size(), cdf.sup_distance(uniform_width_cdf), resolution, params));
    return suite;
}

VerificationSuite verify_thm1(const VerifyOptions& o)
{
    const auto nu = reweight_nu(base_measure_mu(o.level, o.dim, o.search, o.execution));
    const auto cdf = exact_weighted_cdf(nu, atom_alpha0);

    VerificationSuite suite{"thm1", {}};
    json values = json::array();
    double worst = 0.0;
    for (int j = 1; j <= 9; ++j) {
        const double c = 0.5 + 0.05 * j;
        worst = std::max(worst, std::abs(cdf(c) - uniform_alpha0_cdf(c)));
        values.push_back({c, cdf(c)});
    }
    auto params = base_params(o);
    params["checkpoints"] = values;
    params["statistic"] = "max abs error at checkpoints";
    suite.reports.push_back(make_report("alpha0.uniform.checkpoints", nu.size(), worst, std::ldexp(1.0, -7), params,
                                        cdf.table(o.ecdf_points)));
    params.erase("checkpoints");
    params["statistic"] = "sup distance";
    suite.reports.push_back(
        make_report("alpha0.uniform.exact", nu.size(), cdf.sup_distance(uniform_alpha0_cdf), 3.0 * std::ldexp(1.0, -o.level), params));

    // Monte Carlo: atom by weight, Haar rotation
    std::vector<double> alpha0(o.count);
    std::vector<std::size_t> atoms(o.count);
    for_each_index(o.execution, o.count, [&](std::size_t i) {
        auto rng = stream(o.seed, i);
        const auto draw = sample_nu01(nu, o.dim, rng);
        atoms[i] = draw.atom;
        alpha0[i] = nu.atom(draw.atom).functionals.alpha0;
    });
    params = base_params(o);
    params["count"] = o.count;
    add_sampled(suite, o, "alpha0.uniform.sampled", alpha0, uniform_alpha0_cdf, cdf, params);

    // the emitted bodies themselves: on the unit sphere, thinness as tabulated
    const std::size_t spot = std::min<std::size_t>(o.count, 200);
    std::vector<double> sphere_error(spot);
    std::vector<double> thinness_error(spot);
    const auto inner = serial(o.search);
    for_each_index(o.execution, spot, [&](std::size_t i) {
        auto rng = stream(o.seed, i);
        const auto draw = sample_nu01(nu, o.dim, rng);
        sphere_error[i] = std::abs(distance_to_unit_ball(draw.body, inner) - 1.0);
        thinness_error[i] = std::abs(thinness(draw.body, inner) - alpha0[i]);
    });
    params.erase("count");
    params["statistic"] = "max abs error";
    suite.reports.push_back(make_report("sample.distance-to-unit-ball", spot, max_of(sphere_error), 1e-6, params));
    suite.reports.push_back(make_report("sample.thinness-invariance", spot, max_of(thinness_error), 1e-9, params));
    return suite;
}

VerificationSuite verify_thm2(const VerifyOptions& o)
{
    const auto nu = reweight_nu(base_measure_mu(o.level, o.dim, o.search, o.execution));
    const double sigma = o.sigma;
    const Cdf target = [sigma](double c) { return truncnorm_clamped(c, sigma); };
    const auto exact = exact_weighted_cdf(kernel_reweight(nu, sigma), atom_alpha0);

    VerificationSuite suite{"thm2", {}};
    auto params = base_params(o);
    params["sigma"] = sigma;
    params["statistic"] = "sup distance";
    suite.reports.push_back(make_report("alpha0.truncnorm.exact", nu.size(), exact.sup_distance(target),
                                        3.0 * std::ldexp(1.0, -o.level), params, exact.table(o.ecdf_points)));

    const auto first = sample_P_batch(nu, sampler(o, sigma, o.scale, o.seed), o.execution);
    const auto first_values = alpha0_values(first);
    params = base_params(o);
    params["sigma"] = sigma;
    params["scale"] = o.scale.name();
    params["count"] = o.count;
    params["acceptance_rate"] = acceptance_rate(first);
    add_sampled(suite, o, "alpha0.truncnorm.sampled." + o.scale.name(), first_values, target, exact, params);

    const auto swapped = other_scale(o.scale);
    const auto second = sample_P_batch(nu, sampler(o, sigma, swapped, o.seed + kAlternateSeed), o.execution);
    const auto second_values = alpha0_values(second);
    params["scale"] = swapped.name();
    params["seed"] = o.seed + kAlternateSeed;
    params["acceptance_rate"] = acceptance_rate(second);
    add_sampled(suite, o, "alpha0.truncnorm.sampled." + swapped.name(), second_values, target, exact, params);

    params = base_params(o);
    params["sigma"] = sigma;
    params["scales"] = {o.scale.name(), swapped.name()};
    params["seeds"] = {o.seed, o.seed + kAlternateSeed};
    params["count"] = o.count;
    params["statistic"] = "two-sample KS";
    suite.reports.push_back(make_report("alpha0.scale-independence", o.count, ks_two_sample(first_values, second_values),
                                        ks_two_sample_critical_value(o.count, o.count), params));
    return suite;
}

VerificationSuite verify_lemma3(const VerifyOptions& o)
{
    constexpr std::size_t trials = 1000;
    constexpr std::size_t directions = 1000;
    const auto inner = serial(o.search);
    std::vector<double> alpha_error(trials);
    std::vector<double> base_error(trials);
    std::vector<double> roundtrip_error(trials);
    for_each_index(o.execution, trials, [&](std::size_t i) {
        auto rng = stream(o.seed, i);
        std::uniform_real_distribution<double> uniform(0.0, 1.0);
        const double m = 2.0 * (1.0 - uniform(rng));
        const Mat rotation = sample_rotation(o.dim, rng);
        const double alpha = 3.0 * (1.0 - uniform(rng));
        const TransformedBody body(rotation, 1.0, cap_body(o.dim, m));
        const auto image = phi4_apply(body, alpha, true, inner);
        const auto recovered = phi4_invert(image, inner);
        const auto again = phi4_apply(recovered.base, recovered.alpha, false);

        alpha_error[i] = std::abs(alpha - recovered.alpha);
        std::normal_distribution<double> normal(0.0, 1.0);
        double worst_base = 0.0;
        double worst_again = 0.0;
        Vec u(o.dim);
        for (std::size_t k = 0; k < directions; ++k) {
            for (int j = 0; j < o.dim; ++j) u(j) = normal(rng);
            u.normalize();
            worst_base = std::max(worst_base, std::abs(body.support(u) - recovered.base.support(u)));
            worst_again = std::max(worst_again, std::abs(image.support(u) - again.support(u)));
        }
        base_error[i] = worst_base;
        roundtrip_error[i] = worst_again;
    });
    json params = {{"seed", o.seed}, {"dim", o.dim}, {"directions", directions}, {"statistic", "max abs error"}};
    VerificationSuite suite{"lemma3", {}};
    suite.reports.push_back(make_report("decompose.scale", trials, max_of(alpha_error), 1e-9, params));
    suite.reports.push_back(make_report("decompose.base-support", trials, max_of(base_error), 1e-6, params));
    suite.reports.push_back(make_report("decompose.roundtrip-support", trials, max_of(roundtrip_error), 1e-9, params));
    return suite;
}

VerificationSuite verify_haar(const VerifyOptions& o)
{
    constexpr int n3 = 3;
    const std::size_t n = o.count;
    VerificationSuite suite{"haar", {}};

    const auto rotations = sample_rotations(n3, n, o.seed, o.execution);
    std::vector<double> membership(n);
    std::vector<double> coordinate(n);
    std::vector<double> trace(n);
    for_each_index(o.execution, n, [&](std::size_t i) {
        const Mat& q = rotations[i];
        const double orth = (q.transpose() * q - Mat::Identity(n3, n3)).cwiseAbs().maxCoeff();
        membership[i] = std::max(orth, std::abs(q.determinant() - 1.0));
        coordinate[i] = q(0, 0);
        trace[i] = q.trace();
    });
    json params = {{"seed", o.seed}, {"dim", n3}, {"statistic", "max abs error"}};
    suite.reports.push_back(make_report("rotation.membership", n, max_of(membership), 1e-12, params));

    const EmpiricalCdf first_column(coordinate);
    params["statistic"] = "KS vs uniform on [-1, 1]";
    const Cdf uniform_pm1 = [](double x) { return std::clamp(0.5 * (x + 1.0), 0.0, 1.0); };
    suite.reports.push_back(make_report("rotation.first-column", n, ks_statistic(first_column, uniform_pm1),
                                        o.threshold.value_or(ks_critical_value(n)), params,
                                        first_column.table(o.ecdf_points)));

    // left invariance: trace(R Q) for an independent batch against trace(Q)
    auto fixed_rng = stream(o.seed + kAlternateSeed, n);
    const Mat fixed = sample_rotation(n3, fixed_rng);
    const auto other = sample_rotations(n3, n, o.seed + kAlternateSeed, o.execution);
    std::vector<double> moved(n);
    for_each_index(o.execution, n, [&](std::size_t i) { moved[i] = (fixed * other[i]).trace(); });
    params["statistic"] = "two-sample KS";
    params["seeds"] = {o.seed, o.seed + kAlternateSeed};
    suite.reports.push_back(make_report("rotation.left-invariance", n, ks_two_sample(trace, moved),
                                        ks_two_sample_critical_value(n, n), params));
    params.erase("seeds");

    constexpr std::size_t pairs = 100;
    std::vector<double> equivariance(pairs);
    for_each_index(o.execution, pairs, [&](std::size_t i) {
        auto rng = stream(o.seed + 2 * kAlternateSeed, i);
        const Mat x = sample_gaussian_matrix(o.dim, rng);
        const Mat q = sample_rotation(o.dim, rng);
        equivariance[i] = (gram_schmidt_orthonormalize(q * x) - q * gram_schmidt_orthonormalize(x)).cwiseAbs().maxCoeff();
    });
    params["statistic"] = "max abs error";
    params["dim"] = o.dim;
    suite.reports.push_back(make_report("orthonormalize.equivariance", pairs, max_of(equivariance), 1e-10, params));

    // entries of the Gaussian matrices: mean 0, variance 1
    std::vector<double> entries(4 * n);
    for_each_index(o.execution, n, [&](std::size_t i) {
        auto rng = stream(o.seed + 3 * kAlternateSeed, i);
        const Mat x = sample_gaussian_matrix(2, rng);
        for (int k = 0; k < 4; ++k) entries[4 * i + k] = x(k % 2, k / 2);
    });
    const double mean = std::accumulate(entries.begin(), entries.end(), 0.0) / static_cast<double>(entries.size());
    double var = 0.0;
    for (double e : entries) var += (e - mean) * (e - mean);
    var /= static_cast<double>(entries.size() - 1);
    params["statistic"] = "max(|mean|, |variance - 1|)";
    params["dim"] = 2;
    params["mean"] = mean;
    params["variance"] = var;
    suite.reports.push_back(
        make_report("gaussian.moments", entries.size(), std::max(std::abs(mean), std::abs(var - 1.0)), 0.02, params));
    return suite;
}

VerificationSuite verify_cor1(const VerifyOptions& o)
{
    constexpr std::size_t polytopes = 100;
    const auto inner = serial(o.search);
    std::vector<double> d_error(polytopes);
    std::vector<double> w_error(polytopes);
    std::vector<double> a_error(polytopes);
    for_each_index(o.execution, polytopes, [&](std::size_t i) {
        auto rng = stream(o.seed, i);
        std::normal_distribution<double> normal(0.0, 1.0);
        const auto count = 4 + static_cast<std::size_t>(rng() % 7);
        std::vector<Vec> vertices(count, Vec(o.dim));
        for (auto& v : vertices)
            for (int j = 0; j < o.dim; ++j) v(j) = normal(rng);
        const Body polytope = PolytopeBody(vertices);
        const Body symmetric = minkowski_symmetrize(polytope);
        const double d0 = diameter(polytope);
        const double d1 = diameter(symmetric);
        const double w0 = width(polytope, inner);
        const double w1 = width(symmetric, inner);
        d_error[i] = std::abs(d0 - d1);
        w_error[i] = std::abs(w0 - w1);
        a_error[i] = std::abs(thinness(d0, w0) - thinness(d1, w1));
    });
    VerificationSuite suite{"cor1", {}};
    json params = {{"seed", o.seed}, {"dim", o.dim}, {"statistic", "max abs error"}};
    suite.reports.push_back(make_report("symmetrize.diameter", polytopes, max_of(d_error), 1e-9, params));
    suite.reports.push_back(make_report("symmetrize.width", polytopes, max_of(w_error), 1e-9, params));
    suite.reports.push_back(make_report("symmetrize.thinness", polytopes, max_of(a_error), 1e-9, params));

    const auto nu = reweight_nu(base_measure_mu(o.level, o.dim, o.search, o.execution));
    const auto pulled = pullback_batch(nu, sampler(o, o.sigma, o.scale, o.seed), o.search, o.execution);
    std::vector<double> alpha0(pulled.size());
    std::vector<double> shift(pulled.size());
    for (std::size_t i = 0; i < pulled.size(); ++i) {
        alpha0[i] = pulled[i].alpha0_symmetrized;
        shift[i] = std::abs(pulled[i].alpha0_symmetrized - pulled[i].alpha0_atom);
    }
    params = base_params(o);
    params["sigma"] = o.sigma;
    params["scale"] = o.scale.name();
    params["count"] = o.count;
    const double sigma = o.sigma;
    const Cdf target = [sigma](double c) { return truncnorm_clamped(c, sigma); };
    const auto exact = exact_weighted_cdf(kernel_reweight(nu, sigma), atom_alpha0);
    add_sampled(suite, o, "pullback.alpha0.truncnorm", alpha0, target, exact, params);
    params["statistic"] = "max abs error";
    suite.reports.push_back(make_report("pullback.translation-invariance", pulled.size(), max_of(shift), 1e-9, params));
    return suite;
}

double neighborhood_mass(const DiscreteMeasure& measure, std::size_t center, double radius,
                         const SearchOptions& options)
{
    const auto& c = measure.atom(center);
    const int dim = c.body.dim();
    const auto probes = direction_grid(dim, 64);
    std::vector<double> reference(probes->count);
    for (std::size_t k = 0; k < probes->count; ++k) reference[k] = c.body.support_unit((*probes)[k]);

    double mass = 0.0;
    for (std::size_t i = 0; i < measure.size(); ++i) {
        const auto& a = measure.atom(i);
        if (i != center) {
            if (std::abs(a.functionals.width - c.functionals.width) > 2.0 * radius) continue;
            if (std::abs(a.functionals.diameter - c.functionals.diameter) > 2.0 * radius) continue;
            bool near = true;
            for (std::size_t k = 0; k < probes->count && near; ++k)
                near = std::abs(a.body.support_unit((*probes)[k]) - reference[k]) <= radius;
            if (!near) continue;
            if (hausdorff(a.body, c.body, options) > radius) continue;
        }
        mass += a.weight;
    }
    return mass;
}

std::vector<std::pair<std::size_t, std::size_t>> fingerprint_collisions(const DiscreteMeasure& measure,
                                                                        const SearchOptions& options, Execution mode)
{
    const auto inner = serial(options);
    std::vector<Fingerprint> prints(measure.size());
    for_each_index(mode, measure.size(), [&](std::size_t i) {
        const auto& a = measure.atom(i);
        prints[i] = fingerprint(a.body, inner);
        // width already measured once; keep the tabulated value
        prints[i].width = a.functionals.width;
    });
    std::vector<std::size_t> order(measure.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return prints[a].width < prints[b].width; });

    constexpr double tol = 1e-9;
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t x = 0; x < order.size(); ++x)
        for (std::size_t y = x + 1; y < order.size() && prints[order[y]].width - prints[order[x]].width <= tol; ++y)
            if (same_fingerprint(prints[order[x]], prints[order[y]], tol))
                out.emplace_back(std::min(order[x], order[y]), std::max(order[x], order[y]));
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

bool same_balls(const BallHullBody& a, const BallHullBody& b)
{
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if ((a.center(i) - b.center(i)).cwiseAbs().maxCoeff() > 1e-12 || std::abs(a.radius(i) - b.radius(i)) > 1e-12)
            return false;
    return true;
}

} // namespace

VerificationSuite verify_thm3(const VerifyOptions& o)
{
    const auto& t = o.truncation;
    const auto inner = serial(o.search);
    const auto system = generate_point_system(required_points(t), o.point_seed, o.delta_dist, o.dim);
    const auto dense = dense_measure(t, system, WeightTables::defaults(), o.search, o.execution);
    const auto& measure = dense.measure;

    json truncation = {{"level", t.level}, {"l_max", t.l_max}, {"r_max", t.r_max}, {"i_max", t.i_max}};
    json common = {{"seed", o.seed}, {"point_seed", o.point_seed}, {"dim", o.dim}, {"truncation", truncation},
                   {"atoms", measure.size()}};
    VerificationSuite suite{"thm3", {}};

    auto params = common;
    params["truncated_mass"] = dense.truncated_mass;
    params["closed_form"] = closed_form_truncated_mass(t);
    params["statistic"] = "abs difference";
    suite.reports.push_back(make_report("weights.truncated-mass", measure.size(),
                                        std::abs(dense.truncated_mass - closed_form_truncated_mass(t)), 1e-12, params));

    // every atom: O-symmetric, diameter 4, on the unit sphere around B_E
    std::vector<double> membership(measure.size());
    for_each_index(o.execution, measure.size(), [&](std::size_t i) {
        const auto& a = measure.atom(i);
        const double asym = has_symmetric_generators(a.body, 1e-12) ? 0.0 : 1.0;
        membership[i] = std::max({asym, std::abs(a.functionals.diameter - 4.0),
                                  std::abs(distance_to_unit_ball(a.body, inner) - 1.0)});
    });
    params = common;
    params["statistic"] = "max violation";
    suite.reports.push_back(make_report("atoms.membership", measure.size(), max_of(membership), 1e-6, params));

    // samples: never polyhedral, always pass the smoothness proxy
    const auto samples = sample_dense_P(dense, sampler(o, o.sigma, o.scale, o.seed), o.execution);
    std::vector<char> polyhedral(samples.size());
    std::vector<char> rough(samples.size());
    for_each_index(o.execution, samples.size(), [&](std::size_t i) {
        auto rng = stream(o.seed + kAlternateSeed, i);
        const auto probe = probe_smoothness(samples[i].body.materialize(), rng, 1000);
        polyhedral[i] = probe.polyhedral || !probe.positive_radii;
        rough[i] = !probe.smooth();
    });
    const auto count_true = [](const std::vector<char>& v) { return static_cast<double>(std::count(v.begin(), v.end(), 1)); };
    params = common;
    params["count"] = samples.size();
    params["sigma"] = o.sigma;
    params["scale"] = o.scale.name();
    params["acceptance_rate"] = acceptance_rate(samples);
    params["directions"] = 1000;
    params["statistic"] = "samples flagged";
    suite.reports.push_back(make_report("samples.polyhedral", samples.size(), count_true(polyhedral), 0.0, params));
    suite.reports.push_back(make_report("samples.smoothness-proxy", samples.size(), count_true(rough), 0.0, params));

    // neighborhoods of random atoms carry positive mass
    constexpr std::size_t probes = 20;
    constexpr double radius = 0.01;
    std::vector<std::size_t> centers(probes);
    {
        auto rng = stream(o.seed + 2 * kAlternateSeed, 0);
        std::uniform_int_distribution<std::size_t> pick(0, measure.size() - 1);
        for (auto& c : centers) c = pick(rng);
    }
    std::vector<double> masses(probes);
    for_each_index(o.execution, probes, [&](std::size_t i) { masses[i] = neighborhood_mass(measure, centers[i], radius, inner); });
    json mass_table = json::array();
    double empty = 0.0;
    for (std::size_t i = 0; i < probes; ++i) {
        mass_table.push_back({{"atom", measure.atom(centers[i]).id}, {"mass", masses[i]}});
        if (!(masses[i] > 0.0)) empty += 1.0;
    }
    params = common;
    params["radius"] = radius;
    params["neighborhoods"] = mass_table;
    params["statistic"] = "neighborhoods with zero mass";
    suite.reports.push_back(make_report("atoms.neighborhood-mass", probes, empty, 0.0, params));

    // fingerprints: distinct bodies must not collide; identical bodies under
    // distinct indices are counted and reported
    const auto collisions = fingerprint_collisions(measure, o.search, o.execution);
    std::size_t identical = 0;
    std::size_t distinct = 0;
    for (auto [a, b] : collisions) {
        const auto& x = measure.atom(a).body;
        const auto& y = measure.atom(b).body;
        if (same_balls(x, y) || hausdorff(x, y, inner) <= 1e-9)
            ++identical;
        else
            ++distinct;
    }
    params = common;
    params["colliding_pairs"] = collisions.size();
    params["identical_bodies"] = identical;
    params["statistic"] = "distinct bodies with equal fingerprints";
    suite.reports.push_back(make_report("atoms.fingerprints", measure.size(), static_cast<double>(distinct), 0.0, params));

    // the pushforward of the dense measure against the truncated normal: a report
    const double sigma = o.sigma;
    const Cdf target = [sigma](double c) { return truncnorm_clamped(c, sigma); };
    const auto exact = exact_weighted_cdf(kernel_reweight(dense_nu(dense), sigma), atom_alpha0);
    std::size_t widened = 0;
    double widening = 0.0;
    for (std::size_t i = 0; i < measure.size(); ++i) {
        const double shift = measure.atom(i).functionals.width - 2.0 * dense.indices[i].cap.index.m();
        if (shift > 1e-9) ++widened;
        widening = std::max(widening, shift);
    }
    params = common;
    params["sigma"] = sigma;
    params["informational"] = true;
    params["atoms_wider_than_cap"] = widened;
    params["max_width_excess"] = widening;
    params["statistic"] = "sup distance";
    suite.reports.push_back(
        make_report("alpha0.truncnorm.exact", measure.size(), exact.sup_distance(target), 1.0, params, exact.table(o.ecdf_points)));

    params = common;
    params["sigma"] = sigma;
    params["count"] = samples.size();
    params["reference"] = "exact atom-level law";
    const auto values = alpha0_values(samples);
    const Cdf exact_cdf = [&exact](double x) { return exact(x); };
    const EmpiricalCdf ecdf(values);
    suite.reports.push_back(make_report("alpha0.sampled.vs-exact", values.size(), ks_statistic(ecdf, exact_cdf),
                                        3.0 / std::sqrt(static_cast<double>(values.size())), params,
                                        ecdf.table(o.ecdf_points)));
    return suite;
}

} // namespace convmeasure
