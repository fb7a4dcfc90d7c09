#include "doctest.h"
#include "test_util.hpp"

#include "convmeasure/haar.hpp"
#include "convmeasure/measure.hpp"
#include "convmeasure/stats.hpp"
#include "convmeasure/verify.hpp"

#include <cmath>
#include <set>

using namespace convmeasure;

TEST_CASE("dyadic family enumeration")
{
    const auto level0 = dyadic_family(0);
    REQUIRE(level0.size() == 2);
    CHECK(level0[0].index.m() == 1.0);
    CHECK(level0[1].index.m() == 2.0);

    const auto level2 = dyadic_family(2);
    REQUIRE(level2.size() == 8);
    for (std::size_t k = 0; k < level2.size(); ++k) {
        const double m = 0.25 * static_cast<double>(k + 1);
        CHECK(level2[k].index.m() == m);
        CHECK(diameter(Body(level2[k].body)) == doctest::Approx(4.0));
        CHECK(width(Body(level2[k].body)) == doctest::Approx(2.0 * m).epsilon(1e-9));
    }

    CHECK_THROWS(make_dyadic(2, 0));
    CHECK_THROWS(make_dyadic(2, 9));
    CHECK_THROWS(make_dyadic(-1, 1));
}

TEST_CASE("base measure has equal weights and a uniform width law")
{
    const auto mu3 = base_measure_mu(3);
    REQUIRE(mu3.size() == 16);
    double total = 0.0;
    for (const auto& a : mu3.atoms()) {
        CHECK(a.weight == 1.0 / 16.0);
        total += a.weight;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-15));

    const auto mu10 = base_measure_mu(10);
    const auto cdf = exact_weighted_cdf(mu10, atom_width);
    CHECK(std::abs(cdf(2.0) - 0.5) <= std::ldexp(1.0, -10));
    CHECK(cdf(4.0) == 1.0);
    for (double x : {0.5, 1.0, 2.0, 3.0, 4.0}) CHECK(std::abs(cdf(x) - x / 4.0) <= std::ldexp(1.0, -10));
}

TEST_CASE("width reweighting")
{
    CHECK(width_density(0.0) == 0.25);
    CHECK(width_density(4.0) == 1.0 / 16.0);
    CHECK(width_density(0.0) / width_density(4.0) == 4.0);

    std::vector<Atom> single = make_atoms({"only"}, {cap_body(3, 1.0)}, {1.0});
    const auto nu = reweight_nu(DiscreteMeasure(single));
    CHECK(nu.atom(0).weight == 1.0);

    const auto nu10 = reweight_nu(base_measure_mu(10));
    const auto cdf = exact_weighted_cdf(nu10, atom_alpha0);
    CHECK(std::abs(cdf(0.75) - 0.5) <= std::ldexp(1.0, -8));
    CHECK(cdf.sup_distance(uniform_alpha0_cdf) <= 3.0 * std::ldexp(1.0, -10));
}

TEST_CASE("weights must sum to one")
{
    CHECK_THROWS(DiscreteMeasure(make_atoms({"a", "b"}, {unit_ball(3), unit_ball(3)}, {0.5, 0.6})));
    const auto fixed = DiscreteMeasure::normalized(make_atoms({"a", "b"}, {unit_ball(3), unit_ball(3)}, {1.0, 3.0}));
    CHECK(fixed.atom(1).weight == 0.75);
}

TEST_CASE("thinness to width map")
{
    CHECK(tau(0.5) == 4.0);
    CHECK(tau(2.0 / 3.0) == doctest::Approx(2.0));
    CHECK(tau(std::nextafter(1.0, 0.0)) == doctest::Approx(0.0).epsilon(1e-12));
    for (double w = 0.05; w <= 4.0; w += 0.05) CHECK(tau(tau_inverse(w)) == doctest::Approx(w).epsilon(1e-12));
    CHECK_THROWS_AS(tau(1.0), std::domain_error);
    CHECK_THROWS_AS(tau(0.4), std::domain_error);
    CHECK_THROWS_AS(tau_inverse(0.0), std::domain_error);
}

TEST_CASE("scale distributions")
{
    CHECK(ScaleDistribution::parse("exp").kind == ScaleDistribution::Kind::exponential);
    CHECK(ScaleDistribution::parse("unif").name() == "unif");
    CHECK_THROWS(ScaleDistribution::parse("gamma"));
    auto rng = stream(1, 1);
    const auto unif = ScaleDistribution::parse("unif");
    for (int k = 0; k < 1000; ++k) {
        const double a = unif.sample(rng);
        CHECK(a > 0.0);
        CHECK(a <= 2.0);
    }
}

TEST_CASE("unit-sphere samples sit at distance one")
{
    const auto nu = reweight_nu(base_measure_mu(6));
    for (std::uint64_t i = 0; i < 50; ++i) {
        auto rng = stream(9, i);
        const auto draw = sample_nu01(nu, 3, rng);
        CHECK(distance_to_unit_ball(Body(draw.body)) == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(thinness(Body(draw.body)) == doctest::Approx(nu.atom(draw.atom).functionals.alpha0).epsilon(1e-9));
    }
}

TEST_CASE("scaling map examples")
{
    const TransformedBody cap(Mat::Identity(3, 3), 1.0, cap_body(3, 1.0));
    Rng rng(2);
    CHECK(testutil::sampled_support_gap(Body(phi4_apply(cap, 1.0)), Body(cap), 3, 200, rng) < 1e-15);
    CHECK(distance_to_unit_ball(Body(phi4_apply(cap, 2.0))) == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(distance_to_unit_ball(Body(phi4_apply(cap, 0.5))) == doctest::Approx(0.5).epsilon(1e-9));
    const TransformedBody off(Mat::Identity(3, 3), 1.0, unit_ball(3));
    CHECK_THROWS_AS(phi4_apply(off, 2.0), GeometryError);
}

TEST_CASE("scaling map inversion")
{
    const auto whole = phi4_invert(Body(cap_body(3, 1.0)));
    CHECK(whole.alpha == doctest::Approx(1.0).epsilon(1e-9));

    // Both closed-form branches apply to this alpha'; only one reproduces the body.
    const auto half = phi4_invert(Body(scaled(cap_body(3, 1.0), 0.5)));
    CHECK(half.alpha_prime == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(half.alpha == doctest::Approx(0.5).epsilon(1e-9));

    const auto triple = phi4_invert(Body(scaled(cap_body(3, 1.0), 3.0)));
    CHECK(triple.alpha_prime == doctest::Approx(5.0).epsilon(1e-9));
    CHECK(triple.alpha == doctest::Approx(3.0).epsilon(1e-9));

    const auto at_corner = phi4_invert(Body(scaled(cap_body(3, 1.0), 2.0 / 3.0)));
    CHECK(at_corner.alpha == doctest::Approx(2.0 / 3.0).epsilon(1e-9));

    Rng rng(14);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    for (std::uint64_t i = 0; i < 200; ++i) {
        auto local = stream(77, i);
        const double m = 2.0 * (1.0 - uniform(rng));
        const double alpha = 3.0 * (1.0 - uniform(rng));
        const TransformedBody body(sample_rotation(3, local), 1.0, cap_body(3, m));
        const auto recovered = phi4_invert(Body(phi4_apply(body, alpha)));
        CHECK(recovered.alpha == doctest::Approx(alpha).epsilon(1e-9));
        CHECK(testutil::sampled_support_gap(Body(recovered.base), Body(body), 3, 100, rng) < 1e-6);
    }
    CHECK_THROWS_AS(phi4_invert(Body(PolytopeBody({Vec::Zero(3), Vec::Ones(3)}))), GeometryError);
}

TEST_CASE("truncated normal target")
{
    CHECK(truncated_normal_cdf(0.5, 1.0) == 0.0);
    CHECK(truncated_normal_cdf(1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    // 21-digit reference values.
    CHECK(std::abs(truncated_normal_cdf(0.75, 1.0) - 0.560906425188003108666) < 1e-12);
    CHECK(std::abs(truncated_normal_cdf(0.6, 0.5) - 0.325661151557297266702) < 1e-12);
    CHECK(std::abs(truncated_normal_cdf(0.9, 0.5) - 0.932846163201246161799) < 1e-12);
    CHECK_THROWS_AS(truncated_normal_cdf(0.4, 1.0), std::domain_error);
    CHECK_THROWS_AS(truncated_normal_cdf(0.7, 0.0), std::domain_error);
}

TEST_CASE("acceptance kernel")
{
    CHECK(acceptance_probability(0.5, 1.0) == 1.0);
    CHECK(std::abs(acceptance_probability(1.0, 1.0) - 0.606530659712633423604) < 1e-15);
    CHECK(acceptance_probability(0.9, 0.5) < acceptance_probability(0.9, 1.0));
}

TEST_CASE("kernel-reweighted table follows the truncated normal")
{
    const auto nu = reweight_nu(base_measure_mu(8));
    for (double sigma : {0.5, 1.0}) {
        const auto cdf = exact_weighted_cdf(kernel_reweight(nu, sigma), atom_alpha0);
        CHECK(cdf.sup_distance([sigma](double c) { return truncated_normal_cdf(std::clamp(c, 0.5, 1.0), sigma); }) <=
              3.0 * std::ldexp(1.0, -8));
    }
}

TEST_CASE("rejection sampler")
{
    const auto nu = reweight_nu(base_measure_mu(6));
    SamplerConfig config;
    config.level = 6;
    config.seed = 5;
    config.count = 300;
    const auto serial = sample_P_batch(nu, config, Execution::serial);
    const auto parallel = sample_P_batch(nu, config, Execution::parallel);
    REQUIRE(serial.size() == 300);
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].atom == parallel[i].atom);
        CHECK(serial[i].alpha == parallel[i].alpha);
        CHECK(serial[i].body.rotation() == parallel[i].body.rotation());
        CHECK(serial[i].proposals >= 1);
    }
    const double rate = acceptance_rate(serial);
    CHECK(rate > 0.6);
    CHECK(rate <= 1.0);

    config.sigma = 0.0;
    CHECK_THROWS(sample_P_batch(nu, config));
}

TEST_CASE("pullback of translated samples")
{
    const auto nu = reweight_nu(base_measure_mu(5));
    SamplerConfig config;
    config.level = 5;
    config.seed = 12;
    config.count = 40;
    const auto pulled = pullback_batch(nu, config);
    for (const auto& p : pulled) {
        CHECK(p.alpha0_symmetrized == doctest::Approx(p.alpha0_atom).epsilon(1e-9));
        CHECK(has_symmetric_generators(p.symmetrized, 1e-9));
    }
    const Body symmetric = cap_body(3, 0.6);
    Rng rng(1);
    CHECK(testutil::sampled_support_gap(minkowski_symmetrize(symmetric), symmetric, 3, 500, rng) < 1e-12);
}
