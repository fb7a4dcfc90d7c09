#include "doctest.h"

#include "convmeasure/rng.hpp"
#include "convmeasure/stats.hpp"

#include <cmath>
#include <random>
#include <sstream>

using namespace convmeasure;

namespace {

double uniform01(double x) { return std::clamp(x, 0.0, 1.0); }

} // namespace

TEST_CASE("normal distribution function against high-precision values")
{
    // 21-digit reference values of Phi.
    CHECK(std::abs(normal_cdf(1.0) - 0.841344746068542948585) < 1e-15);
    CHECK(std::abs(normal_cdf(0.5) - 0.691462461274013103638) < 1e-15);
    CHECK(std::abs(normal_cdf(2.0) - 0.977249868051820792800) < 1e-15);
    CHECK(std::abs(normal_cdf(-3.0) - 0.00134989803163009452665) < 1e-17);
    CHECK(std::abs(normal_cdf(-8.0) / 6.22096057427178412e-16 - 1.0) < 1e-12);
    CHECK(normal_cdf(0.0) == 0.5);
    for (double x = -6.0; x <= 6.0; x += 0.37) CHECK(std::abs(normal_cdf(x) + normal_cdf(-x) - 1.0) < 1e-14);
}

TEST_CASE("one-sample statistic against reference values")
{
    // Values from a standard statistics package.
    const std::vector<double> x{0.1, 0.4, 0.45, 0.8, 0.95};
    CHECK(ks_statistic(x, uniform01) == doctest::Approx(0.2).epsilon(1e-12));
    const std::vector<double> y{-1.2, -0.3, 0.05, 0.4, 0.9, 1.7, 2.2};
    CHECK(ks_statistic(y, normal_cdf) == doctest::Approx(0.24451130322466907).epsilon(1e-12));
}

TEST_CASE("two-sample statistic against a reference value")
{
    const std::vector<double> a{0.1, 0.35, 0.5, 0.7, 0.9, 1.2};
    const std::vector<double> b{0.2, 0.3, 0.6, 0.65, 1.5};
    CHECK(ks_two_sample(a, b) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(ks_two_sample(a, a) == 0.0);
}

TEST_CASE("quantile samples and degenerate samples")
{
    constexpr std::size_t n = 999;
    std::vector<double> q(n);
    for (std::size_t i = 0; i < n; ++i) q[i] = static_cast<double>(i + 1) / (n + 1);
    CHECK(ks_statistic(q, uniform01) <= 1.0 / (n + 1) + 1e-12);

    const std::vector<double> constant(100, 0.3);
    CHECK(ks_statistic(constant, uniform01) >= 0.5);

    CHECK_THROWS_AS(ks_statistic(std::vector<double>{}, uniform01), std::invalid_argument);
}

TEST_CASE("step targets are compared at both one-sided limits")
{
    auto step = [](double x) { return x < 0.5 ? 0.0 : (x < 1.0 ? 0.5 : 1.0); };
    const std::vector<double> matching{0.5, 0.5, 1.0, 1.0};
    CHECK(ks_statistic(matching, step) == 0.0);
    const std::vector<double> skewed{0.5, 0.5, 0.5, 1.0};
    CHECK(ks_statistic(skewed, step) == doctest::Approx(0.25));
}

TEST_CASE("uniform samples pass the critical value at about the nominal rate")
{
    constexpr std::size_t n = 100000;
    constexpr int seeds = 40;
    int passed = 0;
    for (int s = 0; s < seeds; ++s) {
        auto rng = stream(static_cast<std::uint64_t>(s), 0);
        std::uniform_real_distribution<double> uniform(0.0, 1.0);
        std::vector<double> x(n);
        for (auto& v : x) v = uniform(rng);
        if (ks_statistic(x, uniform01) <= ks_critical_value(n)) ++passed;
    }
    CHECK(passed >= 34);
}

TEST_CASE("weighted CDF")
{
    const std::vector<double> values{2.0, 1.0, 2.0, 3.0};
    const std::vector<double> weights{1.0, 1.0, 1.0, 1.0};
    const WeightedCdf cdf(values, weights);
    CHECK(cdf(0.5) == 0.0);
    CHECK(cdf(1.0) == 0.25);
    CHECK(cdf(2.5) == 0.75);
    CHECK(cdf(3.0) == 1.0);
    CHECK(cdf.jumps().size() == 3);
    CHECK(cdf.sup_distance([&](double x) { return cdf(x); }) == 0.0);
    CHECK(cdf.sup_distance([](double) { return 0.5; }) == 0.5);

    const std::vector<double> negative{-1.0};
    const std::vector<double> one{1.0};
    CHECK_THROWS(WeightedCdf(one, negative));
    CHECK_THROWS(WeightedCdf(values, one));
}

TEST_CASE("empirical CDF is a right-continuous step function")
{
    const EmpiricalCdf f({3.0, 1.0, 2.0, 2.0});
    CHECK(f(0.9) == 0.0);
    CHECK(f(1.0) == 0.25);
    CHECK(f(2.0) == 0.75);
    CHECK(f(10.0) == 1.0);
    const auto table = f.table(3);
    CHECK(table.front()[0] == 1.0);
    CHECK(table.back()[0] == 3.0);
}

TEST_CASE("report JSON round trip")
{
    auto report = make_report("x.y", 12, 0.25, 0.3, {{"seed", 4}, {"note", "n/a"}}, {{0.1, 0.2}, {0.3, 1.0}});
    CHECK(report.pass);
    CHECK_FALSE(make_report("z", 1, 0.31, 0.3).pass);

    VerificationSuite suite{"demo", {report, make_report("z", 1, 0.1, 0.3)}};
    const nlohmann::json j = suite;
    const auto back = j.get<VerificationSuite>();
    CHECK(nlohmann::json(back).dump() == j.dump());
    CHECK(j.at("reports").at(0).at("N") == 12);
    CHECK(j.at("pass") == true);

    std::ostringstream csv;
    write_ecdf_csv(csv, suite);
    CHECK(csv.str() == "test,x,F\nx.y,0.10000000000000001,0.20000000000000001\nx.y,0.29999999999999999,1\n");
}
