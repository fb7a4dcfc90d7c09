#pragma once

#include "json.hpp"

#include <array>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace convmeasure {

/// Standard normal distribution function.
double normal_cdf(double x);

using Cdf = std::function<double(double)>;

/// Right-continuous step function of a sample.
class EmpiricalCdf {
public:
    explicit EmpiricalCdf(std::vector<double> samples);

    std::size_t size() const { return sorted_.size(); }
    const std::vector<double>& sorted() const { return sorted_; }

    /// Fraction of samples <= x.
    double operator()(double x) const;

    /// About `points` (x, F(x)) pairs at evenly spaced ranks, always
    /// including the smallest and largest sample.
    std::vector<std::array<double, 2>> table(std::size_t points = 101) const;

private:
    std::vector<double> sorted_;
};

/// Step function of a weighted point set: F(x) = total weight of values <= x.
/// Weights are normalized to sum 1.
class WeightedCdf {
public:
    WeightedCdf(std::span<const double> values, std::span<const double> weights);

    double operator()(double x) const;

    /// Distinct jump locations and F just after each.
    const std::vector<double>& jumps() const { return jumps_; }
    const std::vector<double>& levels() const { return levels_; }

    /// sup_x |F(x) - target(x)|, checking both sides of every jump.
    double sup_distance(const Cdf& target) const;

    std::vector<std::array<double, 2>> table(std::size_t points = 101) const;

private:
    std::vector<double> jumps_;
    std::vector<double> levels_;
};

/// sup_x |F_N(x) - target(x)| over the sample, both one-sided gaps per point.
/// Throws std::invalid_argument on an empty sample.
double ks_statistic(std::span<const double> samples, const Cdf& target);
double ks_statistic(const EmpiricalCdf& ecdf, const Cdf& target);

/// sup_x |F_a(x) - F_b(x)|.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

/// 1.36 / sqrt(n), the 5% critical value of the one-sample statistic.
double ks_critical_value(std::size_t n);

/// 1.36 * sqrt((n + m) / (n m)).
double ks_two_sample_critical_value(std::size_t n, std::size_t m);

/// One automated check. pass is always ks <= threshold.
struct VerificationReport {
    std::string test;
    std::size_t n = 0;
    double ks = 0.0;
    double threshold = 0.0;
    bool pass = false;
    nlohmann::json params = nlohmann::json::object();
    std::vector<std::array<double, 2>> ecdf;
};

VerificationReport make_report(std::string test, std::size_t n, double ks, double threshold,
                               nlohmann::json params = nlohmann::json::object(),
                               std::vector<std::array<double, 2>> ecdf = {});

void to_json(nlohmann::json& j, const VerificationReport& r);
void from_json(const nlohmann::json& j, VerificationReport& r);

/// Reports produced by one `verify` run.
struct VerificationSuite {
    std::string name;
    std::vector<VerificationReport> reports;

    bool pass() const;
};

void to_json(nlohmann::json& j, const VerificationSuite& s);
void from_json(const nlohmann::json& j, VerificationSuite& s);

/// "test,x,F" rows for every report of the suite.
void write_ecdf_csv(std::ostream& out, const VerificationSuite& suite);

} // namespace convmeasure
