#include "convmeasure/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace convmeasure {

double normal_cdf(double x)
{
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

EmpiricalCdf::EmpiricalCdf(std::vector<double> samples) : sorted_(std::move(samples))
{
    if (sorted_.empty()) throw std::invalid_argument("empirical CDF of an empty sample");
    std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCdf::operator()(double x) const
{
    const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
    return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

std::vector<std::array<double, 2>> EmpiricalCdf::table(std::size_t points) const
{
    std::vector<std::array<double, 2>> out;
    points = std::max<std::size_t>(points, 2);
    const auto n = sorted_.size();
    for (std::size_t p = 0; p < points; ++p) {
        const auto rank = static_cast<std::size_t>(std::llround(static_cast<double>(p) * static_cast<double>(n - 1) /
                                                                static_cast<double>(points - 1)));
        const double x = sorted_[rank];
        if (!out.empty() && out.back()[0] == x) continue;
        out.push_back({x, (*this)(x)});
    }
    return out;
}

WeightedCdf::WeightedCdf(std::span<const double> values, std::span<const double> weights)
{
    if (values.size() != weights.size()) throw std::invalid_argument("values and weights differ in length");
    if (values.empty()) throw std::invalid_argument("weighted CDF of an empty set");
    std::vector<std::size_t> order(values.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] < values[b]; });

    double total = 0.0;
    for (auto w : weights) {
        if (!(w >= 0.0)) throw std::invalid_argument("weights must be >= 0");
        total += w;
    }
    if (!(total > 0.0)) throw std::invalid_argument("weights sum to zero");

    double running = 0.0;
    for (auto i : order) {
        running += weights[i];
        if (!jumps_.empty() && jumps_.back() == values[i])
            levels_.back() = running / total;
        else {
            jumps_.push_back(values[i]);
            levels_.push_back(running / total);
        }
    }
    levels_.back() = 1.0;
}

double WeightedCdf::operator()(double x) const
{
    const auto it = std::upper_bound(jumps_.begin(), jumps_.end(), x);
    if (it == jumps_.begin()) return 0.0;
    return levels_[static_cast<std::size_t>(it - jumps_.begin()) - 1];
}

double WeightedCdf::sup_distance(const Cdf& target) const
{
    double worst = 0.0;
    double before = 0.0;
    for (std::size_t i = 0; i < jumps_.size(); ++i) {
        const double below = target(std::nextafter(jumps_[i], -std::numeric_limits<double>::infinity()));
        worst = std::max({worst, std::abs(levels_[i] - target(jumps_[i])), std::abs(before - below)});
        before = levels_[i];
    }
    return worst;
}

std::vector<std::array<double, 2>> WeightedCdf::table(std::size_t points) const
{
    std::vector<std::array<double, 2>> out;
    points = std::max<std::size_t>(points, 2);
    const auto n = jumps_.size();
    for (std::size_t p = 0; p < points; ++p) {
        const auto i = static_cast<std::size_t>(
            std::llround(static_cast<double>(p) * static_cast<double>(n - 1) / static_cast<double>(points - 1)));
        if (!out.empty() && out.back()[0] == jumps_[i]) continue;
        out.push_back({jumps_[i], levels_[i]});
    }
    return out;
}

double ks_statistic(const EmpiricalCdf& ecdf, const Cdf& target)
{
    // Per distinct sample value, compare both one-sided limits. The left limit
    // of the target is taken one ulp below, which is exact for step targets
    // jumping at the sample values and harmless for continuous ones.
    const auto& x = ecdf.sorted();
    const double n = static_cast<double>(x.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size();) {
        std::size_t j = i;
        while (j < x.size() && x[j] == x[i]) ++j;
        const double below = target(std::nextafter(x[i], -std::numeric_limits<double>::infinity()));
        const double at = target(x[i]);
        worst = std::max({worst, std::abs(static_cast<double>(i) / n - below), std::abs(static_cast<double>(j) / n - at)});
        i = j;
    }
    return worst;
}

double ks_statistic(std::span<const double> samples, const Cdf& target)
{
    if (samples.empty()) throw std::invalid_argument("KS statistic of an empty sample");
    return ks_statistic(EmpiricalCdf(std::vector<double>(samples.begin(), samples.end())), target);
}

double ks_two_sample(std::span<const double> a, std::span<const double> b)
{
    if (a.empty() || b.empty()) throw std::invalid_argument("KS statistic of an empty sample");
    std::vector<double> x(a.begin(), a.end());
    std::vector<double> y(b.begin(), b.end());
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    const double n = static_cast<double>(x.size());
    const double m = static_cast<double>(y.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double worst = 0.0;
    while (i < x.size() && j < y.size()) {
        const double v = std::min(x[i], y[j]);
        while (i < x.size() && x[i] <= v) ++i;
        while (j < y.size() && y[j] <= v) ++j;
        worst = std::max(worst, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
    }
    return worst;
}

double ks_critical_value(std::size_t n)
{
    return 1.36 / std::sqrt(static_cast<double>(n));
}

double ks_two_sample_critical_value(std::size_t n, std::size_t m)
{
    const double a = static_cast<double>(n);
    const double b = static_cast<double>(m);
    return 1.36 * std::sqrt((a + b) / (a * b));
}

VerificationReport make_report(std::string test, std::size_t n, double ks, double threshold, nlohmann::json params,
                               std::vector<std::array<double, 2>> ecdf)
{
    VerificationReport r;
    r.test = std::move(test);
    r.n = n;
    r.ks = ks;
    r.threshold = threshold;
    r.pass = ks <= threshold;
    r.params = std::move(params);
    r.ecdf = std::move(ecdf);
    return r;
}

void to_json(nlohmann::json& j, const VerificationReport& r)
{
    j = nlohmann::json{{"test", r.test}, {"N", r.n},           {"ks", r.ks},
                       {"threshold", r.threshold}, {"pass", r.pass}, {"params", r.params},
                       {"ecdf", r.ecdf}};
}

void from_json(const nlohmann::json& j, VerificationReport& r)
{
    j.at("test").get_to(r.test);
    j.at("N").get_to(r.n);
    j.at("ks").get_to(r.ks);
    j.at("threshold").get_to(r.threshold);
    j.at("pass").get_to(r.pass);
    r.params = j.at("params");
    j.at("ecdf").get_to(r.ecdf);
}

bool VerificationSuite::pass() const
{
    return std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.pass; });
}

void to_json(nlohmann::json& j, const VerificationSuite& s)
{
    j = nlohmann::json{{"suite", s.name}, {"pass", s.pass()}, {"reports", s.reports}};
}

void from_json(const nlohmann::json& j, VerificationSuite& s)
{
    j.at("suite").get_to(s.name);
    j.at("reports").get_to(s.reports);
}

void write_ecdf_csv(std::ostream& out, const VerificationSuite& suite)
{
    out << "test,x,F\n";
    out.precision(17);
    for (const auto& r : suite.reports)
        for (const auto& [x, f] : r.ecdf) out << r.test << ',' << x << ',' << f << '\n';
}

} // namespace convmeasure
