// Runs every acceptance criterion at full size and prints one line per
// criterion. Exit status 1 when any criterion fails.

#include "convmeasure/verify.hpp"

#include "json.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

using namespace convmeasure;

namespace {

struct Check {
    std::string label;
    double value;
    double limit;
};

struct Criterion {
    int number;
    std::string title;
    std::vector<Check> checks;
    std::vector<std::string> notes;
    double seconds = 0.0;

    bool pass() const
    {
        for (const auto& c : checks)
            if (!(c.value <= c.limit)) return false;
        return true;
    }
};

const VerificationReport& report(const VerificationSuite& suite, const std::string& test)
{
    for (const auto& r : suite.reports)
        if (r.test == test) return r;
    throw std::runtime_error("suite " + suite.name + " has no report " + test);
}

Check check(const VerificationSuite& suite, const std::string& test, double limit, const std::string& prefix = "")
{
    return {prefix + test, report(suite, test).ks, limit};
}

std::string format(double v)
{
    std::ostringstream s;
    s.precision(3);
    s << v;
    return s.str();
}

VerifyOptions base_options()
{
    VerifyOptions o;
    o.level = 10;
    o.dim = 3;
    o.count = 100000;
    o.seed = 7;
    o.sigma = 1.0;
    return o;
}

// Every suite run is recorded so the determinism criterion can rerun it.
struct Run {
    std::string suite;
    VerifyOptions options;
    std::string dump;
};

std::vector<Run> runs;

VerificationSuite run(const std::string& name, const VerifyOptions& o)
{
    auto suite = run_suite(name, o);
    runs.push_back({name, o, nlohmann::json(suite).dump()});
    return suite;
}

template <typename F>
Criterion timed(int number, std::string title, F&& body)
{
    const auto start = std::chrono::steady_clock::now();
    Criterion c{number, std::move(title), {}, {}, 0.0};
    body(c);
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return c;
}

} // namespace

int main(int argc, char** argv)
{
    const std::string out_path = argc > 1 ? argv[1] : "acceptance_report.json";
    std::vector<Criterion> results;
    nlohmann::json suites = nlohmann::json::array();
    auto keep = [&](const VerificationSuite& s, const std::string& tag) {
        nlohmann::json j = s;
        j["run"] = tag;
        suites.push_back(std::move(j));
    };

    results.push_back(timed(1, "scaled-distance closed form on 100 random (m, alpha)", [&](Criterion& c) {
        const auto s = run("lemma1", base_options());
        keep(s, "lemma1");
        c.checks.push_back(check(s, "scaled-distance.closed-form", 1e-6));
    }));

    results.push_back(timed(2, "width law of the level-10 base measure is x/4", [&](Criterion& c) {
        const auto s = run("lemma2", base_options());
        keep(s, "lemma2");
        c.checks.push_back(check(s, "width.checkpoints", std::ldexp(1.0, -10)));
        c.notes.push_back("sup over all x " + format(report(s, "width.sup").ks));
    }));

    results.push_back(timed(3, "thinness law of the reweighted measure is uniform on [1/2, 1)", [&](Criterion& c) {
        const auto s = run("thm1", base_options());
        keep(s, "thm1");
        c.checks.push_back(check(s, "alpha0.uniform.checkpoints", std::ldexp(1.0, -7)));
        c.checks.push_back(check(s, "alpha0.uniform.sampled", 0.01));
    }));

    results.push_back(timed(4, "thinness of scaled samples follows the truncated normal", [&](Criterion& c) {
        auto o = base_options();
        const auto s1 = run("thm2", o);
        keep(s1, "thm2 sigma=1");
        c.checks.push_back(check(s1, "alpha0.truncnorm.sampled.exp", 0.01, "sigma=1 "));
        c.checks.push_back(check(s1, "alpha0.truncnorm.sampled.unif", 0.01, "sigma=1 "));
        c.checks.push_back(check(s1, "alpha0.scale-independence", 0.015, "sigma=1 "));
        o.sigma = 0.5;
        const auto s2 = run("thm2", o);
        keep(s2, "thm2 sigma=0.5");
        c.checks.push_back(check(s2, "alpha0.truncnorm.sampled.exp", 0.01, "sigma=0.5 "));
        c.checks.push_back(check(s2, "alpha0.truncnorm.sampled.unif", 0.01, "sigma=0.5 "));
        c.checks.push_back(check(s2, "alpha0.scale-independence", 0.015, "sigma=0.5 "));
        c.notes.push_back("acceptance rate sigma=1 " +
                          format(report(s1, "alpha0.truncnorm.sampled.exp").params.at("acceptance_rate").get<double>()) +
                          ", sigma=0.5 " +
                          format(report(s2, "alpha0.truncnorm.sampled.exp").params.at("acceptance_rate").get<double>()));
    }));

    results.push_back(timed(5, "scale decomposition round trip on 1000 random bodies", [&](Criterion& c) {
        const auto s = run("lemma3", base_options());
        keep(s, "lemma3");
        c.checks.push_back(check(s, "decompose.scale", 1e-9));
        c.checks.push_back(check(s, "decompose.base-support", 1e-6));
    }));

    results.push_back(timed(6, "Haar rotations", [&](Criterion& c) {
        const auto s = run("haar", base_options());
        keep(s, "haar");
        c.checks.push_back(check(s, "rotation.membership", 1e-12));
        c.checks.push_back(check(s, "rotation.first-column", 0.01));
        c.checks.push_back(check(s, "orthonormalize.equivariance", 1e-10));
        c.notes.push_back("left-invariance two-sample " + format(report(s, "rotation.left-invariance").ks));
    }));

    results.push_back(timed(7, "symmetrization keeps d, w, alpha0; pulled-back samples keep the law", [&](Criterion& c) {
        const auto s = run("cor1", base_options());
        keep(s, "cor1");
        c.checks.push_back(check(s, "symmetrize.diameter", 1e-9));
        c.checks.push_back(check(s, "symmetrize.width", 1e-9));
        c.checks.push_back(check(s, "symmetrize.thinness", 1e-9));
        c.checks.push_back(check(s, "pullback.alpha0.truncnorm", 0.01));
    }));

    results.push_back(timed(8, "smooth hull family at truncation (6, 6, 3, 16)", [&](Criterion& c) {
        auto o = base_options();
        o.truncation = DenseTruncation{6, 6, 3, 16};
        o.level = o.truncation.level;
        o.count = 10000;
        const auto s = run("thm3", o);
        keep(s, "thm3");
        c.checks.push_back(check(s, "samples.polyhedral", 0.0));
        c.checks.push_back(check(s, "samples.smoothness-proxy", 0.0));
        const auto& hood = report(s, "atoms.neighborhood-mass");
        c.checks.push_back({"atoms.neighborhood-mass (empty of " + std::to_string(hood.n) + ")", hood.ks, 0.0});
        c.checks.push_back({"neighborhoods probed", 20.0 - static_cast<double>(hood.n), 0.0});
        const auto& exact = report(s, "alpha0.truncnorm.exact");
        c.notes.push_back("reported only: exact alpha0 law vs truncated normal, sup distance " + format(exact.ks) + "; " +
                          std::to_string(exact.params.at("atoms_wider_than_cap").get<std::size_t>()) +
                          " atoms wider than their cap");
        c.notes.push_back("sampled vs exact atom law " + format(report(s, "alpha0.sampled.vs-exact").ks));
        const auto& prints = report(s, "atoms.fingerprints");
        c.notes.push_back("fingerprint collisions " + std::to_string(prints.params.at("colliding_pairs").get<std::size_t>()) +
                          " pairs, distinct bodies among them " + format(prints.ks));
    }));

    results.push_back(timed(9, "every suite above is byte-identical when rerun", [&](Criterion& c) {
        const auto first = runs;
        std::size_t differing = 0;
        for (const auto& r : first) {
            const auto again = nlohmann::json(run_suite(r.suite, r.options)).dump();
            if (again != r.dump) {
                ++differing;
                c.notes.push_back(r.suite + " differs");
            }
        }
        c.checks.push_back({"suites differing of " + std::to_string(first.size()), static_cast<double>(differing), 0.0});
    }));

    bool all = true;
    nlohmann::json summary = nlohmann::json::array();
    for (const auto& c : results) {
        all = all && c.pass();
        std::cout << (c.pass() ? "PASS" : "FAIL") << " criterion " << c.number << ": " << c.title << " (" << format(c.seconds)
                  << " s)\n";
        nlohmann::json checks = nlohmann::json::array();
        for (const auto& k : c.checks) {
            std::cout << "    " << (k.value <= k.limit ? "ok  " : "FAIL") << ' ' << k.label << " = " << format(k.value)
                      << " (limit " << format(k.limit) << ")\n";
            checks.push_back({{"check", k.label}, {"value", k.value}, {"limit", k.limit}, {"pass", k.value <= k.limit}});
        }
        for (const auto& n : c.notes) std::cout << "    note " << n << '\n';
        summary.push_back({{"criterion", c.number}, {"title", c.title}, {"pass", c.pass()}, {"checks", checks},
                           {"notes", c.notes}, {"seconds", c.seconds}});
    }
    std::ofstream(out_path) << nlohmann::json{{"pass", all}, {"criteria", summary}, {"suites", suites}}.dump(1) << '\n';
    std::cout << (all ? "all criteria pass" : "some criteria fail") << "; details in " << out_path << '\n';
    return all ? 0 : 1;
}
