#include "convmeasure/body_io.hpp"
#include "convmeasure/dense_family.hpp"
#include "convmeasure/haar.hpp"
#include "convmeasure/measure.hpp"
#include "convmeasure/verify.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

using namespace convmeasure;
using nlohmann::json;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_failed = 1;
constexpr int exit_usage = 2;

class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct Output {
    std::unique_ptr<std::ofstream> file;
    std::ostream* stream = &std::cout;

    explicit Output(const std::string& path)
    {
        if (path.empty() || path == "-") return;
        file = std::make_unique<std::ofstream>(path);
        if (!*file) throw UsageError("cannot write " + path);
        stream = file.get();
    }
    std::ostream& operator*() { return *stream; }
};

struct Common {
    int dim = 3;
    int level = 10;
    double sigma = 1.0;
    std::string scale = "exp";
    std::size_t count = 0;
    std::uint64_t seed = 0;
    std::string out;
};

struct Truncation {
    DenseTruncation t;
    std::uint64_t point_seed = 1;
    double delta_dist = 1e-4;
};

void add_truncation(CLI::App* cmd, Truncation& tr)
{
    cmd->add_option("--level", tr.t.level, "dyadic level n of the smooth caps")->capture_default_str();
    cmd->add_option("--l-max", tr.t.l_max, "largest smoothing level l")->capture_default_str();
    cmd->add_option("--r-max", tr.t.r_max, "largest number of similarity copies r")->capture_default_str();
    cmd->add_option("--i-max", tr.t.i_max, "members kept per stratum")->capture_default_str();
    cmd->add_option("--point-seed", tr.point_seed, "seed of the point system")->capture_default_str();
    cmd->add_option("--delta-dist", tr.delta_dist, "separation of pairwise point distances")->capture_default_str();
}

ScaleDistribution parse_scale(const std::string& name)
{
    try {
        return ScaleDistribution::parse(name);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
}

// d, w, alpha0 and the distance to B_E of atom body scaled by `scale`;
// exact for O-symmetric atoms since min h = w / 2 and max h = max_i |c_i| + r_i.
json functional_record(const Atom& atom, double scale)
{
    const double high = scale * max_support(atom.body);
    const double low = scale * atom.functionals.width / 2.0;
    return {{"d", scale * atom.functionals.diameter},
            {"w", scale * atom.functionals.width},
            {"alpha0", atom.functionals.alpha0},
            {"alpha_prime", std::max(std::abs(high - 1.0), std::abs(1.0 - low))}};
}

int run_geom(const std::string& path, const SearchOptions& search)
{
    const auto body = read_body_file(path);
    const auto f = functionals(body, search);
    std::cout << nlohmann::ordered_json{{"d", f.diameter}, {"w", f.width}, {"alpha0", f.alpha0}, {"dist_to_BE", f.dist_to_unit_ball}}.dump()
              << '\n';
    return exit_ok;
}

int run_rotation(const Common& c)
{
    if (c.dim < 2) throw UsageError("--dim must be >= 2");
    if (c.count < 1) throw UsageError("--count must be >= 1");
    Output out(c.out);
    const auto rotations = sample_rotations(c.dim, c.count, c.seed);
    for (std::size_t i = 0; i < rotations.size(); ++i) {
        json rows = json::array();
        for (Eigen::Index r = 0; r < rotations[i].rows(); ++r) {
            json row = json::array();
            for (Eigen::Index s = 0; s < rotations[i].cols(); ++s) row.push_back(rotations[i](r, s));
            rows.push_back(row);
        }
        *out << json{{"index", i}, {"rotation", rows}}.dump() << '\n';
    }
    return exit_ok;
}

SamplerConfig sampler_config(const Common& c)
{
    SamplerConfig config;
    config.level = c.level;
    config.dim = c.dim;
    config.sigma = c.sigma;
    config.scale = parse_scale(c.scale);
    config.seed = c.seed;
    config.count = c.count;
    try {
        validate(config);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
    if (c.level < 0 || c.level > 20) throw UsageError("--level must lie in [0, 20]");
    if (c.count < 1) throw UsageError("--count must be >= 1");
    return config;
}

void write_samples(Output& out, const DiscreteMeasure& measure, const std::vector<PSample>& samples,
                   const std::vector<HullFamilyIndex>* family)
{
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& s = samples[i];
        const auto& atom = measure.atom(s.atom);
        json line = {{"index", i},
                     {"atom", atom.id},
                     {"scale", s.alpha},
                     {"proposals", s.proposals},
                     {"functionals", functional_record(atom, s.alpha)},
                     {"body", body_to_json(s.body)}};
        if (family) {
            const auto& x = (*family)[s.atom];
            line["family"] = {{"level", x.cap.index.level}, {"k", x.cap.index.k}, {"l", x.cap.l},
                              {"r", x.r},                   {"i", x.i},           {"points", x.points}};
        }
        *out << line.dump() << '\n';
    }
}

int run_sample(const Common& c, const std::string& which)
{
    const auto config = sampler_config(c);
    Output out(c.out);
    const auto mu = base_measure_mu(config.level, config.dim);
    if (which == "P") {
        const auto nu = reweight_nu(mu);
        const auto samples = sample_P_batch(nu, config);
        write_samples(out, nu, samples, nullptr);
        std::cerr << json{{"measure", which}, {"count", samples.size()}, {"acceptance_rate", acceptance_rate(samples)}}.dump()
                  << '\n';
        return exit_ok;
    }
    // mu: atoms by weight at scale 1; nu: reweighted atoms with a Haar rotation
    const auto measure = which == "nu" ? reweight_nu(mu) : mu;
    std::vector<std::optional<PSample>> slots(config.count);
    for_each_index(Execution::parallel, config.count, [&](std::size_t i) {
        auto rng = stream(config.seed, i);
        if (which == "nu") {
            auto draw = sample_nu01(measure, config.dim, rng);
            slots[i] = PSample{std::move(draw.body), draw.atom, 1.0, measure.atom(draw.atom).functionals.alpha0, 1};
        } else {
            const auto atom = measure.draw(rng);
            slots[i] = PSample{TransformedBody(Mat::Identity(config.dim, config.dim), 1.0, measure.atom(atom).body), atom,
                               1.0, measure.atom(atom).functionals.alpha0, 1};
        }
    });
    std::vector<PSample> samples;
    for (auto& s : slots) samples.push_back(std::move(*s));
    write_samples(out, measure, samples, nullptr);
    std::cerr << json{{"measure", which}, {"count", samples.size()}, {"acceptance_rate", 1.0}}.dump() << '\n';
    return exit_ok;
}

int finish_verify(const std::vector<VerificationSuite>& runs, const std::string& out_path, const std::string& csv_path)
{
    Output out(out_path);
    bool pass = true;
    std::size_t failures = 0;
    for (const auto& r : runs) {
        pass = pass && r.pass();
        failures += r.pass() ? 0 : 1;
    }
    if (runs.size() == 1) {
        *out << json(runs.front()).dump(2) << '\n';
    } else {
        *out << json{{"suite", runs.front().name}, {"pass", pass}, {"failures", failures}, {"runs", runs}}.dump(2) << '\n';
    }
    if (!csv_path.empty()) {
        std::ofstream csv(csv_path);
        if (!csv) throw UsageError("cannot write " + csv_path);
        for (const auto& r : runs) write_ecdf_csv(csv, r);
    }
    return pass ? exit_ok : exit_failed;
}

std::vector<VerificationSuite> sweep(const std::string& name, VerifyOptions options, std::size_t seeds)
{
    if (seeds < 1) throw UsageError("--seeds must be >= 1");
    std::vector<VerificationSuite> runs;
    const auto first = options.seed;
    for (std::size_t k = 0; k < seeds; ++k) {
        options.seed = first + k;
        runs.push_back(run_suite(name, options));
    }
    return runs;
}

int read_workers_env()
{
    if (const char* env = std::getenv("CONVMEASURE_WORKERS")) {
        try {
            return std::stoi(env);
        } catch (const std::exception&) {
            throw UsageError("CONVMEASURE_WORKERS must be an integer");
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Random norms: probability measures on O-symmetric convex bodies"};
    app.require_subcommand(1);
    int workers = 0;
    app.add_option("--workers", workers, "worker threads (default: $CONVMEASURE_WORKERS, else all cores)");
    SearchOptions search;
    app.add_option("--grid", search.grid_size, "sphere grid size (0: 2^12 up to n=3, 2^14 above)");
    app.add_option("--tol", search.tolerance, "relative tolerance of the sphere search")->capture_default_str();

    // geom
    auto* geom = app.add_subcommand("geom", "print d, w, alpha0 and the distance to B_E of a body file");
    std::string body_path;
    geom->add_option("body", body_path, "body-spec JSON file")->required();

    // rotation
    Common rot;
    auto* rotation = app.add_subcommand("rotation", "Haar rotations of SO(n) as JSON lines");
    rotation->add_option("--dim", rot.dim, "dimension n")->capture_default_str();
    rotation->add_option("--count", rot.count, "number of rotations")->required();
    rotation->add_option("--seed", rot.seed, "random seed")->required();
    rotation->add_option("--out", rot.out, "output file (default stdout)");

    // sample
    Common smp;
    std::string measure = "P";
    auto* sample = app.add_subcommand("sample", "draw bodies from mu, nu or P as JSON lines");
    sample->add_option("--measure", measure, "mu | nu | P")->check(CLI::IsMember({"mu", "nu", "P"}))->capture_default_str();
    sample->add_option("--level", smp.level, "dyadic truncation level")->capture_default_str();
    sample->add_option("--dim", smp.dim, "dimension n")->capture_default_str();
    sample->add_option("--sigma", smp.sigma, "sigma of the truncated normal")->capture_default_str();
    sample->add_option("--scale-dist", smp.scale, "exp | unif")->capture_default_str();
    sample->add_option("--count", smp.count, "number of accepted samples")->required();
    sample->add_option("--seed", smp.seed, "random seed")->required();
    sample->add_option("--out", smp.out, "output JSONL file (default stdout)");

    // verify
    VerifyOptions vo;
    std::string theorem;
    std::string scale_name = "exp";
    std::optional<double> threshold;
    std::size_t seeds = 1;
    std::string report_path;
    std::string csv_path;
    auto* verify = app.add_subcommand("verify", "run a verification suite and print its report");
    verify->add_option("--theorem", theorem, "lemma1 | lemma2 | lemma3 | thm1 | thm2 | cor1 | haar")
        ->required()
        ->check(CLI::IsMember({"lemma1", "lemma2", "lemma3", "thm1", "thm2", "cor1", "haar"}));
    verify->add_option("--level", vo.level, "dyadic truncation level")->capture_default_str();
    verify->add_option("--dim", vo.dim, "dimension n")->capture_default_str();
    verify->add_option("--sigma", vo.sigma, "sigma of the truncated normal")->capture_default_str();
    verify->add_option("--scale-dist", scale_name, "exp | unif")->capture_default_str();
    verify->add_option("--count", vo.count, "Monte Carlo sample size")->capture_default_str();
    verify->add_option("--seed", vo.seed, "random seed")->capture_default_str();
    verify->add_option("--threshold", threshold, "KS threshold of sampled tests (default 1.36/sqrt(N) + 3/2^level)");
    verify->add_option("--seeds", seeds, "run seeds seed .. seed+k-1 and count failures")->capture_default_str();
    verify->add_option("--ecdf-points", vo.ecdf_points, "rows of each ECDF table")->capture_default_str();
    verify->add_option("--out", report_path, "report JSON file (default stdout)");
    verify->add_option("--csv", csv_path, "also write ECDF tables as CSV");

    // dense-sample
    Common dsm;
    Truncation dtr;
    dtr.t = DenseTruncation{};
    auto* dense_sample = app.add_subcommand("dense-sample", "draw smooth hull bodies as JSON lines");
    add_truncation(dense_sample, dtr);
    dense_sample->add_option("--sigma", dsm.sigma, "sigma of the truncated normal")->capture_default_str();
    dense_sample->add_option("--scale-dist", dsm.scale, "exp | unif")->capture_default_str();
    dense_sample->add_option("--count", dsm.count, "number of accepted samples")->required();
    dense_sample->add_option("--seed", dsm.seed, "random seed")->required();
    dense_sample->add_option("--out", dsm.out, "output JSONL file (default stdout)");

    // dense-verify
    VerifyOptions dvo;
    dvo.count = 10000;
    Truncation dvt;
    std::string dense_scale = "exp";
    std::string dense_report;
    std::string dense_csv;
    std::size_t dense_seeds = 1;
    auto* dense_verify = app.add_subcommand("dense-verify", "structural and distributional checks of the smooth hull family");
    add_truncation(dense_verify, dvt);
    dense_verify->add_option("--sigma", dvo.sigma, "sigma of the truncated normal")->capture_default_str();
    dense_verify->add_option("--scale-dist", dense_scale, "exp | unif")->capture_default_str();
    dense_verify->add_option("--count", dvo.count, "number of samples")->capture_default_str();
    dense_verify->add_option("--seed", dvo.seed, "random seed")->capture_default_str();
    dense_verify->add_option("--seeds", dense_seeds, "run seeds seed .. seed+k-1 and count failures")->capture_default_str();
    dense_verify->add_option("--ecdf-points", dvo.ecdf_points, "rows of each ECDF table")->capture_default_str();
    dense_verify->add_option("--out", dense_report, "report JSON file (default stdout)");
    dense_verify->add_option("--csv", dense_csv, "also write ECDF tables as CSV");

    // dense-approx
    Truncation atr;
    std::string target_path;
    double eps = 0.0;
    std::size_t budget = 4096;
    auto* dense_approx = app.add_subcommand("dense-approx", "find a hull family member close to a target body");
    add_truncation(dense_approx, atr);
    dense_approx->add_option("--target", target_path, "body-spec JSON file of an O-symmetric target")->required();
    dense_approx->add_option("--eps", eps, "exit 1 when the distance found exceeds this")->required();
    dense_approx->add_option("--budget", budget, "family members measured at most")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        set_worker_count(workers > 0 ? workers : read_workers_env());
        if (search.tolerance <= 0.0) throw UsageError("--tol must be positive");

        if (*geom) return run_geom(body_path, search);
        if (*rotation) return run_rotation(rot);
        if (*sample) return run_sample(smp, measure);

        if (*verify) {
            if (vo.count < 1) throw UsageError("--count must be >= 1");
            if (vo.sigma <= 0.0) throw UsageError("--sigma must be positive");
            if (vo.level < 0 || vo.level > 20) throw UsageError("--level must lie in [0, 20]");
            if (vo.dim < 2) throw UsageError("--dim must be >= 2");
            vo.scale = parse_scale(scale_name);
            vo.threshold = threshold;
            vo.search = search;
            return finish_verify(sweep(theorem, vo, seeds), report_path, csv_path);
        }

        if (*dense_sample) {
            validate(dtr.t);
            Common c = dsm;
            c.level = dtr.t.level;
            const auto config = sampler_config(c);
            const auto system = generate_point_system(required_points(dtr.t), dtr.point_seed, dtr.delta_dist, config.dim);
            const auto dense = dense_measure(dtr.t, system, WeightTables::defaults(), search);
            const auto samples = sample_dense_P(dense, config);
            const auto nu = dense_nu(dense);
            Output out(c.out);
            write_samples(out, nu, samples, &dense.indices);
            std::cerr << json{{"count", samples.size()},
                              {"atoms", dense.measure.size()},
                              {"truncated_mass", dense.truncated_mass},
                              {"acceptance_rate", acceptance_rate(samples)}}
                             .dump()
                      << '\n';
            return exit_ok;
        }

        if (*dense_verify) {
            validate(dvt.t);
            if (dvo.count < 1) throw UsageError("--count must be >= 1");
            if (dvo.sigma <= 0.0) throw UsageError("--sigma must be positive");
            dvo.truncation = dvt.t;
            dvo.level = dvt.t.level;
            dvo.point_seed = dvt.point_seed;
            dvo.delta_dist = dvt.delta_dist;
            dvo.scale = parse_scale(dense_scale);
            dvo.search = search;
            return finish_verify(sweep("thm3", dvo, dense_seeds), dense_report, dense_csv);
        }

        if (*dense_approx) {
            validate(atr.t);
            if (eps < 0.0) throw UsageError("--eps must be >= 0");
            const auto target = read_body_file(target_path);
            const auto system =
                generate_point_system(required_points(atr.t), atr.point_seed, atr.delta_dist, dimension(target));
            const auto best = nearest_in_family(target, atr.t, system, budget, search);
            const auto& x = best.index;
            json rows = json::array();
            for (Eigen::Index r = 0; r < best.rotation.rows(); ++r) {
                json row = json::array();
                for (Eigen::Index s = 0; s < best.rotation.cols(); ++s) row.push_back(best.rotation(r, s));
                rows.push_back(row);
            }
            const bool within = best.distance <= eps;
            std::cout << json{{"index",
                               {{"level", x.cap.index.level}, {"k", x.cap.index.k}, {"m", x.cap.index.m()},
                                {"l", x.cap.l}, {"r", x.r}, {"i", x.i}, {"points", x.points}}},
                              {"rotation", rows},
                              {"distance", best.distance},
                              {"eps", eps},
                              {"within_eps", within},
                              {"examined", best.examined}}
                             .dump(2)
                      << '\n';
            return within ? exit_ok : exit_failed;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    }
    return exit_usage;
}
