#pragma once

#include "convmeasure/dense_family.hpp"
#include "convmeasure/measure.hpp"
#include "convmeasure/stats.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace convmeasure {

/// CDF of the pushforward of a discrete measure under an atom functional.
WeightedCdf exact_weighted_cdf(const DiscreteMeasure& measure, const std::function<double(const Atom&)>& functional);

double atom_width(const Atom& atom);
double atom_alpha0(const Atom& atom);

/// x / 4 on [0, 4].
double uniform_width_cdf(double x);
/// (c - 1/2) / (1/2) on [1/2, 1].
double uniform_alpha0_cdf(double c);

struct VerifyOptions {
    int level = 10;
    int dim = 3;
    std::size_t count = 100000;
    std::uint64_t seed = 7;
    double sigma = 1.0;
    ScaleDistribution scale;
    /// Replaces the default threshold of sampled goodness-of-fit reports.
    std::optional<double> threshold;
    std::size_t ecdf_points = 101;
    Execution execution = Execution::parallel;
    SearchOptions search;
    DenseTruncation truncation;
    std::uint64_t point_seed = 1;
    double delta_dist = 1e-4;
};

/// 1.36 / sqrt(n) + 3 / 2^level: Monte Carlo noise plus the resolution of a
/// level-truncated atomic measure.
double sampled_threshold(std::size_t n, int level);

/// Suite names accepted by run_suite: lemma1, lemma2, lemma3, thm1, thm2,
/// cor1, haar, thm3.
const std::vector<std::string>& suite_names();

VerificationSuite run_suite(const std::string& name, const VerifyOptions& options);

VerificationSuite verify_lemma1(const VerifyOptions& options);
VerificationSuite verify_lemma2(const VerifyOptions& options);
VerificationSuite verify_lemma3(const VerifyOptions& options);
VerificationSuite verify_thm1(const VerifyOptions& options);
VerificationSuite verify_thm2(const VerifyOptions& options);
VerificationSuite verify_cor1(const VerifyOptions& options);
VerificationSuite verify_haar(const VerifyOptions& options);
VerificationSuite verify_thm3(const VerifyOptions& options);

/// Mass of the atoms of `measure` within Hausdorff distance `radius` of atom
/// `center`, prefiltered by diameter, width and sampled support values.
double neighborhood_mass(const DiscreteMeasure& measure, std::size_t center, double radius,
                         const SearchOptions& options = {});

/// Pairs (a, b), a < b, of atoms whose fingerprints agree within 1e-9.
std::vector<std::pair<std::size_t, std::size_t>>
fingerprint_collisions(const DiscreteMeasure& measure, const SearchOptions& options = {},
                       Execution mode = Execution::parallel);

} // namespace convmeasure
