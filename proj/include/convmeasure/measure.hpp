#pragma once

#include "convmeasure/geometry.hpp"
#include "convmeasure/parallel.hpp"
#include "convmeasure/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace convmeasure {

/// Dyadic radius m = k / 2^level with 0 < k <= 2^(level+1), so m in (0, 2].
struct DyadicIndex {
    int level = 0;
    std::int64_t k = 1;

    double m() const;
};

DyadicIndex make_dyadic(int level, std::int64_t k);

/// Diameter, width and thinness of an atom's body, computed once.
struct AtomFunctionals {
    double diameter = 0.0;
    double width = 0.0;
    double alpha0 = 0.0;
};

AtomFunctionals atom_functionals(const BallHullBody& body, const SearchOptions& options = {});

struct Atom {
    std::string id;
    BallHullBody body;
    double weight = 0.0;
    AtomFunctionals functionals;
};

/// Finite weighted family of base bodies. Weights sum to 1 within 1e-12.
class DiscreteMeasure {
public:
    /// Takes the weights as given; throws if they do not sum to 1.
    explicit DiscreteMeasure(std::vector<Atom> atoms);

    /// Rescales nonnegative weights to sum 1.
    static DiscreteMeasure normalized(std::vector<Atom> atoms);

    const std::vector<Atom>& atoms() const { return atoms_; }
    const Atom& atom(std::size_t i) const { return atoms_[i]; }
    std::size_t size() const { return atoms_.size(); }
    std::vector<double> weights() const;

    /// Index drawn with probability proportional to weight.
    std::size_t draw(Rng& rng) const;

private:
    std::vector<Atom> atoms_;
    std::vector<double> cumulative_;
};

/// Builds atoms from bodies, computing their functionals with `mode`.
std::vector<Atom> make_atoms(std::vector<std::string> ids, std::vector<BallHullBody> bodies,
                             const std::vector<double>& weights, const SearchOptions& options = {},
                             Execution mode = Execution::parallel);

struct DyadicBody {
    DyadicIndex index;
    BallHullBody body;
};

/// The 2^(level+1) cap bodies of one dyadic level, k = 1 .. 2^(level+1).
std::vector<DyadicBody> dyadic_family(int level, int dim = 3);

/// Equal weights 1/2^(level+1) over dyadic_family(level).
DiscreteMeasure base_measure_mu(int level, int dim = 3, const SearchOptions& options = {},
                                Execution mode = Execution::parallel);

/// Relative density 4 / (w + 4)^2 of the reweighted measure.
double width_density(double width);

/// Weights multiplied by width_density(w) and renormalized.
DiscreteMeasure reweight_nu(const DiscreteMeasure& mu);

/// t -> 4/t - 4, mapping [1/2, 1) onto (0, 4].
double tau(double t);
double tau_inverse(double w);

/// Distribution of the scale factor on (0, inf).
struct ScaleDistribution {
    enum class Kind { exponential, uniform };
    Kind kind = Kind::exponential;

    double sample(Rng& rng) const;
    std::string name() const;
    static ScaleDistribution parse(const std::string& name);
};

struct SamplerConfig {
    int level = 10;
    int dim = 3;
    double sigma = 1.0;
    ScaleDistribution scale;
    std::uint64_t seed = 0;
    std::size_t count = 0;
};

void validate(const SamplerConfig& config);

struct NuDraw {
    TransformedBody body;
    std::size_t atom = 0;
};

/// Atom by weight, then a Haar rotation; scale 1.
NuDraw sample_nu01(const DiscreteMeasure& measure, int dim, Rng& rng);

/// Multiplies the scale by alpha. With `check`, rejects a base that is not
/// at Hausdorff distance 1 from the unit ball (within 1e-6).
TransformedBody phi4_apply(const TransformedBody& base, double alpha, bool check = true,
                           const SearchOptions& options = {});

/// A scaled body split into its unit-sphere representative and the scale.
struct DecomposedBody {
    TransformedBody base;   ///< scale exactly 1, distance 1 from B_E
    double alpha = 0.0;
    double alpha0 = 0.0;      ///< thinness of the input
    double alpha_prime = 0.0; ///< distance of the input to B_E
};

/// Recovers (K, alpha) from alpha K. Both closed-form branches are tried where
/// they overlap and the one whose base lies at distance 1 from B_E is kept.
DecomposedBody phi4_invert(const Body& scaled_body, const SearchOptions& options = {});

/// (Phi((c - 1/2)/(sigma/2)) - Phi(0)) / (Phi(1/sigma) - Phi(0)) for c in [1/2, 1].
double truncated_normal_cdf(double c, double sigma);

/// exp(-(2 alpha0 - 1)^2 / (2 sigma^2)).
double acceptance_probability(double alpha0, double sigma);

/// Weights multiplied by the acceptance kernel and renormalized: the exact
/// atom-level law of the rejection sampler.
DiscreteMeasure kernel_reweight(const DiscreteMeasure& nu, double sigma);

struct PSample {
    TransformedBody body;
    std::size_t atom = 0;
    double alpha = 0.0;
    double alpha0 = 0.0;
    std::size_t proposals = 0;
};

/// Rejection sampler: (atom, rotation) from `nu`, alpha from the scale
/// distribution, accepted with acceptance_probability(alpha0).
PSample sample_P(const DiscreteMeasure& nu, const SamplerConfig& config, Rng& rng);

/// config.count samples; sample i uses stream(config.seed, i).
std::vector<PSample> sample_P_batch(const DiscreteMeasure& nu, const SamplerConfig& config,
                                    Execution mode = Execution::parallel);

double acceptance_rate(const std::vector<PSample>& samples);

/// A non-symmetric body and its Minkowski symmetrization.
struct PullbackSample {
    BallHullBody general;
    BallHullBody symmetrized;
    Vec offset;
    std::size_t atom = 0;
    double alpha0_atom = 0.0;
    double alpha0_symmetrized = 0.0; ///< computed from the symmetrized body
};

/// A P-sample translated by a standard normal offset, then symmetrized.
PullbackSample pullback_sample_general(const DiscreteMeasure& nu, const SamplerConfig& config, Rng& rng,
                                       const SearchOptions& options = {});

std::vector<PullbackSample> pullback_batch(const DiscreteMeasure& nu, const SamplerConfig& config,
                                           const SearchOptions& options = {},
                                           Execution mode = Execution::parallel);

} // namespace convmeasure
