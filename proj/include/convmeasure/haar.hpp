#pragma once

#include "convmeasure/geometry.hpp"
#include "convmeasure/parallel.hpp"
#include "convmeasure/rng.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace convmeasure {

/// Gram-Schmidt met a numerically singular matrix; draw again.
class SingularMatrixError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// n x n matrix of i.i.d. standard normal entries, filled column by column.
Mat sample_gaussian_matrix(int n, Rng& rng);

/// Orthonormalizes the columns of x in order. Each column keeps a positive
/// component along its own direction, i.e. x = Q R with diag(R) > 0, which
/// makes Q(P x) = P Q(x) for every orthogonal P. The result may have
/// determinant -1. Throws SingularMatrixError when the condition estimate
/// exceeds `max_condition`.
Mat gram_schmidt_orthonormalize(const Mat& x, double max_condition = 1e12);

/// Haar-distributed element of SO(n): orthonormalize a Gaussian matrix and
/// negate the last column if the determinant is -1.
Mat sample_rotation(int n, Rng& rng);

/// `count` rotations; rotation i uses stream(seed, i).
std::vector<Mat> sample_rotations(int n, std::size_t count, std::uint64_t seed,
                                  Execution mode = Execution::parallel);

} // namespace convmeasure
