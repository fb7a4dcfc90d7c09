#include "convmeasure/haar.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace convmeasure {

Mat sample_gaussian_matrix(int n, Rng& rng)
{
    if (n < 1) throw GeometryError("matrix dimension must be positive");
    std::normal_distribution<double> normal(0.0, 1.0);
    Mat x(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i) x(i, j) = normal(rng);
    return x;
}

Mat gram_schmidt_orthonormalize(const Mat& x, double max_condition)
{
    if (x.rows() != x.cols() || x.rows() == 0) throw GeometryError("Gram-Schmidt needs a nonempty square matrix");
    const auto n = x.cols();
    Mat q = x;
    double largest = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) largest = std::max(largest, x.col(j).norm());
    if (!(largest > 0.0)) throw SingularMatrixError("zero matrix");

    for (Eigen::Index j = 0; j < n; ++j) {
        // modified Gram-Schmidt, two passes
        for (int pass = 0; pass < 2; ++pass)
            for (Eigen::Index k = 0; k < j; ++k) q.col(j) -= q.col(k).dot(q.col(j)) * q.col(k);
        const double pivot = q.col(j).norm();
        if (!(pivot > 0.0) || largest / pivot > max_condition)
            throw SingularMatrixError("matrix is singular to working precision");
        q.col(j) /= pivot;
    }
    return q;
}

Mat sample_rotation(int n, Rng& rng)
{
    if (n < 2) throw GeometryError("rotation dimension must be >= 2");
    for (;;) {
        const Mat x = sample_gaussian_matrix(n, rng);
        Mat q;
        try {
            q = gram_schmidt_orthonormalize(x);
        } catch (const SingularMatrixError&) {
            continue;
        }
        if (q.determinant() < 0.0) q.col(n - 1) *= -1.0;
        return q;
    }
}

std::vector<Mat> sample_rotations(int n, std::size_t count, std::uint64_t seed, Execution mode)
{
    std::vector<Mat> out(count);
    for_each_index(mode, count, [&](std::size_t i) {
        auto rng = stream(seed, i);
        out[i] = sample_rotation(n, rng);
    });
    return out;
}

} // namespace convmeasure
