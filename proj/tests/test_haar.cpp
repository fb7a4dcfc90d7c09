#include "doctest.h"
#include "test_util.hpp"

#include "convmeasure/haar.hpp"
#include "convmeasure/stats.hpp"

#include <cmath>

using namespace convmeasure;

TEST_CASE("gaussian matrix is reproducible per seed")
{
    auto a = stream(42, 0);
    auto b = stream(42, 0);
    const Mat x = sample_gaussian_matrix(2, a);
    const Mat y = sample_gaussian_matrix(2, b);
    CHECK(x.size() == 4);
    CHECK(x == y);
    auto c = stream(43, 0);
    CHECK(sample_gaussian_matrix(2, c) != x);
}

TEST_CASE("gaussian entries have unit variance and zero mean")
{
    double sum = 0.0;
    double squares = 0.0;
    constexpr std::size_t draws = 100000;
    for (std::size_t i = 0; i < draws / 4; ++i) {
        auto rng = stream(3, i);
        const Mat x = sample_gaussian_matrix(2, rng);
        sum += x.sum();
        squares += x.squaredNorm();
    }
    const double mean = sum / draws;
    CHECK(std::abs(mean) < 0.02);
    CHECK(std::abs(squares / draws - mean * mean - 1.0) < 0.02);
}

TEST_CASE("orthonormalization fixed points")
{
    Mat x(2, 2);
    x << -2.0, 0.0, 0.0, 3.0;
    Mat expected(2, 2);
    expected << -1.0, 0.0, 0.0, 1.0;
    CHECK((gram_schmidt_orthonormalize(x) - expected).cwiseAbs().maxCoeff() < 1e-15);

    for (std::uint64_t s = 0; s < 10; ++s) {
        auto rng = stream(17, s);
        const Mat q = sample_rotation(4, rng);
        CHECK((gram_schmidt_orthonormalize(q) - q).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("orthonormalization is equivariant")
{
    for (std::uint64_t s = 0; s < 100; ++s) {
        auto rng = stream(23, s);
        const Mat q = sample_rotation(3, rng);
        const Mat x = sample_gaussian_matrix(3, rng);
        const Mat lhs = gram_schmidt_orthonormalize(q * x);
        const Mat rhs = q * gram_schmidt_orthonormalize(x);
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("singular input is reported")
{
    Mat x(3, 3);
    x << 1, 2, 3, 2, 4, 6, 0, 1, 1;
    x.col(1) = 2.0 * x.col(0);
    CHECK_THROWS_AS(gram_schmidt_orthonormalize(x), SingularMatrixError);
}

TEST_CASE("sampled rotations are special orthogonal")
{
    for (int n : {2, 3, 4, 5}) {
        for (std::uint64_t s = 0; s < 200; ++s) {
            auto rng = stream(5, s);
            const Mat q = sample_rotation(n, rng);
            CHECK((q.transpose() * q - Mat::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12);
            CHECK(std::abs(q.determinant() - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("first column coordinate is uniform in dimension 3")
{
    constexpr std::size_t n = 100000;
    const auto rotations = sample_rotations(3, n, 99);
    std::vector<double> coordinate(n);
    for (std::size_t i = 0; i < n; ++i) coordinate[i] = rotations[i](0, 0);
    const double ks = ks_statistic(coordinate, [](double x) { return std::clamp((x + 1.0) / 2.0, 0.0, 1.0); });
    CHECK(ks <= 0.01);
}

TEST_CASE("left multiplication leaves the trace distribution unchanged")
{
    constexpr std::size_t n = 100000;
    auto rng = stream(1, 12345);
    const Mat r = sample_rotation(3, rng);
    const auto a = sample_rotations(3, n, 31);
    const auto b = sample_rotations(3, n, 32);
    std::vector<double> plain(n);
    std::vector<double> moved(n);
    for (std::size_t i = 0; i < n; ++i) {
        plain[i] = a[i].trace();
        moved[i] = (r * b[i]).trace();
    }
    CHECK(ks_two_sample(plain, moved) <= 0.015);
}

TEST_CASE("batch sampling does not depend on the execution mode")
{
    const auto serial = sample_rotations(3, 500, 7, Execution::serial);
    const auto parallel = sample_rotations(3, 500, 7, Execution::parallel);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) CHECK(serial[i] == parallel[i]);
}
