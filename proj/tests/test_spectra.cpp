#include "tcomp/oracle.hpp"
#include "tcomp/spectra.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace tcomp;
using tcomp::testing::max_abs_diff;
using tcomp::testing::random_basis;
using tcomp::testing::random_matrix;
using tcomp::testing::random_vector;

namespace {

Matrix rotation(double theta)
{
    Matrix q(2, 2);
    q << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
    return q;
}

} // namespace

TEST(Basis, RejectsNonOrthonormalColumns)
{
    Matrix m(3, 2);
    m << 1, 1, 0, 0, 0, 1;
    EXPECT_THROW(Basis{m}, std::invalid_argument);
    EXPECT_NO_THROW(Basis(Matrix::Identity(3, 2)));
}

TEST(NormalizeSigns, LargestEntryPositiveEarliestWinsTie)
{
    Matrix m(3, 2);
    m << 0.1, -0.5, -0.9, 0.5, 0.2, 0.1;
    normalize_signs(m);
    EXPECT_GT(m(1, 0), 0.0);
    EXPECT_DOUBLE_EQ(m(0, 0), -0.1);
    // |m(0,1)| == |m(1,1)|: index 0 decides.
    EXPECT_GT(m(0, 1), 0.0);
    EXPECT_LT(m(1, 1), 0.0);
}

TEST(TopLeftSingularVectors, PaddedDiagonal)
{
    Matrix m = Matrix::Zero(3, 5);
    m(0, 0) = 3;
    m(1, 1) = 2;
    m(2, 2) = 1;
    const Basis u = top_left_singular_vectors(m, 2);
    EXPECT_LE(subspace_distance(u, Basis::canonical(3, 2)), 1e-12);
}

TEST(TopLeftSingularVectors, RankOneReturnsNormalizedLeftFactor)
{
    Rng rng(21);
    Vector a = random_vector(5, rng);
    const Vector b = random_vector(7, rng);
    const Basis u = top_left_singular_vectors(a * b.transpose(), 1);
    Matrix expect = a.normalized();
    normalize_signs(expect);
    EXPECT_LE(max_abs_diff(u.columns(), expect), 1e-12);
}

TEST(TopLeftSingularVectors, EnergyMatchesJacobiOracle)
{
    Rng rng(22);
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix m = random_matrix(6, 8, rng);
        const oracle::Svd ref = oracle::jacobi_svd(m);
        for (std::size_t r = 1; r <= 6; ++r) {
            const Basis u = top_left_singular_vectors(m, r);
            double want = 0.0;
            for (std::size_t i = 0; i < r; ++i)
                want += ref.sigma[i] * ref.sigma[i];
            const double got = (u.columns().transpose() * m).squaredNorm();
            EXPECT_NEAR(got, want, 1e-10 * want);
            const Basis v(ref.u.leftCols(static_cast<Eigen::Index>(r)), 1e-8);
            const double gap = ref.sigma[r - 1] - (r < 6 ? ref.sigma[r] : 0.0);
            if (gap > 1e-3)
                EXPECT_LE(subspace_distance(u, v), 1e-8);
        }
    }
}

TEST(TopLeftSingularVectors, RejectsRankOutOfRange)
{
    const Matrix m = Matrix::Identity(3, 4);
    EXPECT_THROW(top_left_singular_vectors(m, 0), std::invalid_argument);
    EXPECT_THROW(top_left_singular_vectors(m, 4), std::invalid_argument);
}

TEST(SingularValues, MatchJacobiOracle)
{
    Rng rng(23);
    for (const auto& [r, c] : {std::pair{4, 9}, std::pair{9, 4}, std::pair{5, 5}}) {
        const Matrix m = random_matrix(r, c, rng);
        const Vector sv = singular_values(m);
        const oracle::Svd ref = oracle::jacobi_svd(m);
        ASSERT_EQ(static_cast<std::size_t>(sv.size()), ref.sigma.size());
        for (std::size_t i = 0; i < ref.sigma.size(); ++i)
            EXPECT_NEAR(sv[static_cast<Eigen::Index>(i)], ref.sigma[i], 1e-12 * ref.sigma[0]);
    }
}

TEST(EigvecsAbove, DiagonalThresholds)
{
    const Matrix n = Vector{{5.0, 3.0, 1.0}}.asDiagonal();
    const auto two = eigvecs_above(n, 2.0);
    ASSERT_TRUE(two.has_value());
    EXPECT_EQ(two->rank(), 2u);
    EXPECT_LE(subspace_distance(*two, Basis::canonical(3, 2)), 1e-12);
    EXPECT_FALSE(eigvecs_above(n, 10.0).has_value());
    // Strict comparison: an eigenvalue equal to tau is excluded.
    EXPECT_EQ(eigvecs_above(n, 3.0)->rank(), 1u);
}

TEST(EigvecsAbove, RecoversRotatedSpectrum)
{
    Rng rng(24);
    const Basis q = random_basis(3, 3, rng);
    const Matrix n = q.columns() * Vector{{9.0, 4.0, 1.0}}.asDiagonal() * q.columns().transpose();
    const auto got = eigvecs_above(n, 2.0);
    ASSERT_TRUE(got.has_value());
    ASSERT_EQ(got->rank(), 2u);
    EXPECT_LE(subspace_distance(*got, Basis(q.columns().leftCols(2))), 1e-12);
    // Column order follows eigenvalue order.
    EXPECT_NEAR(std::abs(got->columns().col(0).dot(q.columns().col(0))), 1.0, 1e-12);
}

TEST(EigvecsAbove, ReconstructsPsdMatrix)
{
    Rng rng(25);
    const Matrix g = random_matrix(5, 3, rng);
    const Matrix n = g * g.transpose();
    const SymmetricEigen e = symmetric_eigen(n);
    const Matrix back = e.vectors * e.values.asDiagonal() * e.vectors.transpose();
    EXPECT_LE(max_abs_diff(back, n), 1e-12 * n.norm());
    const auto top = eigvecs_above(n, 1e-9 * e.values[0]);
    ASSERT_TRUE(top.has_value());
    EXPECT_EQ(top->rank(), 3u);
}

TEST(SubspaceDistance, Examples)
{
    const Matrix id2 = Matrix::Identity(3, 2);
    EXPECT_LE(subspace_distance(Basis(id2), Basis(id2 * rotation(0.7))), 1e-12);
    EXPECT_NEAR(subspace_distance(Basis::canonical(2, 1), Basis(Matrix(Vector{{0.0, 1.0}}))), 1.0, 1e-12);
    const double h = std::sqrt(0.5);
    EXPECT_NEAR(subspace_distance(Basis::canonical(2, 1), Basis(Matrix(Vector{{h, h}}))), h, 1e-12);
    EXPECT_THROW(subspace_distance(Basis::canonical(3, 1), Basis::canonical(4, 1)), std::invalid_argument);
}

TEST(SubspaceDistance, MetricProperties)
{
    Rng rng(26);
    for (int trial = 0; trial < 50; ++trial) {
        const auto d = static_cast<Eigen::Index>(3 + rng.uniform_index(6));
        const auto r = static_cast<Eigen::Index>(1 + rng.uniform_index(static_cast<std::size_t>(d - 1)));
        const Basis a = random_basis(d, r, rng), b = random_basis(d, r, rng), c = random_basis(d, r, rng);
        const double ab = subspace_distance(a, b);
        EXPECT_GE(ab, 0.0);
        EXPECT_LE(ab, 1.0 + 1e-12);
        EXPECT_NEAR(ab, subspace_distance(b, a), 1e-12);
        EXPECT_LE(subspace_distance(a, c), ab + subspace_distance(b, c) + 1e-12);
        const Basis q = random_basis(r, r, rng);
        EXPECT_NEAR(subspace_distance(Basis(a.columns() * q.columns()), b), ab, 1e-10);
        EXPECT_LE(subspace_distance(a, a), 1e-12);
    }
}

TEST(ModeSpectrum, SuperdiagonalCore)
{
    Tensor a = Tensor::zeros({2, 2, 2});
    a.values()[0] = 3;
    a.values()[7] = 2;
    const ModeSpectrum ms = mode_spectrum(a, {2, 2, 2});
    for (std::size_t j = 0; j < 3; ++j) {
        // Each flattening has singular values {3, 2}; check against the Jacobi oracle.
        const oracle::Svd ref = oracle::jacobi_svd(matricize(a, j));
        EXPECT_NEAR(ms.sigma_max[j], ref.sigma[0], 1e-12);
        EXPECT_NEAR(ms.sigma_min[j], ref.sigma[1], 1e-12);
    }
    EXPECT_NEAR(ms.lambda_min, 2.0, 1e-12);
    EXPECT_NEAR(ms.lambda_max, 3.0, 1e-12);
    EXPECT_NEAR(ms.kappa, 1.5, 1e-12);
}

TEST(ModeSpectrum, RankOneAndScaling)
{
    Rng rng(27);
    const Vector u = random_vector(3, rng).normalized(), v = random_vector(4, rng).normalized(),
                 w = random_vector(5, rng).normalized();
    const Tensor a = outer_product(std::vector<Vector>{u, v, w});
    const ModeSpectrum ms = mode_spectrum(a, {1, 1, 1});
    EXPECT_NEAR(ms.lambda_min, 1.0, 1e-12);
    EXPECT_NEAR(ms.lambda_max, 1.0, 1e-12);
    EXPECT_NEAR(ms.kappa, 1.0, 1e-12);

    const Tensor b = tcomp::testing::random_tucker({5, 6, 4}, {2, 3, 2}, rng);
    const ModeSpectrum m1 = mode_spectrum(b, {2, 3, 2});
    const ModeSpectrum m2 = mode_spectrum(-4.0 * b, {2, 3, 2});
    EXPECT_NEAR(m2.lambda_min, 4.0 * m1.lambda_min, 1e-10 * m1.lambda_min);
    EXPECT_NEAR(m2.lambda_max, 4.0 * m1.lambda_max, 1e-10 * m1.lambda_max);
    EXPECT_NEAR(m2.kappa, m1.kappa, 1e-10);
    EXPECT_GE(m1.kappa, 1.0);
    EXPECT_NEAR(m1.kappa, m1.lambda_max / m1.lambda_min, 1e-12 * m1.kappa);
}

TEST(ModeSpectrum, RankDeficientThrows)
{
    const Tensor e = Tensor::unit({3, 3, 3}, std::vector<std::size_t>{0, 0, 0});
    EXPECT_THROW(mode_spectrum(e, {2, 1, 1}), std::domain_error);
    EXPECT_THROW(mode_spectrum(e, {1, 1}), std::invalid_argument);
}

TEST(MultilinearRanks, TuckerRanksRecovered)
{
    Rng rng(28);
    EXPECT_EQ(multilinear_ranks(tcomp::testing::random_tucker({6, 7, 5}, {2, 3, 4}, rng)), (Ranks{2, 3, 4}));
}
