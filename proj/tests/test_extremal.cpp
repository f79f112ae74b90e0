#include <gtest/gtest.h>

#include <cmath>

#include "hjholder/extremal.hpp"
#include "support.hpp"

using namespace hjholder;
using testing_support::random_psd;
using testing_support::random_sym;
using testing_support::uniform;

namespace {

/// Power iteration on X + shift I as an independent oracle for the top eigenvalue.
double top_eigen_by_power(const SymMatrix& X) {
    const std::size_t d = X.dim();
    const double shift = X.frobenius() + 1.0;
    std::vector<double> v(d), w(d);
    for (std::size_t i = 0; i < d; ++i) v[i] = 1.0 + 0.1 * static_cast<double>(i);
    double lam = 0.0;
    for (int it = 0; it < 20000; ++it) {
        for (std::size_t i = 0; i < d; ++i) {
            w[i] = shift * v[i];
            for (std::size_t j = 0; j < d; ++j) w[i] += X(i, j) * v[j];
        }
        double n = 0.0;
        for (double x : w) n += x * x;
        n = std::sqrt(n);
        for (std::size_t i = 0; i < d; ++i) v[i] = w[i] / n;
        lam = X.quad_form(v);
    }
    return lam;
}

}  // namespace

TEST(SymEigs, Examples) {
    EXPECT_EQ(sym_eigs(SymMatrix::identity(2)), (std::vector<double>{1.0, 1.0}));
    const std::vector<double> diag{2.0, -3.0};
    EXPECT_EQ(sym_eigs(SymMatrix::diagonal(diag)), (std::vector<double>{-3.0, 2.0}));
    const auto r = sym_eigs(SymMatrix(2, {0.0, 1.0, 1.0, 0.0}));
    EXPECT_NEAR(r[0], -1.0, 1e-15);
    EXPECT_NEAR(r[1], 1.0, 1e-15);
}

TEST(SymEigs, ConstructionSymmetrizes) {
    const SymMatrix X(2, {1.0, 2.0, 4.0, 1.0});
    EXPECT_EQ(X(0, 1), 3.0);
    EXPECT_EQ(X(1, 0), 3.0);
}

TEST(SymEigs, ReconstructionAcrossDimensions) {
    std::mt19937_64 rng(11);
    for (std::size_t d : {1u, 2u, 3u, 4u, 5u, 7u}) {
        for (int trial = 0; trial < 200; ++trial) {
            const auto X = random_sym(rng, d, 3.0);
            const auto vals = sym_eigs(X);
            ASSERT_EQ(vals.size(), d);
            EXPECT_TRUE(std::is_sorted(vals.begin(), vals.end()));
            const auto ed = jacobi_eigen(X);
            double err = 0.0;
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j) {
                    double s = 0.0;
                    for (std::size_t k = 0; k < d; ++k) s += ed.vectors[i * d + k] * ed.values[k] * ed.vectors[j * d + k];
                    err = std::max(err, std::abs(s - X(i, j)));
                }
            EXPECT_LE(err, 1e-10 * (1.0 + X.frobenius()));
            for (std::size_t k = 0; k < d; ++k) EXPECT_NEAR(vals[k], ed.values[k], 1e-10 * (1.0 + X.frobenius()));
            double tr = 0.0, sum = 0.0;
            for (std::size_t k = 0; k < d; ++k) {
                tr += X(k, k);
                sum += vals[k];
            }
            EXPECT_NEAR(tr, sum, 1e-10 * (1.0 + X.frobenius()));
        }
    }
}

TEST(SymEigs, TopEigenvalueMatchesPowerIteration) {
    std::mt19937_64 rng(5);
    for (std::size_t d : {2u, 3u, 5u}) {
        for (int trial = 0; trial < 10; ++trial) {
            const auto X = random_psd(rng, d) + SymMatrix::identity(d) * 0.1;
            EXPECT_NEAR(lambda_max(X), top_eigen_by_power(X), 1e-8);
        }
    }
}

TEST(SymEigs, RepeatedRootsInThreeDimensions) {
    const SymMatrix X(3, {2.0, 1.0, 1.0, 1.0, 2.0, 1.0, 1.0, 1.0, 2.0});
    const auto v = sym_eigs(X);
    EXPECT_NEAR(v[0], 1.0, 1e-13);
    EXPECT_NEAR(v[1], 1.0, 1e-13);
    EXPECT_NEAR(v[2], 4.0, 1e-13);
}

TEST(Extremal, Examples) {
    const std::vector<double> a{2.0, -3.0}, b{-1.0, -2.0};
    EXPECT_EQ(m_plus(SymMatrix::diagonal(a)), 2.0);
    EXPECT_EQ(m_minus(SymMatrix::diagonal(a)), -3.0);
    EXPECT_EQ(m_plus(SymMatrix(3)), 0.0);
    EXPECT_EQ(m_minus(SymMatrix(3)), 0.0);
    EXPECT_EQ(m_plus(SymMatrix::diagonal(b)), 0.0);
    EXPECT_EQ(m_minus(SymMatrix::diagonal(b)), -2.0);
}

TEST(Extremal, AlgebraicProperties) {
    std::mt19937_64 rng(1234);
    for (std::size_t d : {1u, 2u, 3u, 5u}) {
        for (int trial = 0; trial < 250; ++trial) {
            const auto X = random_sym(rng, d, 2.0);
            const auto Y = random_sym(rng, d, 2.0);
            const double c = uniform(rng, 0.0, 5.0);
            const double tol = 1e-9;
            EXPECT_NEAR(m_plus(X), -m_minus(-X), tol);
            EXPECT_LE(m_plus(X + Y), m_plus(X) + m_plus(Y) + tol);
            EXPECT_GE(m_minus(X + Y), m_minus(X) + m_minus(Y) - tol);
            EXPECT_NEAR(m_plus(X * c), c * m_plus(X), tol * (1.0 + c));
            EXPECT_NEAR(m_minus(X * c), c * m_minus(X), tol * (1.0 + c));
            const auto Z = X + random_psd(rng, d);
            EXPECT_LE(m_plus(X), m_plus(Z) + tol);
            EXPECT_LE(m_minus(X), m_minus(Z) + tol);
        }
    }
}
