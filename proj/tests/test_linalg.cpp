#include "dynbc/errors.hpp"
#include "dynbc/linalg.hpp"

#include <gtest/gtest.h>

using namespace dynbc;

namespace {

SparseMatrix laplace1d(int n) {
    std::vector<Triplet> t;
    for (int i = 0; i < n; ++i) {
        t.emplace_back(i, i, 2.0);
        if (i > 0) t.emplace_back(i, i - 1, -1.0);
        if (i + 1 < n) t.emplace_back(i, i + 1, -1.0);
    }
    return from_triplets(n, n, t);
}

}  // namespace

TEST(Factorization, SpdSolve) {
    const SparseMatrix a = laplace1d(20);
    const Vector x = Vector::LinSpaced(20, -1.0, 3.0);
    const Factorization f = factorize(a, Factorization::Kind::Spd);
    EXPECT_LT((f.solve(a * x) - x).norm(), 1e-12);
}

TEST(Factorization, IndefiniteSaddleSolve) {
    // [[2, 1], [1, 0]] is indefinite but nonsingular
    const SparseMatrix a = from_triplets(2, 2, {{0, 0, 2.0}, {0, 1, 1.0}, {1, 0, 1.0}});
    const Factorization f = factorize(a, Factorization::Kind::Indefinite);
    const Vector x = f.solve(Vector::Ones(2));
    EXPECT_NEAR(x[0], 1.0, 1e-14);
    EXPECT_NEAR(x[1], -1.0, 1e-14);
}

TEST(Factorization, ZeroPivotIsReported) {
    const SparseMatrix empty_col = from_triplets(2, 2, {{0, 0, 1.0}});
    EXPECT_THROW(factorize(empty_col, Factorization::Kind::Spd), FactorizationError);
    const SparseMatrix singular = from_triplets(2, 2, {{0, 0, 1.0}, {0, 1, 1.0}, {1, 0, 1.0}, {1, 1, 1.0}});
    EXPECT_THROW(factorize(singular, Factorization::Kind::Indefinite), FactorizationError);
    EXPECT_THROW(factorize(singular, Factorization::Kind::Spd), FactorizationError);
}

TEST(Factorization, DimensionChecks) {
    EXPECT_THROW(factorize(from_triplets(2, 3, {{0, 0, 1.0}}), Factorization::Kind::Spd), DimensionError);
    const Factorization f = factorize(laplace1d(4), Factorization::Kind::Spd);
    EXPECT_THROW(f.solve(Vector::Ones(3)), DimensionError);
    Factorization g = factorize(laplace1d(4), Factorization::Kind::Spd);
    EXPECT_THROW(g.refactor(laplace1d(5)), DimensionError);
    const Factorization none;
    EXPECT_THROW(none.solve(Vector::Ones(1)), FactorizationError);
}

TEST(Factorization, RefactorWithSameAndNewPattern) {
    Factorization f = factorize(laplace1d(6), Factorization::Kind::Indefinite);
    SparseMatrix b = laplace1d(6) * 3.0;
    f.refactor(b);
    const Vector x = Vector::Ones(6);
    EXPECT_LT((f.solve(b * x) - x).norm(), 1e-12);
    // a pattern change triggers a new symbolic analysis
    std::vector<Triplet> t{{0, 5, 0.5}, {5, 0, 0.5}};
    SparseMatrix c = laplace1d(6) + from_triplets(6, 6, t);
    f.refactor(c);
    EXPECT_LT((f.solve(c * x) - x).norm(), 1e-12);
}

TEST(WeightedNorm, MatchesQuadraticForm) {
    const SparseMatrix a = laplace1d(3);
    Vector x(3);
    x << 1.0, 2.0, -1.0;
    // x^T A x = 2 + 8 + 2 - 2*(2) - 2*(-2) = 12
    EXPECT_NEAR(weighted_norm(x, a), std::sqrt(12.0), 1e-14);
    EXPECT_THROW(weighted_norm(Vector::Ones(2), a), DimensionError);
}

TEST(Helpers, BlockAndAsymmetry) {
    const SparseMatrix a = laplace1d(5);
    const SparseMatrix b = block(a, 1, 1, 2, 3);
    EXPECT_EQ(b.rows(), 2);
    EXPECT_EQ(b.cols(), 3);
    EXPECT_EQ(b.coeff(0, 0), 2.0);
    EXPECT_EQ(b.coeff(0, 1), -1.0);
    EXPECT_EQ(asymmetry(a), 0.0);
    EXPECT_EQ(asymmetry(from_triplets(2, 2, {{0, 1, 1.0}})), 1.0);
    EXPECT_EQ(format_coordinates(from_triplets(2, 2, {{1, 0, 0.5}})), "1 0 0.5\n");
}
