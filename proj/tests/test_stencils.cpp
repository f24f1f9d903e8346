#include "dynbc/stencils.hpp"

#include <Eigen/Core>
#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <vector>

using namespace dynbc;

namespace {

// samples f(t0 - k tau), k = 0..4, newest first
std::vector<double> samples(const std::function<double(double)>& f, double t0, double tau) {
    std::vector<double> v;
    for (int k = 0; k < 5; ++k) v.push_back(f(t0 - k * tau));
    return v;
}

double poly(int degree, double t) {
    double s = 0;
    for (int d = 0; d <= degree; ++d) s += (d + 1.5) * std::pow(t, d);
    return s;
}

double dpoly(int degree, double t) {
    double s = 0;
    for (int d = 1; d <= degree; ++d) s += (d + 1.5) * d * std::pow(t, d - 1);
    return s;
}

double apply(const Stencil& s, const std::vector<double>& v, double tau) {
    return apply_stencil(s, std::span<const double>(v), tau);
}

}  // namespace

TEST(Stencils, BackwardDifferencesExactness) {
    const double t = 0.7;
    const double tau = 0.1;
    auto v2 = samples([](double s) { return poly(2, s); }, t, tau);
    EXPECT_NEAR(apply(kBdf2, v2, tau), dpoly(2, t), 1e-12);
    auto v3 = samples([](double s) { return poly(3, s); }, t, tau);
    EXPECT_NEAR(apply(kBdf3, v3, tau), dpoly(3, t), 1e-11);
    EXPECT_GT(std::abs(apply(kBdf2, v3, tau) - dpoly(3, t)), 1e-4);
    // D_alt on (x^{n+2}, x^{n+1}, x^n) approximates the derivative one step ahead
    EXPECT_NEAR(apply(kAlt, v2, tau), dpoly(2, t + tau), 1e-12);
}

TEST(Stencils, DelayApproximationsExactness) {
    const double t = 0.4;
    const double tau = 0.05;
    // delayed samples p(t - tau), p(t - 2 tau), ...
    auto delayed = [&](int degree) { return samples([=](double s) { return poly(degree, s); }, t - tau, tau); };
    EXPECT_NEAR(apply(kExtrap2, delayed(1), tau), poly(1, t), 1e-13);
    EXPECT_GT(std::abs(apply(kExtrap2, delayed(2), tau) - poly(2, t)), 1e-4);
    EXPECT_NEAR(apply(kExtrap3, delayed(2), tau), poly(2, t), 1e-13);
    EXPECT_GT(std::abs(apply(kExtrap3, delayed(3), tau) - poly(3, t)), 1e-5);
    EXPECT_NEAR(apply(kDelayRateA, delayed(1), tau), dpoly(1, t), 1e-11);
    EXPECT_NEAR(apply(kDelayRateB, delayed(2), tau), dpoly(2, t), 1e-11);
    EXPECT_NEAR(apply(kDelayRateC, delayed(2), tau), dpoly(2, t), 1e-11);
    EXPECT_NEAR(apply(kDelayRate3, delayed(3), tau), dpoly(3, t), 1e-10);
}

TEST(Stencils, ThirdOrderExtrapolationOfCubicIsNotExact) {
    // 3 p(2) - 3 p(1) + p(0) for p = t^3 gives 21, not 27
    const std::vector<double> v{8.0, 1.0, 0.0};
    EXPECT_DOUBLE_EQ(apply(kExtrap3, v, 1.0), 21.0);
}

TEST(Stencils, InsufficientHistory) {
    const std::vector<double> v{1.0, 2.0};
    EXPECT_THROW(apply(kBdf2, v, 0.1), ParameterError);
    EXPECT_NO_THROW(apply(kExtrap2, v, 0.1));
}

TEST(Stencils, VectorValues) {
    std::vector<Eigen::VectorXd> v{Eigen::VectorXd::Constant(3, 3.0), Eigen::VectorXd::Constant(3, 2.0),
                                   Eigen::VectorXd::Constant(3, 1.0)};
    const Eigen::VectorXd d = discrete_derivative(DerivativeKind::Bdf2, std::span<const Eigen::VectorXd>(v), 0.5);
    EXPECT_NEAR(d[0], 2.0, 1e-15);
    EXPECT_EQ(derivative_stencil(DerivativeKind::Bdf3).width, 4);
}
