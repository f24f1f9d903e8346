#include "dynbc/errors.hpp"
#include "dynbc/problems.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace dynbc;

TEST(Problems, ShippedProblemsValidate) {
    for (const Problem& p : {linear_problem(), semilinear_problem()}) {
        const ValidationReport r = validate_problem(p);
        EXPECT_TRUE(r.passed) << p.name << ": " << r.message;
        EXPECT_LT(r.max_bulk_residual, 1e-5);
        EXPECT_LT(r.max_surf_residual, 1e-5);
        EXPECT_LT(r.max_jacobian_error, 1e-6);
    }
}

TEST(Problems, Lookup) {
    EXPECT_EQ(problem_by_name("linear").name, "linear");
    EXPECT_TRUE(problem_by_name("semilinear").surf_state_dependent);
    EXPECT_FALSE(problem_by_name("semilinear").bulk_state_dependent);
    EXPECT_THROW(problem_by_name("cubic"), ParameterError);
}

TEST(Problems, ExactValues) {
    const Problem lin = linear_problem();
    EXPECT_DOUBLE_EQ((*lin.exact)(0.0, 0.5, 0.5), 0.25);
    const Problem sl = semilinear_problem();
    EXPECT_NEAR((*sl.exact)(1.0, 1.0, 0.0), 0.0, 1e-15);
    EXPECT_NEAR((*sl.exact)(0.0, 0.0, 0.5), 0.0625, 1e-15);
    // double-well: f_surf depends on the state through -p^3 + p
    EXPECT_NEAR(sl.f_surf(0.2, 1.0, 0.0, 1.0) - sl.f_surf(0.2, 1.0, 0.0, 0.0), 0.0, 1e-14);
    EXPECT_NEAR(sl.f_surf_deriv(0.2, 1.0, 0.0, 2.0), -11.0, 1e-14);
}

TEST(Problems, WrongSourceIsCaught) {
    Problem p = linear_problem();
    p.f_surf = [](double t, double x, double y, double) { return 4.0 * std::exp(-t) * x * y; };
    const ValidationReport r = validate_problem(p);
    EXPECT_FALSE(r.passed);
    EXPECT_GT(r.max_surf_residual, 1e-3);
    EXPECT_TRUE(r.worst.on_boundary);

    Problem q = semilinear_problem();
    q.f_surf_deriv = [](double, double, double, double) { return 0.0; };
    EXPECT_FALSE(validate_problem(q).passed);
}

TEST(Problems, NoExactSolution) {
    Problem p = linear_problem();
    p.exact.reset();
    EXPECT_THROW(validate_problem(p), UnsupportedOperation);
}
