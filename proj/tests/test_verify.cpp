#include "dynbc/errors.hpp"
#include "dynbc/verify.hpp"

#include <gtest/gtest.h>

using namespace dynbc;

TEST(Identities, HoldToRoundoff) {
    const IdentityErrors e = identity_residuals(1000);
    EXPECT_LE(e.difference_of_derivatives, 1e-12);
    EXPECT_LE(e.testing_with_difference, 1e-12);
    EXPECT_LE(e.testing_with_value, 1e-12);
}

TEST(TruncationOrders, Slopes) {
    const TruncationSlopes s = truncation_slopes();
    EXPECT_EQ(s.taus.size(), 8u);
    EXPECT_NEAR(s.bdf_defect, 2.0, 0.1);
    EXPECT_NEAR(s.second_difference, 2.0, 0.1);
    EXPECT_NEAR(s.third_difference, 3.0, 0.1);
}

TEST(DenseOracle, EveryVariantOnTinyMesh) {
    const Mesh mesh = generate_disk_mesh(0.7);
    ASSERT_LE(mesh.n_vertices(), 30u);
    const Problem p = linear_problem();
    for (Variant v : {Variant::SplitDelayA, Variant::SplitDelayB, Variant::SplitDelayC, Variant::Auxiliary,
                      Variant::Monolithic, Variant::ThirdOrder}) {
        for (double tau : {0.2, 0.01}) EXPECT_LE(dense_oracle_difference(v, mesh, p, tau), 1e-9) << variant_name(v);
    }
    EXPECT_THROW(dense_oracle_difference(Variant::SplitDelayB, mesh, semilinear_problem(), 0.1),
                 UnsupportedOperation);
}

TEST(DenseOracle, DetectsADifferentScheme) {
    // the variants genuinely differ, so the oracle would notice a mixed-up rate
    const Mesh mesh = generate_disk_mesh(0.7);
    const Problem p = linear_problem();
    const BlockOperators ops = assemble_operators(mesh, 1.0, 1.0);
    auto one_step = [&](Variant v) {
        SchemeConfig c;
        c.variant = v;
        c.tau = 0.2;
        return integrate(mesh, ops, p, c).u.back();
    };
    EXPECT_GT((one_step(Variant::SplitDelayA) - one_step(Variant::SplitDelayB)).norm(), 1e-8);
}

TEST(Verification, AllChecksPass) {
    for (const auto& c : run_verification()) EXPECT_TRUE(c.passed) << c.name << ": " << c.detail;
}
