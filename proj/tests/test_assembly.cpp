#include "dynbc/assembly.hpp"
#include "dynbc/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace dynbc;

TEST(Elements, ReferenceTriangle) {
    const std::array<Point, 3> p{Point{0, 0}, Point{1, 0}, Point{0, 1}};
    const Matrix3 k = p1_triangle_stiffness(p, 1.0);
    EXPECT_NEAR(k[0][0], 1.0, 1e-15);
    EXPECT_NEAR(k[1][1], 0.5, 1e-15);
    EXPECT_NEAR(k[0][1], -0.5, 1e-15);
    EXPECT_NEAR(k[1][2], 0.0, 1e-15);
    const Matrix3 m = p1_triangle_mass(p);
    EXPECT_NEAR(m[0][0], 1.0 / 12, 1e-15);
    EXPECT_NEAR(m[0][1], 1.0 / 24, 1e-15);
    // orientation does not matter
    const Matrix3 k2 = p1_triangle_stiffness({p[0], p[2], p[1]}, 2.0);
    EXPECT_NEAR(k2[0][0], 2.0, 1e-15);
}

TEST(Elements, Segment) {
    const Matrix2 m = p1_segment_mass(0.6);
    EXPECT_NEAR(m[0][0], 0.2, 1e-15);
    EXPECT_NEAR(m[0][1], 0.1, 1e-15);
    const Matrix2 k = p1_segment_stiffness(0.5, 3.0);
    EXPECT_NEAR(k[0][0], 6.0, 1e-15);
    EXPECT_NEAR(k[1][0], -6.0, 1e-15);
}

class AssembledDisk : public ::testing::Test {
protected:
    Mesh mesh = generate_disk_mesh(0.2);
    BlockOperators ops = assemble_operators(mesh, 1.0, 1.0);
};

TEST_F(AssembledDisk, Dimensions) {
    EXPECT_EQ(ops.n_u, static_cast<int>(mesh.n_vertices()));
    EXPECT_EQ(ops.n_p, static_cast<int>(mesh.n_boundary()));
    EXPECT_EQ(ops.n_lambda, ops.n_p);
    EXPECT_EQ(ops.n1 + ops.n_lambda, ops.n_u);
    EXPECT_EQ(ops.M11.rows(), ops.n1);
    EXPECT_EQ(ops.M12.cols(), ops.n_lambda);
    EXPECT_EQ(ops.K21.rows(), ops.n_lambda);
}

TEST_F(AssembledDisk, MassIntegratesConstants) {
    const Vector one_u = Vector::Ones(ops.n_u);
    const Vector one_p = Vector::Ones(ops.n_p);
    EXPECT_NEAR(one_u.dot(ops.Mu * one_u), mesh_stats(mesh).polygon_area, 1e-12);
    double perimeter = 0;
    const auto& v = mesh.vertices();
    for (std::size_t k = 0; k < mesh.n_boundary(); ++k) {
        const Point& a = v[mesh.boundary_loop()[k]];
        const Point& b = v[mesh.boundary_loop()[(k + 1) % mesh.n_boundary()]];
        perimeter += std::hypot(b.x - a.x, b.y - a.y);
    }
    EXPECT_NEAR(one_p.dot(ops.Mp * one_p), perimeter, 1e-12);
    EXPECT_LT(perimeter, 2 * std::numbers::pi);
}

TEST_F(AssembledDisk, StiffnessKernelAndLinearEnergy) {
    EXPECT_LT((ops.Ku * Vector::Ones(ops.n_u)).norm(), 1e-12);
    EXPECT_LT((ops.Kp * Vector::Ones(ops.n_p)).norm(), 1e-12);
    // |grad x|^2 integrates to the polygon area
    Vector x(ops.n_u);
    for (int i = 0; i < ops.n_u; ++i) x[i] = mesh.vertices()[static_cast<std::size_t>(i)].x;
    EXPECT_NEAR(x.dot(ops.Ku * x), mesh_stats(mesh).polygon_area, 1e-12);
}

TEST_F(AssembledDisk, SymmetryAndBlocks) {
    for (const SparseMatrix* m : {&ops.Mu, &ops.Ku, &ops.Mp, &ops.Kp}) EXPECT_LT(asymmetry(*m), 1e-15);
    EXPECT_EQ(asymmetry(SparseMatrix(ops.Mlambda - ops.Mp)), 0.0);
    EXPECT_EQ(SparseMatrix(ops.Bp - ops.Mp).norm(), 0.0);
    const Vector r = Vector::LinSpaced(ops.n_u, 0.0, 1.0);
    const Vector full = ops.Mu * r;
    const Vector top = ops.M11 * r.head(ops.n1) + ops.M12 * r.tail(ops.n_lambda);
    const Vector bottom = ops.M21 * r.head(ops.n1) + ops.M22 * r.tail(ops.n_lambda);
    EXPECT_LT((full.head(ops.n1) - top).norm(), 1e-14);
    EXPECT_LT((full.tail(ops.n_lambda) - bottom).norm(), 1e-14);
}

TEST_F(AssembledDisk, CoefficientsScaleStiffness) {
    const BlockOperators scaled = assemble_operators(mesh, 2.5, 0.5);
    EXPECT_LT(SparseMatrix(scaled.Ku - 2.5 * ops.Ku).norm(), 1e-12);
    EXPECT_LT(SparseMatrix(scaled.Kp - 0.5 * ops.Kp).norm(), 1e-12);
    EXPECT_THROW(assemble_operators(mesh, 0.0, 1.0), ParameterError);
    EXPECT_THROW(assemble_operators(mesh, 1.0, -1.0), ParameterError);
    const std::vector<double> short_alpha(3, 1.0);
    const std::vector<double> kappa(mesh.n_boundary(), 1.0);
    EXPECT_THROW(assemble_operators(mesh, short_alpha, kappa), DimensionError);
}

TEST_F(AssembledDisk, LoadsAndInterpolants) {
    const Problem p = linear_problem();
    const auto [u, q] = interpolate_exact(mesh, p, 0.3);
    EXPECT_LT((u.tail(ops.n_lambda) - q).norm(), 1e-15);
    const auto [fu, fp] = load_vectors(mesh, ops, p, 0.3, u, q);
    // f_bulk = -u for this problem
    EXPECT_LT((fu + ops.Mu * u).norm(), 1e-14);
    EXPECT_LT((fp - 5.0 * ops.Mp * q).norm(), 1e-13);
    auto forcing = make_forcing(mesh, p);
    EXPECT_FALSE(forcing->surf_state_dependent());
    EXPECT_THROW(forcing->bulk_values(0.0, Vector::Zero(3)), DimensionError);
}
