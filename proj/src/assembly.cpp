#include "dynbc/assembly.hpp"

#include "dynbc/errors.hpp"

#include <cmath>
#include <vector>

namespace dynbc {

Matrix3 p1_triangle_stiffness(const std::array<Point, 3>& p, double alpha) {
    const double area2 = (p[1].x - p[0].x) * (p[2].y - p[0].y) - (p[2].x - p[0].x) * (p[1].y - p[0].y);
    // grad(phi_i) = (y_j - y_k, x_k - x_j) / (2 area) for (i, j, k) cyclic.
    std::array<double, 3> gx{};
    std::array<double, 3> gy{};
    for (int i = 0; i < 3; ++i) {
        const auto& pj = p[(i + 1) % 3];
        const auto& pk = p[(i + 2) % 3];
        gx[i] = (pj.y - pk.y) / area2;
        gy[i] = (pk.x - pj.x) / area2;
    }
    const double area = 0.5 * std::abs(area2);
    Matrix3 k{};
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            k[i][j] = alpha * area * (gx[i] * gx[j] + gy[i] * gy[j]);
        }
    }
    return k;
}

Matrix3 p1_triangle_mass(const std::array<Point, 3>& p) {
    const double area = 0.5 * std::abs((p[1].x - p[0].x) * (p[2].y - p[0].y) - (p[2].x - p[0].x) * (p[1].y - p[0].y));
    Matrix3 m{};
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            m[i][j] = area / 12.0 * (i == j ? 2.0 : 1.0);
        }
    }
    return m;
}

Matrix2 p1_segment_mass(double length) {
    return {{{length / 3.0, length / 6.0}, {length / 6.0, length / 3.0}}};
}

Matrix2 p1_segment_stiffness(double length, double kappa) {
    const double c = kappa / length;
    return {{{c, -c}, {-c, c}}};
}

BlockOperators assemble_operators(const Mesh& mesh, double alpha, double kappa) {
    const std::vector<double> a(mesh.n_triangles(), alpha);
    const std::vector<double> k(mesh.n_boundary(), kappa);
    return assemble_operators(mesh, a, k);
}

BlockOperators assemble_operators(const Mesh& mesh, std::span<const double> alpha_per_triangle,
                                  std::span<const double> kappa_per_segment) {
    if (alpha_per_triangle.size() != mesh.n_triangles() || kappa_per_segment.size() != mesh.n_boundary()) {
        throw DimensionError("assemble_operators: coefficient count does not match mesh");
    }
    for (double a : alpha_per_triangle) {
        if (!(a > 0.0)) throw ParameterError("diffusion coefficient alpha must be positive");
    }
    for (double k : kappa_per_segment) {
        if (!(k > 0.0)) throw ParameterError("surface diffusion coefficient kappa must be positive");
    }
    if (mesh.n_boundary() < 3) {
        throw ValidationError("assemble_operators: boundary loop needs at least 3 vertices");
    }

    BlockOperators ops;
    ops.n_u = static_cast<int>(mesh.n_vertices());
    ops.n_p = static_cast<int>(mesh.n_boundary());
    ops.n_lambda = ops.n_p;
    ops.n1 = ops.n_u - ops.n_lambda;

    const auto& v = mesh.vertices();
    std::vector<Triplet> mass;
    std::vector<Triplet> stiff;
    mass.reserve(9 * mesh.n_triangles());
    stiff.reserve(9 * mesh.n_triangles());
    for (std::size_t e = 0; e < mesh.n_triangles(); ++e) {
        const auto& t = mesh.triangles()[e];
        const std::array<Point, 3> pts{v[t[0]], v[t[1]], v[t[2]]};
        const Matrix3 me = p1_triangle_mass(pts);
        const Matrix3 ke = p1_triangle_stiffness(pts, alpha_per_triangle[e]);
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                mass.emplace_back(t[i], t[j], me[i][j]);
                stiff.emplace_back(t[i], t[j], ke[i][j]);
            }
        }
    }
    ops.Mu = from_triplets(ops.n_u, ops.n_u, mass);
    ops.Ku = from_triplets(ops.n_u, ops.n_u, stiff);

    // Surface operators live on the polygonal boundary, indexed by loop position.
    const auto nb = static_cast<int>(mesh.n_boundary());
    std::vector<Triplet> smass;
    std::vector<Triplet> sstiff;
    for (int k = 0; k < nb; ++k) {
        const int a = k;
        const int b = (k + 1) % nb;
        const Point& pa = v[mesh.boundary_loop()[a]];
        const Point& pb = v[mesh.boundary_loop()[b]];
        const double len = std::hypot(pb.x - pa.x, pb.y - pa.y);
        const Matrix2 me = p1_segment_mass(len);
        const Matrix2 ke = p1_segment_stiffness(len, kappa_per_segment[static_cast<std::size_t>(k)]);
        const std::array<int, 2> idx{a, b};
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                smass.emplace_back(idx[i], idx[j], me[i][j]);
                sstiff.emplace_back(idx[i], idx[j], ke[i][j]);
            }
        }
    }
    ops.Mp = from_triplets(nb, nb, smass);
    ops.Kp = from_triplets(nb, nb, sstiff);
    // Equal boundary meshes and spaces: the multiplier space is the trace space.
    ops.Mlambda = ops.Mp;
    ops.Bp = ops.Mp;

    const int n1 = ops.n1;
    const int n2 = ops.n_lambda;
    ops.M11 = block(ops.Mu, 0, 0, n1, n1);
    ops.M12 = block(ops.Mu, 0, n1, n1, n2);
    ops.M21 = block(ops.Mu, n1, 0, n2, n1);
    ops.M22 = block(ops.Mu, n1, n1, n2, n2);
    ops.K11 = block(ops.Ku, 0, 0, n1, n1);
    ops.K12 = block(ops.Ku, 0, n1, n1, n2);
    ops.K21 = block(ops.Ku, n1, 0, n2, n1);
    ops.K22 = block(ops.Ku, n1, n1, n2, n2);
    return ops;
}

namespace {

class ProblemForcing final : public Forcing {
public:
    ProblemForcing(const Mesh& mesh, Problem problem) : problem_(std::move(problem)) {
        nodes_ = mesh.vertices();
        boundary_.reserve(mesh.n_boundary());
        for (int b : mesh.boundary_loop()) boundary_.push_back(mesh.vertices()[b]);
    }

    bool bulk_state_dependent() const override { return problem_.bulk_state_dependent; }
    bool surf_state_dependent() const override { return problem_.surf_state_dependent; }

    Vector bulk_values(double t, const Vector& u) const override { return sample(problem_.f_bulk, nodes_, t, u); }
    Vector bulk_derivative(double t, const Vector& u) const override {
        return sample(problem_.f_bulk_deriv, nodes_, t, u);
    }
    Vector surf_values(double t, const Vector& p) const override { return sample(problem_.f_surf, boundary_, t, p); }
    Vector surf_derivative(double t, const Vector& p) const override {
        return sample(problem_.f_surf_deriv, boundary_, t, p);
    }

private:
    static Vector sample(const SourceFn& f, const std::vector<Point>& pts, double t, const Vector& state) {
        if (state.size() != static_cast<Eigen::Index>(pts.size())) {
            throw DimensionError("forcing: state has size " + std::to_string(state.size()) + ", expected " +
                                 std::to_string(pts.size()));
        }
        Vector out(state.size());
        for (Eigen::Index i = 0; i < state.size(); ++i) {
            const Point& q = pts[static_cast<std::size_t>(i)];
            out[i] = f(t, q.x, q.y, state[i]);
        }
        return out;
    }

    Problem problem_;
    std::vector<Point> nodes_;
    std::vector<Point> boundary_;
};

}  // namespace

std::shared_ptr<const Forcing> make_forcing(const Mesh& mesh, const Problem& problem) {
    return std::make_shared<ProblemForcing>(mesh, problem);
}

std::pair<Vector, Vector> load_vectors(const Mesh& mesh, const BlockOperators& ops, const Problem& problem, double t,
                                       const Vector& u_nodal, const Vector& p_nodal) {
    const ProblemForcing forcing(mesh, problem);
    return {ops.Mu * forcing.bulk_values(t, u_nodal), ops.Mp * forcing.surf_values(t, p_nodal)};
}

std::pair<Vector, Vector> interpolate_exact(const Mesh& mesh, const Problem& problem, double t) {
    if (!problem.exact) {
        throw UnsupportedOperation("problem '" + problem.name + "' has no exact solution");
    }
    const auto& u = *problem.exact;
    Vector un(static_cast<Eigen::Index>(mesh.n_vertices()));
    for (std::size_t i = 0; i < mesh.n_vertices(); ++i) {
        const Point& q = mesh.vertices()[i];
        un[static_cast<Eigen::Index>(i)] = u(t, q.x, q.y);
    }
    Vector pn(static_cast<Eigen::Index>(mesh.n_boundary()));
    for (std::size_t k = 0; k < mesh.n_boundary(); ++k) {
        const Point& q = mesh.vertices()[mesh.boundary_loop()[k]];
        pn[static_cast<Eigen::Index>(k)] = u(t, q.x, q.y);
    }
    return {un, pn};
}

}  // namespace dynbc
