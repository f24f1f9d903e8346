#pragma once

#include "dynbc/linalg.hpp"
#include "dynbc/mesh.hpp"
#include "dynbc/problems.hpp"

#include <array>
#include <memory>
#include <span>
#include <utility>

namespace dynbc {

/// All matrices of the semi-discrete bulk-surface system
///
///   Mu u' + Ku u - Bu^T lambda = f_bulk(u)
///   Mp p' + Kp p + Bp^T lambda = f_surf(p)
///   Bu u - Bp p                = 0
///
/// for P1 elements on a mesh whose boundary mesh is the restriction of the
/// bulk mesh. With interior-first numbering Bu = [0 Mlambda] and is never
/// stored. The 2x2 block splits of Mu and Ku follow the same numbering:
/// index 1 = interior nodes, index 2 = boundary nodes.
struct BlockOperators {
    int n_u = 0;
    int n_p = 0;
    int n_lambda = 0;
    int n1 = 0;  ///< n_u - n_lambda

    SparseMatrix Mu, Ku;
    SparseMatrix Mp, Kp;
    SparseMatrix Mlambda;
    SparseMatrix Bp;

    SparseMatrix M11, M12, M21, M22;
    SparseMatrix K11, K12, K21, K22;
};

using Matrix3 = std::array<std::array<double, 3>, 3>;
using Matrix2 = std::array<std::array<double, 2>, 2>;

Matrix3 p1_triangle_stiffness(const std::array<Point, 3>& pts, double alpha);
Matrix3 p1_triangle_mass(const std::array<Point, 3>& pts);
Matrix2 p1_segment_mass(double length);
Matrix2 p1_segment_stiffness(double length, double kappa);

/// Throws ParameterError for a non-positive coefficient.
BlockOperators assemble_operators(const Mesh& mesh, double alpha, double kappa);

/// Piecewise-constant coefficients: one alpha per triangle, one kappa per
/// boundary segment (segment k joins loop entries k and k+1).
BlockOperators assemble_operators(const Mesh& mesh, std::span<const double> alpha_per_triangle,
                                  std::span<const double> kappa_per_segment);

/// Nodal values of the right-hand sides and of their state derivatives.
///
/// Loads enter the schemes as mass matrix times these nodal values, so the
/// Newton Jacobians are mass matrix times diag(derivative).
class Forcing {
public:
    virtual ~Forcing() = default;

    virtual bool bulk_state_dependent() const = 0;
    virtual bool surf_state_dependent() const = 0;

    /// Bulk source at all n_u nodes for bulk state u.
    virtual Vector bulk_values(double t, const Vector& u) const = 0;
    virtual Vector bulk_derivative(double t, const Vector& u) const = 0;
    /// Surface source at all n_p boundary nodes (loop order) for state p.
    virtual Vector surf_values(double t, const Vector& p) const = 0;
    virtual Vector surf_derivative(double t, const Vector& p) const = 0;
};

/// Forcing obtained by sampling a Problem at the mesh nodes.
std::shared_ptr<const Forcing> make_forcing(const Mesh& mesh, const Problem& problem);

/// (f_bulk, f_surf) load vectors: Mu * interpolant of the bulk source and
/// Mp * interpolant of the surface source.
std::pair<Vector, Vector> load_vectors(const Mesh& mesh, const BlockOperators& ops, const Problem& problem, double t,
                                       const Vector& u_nodal, const Vector& p_nodal);

/// Nodal interpolant of the exact solution on bulk nodes and on boundary
/// nodes. The trailing n_lambda entries of the bulk vector equal the surface
/// vector. Throws UnsupportedOperation when the problem has no exact solution.
std::pair<Vector, Vector> interpolate_exact(const Mesh& mesh, const Problem& problem, double t);

}  // namespace dynbc
