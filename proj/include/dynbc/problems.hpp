#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace dynbc {

/// Right-hand side evaluated at a point: f(t, x, y, state).
using SourceFn = std::function<double(double t, double x, double y, double state)>;
using ExactFn = std::function<double(double t, double x, double y)>;

/// Semi-linear parabolic problem with a dynamic boundary condition
///
///   u_t - div(alpha grad u)                      = f_bulk(t, x, u)  in the disk,
///   u_t - div_G(kappa grad_G u) + alpha d_n u    = f_surf(t, x, u)  on the circle.
///
/// The `*_deriv` functions are the partial derivatives with respect to the
/// state argument and drive the Newton solves.
struct Problem {
    std::string name;
    double alpha = 1.0;
    double kappa = 1.0;
    SourceFn f_bulk;
    SourceFn f_bulk_deriv;
    SourceFn f_surf;
    SourceFn f_surf_deriv;
    bool bulk_state_dependent = false;
    bool surf_state_dependent = false;
    std::optional<ExactFn> exact;
};

/// u = exp(-t) x y with alpha = kappa = 1; both sources independent of the state.
Problem linear_problem();

/// u = (x^2 + y^2)^2 cos(pi t / 2) with the double-well term -p^3 + p on the boundary.
Problem semilinear_problem();

/// Lookup by CLI name ("linear", "semilinear"); throws ParameterError otherwise.
Problem problem_by_name(const std::string& name);

struct ProblemPoint {
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
    bool on_boundary = false;
};

struct ValidationReport {
    bool passed = false;
    double max_bulk_residual = 0.0;
    double max_surf_residual = 0.0;
    double max_jacobian_error = 0.0;
    ProblemPoint worst;  ///< point with the largest PDE residual
    double lipschitz_bulk = 0.0;  ///< sup |df_bulk/du| on the radius-2 tube around the exact solution
    double lipschitz_surf = 0.0;
    std::string message;
};

/// Finite-difference check (step 1e-5) that the manufactured sources reproduce
/// the exact solution at `samples` random space-time points, plus consistency
/// of the state derivatives.
ValidationReport validate_problem(const Problem& problem, int samples = 100, unsigned seed = 20240229u,
                                  double tolerance = 1e-5);

}  // namespace dynbc
