#include "dynbc/problems.hpp"

#include "dynbc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace dynbc {

namespace {

constexpr double pi = std::numbers::pi;

SourceFn zero_source() {
    return [](double, double, double, double) { return 0.0; };
}

}  // namespace

Problem linear_problem() {
    Problem p;
    p.name = "linear";
    p.alpha = 1.0;
    p.kappa = 1.0;
    // Delta(xy) = 0 in the bulk; on the unit circle Delta_G(xy) = -4xy and d_n(xy) = 2xy.
    p.f_bulk = [](double t, double x, double y, double) { return -std::exp(-t) * x * y; };
    p.f_bulk_deriv = zero_source();
    p.f_surf = [](double t, double x, double y, double) { return 5.0 * std::exp(-t) * x * y; };
    p.f_surf_deriv = zero_source();
    p.exact = [](double t, double x, double y) { return std::exp(-t) * x * y; };
    return p;
}

Problem semilinear_problem() {
    Problem p;
    p.name = "semilinear";
    p.alpha = 1.0;
    p.kappa = 1.0;
    p.f_bulk = [](double t, double x, double y, double) {
        const double r2 = x * x + y * y;
        const double c = std::cos(pi * t / 2.0);
        const double s = std::sin(pi * t / 2.0);
        return -(pi / 2.0) * s * r2 * r2 - 16.0 * r2 * c;
    };
    p.f_bulk_deriv = zero_source();
    // g(t) - p^3 + p, where g is manufactured on r = 1 (tangentially constant, d_n r^4 = 4).
    p.f_surf = [](double t, double, double, double u) {
        const double c = std::cos(pi * t / 2.0);
        const double s = std::sin(pi * t / 2.0);
        const double g = -(pi / 2.0) * s + 4.0 * c + c * c * c - c;
        return g - u * u * u + u;
    };
    p.f_surf_deriv = [](double, double, double, double u) { return -3.0 * u * u + 1.0; };
    p.surf_state_dependent = true;
    p.exact = [](double t, double x, double y) {
        const double r2 = x * x + y * y;
        return r2 * r2 * std::cos(pi * t / 2.0);
    };
    return p;
}

Problem problem_by_name(const std::string& name) {
    if (name == "linear") return linear_problem();
    if (name == "semilinear") return semilinear_problem();
    throw ParameterError("unknown problem '" + name + "' (expected linear or semilinear)");
}

ValidationReport validate_problem(const Problem& problem, int samples, unsigned seed, double tolerance) {
    if (!problem.exact) {
        throw UnsupportedOperation("validate_problem: problem '" + problem.name + "' has no exact solution");
    }
    const ExactFn& u = *problem.exact;
    // First derivatives use the nominal step; second differences use a wider
    // one so that cancellation (eps/h^2) stays well below the tolerance.
    const double h1 = 1e-5;
    const double h2 = 1e-4;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> time(-0.8, 1.0);

    ValidationReport rep;
    double worst = -1.0;
    auto track = [&](double residual, const ProblemPoint& pt, double& slot) {
        slot = std::max(slot, std::abs(residual));
        if (std::abs(residual) > worst) {
            worst = std::abs(residual);
            rep.worst = pt;
        }
    };

    auto jacobian_check = [&](const SourceFn& f, const SourceFn& df, double t, double x, double y, double base,
                              double& lipschitz) {
        for (int k = -10; k <= 10; ++k) {
            const double s = base + 0.2 * k;
            const double fd = (f(t, x, y, s + h1) - f(t, x, y, s - h1)) / (2.0 * h1);
            const double d = df(t, x, y, s);
            rep.max_jacobian_error = std::max(rep.max_jacobian_error, std::abs(fd - d) / std::max(1.0, std::abs(d)));
            lipschitz = std::max(lipschitz, std::abs(d));
        }
    };

    for (int i = 0; i < samples; ++i) {
        // Bulk point, uniform in the disk.
        {
            const double t = time(rng);
            const double r = std::sqrt(unit(rng));
            const double th = 2.0 * pi * unit(rng);
            const double x = r * std::cos(th);
            const double y = r * std::sin(th);
            const double ut = (u(t + h1, x, y) - u(t - h1, x, y)) / (2.0 * h1);
            const double lap =
                (u(t, x + h2, y) + u(t, x - h2, y) + u(t, x, y + h2) + u(t, x, y - h2) - 4.0 * u(t, x, y)) / (h2 * h2);
            const double res = ut - problem.alpha * lap - problem.f_bulk(t, x, y, u(t, x, y));
            track(res, {t, x, y, false}, rep.max_bulk_residual);
            jacobian_check(problem.f_bulk, problem.f_bulk_deriv, t, x, y, u(t, x, y), rep.lipschitz_bulk);
        }
        // Boundary point on the unit circle.
        {
            const double t = time(rng);
            const double th = 2.0 * pi * unit(rng);
            const double x = std::cos(th);
            const double y = std::sin(th);
            auto on_circle = [&](double angle, double radius) {
                return u(t, radius * std::cos(angle), radius * std::sin(angle));
            };
            const double ut = (u(t + h1, x, y) - u(t - h1, x, y)) / (2.0 * h1);
            const double lap_g =
                (on_circle(th + h2, 1.0) + on_circle(th - h2, 1.0) - 2.0 * on_circle(th, 1.0)) / (h2 * h2);
            const double dn = (on_circle(th, 1.0 + h1) - on_circle(th, 1.0 - h1)) / (2.0 * h1);
            const double res =
                ut - problem.kappa * lap_g + problem.alpha * dn - problem.f_surf(t, x, y, u(t, x, y));
            track(res, {t, x, y, true}, rep.max_surf_residual);
            jacobian_check(problem.f_surf, problem.f_surf_deriv, t, x, y, u(t, x, y), rep.lipschitz_surf);
        }
    }

    const bool pde_ok = rep.max_bulk_residual <= tolerance && rep.max_surf_residual <= tolerance;
    const bool jac_ok = rep.max_jacobian_error <= 1e-6;
    rep.passed = pde_ok && jac_ok;
    std::ostringstream msg;
    msg.precision(6);
    msg << problem.name << ": bulk residual " << rep.max_bulk_residual << ", surface residual "
        << rep.max_surf_residual << ", jacobian error " << rep.max_jacobian_error;
    if (!rep.passed) {
        msg << "; worst point t=" << rep.worst.t << " x=" << rep.worst.x << " y=" << rep.worst.y
            << (rep.worst.on_boundary ? " (boundary)" : " (bulk)");
    }
    rep.message = msg.str();
    return rep;
}

}  // namespace dynbc
