#include "dynbc/verify.hpp"

#include "dynbc/analysis.hpp"
#include "dynbc/errors.hpp"
#include "dynbc/stencils.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

namespace dynbc {

namespace {

using Dense = Eigen::MatrixXd;

double rel(double diff, double scale) { return scale > 0.0 ? diff / scale : diff; }

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), pattern, a, b, c);
    return buf;
}

}  // namespace

IdentityErrors identity_residuals(int trials, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_int_distribution<int> dim(1, 8);
    IdentityErrors out;
    for (int trial = 0; trial < trials; ++trial) {
        const int d = dim(rng);
        const double tau = std::pow(10.0, -3.0 + 3.0 * (0.5 * unit(rng) + 0.5));
        const double scale = std::pow(10.0, 3.0 * unit(rng));
        Dense a(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) a(i, j) = unit(rng);
        const Dense m = a.transpose() * a + 0.1 * Dense::Identity(d, d);
        // x[0] newest: x^{n+3}, x^{n+2}, x^{n+1}, x^n
        std::vector<Vector> x(4, Vector(d));
        for (auto& v : x)
            for (int i = 0; i < d; ++i) v[i] = scale * unit(rng);
        auto sq = [&](const Vector& v) { return v.dot(m * v); };

        const Vector dbdf = apply_stencil(kBdf2, std::span<const Vector>(x.data(), 3), tau);
        const Vector dalt = apply_stencil(kAlt, std::span<const Vector>(x.data() + 1, 3), tau);
        {
            const Vector lhs = 2.0 * tau * (dbdf - dalt);
            const Vector rhs = 3.0 * (x[0] - 3.0 * x[1] + 3.0 * x[2] - x[3]);
            const double s = 3.0 * x[0].norm() + 9.0 * x[1].norm() + 9.0 * x[2].norm() + 3.0 * x[3].norm();
            out.difference_of_derivatives = std::max(out.difference_of_derivatives, rel((lhs - rhs).norm(), s));
        }
        const Vector e3 = x[0] - x[1];
        const Vector e2 = x[1] - x[2];
        const Vector ee3 = e3 - e2;
        {
            const double lhs = 2.0 * tau * e3.dot(m * dbdf);
            const double t1 = 2.5 * sq(e3);
            const double t2 = 0.5 * sq(e2);
            const double t3 = 0.5 * sq(ee3);
            const double rhs = t1 - t2 + t3;
            out.testing_with_difference =
                std::max(out.testing_with_difference, rel(std::abs(lhs - rhs), std::abs(lhs) + t1 + t2 + t3));
        }
        {
            const double lhs = 4.0 * tau * x[0].dot(m * dbdf);
            const double t[5] = {sq(x[0]), sq(x[1]), sq(2.0 * x[0] - x[1]), sq(2.0 * x[1] - x[2]),
                                 sq(x[0] - 2.0 * x[1] + x[2])};
            const double rhs = t[0] - t[1] + t[2] - t[3] + t[4];
            const double s = std::abs(lhs) + t[0] + t[1] + t[2] + t[3] + t[4];
            out.testing_with_value = std::max(out.testing_with_value, rel(std::abs(lhs - rhs), s));
        }
    }
    return out;
}

TruncationSlopes truncation_slopes() {
    TruncationSlopes out;
    const double t = 1.0;
    std::vector<double> d1;
    std::vector<double> d2;
    std::vector<double> d3;
    for (int k = 3; k <= 10; ++k) {
        const double tau = std::ldexp(1.0, -k);
        const std::vector<double> r{std::sin(t), std::sin(t - tau), std::sin(t - 2 * tau), std::sin(t - 3 * tau)};
        out.taus.push_back(tau);
        d1.push_back(std::abs(apply_stencil(kBdf2, std::span<const double>(r.data(), 3), tau) - std::cos(t)));
        d2.push_back(std::abs(r[0] - 2 * r[1] + r[2]));
        d3.push_back(std::abs(r[0] - 3 * r[1] + 3 * r[2] - r[3]));
    }
    out.bdf_defect = loglog_slope(out.taus, d1);
    out.second_difference = loglog_slope(out.taus, d2);
    out.third_difference = loglog_slope(out.taus, d3);
    return out;
}

namespace {

// Dense P1 matrices built straight from the mesh, without the sparse assembly.
struct DenseOps {
    Dense mu, ku, mp, kp;
};

DenseOps dense_ops(const Mesh& mesh, double alpha, double kappa) {
    const int n = static_cast<int>(mesh.n_vertices());
    const int nb = static_cast<int>(mesh.n_boundary());
    DenseOps d{Dense::Zero(n, n), Dense::Zero(n, n), Dense::Zero(nb, nb), Dense::Zero(nb, nb)};
    const auto& v = mesh.vertices();
    for (const auto& tri : mesh.triangles()) {
        Eigen::Matrix2d jac;
        jac << v[tri[1]].x - v[tri[0]].x, v[tri[2]].x - v[tri[0]].x, v[tri[1]].y - v[tri[0]].y,
            v[tri[2]].y - v[tri[0]].y;
        const double area = 0.5 * std::abs(jac.determinant());
        // reference gradients of the hat functions, mapped by J^{-T}
        Eigen::Matrix<double, 2, 3> gref;
        gref << -1, 1, 0, -1, 0, 1;
        const Eigen::Matrix<double, 2, 3> g = jac.inverse().transpose() * gref;
        const Eigen::Matrix3d k = alpha * area * g.transpose() * g;
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                d.ku(tri[i], tri[j]) += k(i, j);
                d.mu(tri[i], tri[j]) += area * (i == j ? 1.0 / 6.0 : 1.0 / 12.0);
            }
        }
    }
    for (int s = 0; s < nb; ++s) {
        const int a = s;
        const int b = (s + 1) % nb;
        const Point& pa = v[mesh.boundary_loop()[a]];
        const Point& pb = v[mesh.boundary_loop()[b]];
        const double len = std::sqrt((pb.x - pa.x) * (pb.x - pa.x) + (pb.y - pa.y) * (pb.y - pa.y));
        d.mp(a, a) += len / 3;
        d.mp(b, b) += len / 3;
        d.mp(a, b) += len / 6;
        d.mp(b, a) += len / 6;
        d.kp(a, a) += kappa / len;
        d.kp(b, b) += kappa / len;
        d.kp(a, b) -= kappa / len;
        d.kp(b, a) -= kappa / len;
    }
    return d;
}

Vector nodal(const std::vector<Point>& pts, const ExactFn& f, double t) {
    Vector out(static_cast<Eigen::Index>(pts.size()));
    for (std::size_t i = 0; i < pts.size(); ++i) out[static_cast<Eigen::Index>(i)] = f(t, pts[i].x, pts[i].y);
    return out;
}

Vector nodal_source(const std::vector<Point>& pts, const SourceFn& f, double t) {
    Vector out(static_cast<Eigen::Index>(pts.size()));
    for (std::size_t i = 0; i < pts.size(); ++i) out[static_cast<Eigen::Index>(i)] = f(t, pts[i].x, pts[i].y, 0.0);
    return out;
}

struct StepSolution {
    Vector u, p, lambda;
};

}  // namespace

double dense_oracle_difference(Variant variant, const Mesh& mesh, const Problem& problem, double tau) {
    if (!problem.exact) throw UnsupportedOperation("dense oracle needs a problem with exact solution");
    if (problem.bulk_state_dependent || problem.surf_state_dependent) {
        throw UnsupportedOperation("dense oracle covers state-independent sources only");
    }
    const BlockOperators ops = assemble_operators(mesh, problem.alpha, problem.kappa);
    SchemeConfig cfg;
    cfg.variant = variant;
    cfg.tau = tau;
    cfg.final_time = tau;
    Scheme scheme(ops, make_forcing(mesh, problem), cfg);
    const HistoryFn data = [&](double t) { return interpolate_exact(mesh, problem, t); };
    SchemeState state = scheme.initial_state(data, 0.0);
    scheme.step(state);
    const StepSolution sparse{state.u.at(0), state.p.at(0), state.lambda};

    // Dense side.
    const DenseOps d = dense_ops(mesh, problem.alpha, problem.kappa);
    const int nu = static_cast<int>(mesh.n_vertices());
    const int nb = static_cast<int>(mesh.n_boundary());
    const int n1 = nu - nb;
    std::vector<Point> bpts;
    for (int b : mesh.boundary_loop()) bpts.push_back(mesh.vertices()[b]);
    const auto& exact = *problem.exact;
    auto U = [&](int k) { return nodal(mesh.vertices(), exact, -k * tau); };
    auto P = [&](int k) { return nodal(bpts, exact, -k * tau); };
    const double t1 = tau;
    const Vector fu = d.mu * nodal_source(mesh.vertices(), problem.f_bulk, t1);
    const Vector fp = d.mp * nodal_source(bpts, problem.f_surf, t1);
    const Dense& ml = d.mp;  // multiplier space = trace space
    const Dense& bp = d.mp;

    // BDF coefficients (newest first) and their denominator
    std::vector<double> bdf{3, -4, 1};
    double bden = 2 * tau;
    if (variant == Variant::ThirdOrder) {
        bdf = {11, -18, 9, -2};
        bden = 6 * tau;
    }
    // history part of the BDF difference (everything but the new value)
    auto hist = [&](auto getter) {
        Vector h = Vector::Zero(getter(0).size());
        for (std::size_t k = 1; k < bdf.size(); ++k) h += bdf[k] / bden * getter(static_cast<int>(k) - 1);
        return h;
    };
    const double c0 = bdf[0] / bden;

    StepSolution dense;
    if (variant == Variant::Monolithic) {
        // [u; p; lambda]
        const int n = nu + nb + nb;
        Dense a = Dense::Zero(n, n);
        Vector rhs = Vector::Zero(n);
        a.block(0, 0, nu, nu) = c0 * d.mu + d.ku;
        a.block(0, nu + nb, nu, nb).bottomRows(nb) = -ml.transpose();
        rhs.head(nu) = fu - d.mu * hist(U);
        a.block(nu, nu, nb, nb) = c0 * d.mp + d.kp;
        a.block(nu, nu + nb, nb, nb) = bp.transpose();
        rhs.segment(nu, nb) = fp - d.mp * hist(P);
        a.block(nu + nb, n1, nb, nb) = ml;
        a.block(nu + nb, nu, nb, nb) = -bp;
        const Vector z = a.fullPivLu().solve(rhs);
        dense = {z.head(nu), z.segment(nu, nb), z.tail(nb)};
    } else {
        std::vector<double> ex{2, -1};
        std::vector<double> rate;
        double rden = 0.0;
        switch (variant) {
            case Variant::SplitDelayA: rate = {1, -1}, rden = tau; break;
            case Variant::SplitDelayC: rate = {6, -11, 6, -1}, rden = 2 * tau; break;
            case Variant::ThirdOrder:
                ex = {3, -3, 1};
                rate = {26, -57, 42, -11}, rden = 6 * tau;
                break;
            default: rate = {5, -8, 3}, rden = 2 * tau; break;
        }
        // delayed samples: p(t1 - tau) = P(0), p(t1 - 2 tau) = P(1), ...
        Vector pex = Vector::Zero(nb);
        for (std::size_t k = 0; k < ex.size(); ++k) pex += ex[k] * P(static_cast<int>(k));
        Vector prate = Vector::Zero(nb);
        for (std::size_t k = 0; k < rate.size(); ++k) prate += rate[k] / rden * P(static_cast<int>(k));

        // unknowns [u1; u2; w; lambda; p]
        const int o_u2 = n1;
        const int o_w = n1 + nb;
        const int o_l = n1 + 2 * nb;
        const int o_p = n1 + 3 * nb;
        const int n = n1 + 4 * nb;
        Dense a = Dense::Zero(n, n);
        Vector rhs = Vector::Zero(n);
        const Vector uh = hist([&](int k) { return Vector(U(k).head(n1)); });
        // bulk equation, interior rows: Mu (D u1, w) + Ku (u1, u2) = f
        // bulk equation, boundary rows: same minus Mlambda^T lambda
        for (int block = 0; block < 2; ++block) {
            const int r0 = block == 0 ? 0 : o_u2;
            const int s0 = block == 0 ? 0 : n1;
            const int nr = block == 0 ? n1 : nb;
            a.block(r0, 0, nr, n1) = c0 * d.mu.block(s0, 0, nr, n1) + d.ku.block(s0, 0, nr, n1);
            a.block(r0, o_w, nr, nb) = d.mu.block(s0, n1, nr, nb);
            a.block(r0, o_u2, nr, nb) = d.ku.block(s0, n1, nr, nb);
            rhs.segment(r0, nr) = fu.segment(s0, nr) - d.mu.block(s0, 0, nr, n1) * uh;
        }
        a.block(o_u2, o_l, nb, nb) = -ml.transpose();
        // delay constraints
        a.block(o_w, o_u2, nb, nb) = ml;
        rhs.segment(o_w, nb) = bp * pex;
        a.block(o_l, o_w, nb, nb) = ml;
        rhs.segment(o_l, nb) = bp * prate;
        // surface equation
        a.block(o_p, o_p, nb, nb) = c0 * d.mp + d.kp;
        a.block(o_p, o_l, nb, nb) = bp.transpose();
        rhs.segment(o_p, nb) = fp - d.mp * hist(P);
        const Vector z = a.fullPivLu().solve(rhs);
        Vector u(nu);
        u.head(n1) = z.head(n1);
        u.tail(nb) = z.segment(o_u2, nb);
        if (variant == Variant::Auxiliary) u.tail(nb) = ml.fullPivLu().solve(bp * z.segment(o_p, nb));
        dense = {u, z.segment(o_p, nb), z.segment(o_l, nb)};
    }

    const double num = std::sqrt((sparse.u - dense.u).squaredNorm() + (sparse.p - dense.p).squaredNorm() +
                                 (sparse.lambda - dense.lambda).squaredNorm());
    const double den = std::sqrt(dense.u.squaredNorm() + dense.p.squaredNorm() + dense.lambda.squaredNorm());
    return num / den;
}

std::vector<CheckResult> run_verification() {
    std::vector<CheckResult> out;
    {
        const IdentityErrors e = identity_residuals();
        const double worst =
            std::max({e.difference_of_derivatives, e.testing_with_difference, e.testing_with_value});
        out.push_back({"multistep identities (1000 random sequences)", worst <= 1e-12,
                       fmt("max rel residuals %.2e %.2e %.2e", e.difference_of_derivatives,
                           e.testing_with_difference, e.testing_with_value)});
    }
    {
        const TruncationSlopes s = truncation_slopes();
        out.push_back({"local defect orders", std::abs(s.bdf_defect - 2) <= 0.1 &&
                                                  std::abs(s.second_difference - 2) <= 0.1 &&
                                                  std::abs(s.third_difference - 3) <= 0.1,
                       fmt("slopes %.4f %.4f %.4f (expected 2 2 3)", s.bdf_defect, s.second_difference,
                           s.third_difference)});
    }
    {
        const auto levels = first_levels(5);
        const auto rows = trace_constants(levels);
        double cm_lo = 1e300, cm_hi = 0, ck_lo = 1e300, ck_hi = 0;
        for (const auto& r : rows) {
            cm_lo = std::min(cm_lo, r.c_m);
            cm_hi = std::max(cm_hi, r.c_m);
            ck_lo = std::min(ck_lo, r.c_k);
            ck_hi = std::max(ck_hi, r.c_k);
        }
        out.push_back({"trace constants h-independent (5 levels)", cm_hi < 2 * cm_lo && ck_hi < 2 * ck_lo,
                       fmt("c_M spread %.3f, c_K spread %.3f", cm_hi / cm_lo, ck_hi / ck_lo)});
    }
    {
        const Mesh mesh = generate_disk_mesh(0.7);
        const Problem linear = linear_problem();
        for (Variant v : {Variant::SplitDelayA, Variant::SplitDelayB, Variant::SplitDelayC, Variant::Auxiliary,
                          Variant::Monolithic, Variant::ThirdOrder}) {
            const double diff = dense_oracle_difference(v, mesh, linear, 0.1);
            out.push_back({"dense oracle " + variant_name(v), diff <= 1e-9,
                           fmt("rel diff %.2e on %g nodes", diff, static_cast<double>(mesh.n_vertices()))});
        }
    }
    for (const Problem& p : {linear_problem(), semilinear_problem()}) {
        const ValidationReport r = validate_problem(p);
        out.push_back({"manufactured solution " + p.name, r.passed,
                       fmt("max residuals %.2e %.2e, jacobian %.2e", r.max_bulk_residual, r.max_surf_residual,
                           r.max_jacobian_error)});
    }
    return out;
}

}  // namespace dynbc
