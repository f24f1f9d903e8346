#include "dynbc/schemes.hpp"

#include "dynbc/errors.hpp"

#include <chrono>
#include <cmath>
#include <string>

namespace dynbc {

std::string variant_name(Variant v) {
    switch (v) {
        case Variant::SplitDelayA: return "split-a";
        case Variant::SplitDelayB: return "split-b";
        case Variant::SplitDelayC: return "split-c";
        case Variant::Auxiliary: return "aux";
        case Variant::Monolithic: return "mono";
        case Variant::ThirdOrder: return "third";
    }
    return "?";
}

Variant parse_variant(const std::string& name) {
    for (Variant v : {Variant::SplitDelayA, Variant::SplitDelayB, Variant::SplitDelayC, Variant::Auxiliary,
                      Variant::Monolithic, Variant::ThirdOrder}) {
        if (variant_name(v) == name) return v;
    }
    throw ParameterError("unknown scheme '" + name + "' (expected split-a, split-b, split-c, aux, mono or third)");
}

void SchemeConfig::validate() const {
    if (!(tau > 0.0) || !std::isfinite(tau)) throw ParameterError("time step must be positive");
    if (!(final_time > 0.0) || !std::isfinite(final_time)) throw ParameterError("final time must be positive");
    const double ratio = final_time / tau;
    const double r = std::round(ratio);
    if (r < 1.0 || std::abs(ratio - r) > 1e-9 * std::max(1.0, r)) {
        throw ParameterError("final time / tau = " + std::to_string(ratio) + " is not a positive integer");
    }
    if (!(newton_tol > 0.0)) throw ParameterError("Newton tolerance must be positive");
    if (newton_max_iter < 1) throw ParameterError("Newton iteration limit must be at least 1");
}

long SchemeConfig::steps() const {
    validate();
    return std::lround(final_time / tau);
}

int u_history_depth(Variant v) { return v == Variant::ThirdOrder ? 3 : 2; }

int p_history_depth(Variant v) {
    switch (v) {
        case Variant::SplitDelayC: return 5;
        case Variant::ThirdOrder: return 4;
        case Variant::Monolithic: return 2;
        default: return 3;
    }
}

int startup_levels(Variant v) { return std::max(u_history_depth(v), p_history_depth(v)); }

std::vector<Vector> History::newest(int count) const {
    if (count > depth()) {
        throw ParameterError("history holds " + std::to_string(depth()) + " values, " + std::to_string(count) +
                             " requested");
    }
    std::vector<Vector> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) out.push_back(at(k));
    return out;
}

namespace {

const Stencil& extrapolation_for(Variant v) { return v == Variant::ThirdOrder ? kExtrap3 : kExtrap2; }

const Stencil& rate_for(Variant v) {
    switch (v) {
        case Variant::SplitDelayA: return kDelayRateA;
        case Variant::SplitDelayC: return kDelayRateC;
        case Variant::ThirdOrder: return kDelayRate3;
        case Variant::SplitDelayB:
        case Variant::Auxiliary: return kDelayRateB;
        case Variant::Monolithic: break;
    }
    throw UnsupportedOperation("the monolithic scheme has no delay constraints");
}

// Part of a multistep difference that only involves old values:
// D x_new = lead * x_new + tail.
Vector stencil_tail(const Stencil& s, const std::vector<Vector>& old, double tau) {
    const double denom = s.scale * tau;
    Vector out = old[0] * (s.weights[1] / denom);
    for (int k = 2; k < s.width; ++k) out += old[static_cast<std::size_t>(k - 1)] * (s.weights[k] / denom);
    return out;
}

double stencil_lead(const Stencil& s, double tau) { return s.weights[0] / (s.scale * tau); }

SparseMatrix scaled_diagonal(const SparseMatrix& m, const Vector& d) { return SparseMatrix(m * d.asDiagonal()); }

struct NewtonResult {
    Vector x;
    int iterations = 0;
};

// Solves A x - M f(x) = b. The Jacobian A - M diag(f'(x)) is refactorized
// every iteration; `f` and `df` return nodal values.
template <typename F, typename DF>
NewtonResult newton(const SparseMatrix& a, const SparseMatrix& m, const Vector& b, Vector x, F f, DF df, double tol,
                    int max_iter, long step_index, const char* what) {
    Factorization jac;
    for (int it = 1; it <= max_iter; ++it) {
        const Vector mf = m * f(x);
        const Vector r = a * x - mf - b;
        const double scale = 1.0 + b.norm() + mf.norm();
        if (r.norm() <= tol * scale) return {std::move(x), it - 1};
        const SparseMatrix j = a - scaled_diagonal(m, df(x));
        if (it == 1) {
            jac = Factorization(j, Factorization::Kind::Indefinite);
        } else {
            jac.refactor(j);
        }
        const Vector dx = jac.solve(r);
        x -= dx;
        if (!x.allFinite()) break;
        // At round-off level the residual test can be out of reach.
        if (dx.norm() <= 1e-14 * (1.0 + x.norm())) return {std::move(x), it};
    }
    throw StepFailure(std::string(what) + ": Newton iteration did not converge within " + std::to_string(max_iter) +
                          " iterations",
                      step_index);
}

}  // namespace

std::pair<Vector, Vector> delay_extrapolation(Variant v, std::span<const Vector> p_history, double tau,
                                              const SparseMatrix& bp) {
    const Stencil& ex = extrapolation_for(v);
    const Stencil& rate = rate_for(v);
    return {bp * apply_stencil(ex, p_history, tau), bp * apply_stencil(rate, p_history, tau)};
}

Scheme::Scheme(const BlockOperators& ops, std::shared_ptr<const Forcing> forcing, SchemeConfig config)
    : ops_(ops), forcing_(std::move(forcing)), config_(config) {
    config_.validate();
    if (!forcing_) throw ParameterError("scheme needs a forcing");
    if (ops_.n_p != ops_.n_lambda) {
        throw DimensionError("multiplier and trace spaces must have equal dimension");
    }
    const double tau = config_.tau;
    const double c = config_.variant == Variant::ThirdOrder ? 11.0 / 6.0 : 1.5;
    surface_matrix_ = c / tau * ops_.Mp + ops_.Kp;
    surface_ = factorize(surface_matrix_, Factorization::Kind::Spd);

    if (config_.variant != Variant::Monolithic) {
        mlambda_ = factorize(ops_.Mlambda, Factorization::Kind::Spd);
        bulk_matrix_ = c / tau * ops_.M11 + ops_.K11;
        bulk_ = factorize(bulk_matrix_, Factorization::Kind::Spd);
        return;
    }

    // [[A_u, 0, -Bu^T], [0, A_p, Bp^T], [-Bu, Bp, 0]] with Bu = [0 Mlambda].
    const int nu = ops_.n_u;
    const int np = ops_.n_p;
    const int nl = ops_.n_lambda;
    const int n1 = ops_.n1;
    const SparseMatrix au = c / tau * ops_.Mu + ops_.Ku;
    std::vector<Triplet> t;
    std::vector<Triplet> tu;
    std::vector<Triplet> tp;
    t.reserve(static_cast<std::size_t>(au.nonZeros() + surface_matrix_.nonZeros() + 4 * ops_.Mlambda.nonZeros()));
    for (int j = 0; j < au.outerSize(); ++j) {
        for (SparseMatrix::InnerIterator it(au, j); it; ++it) t.emplace_back(it.row(), it.col(), it.value());
    }
    for (int j = 0; j < ops_.Mu.outerSize(); ++j) {
        for (SparseMatrix::InnerIterator it(ops_.Mu, j); it; ++it) tu.emplace_back(it.row(), it.col(), it.value());
    }
    for (int j = 0; j < surface_matrix_.outerSize(); ++j) {
        for (SparseMatrix::InnerIterator it(surface_matrix_, j); it; ++it) {
            t.emplace_back(nu + it.row(), nu + it.col(), it.value());
        }
    }
    for (int j = 0; j < ops_.Mp.outerSize(); ++j) {
        for (SparseMatrix::InnerIterator it(ops_.Mp, j); it; ++it) {
            tp.emplace_back(nu + it.row(), nu + it.col(), it.value());
        }
    }
    const int l0 = nu + np;
    for (int j = 0; j < ops_.Mlambda.outerSize(); ++j) {
        for (SparseMatrix::InnerIterator it(ops_.Mlambda, j); it; ++it) {
            // -Bu^T in the (u, lambda) block and -Bu in the (lambda, u) block
            t.emplace_back(n1 + it.col(), l0 + it.row(), -it.value());
            t.emplace_back(l0 + it.row(), n1 + it.col(), -it.value());
        }
    }
    for (int j = 0; j < ops_.Bp.outerSize(); ++j) {
        for (SparseMatrix::InnerIterator it(ops_.Bp, j); it; ++it) {
            t.emplace_back(nu + it.col(), l0 + it.row(), it.value());
            t.emplace_back(l0 + it.row(), nu + it.col(), it.value());
        }
    }
    const int n = nu + np + nl;
    saddle_matrix_ = from_triplets(n, n, t);
    mu_embedded_ = from_triplets(n, n, tu);
    mp_embedded_ = from_triplets(n, n, tp);
    saddle_ = factorize(saddle_matrix_, Factorization::Kind::Indefinite);
}

SchemeState Scheme::initial_state(const HistoryFn& data, double t0) const {
    SchemeState s;
    const int du = u_history_depth(config_.variant);
    const int dp = p_history_depth(config_.variant);
    s.u = History(du);
    s.p = History(dp);
    const int levels = startup_levels(config_.variant);
    for (int k = levels - 1; k >= 0; --k) {
        auto [u, p] = data(t0 - k * config_.tau);
        if (u.size() != ops_.n_u || p.size() != ops_.n_p) {
            throw DimensionError("start-up data has sizes " + std::to_string(u.size()) + "/" +
                                 std::to_string(p.size()) + ", expected " + std::to_string(ops_.n_u) + "/" +
                                 std::to_string(ops_.n_p));
        }
        if (k < du) s.u.push(std::move(u));
        if (k < dp) s.p.push(std::move(p));
    }
    s.lambda = Vector::Zero(ops_.n_lambda);
    s.n = 0;
    s.t0 = t0;
    s.t = t0;
    return s;
}

void Scheme::require(bool ok, const char* op) const {
    if (!ok) {
        throw UnsupportedOperation(std::string(op) + " is not available for scheme " + variant_name(config_.variant));
    }
}

void Scheme::step(SchemeState& s) {
    switch (config_.variant) {
        case Variant::SplitDelayA:
        case Variant::SplitDelayB:
        case Variant::SplitDelayC: splitting_step(s); return;
        case Variant::Auxiliary: auxiliary_step(s); return;
        case Variant::Monolithic: monolithic_step(s); return;
        case Variant::ThirdOrder: third_order_step(s); return;
    }
}

Scheme::BulkResult Scheme::bulk_stage(const SchemeState& s, double t_new, const Stencil& bdf, const Stencil& extrap,
                                      const Stencil& rate, long step_index) {
    const double tau = config_.tau;
    const int n1 = ops_.n1;
    const int n2 = ops_.n_lambda;
    bulk_newton_iterations_ = 0;

    const auto ph = s.p.newest(std::max(extrap.width, rate.width));
    const Vector u2 = mlambda_.solve(ops_.Bp * apply_stencil(extrap, std::span<const Vector>(ph), tau));
    const Vector w = mlambda_.solve(ops_.Bp * apply_stencil(rate, std::span<const Vector>(ph), tau));

    std::vector<Vector> u1_old;
    for (int k = 0; k < bdf.width - 1; ++k) u1_old.push_back(s.u.at(k).head(n1));
    const Vector tail = stencil_tail(bdf, u1_old, tau);
    const double lead = stencil_lead(bdf, tau);

    const Vector rhs_lin = -(ops_.M11 * tail) - ops_.M12 * w - ops_.K12 * u2;
    Vector full(ops_.n_u);
    full.tail(n2) = u2;
    Vector u1;
    if (!forcing_->bulk_state_dependent()) {
        full.head(n1) = u1_old[0];
        const Vector f = ops_.Mu * forcing_->bulk_values(t_new, full);
        u1 = bulk_.solve(f.head(n1) + rhs_lin);
    } else {
        // Only the interior rows are unknown here; the boundary block of the
        // load is frozen at the extrapolated u2 through `full`.
        const SparseMatrix m1 = block(ops_.Mu, 0, 0, n1, ops_.n_u);
        auto f = [&](const Vector& x) {
            full.head(n1) = x;
            return forcing_->bulk_values(t_new, full);
        };
        // Newton on A11 x - [Mu F(x, u2)]_1 = rhs: split the load so the
        // Jacobian is A11 - M11 diag(F'_1).
        const Vector b = rhs_lin;
        Vector x = u1_old[0];
        Factorization jac;
        bool done = false;
        for (int it = 1; it <= config_.newton_max_iter; ++it) {
            const Vector mf = m1 * f(x);
            const Vector r = bulk_matrix_ * x - mf - b;
            if (r.norm() <= config_.newton_tol * (1.0 + b.norm() + mf.norm())) {
                done = true;
                break;
            }
            full.head(n1) = x;
            const Vector d = forcing_->bulk_derivative(t_new, full).head(n1);
            const SparseMatrix j = bulk_matrix_ - scaled_diagonal(ops_.M11, d);
            if (it == 1) {
                jac = Factorization(j, Factorization::Kind::Indefinite);
            } else {
                jac.refactor(j);
            }
            const Vector dx = jac.solve(r);
            x -= dx;
            ++bulk_newton_iterations_;
            if (!x.allFinite()) break;
            if (dx.norm() <= 1e-14 * (1.0 + x.norm())) {
                done = true;
                break;
            }
        }
        if (!done) {
            throw StepFailure("bulk stage: Newton iteration did not converge within " +
                                  std::to_string(config_.newton_max_iter) + " iterations",
                              step_index);
        }
        u1 = std::move(x);
    }

    full.head(n1) = u1;
    const Vector f2 = (ops_.Mu * forcing_->bulk_values(t_new, full)).tail(n2);
    const Vector du1 = lead * u1 + tail;
    const Vector lambda = mlambda_.solve(ops_.M21 * du1 + ops_.K21 * u1 + ops_.M22 * w + ops_.K22 * u2 - f2);
    return {std::move(full), lambda, w};
}

Vector Scheme::surface_stage(const SchemeState& s, double t_new, const Stencil& bdf, const Vector& lambda,
                             long step_index, int& iterations) {
    const double tau = config_.tau;
    const auto p_old = s.p.newest(bdf.width - 1);
    const Vector tail = stencil_tail(bdf, p_old, tau);
    const Vector rhs_lin = -(ops_.Mp * tail) - SparseMatrix(ops_.Bp.transpose()) * lambda;
    iterations = 0;
    if (!forcing_->surf_state_dependent()) {
        return surface_.solve(ops_.Mp * forcing_->surf_values(t_new, p_old[0]) + rhs_lin);
    }
    auto res = newton(
        surface_matrix_, ops_.Mp, rhs_lin, p_old[0], [&](const Vector& x) { return forcing_->surf_values(t_new, x); },
        [&](const Vector& x) { return forcing_->surf_derivative(t_new, x); }, config_.newton_tol,
        config_.newton_max_iter, step_index, "surface stage");
    iterations = res.iterations;
    return std::move(res.x);
}

namespace {

void advance(SchemeState& s, Vector u, Vector p, Vector lambda, double tau, int iterations) {
    s.u.push(std::move(u));
    s.p.push(std::move(p));
    s.lambda = std::move(lambda);
    ++s.n;
    s.t = s.t0 + static_cast<double>(s.n) * tau;
    s.last_newton_iterations = iterations;
}

}  // namespace

void Scheme::splitting_step(SchemeState& s) {
    const auto v = config_.variant;
    require(v == Variant::SplitDelayA || v == Variant::SplitDelayB || v == Variant::SplitDelayC, "splitting_step");
    const long idx = s.n + 1;
    const double t_new = s.t0 + static_cast<double>(idx) * config_.tau;
    auto bulk = bulk_stage(s, t_new, kBdf2, kExtrap2, rate_for(v), idx);
    int it = 0;
    Vector p = surface_stage(s, t_new, kBdf2, bulk.lambda, idx, it);
    advance(s, std::move(bulk.u), std::move(p), std::move(bulk.lambda), config_.tau, it + bulk_newton_iterations_);
}

void Scheme::auxiliary_step(SchemeState& s) {
    require(config_.variant == Variant::Auxiliary, "auxiliary_step");
    const long idx = s.n + 1;
    const double t_new = s.t0 + static_cast<double>(idx) * config_.tau;
    auto bulk = bulk_stage(s, t_new, kBdf2, kExtrap2, kDelayRateB, idx);
    int it = 0;
    Vector p = surface_stage(s, t_new, kBdf2, bulk.lambda, idx, it);
    bulk.u.tail(ops_.n_lambda) = mlambda_.solve(ops_.Bp * p);
    advance(s, std::move(bulk.u), std::move(p), std::move(bulk.lambda), config_.tau, it + bulk_newton_iterations_);
}

void Scheme::third_order_step(SchemeState& s) {
    require(config_.variant == Variant::ThirdOrder, "third_order_step");
    const long idx = s.n + 1;
    const double t_new = s.t0 + static_cast<double>(idx) * config_.tau;
    auto bulk = bulk_stage(s, t_new, kBdf3, kExtrap3, kDelayRate3, idx);
    int it = 0;
    Vector p = surface_stage(s, t_new, kBdf3, bulk.lambda, idx, it);
    advance(s, std::move(bulk.u), std::move(p), std::move(bulk.lambda), config_.tau, it + bulk_newton_iterations_);
}

void Scheme::monolithic_step(SchemeState& s) {
    require(config_.variant == Variant::Monolithic, "monolithic_step");
    const long idx = s.n + 1;
    const double tau = config_.tau;
    const double t_new = s.t0 + static_cast<double>(idx) * tau;
    const int nu = ops_.n_u;
    const int np = ops_.n_p;
    const int nl = ops_.n_lambda;

    const auto u_old = s.u.newest(2);
    const auto p_old = s.p.newest(2);
    Vector b = Vector::Zero(nu + np + nl);
    b.head(nu) = -(ops_.Mu * stencil_tail(kBdf2, u_old, tau));
    b.segment(nu, np) = -(ops_.Mp * stencil_tail(kBdf2, p_old, tau));

    auto loads = [&](const Vector& x) {
        Vector g = Vector::Zero(x.size());
        g.head(nu) = forcing_->bulk_values(t_new, x.head(nu));
        g.segment(nu, np) = forcing_->surf_values(t_new, x.segment(nu, np));
        return g;
    };
    const SparseMatrix mass = mu_embedded_ + mp_embedded_;

    Vector x(nu + np + nl);
    x.head(nu) = u_old[0];
    x.segment(nu, np) = p_old[0];
    x.tail(nl) = s.lambda;
    int iterations = 0;
    if (!forcing_->bulk_state_dependent() && !forcing_->surf_state_dependent()) {
        x = saddle_.solve(mass * loads(x) + b);
    } else {
        bool done = false;
        for (int it = 1; it <= config_.newton_max_iter; ++it) {
            const Vector mf = mass * loads(x);
            const Vector r = saddle_matrix_ * x - mf - b;
            if (r.norm() <= config_.newton_tol * (1.0 + b.norm() + mf.norm())) {
                done = true;
                break;
            }
            Vector d = Vector::Zero(x.size());
            d.head(nu) = forcing_->bulk_derivative(t_new, x.head(nu));
            d.segment(nu, np) = forcing_->surf_derivative(t_new, x.segment(nu, np));
            // Same sparsity as the saddle matrix, so the symbolic analysis is reused.
            saddle_.refactor(saddle_matrix_ - scaled_diagonal(mass, d));
            const Vector dx = saddle_.solve(r);
            x -= dx;
            ++iterations;
            if (!x.allFinite()) break;
            if (dx.norm() <= 1e-14 * (1.0 + x.norm())) {
                done = true;
                break;
            }
        }
        if (!done) {
            throw StepFailure("monolithic step: Newton iteration did not converge within " +
                                  std::to_string(config_.newton_max_iter) + " iterations",
                              idx);
        }
    }
    advance(s, x.head(nu), x.segment(nu, np), x.tail(nl), tau, iterations);
}

Trajectory integrate(const Mesh& mesh, const Problem& problem, const SchemeConfig& config,
                     const IntegrateOptions& options) {
    const BlockOperators ops = assemble_operators(mesh, problem.alpha, problem.kappa);
    return integrate(mesh, ops, problem, config, options);
}

Trajectory integrate(const Mesh& mesh, const BlockOperators& ops, const Problem& problem, const SchemeConfig& config,
                     const IntegrateOptions& options) {
    if (!problem.exact) {
        throw UnsupportedOperation("problem '" + problem.name + "' has no exact solution for start-up values");
    }
    const HistoryFn start = [&](double t) { return interpolate_exact(mesh, problem, t); };
    return integrate(ops, make_forcing(mesh, problem), start, config, options);
}

Trajectory integrate(const BlockOperators& ops, std::shared_ptr<const Forcing> forcing, const HistoryFn& start,
                     const SchemeConfig& config, const IntegrateOptions& options) {
    using Clock = std::chrono::steady_clock;
    const long steps = config.steps();
    Trajectory tr;
    double excluded = 0.0;
    auto observe = [&](const SchemeState& s) {
        if (!options.observer) return;
        const auto a = Clock::now();
        options.observer(s);
        excluded += std::chrono::duration<double>(Clock::now() - a).count();
    };

    const auto t_begin = Clock::now();
    Scheme scheme(ops, std::move(forcing), config);
    const int levels = startup_levels(config.variant);
    tr.startup_levels = levels;

    // Start-up levels are recorded outside the timed region.
    double startup_time = 0.0;
    if (options.store_states) {
        const auto a = Clock::now();
        for (int k = levels - 1; k >= 0; --k) {
            auto [u, p] = start(-k * config.tau);
            tr.times.push_back(-k * config.tau);
            tr.u.push_back(std::move(u));
            tr.p.push_back(std::move(p));
            tr.lambda.push_back(Vector::Zero(ops.n_lambda));
            tr.newton_iterations.push_back(0);
        }
        startup_time = std::chrono::duration<double>(Clock::now() - a).count();
    }
    SchemeState state = scheme.initial_state(start, 0.0);
    observe(state);
    for (long n = 0; n < steps; ++n) {
        scheme.step(state);
        if (options.store_states) {
            tr.times.push_back(state.t);
            tr.u.push_back(state.u.at(0));
            tr.p.push_back(state.p.at(0));
            tr.lambda.push_back(state.lambda);
            tr.newton_iterations.push_back(state.last_newton_iterations);
        } else {
            tr.newton_iterations.push_back(state.last_newton_iterations);
        }
        observe(state);
    }
    const double total = std::chrono::duration<double>(Clock::now() - t_begin).count();
    tr.wall_time_seconds = std::max(0.0, total - excluded - startup_time);
    return tr;
}

}  // namespace dynbc
