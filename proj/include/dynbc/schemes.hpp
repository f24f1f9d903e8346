#pragma once

#include "dynbc/assembly.hpp"
#include "dynbc/linalg.hpp"
#include "dynbc/mesh.hpp"
#include "dynbc/problems.hpp"
#include "dynbc/stencils.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace dynbc {

enum class Variant { SplitDelayA, SplitDelayB, SplitDelayC, Auxiliary, Monolithic, ThirdOrder };

/// CLI spelling: split-a, split-b, split-c, aux, mono, third.
std::string variant_name(Variant v);
Variant parse_variant(const std::string& name);

struct SchemeConfig {
    Variant variant = Variant::SplitDelayB;
    double tau = 0.1;
    double final_time = 1.0;
    double newton_tol = 1e-12;
    int newton_max_iter = 25;

    /// Throws ParameterError unless tau > 0 and final_time / tau is a positive integer.
    void validate() const;
    long steps() const;
};

/// Number of u and p values a variant keeps (newest first).
int u_history_depth(Variant v);
int p_history_depth(Variant v);
/// Number of exact time levels t^0, t^-1, ... needed to start the variant.
int startup_levels(Variant v);

/// Fixed-depth history of nodal vectors; at(k) is the value at t^{n-k}.
class History {
public:
    History() = default;
    explicit History(int depth) : slots_(static_cast<std::size_t>(depth)) {}

    int depth() const noexcept { return static_cast<int>(slots_.size()); }
    const Vector& at(int k) const { return slots_[index(k)]; }

    /// Makes `v` the newest entry and drops the oldest.
    void push(Vector v) {
        head_ = (head_ + slots_.size() - 1) % slots_.size();
        slots_[head_] = std::move(v);
    }

    /// Newest-first copies of the first `count` entries.
    std::vector<Vector> newest(int count) const;

private:
    std::size_t index(int k) const { return (head_ + static_cast<std::size_t>(k)) % slots_.size(); }

    std::vector<Vector> slots_;
    std::size_t head_ = 0;
};

struct SchemeState {
    History u;  ///< full bulk vectors (interior block then boundary block)
    History p;
    Vector lambda;
    long n = 0;  ///< index of the newest time level
    double t0 = 0.0;
    double t = 0.0;
    int last_newton_iterations = 0;
};

/// Nodal (u, p) at time t; used to fill the start-up history.
using HistoryFn = std::function<std::pair<Vector, Vector>(double t)>;

/// (M_lambda^{-1}-free) right-hand sides of the two delay constraints
///   M_lambda u2 = rhs_u2,  M_lambda w = rhs_w
/// for the given variant, from p history p(t - tau), p(t - 2 tau), ... (newest first).
std::pair<Vector, Vector> delay_extrapolation(Variant v, std::span<const Vector> p_history, double tau,
                                              const SparseMatrix& bp);

/// One time integrator for fixed operators, forcing and step size.
///
/// The constant matrices (bulk interior block, boundary block, M_lambda and,
/// for the monolithic scheme, the saddle-point matrix) are factorized once on
/// construction and reused by every step. State-dependent sources trigger a
/// Newton iteration whose Jacobian is refactorized per iteration.
class Scheme {
public:
    Scheme(const BlockOperators& ops, std::shared_ptr<const Forcing> forcing, SchemeConfig config);

    const SchemeConfig& config() const noexcept { return config_; }
    const BlockOperators& operators() const noexcept { return ops_; }

    /// History filled from `data` at t0, t0 - tau, ..., lambda set to zero.
    SchemeState initial_state(const HistoryFn& data, double t0 = 0.0) const;

    /// Advances by one step, dispatching on the configured variant.
    void step(SchemeState& state);

    /// Bulk-surface splitting with delay constraints (variants A, B, C).
    void splitting_step(SchemeState& state);
    /// Same updates as variant B, then u2 recovered from M_lambda u2 = Bp p^{n+1}.
    void auxiliary_step(SchemeState& state);
    /// Coupled BDF-2 step of the full saddle-point system.
    void monolithic_step(SchemeState& state);
    /// Four-step splitting with third-order delay constraints and BDF-3.
    void third_order_step(SchemeState& state);

private:
    struct BulkResult {
        Vector u;  ///< [u1; u2]
        Vector lambda;
        Vector w;
    };

    BulkResult bulk_stage(const SchemeState& s, double t_new, const Stencil& bdf, const Stencil& extrap,
                          const Stencil& rate, long step_index);
    Vector surface_stage(const SchemeState& s, double t_new, const Stencil& bdf, const Vector& lambda,
                         long step_index, int& iterations);

    void require(bool ok, const char* op) const;

    BlockOperators ops_;
    std::shared_ptr<const Forcing> forcing_;
    SchemeConfig config_;

    Factorization mlambda_;
    Factorization bulk_;      ///< c/tau M11 + K11
    Factorization surface_;   ///< c/tau Mp + Kp
    Factorization saddle_;    ///< monolithic system matrix
    SparseMatrix bulk_matrix_;
    SparseMatrix surface_matrix_;
    SparseMatrix saddle_matrix_;
    SparseMatrix mu_embedded_;  ///< Mu placed in the saddle layout (Newton Jacobian)
    SparseMatrix mp_embedded_;
    int bulk_newton_iterations_ = 0;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<Vector> u;
    std::vector<Vector> p;
    std::vector<Vector> lambda;
    std::vector<int> newton_iterations;  ///< per recorded level (0 for start-up data)
    int startup_levels = 0;              ///< leading entries that are exact history data
    double wall_time_seconds = 0.0;
};

struct IntegrateOptions {
    bool store_states = true;
    /// Called after initialization and after every step; its run time is not
    /// included in the reported wall time.
    std::function<void(const SchemeState&)> observer;
};

/// Marches from exact start-up data to final_time. Wall time covers the
/// factorizations and the time loop but not operator assembly.
Trajectory integrate(const Mesh& mesh, const Problem& problem, const SchemeConfig& config,
                     const IntegrateOptions& options = {});
Trajectory integrate(const Mesh& mesh, const BlockOperators& ops, const Problem& problem, const SchemeConfig& config,
                     const IntegrateOptions& options = {});
/// Generic form used by tests with synthetic discrete data.
Trajectory integrate(const BlockOperators& ops, std::shared_ptr<const Forcing> forcing, const HistoryFn& start,
                     const SchemeConfig& config, const IntegrateOptions& options = {});

}  // namespace dynbc
