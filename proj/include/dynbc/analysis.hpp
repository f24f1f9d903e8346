#pragma once

#include "dynbc/assembly.hpp"
#include "dynbc/mesh.hpp"
#include "dynbc/problems.hpp"
#include "dynbc/schemes.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace dynbc {

/// Target mesh widths of the experiments: the six-level grid of the
/// second-order study plus one finer level for the third-order study. Fed to
/// generate_disk_mesh, they give 7, 10, 15, 21, 31, 43 and 57 rings.
const std::vector<double>& h_levels();
/// First `count` levels; throws ParameterError when count is out of range.
std::vector<double> first_levels(int count);

/// tau_max * 2^-k for k = 0 .. count-1.
std::vector<double> tau_grid(double tau_max, int count);

struct ErrorReport {
    std::string scheme;
    std::string problem;
    double h = 0.0;  ///< max edge length of the mesh
    int n_u = 0;
    int n_p = 0;
    double tau = 0.0;
    double err_linf_l2 = 0.0;
    double err_l2_h1 = 0.0;
    double wall_time_seconds = 0.0;
    long newton_iters = 0;
};

/// Running error norms against the nodal interpolant of the exact solution.
/// Levels with n < 0 are ignored, n = 0 only enters the maximum.
class ErrorAccumulator {
public:
    ErrorAccumulator(const Mesh& mesh, const Problem& problem, const BlockOperators& ops, double tau);

    void add(long n, double t, const Vector& u, const Vector& p);
    void observe(const SchemeState& s) { add(s.n, s.t, s.u.at(0), s.p.at(0)); }

    double linf_l2() const { return linf_; }
    double l2_h1() const;

private:
    const Mesh& mesh_;
    const Problem& problem_;
    const BlockOperators& ops_;
    double tau_;
    double linf_ = 0.0;
    double sum_ = 0.0;
};

/// Throws UnsupportedOperation when the problem has no exact solution.
ErrorReport trajectory_errors(const Trajectory& traj, const Mesh& mesh, const Problem& problem,
                              const BlockOperators& ops, const SchemeConfig& config);

struct EocRow {
    double tau = 0.0;
    double error = 0.0;
    std::optional<double> eoc;  ///< absent for the first row and for non-positive errors
};

struct EocTable {
    std::vector<EocRow> rows;
    /// Last error when the final two EOCs are both below 0.5.
    std::optional<double> plateau;
};

/// Throws ParameterError for fewer than two pairs or taus that do not strictly decrease.
EocTable eoc(std::span<const std::pair<double, double>> pairs);

/// EOCs of the rows whose error is at least `factor` times the error at the
/// smallest tau of the table, i.e. pairs where the temporal error still
/// dominates the spatial floor.
std::vector<double> pre_plateau_eocs(const EocTable& table, double factor = 2.0);

/// One report per (level, tau), ordered level-major. Operators are assembled
/// once per level and shared by the cells of that level. With workers > 1
/// cells run concurrently; the order of the result does not change.
std::vector<ErrorReport> convergence_sweep(const Problem& problem, Variant variant, std::span<const double> target_hs,
                                           std::span<const double> taus, int workers = 1,
                                           double final_time = 1.0);

struct TraceConstantRow {
    double h = 0.0;
    double c_m = 0.0;
    double c_k = 0.0;
};

/// Sampled constants of the trace inequalities: for random p,
/// c_M = max |u2|^2_{M22} / (h |p|^2_{Mp}) and c_K = max h |u2|^2_{K22} / |p|^2_{Mp},
/// with u2 = Mlambda^{-1} Bp p. Needs at least three levels.
std::vector<TraceConstantRow> trace_constants(std::span<const double> target_hs, int samples = 50,
                                              std::uint64_t seed = 4242);

struct SpeedupRow {
    double h = 0.0;
    double tau = 0.0;
    double monolithic_seconds = 0.0;  ///< median
    double splitting_seconds = 0.0;   ///< median
    double ratio = 0.0;
};

/// Median wall time of the monolithic scheme over median wall time of
/// `split` for every (level, tau) cell.
std::vector<SpeedupRow> speedup_benchmark(const Problem& problem, std::span<const double> target_hs,
                                          std::span<const double> taus, int repetitions = 3,
                                          Variant split = Variant::SplitDelayB);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

inline constexpr const char* kCsvHeader = "scheme,problem,h,n_u,n_p,tau,err_linf_l2,err_l2_h1,wall_time_s,newton_iters";
std::string csv_row(const ErrorReport& r);
void write_csv(std::ostream& os, std::span<const ErrorReport> reports);

}  // namespace dynbc
