#include "dynbc/analysis.hpp"

#include "dynbc/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <memory>
#include <mutex>
#include <random>
#include <thread>

namespace dynbc {

const std::vector<double>& h_levels() {
    static const std::vector<double> levels{0.20741, 0.14394, 0.093568, 0.067169, 0.045276, 0.032228, 0.024661};
    return levels;
}

std::vector<double> first_levels(int count) {
    const auto& all = h_levels();
    if (count < 1 || count > static_cast<int>(all.size())) {
        throw ParameterError("number of h-levels must lie in [1, " + std::to_string(all.size()) + "], got " +
                             std::to_string(count));
    }
    return {all.begin(), all.begin() + count};
}

std::vector<double> tau_grid(double tau_max, int count) {
    if (!(tau_max > 0.0)) throw ParameterError("tau-max must be positive");
    if (count < 1) throw ParameterError("tau-count must be at least 1");
    std::vector<double> out;
    for (int k = 0; k < count; ++k) out.push_back(std::ldexp(tau_max, -k));
    return out;
}

ErrorAccumulator::ErrorAccumulator(const Mesh& mesh, const Problem& problem, const BlockOperators& ops, double tau)
    : mesh_(mesh), problem_(problem), ops_(ops), tau_(tau) {
    if (!problem.exact) {
        throw UnsupportedOperation("problem '" + problem.name + "' has no exact solution; errors are undefined");
    }
}

void ErrorAccumulator::add(long n, double t, const Vector& u, const Vector& p) {
    if (n < 0) return;
    const auto [ue, pe] = interpolate_exact(mesh_, problem_, t);
    const Vector eu = ue - u;
    const Vector ep = pe - p;
    const double l2 = eu.dot(ops_.Mu * eu) + ep.dot(ops_.Mp * ep);
    linf_ = std::max(linf_, std::sqrt(std::max(l2, 0.0)));
    if (n >= 1) sum_ += tau_ * (l2 + eu.dot(ops_.Ku * eu) + ep.dot(ops_.Kp * ep));
}

double ErrorAccumulator::l2_h1() const { return std::sqrt(std::max(sum_, 0.0)); }

namespace {

ErrorReport report_header(const Mesh& mesh, const Problem& problem, const SchemeConfig& config) {
    ErrorReport r;
    r.scheme = variant_name(config.variant);
    r.problem = problem.name;
    r.h = mesh_stats(mesh).h;
    r.n_u = static_cast<int>(mesh.n_vertices());
    r.n_p = static_cast<int>(mesh.n_boundary());
    r.tau = config.tau;
    return r;
}

}  // namespace

ErrorReport trajectory_errors(const Trajectory& traj, const Mesh& mesh, const Problem& problem,
                              const BlockOperators& ops, const SchemeConfig& config) {
    ErrorAccumulator acc(mesh, problem, ops, config.tau);
    ErrorReport r = report_header(mesh, problem, config);
    // Recorded levels are t^{1-L}, ..., t^0, t^1, ...
    const long first = 1 - static_cast<long>(traj.startup_levels);
    for (std::size_t i = 0; i < traj.u.size(); ++i) {
        acc.add(first + static_cast<long>(i), traj.times[i], traj.u[i], traj.p[i]);
    }
    for (int it : traj.newton_iterations) r.newton_iters += it;
    r.err_linf_l2 = acc.linf_l2();
    r.err_l2_h1 = acc.l2_h1();
    r.wall_time_seconds = traj.wall_time_seconds;
    return r;
}

EocTable eoc(std::span<const std::pair<double, double>> pairs) {
    if (pairs.size() < 2) throw ParameterError("eoc needs at least two (tau, error) pairs");
    EocTable table;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const auto [tau, err] = pairs[k];
        if (k > 0 && !(tau < pairs[k - 1].first)) throw ParameterError("eoc: taus must strictly decrease");
        EocRow row{tau, err, std::nullopt};
        if (k > 0) {
            const double prev = pairs[k - 1].second;
            if (prev > 0.0 && err > 0.0) row.eoc = std::log(prev / err) / std::log(pairs[k - 1].first / tau);
        }
        table.rows.push_back(row);
    }
    const std::size_t n = table.rows.size();
    if (n >= 3 && table.rows[n - 1].eoc && table.rows[n - 2].eoc && *table.rows[n - 1].eoc < 0.5 &&
        *table.rows[n - 2].eoc < 0.5) {
        table.plateau = table.rows[n - 1].error;
    } else if (n == 2 && table.rows[1].eoc && *table.rows[1].eoc < 0.5) {
        // only one EOC available
        table.plateau = table.rows[1].error;
    }
    return table;
}

std::vector<double> pre_plateau_eocs(const EocTable& table, double factor) {
    std::vector<double> out;
    if (table.rows.empty()) return out;
    const double floor = table.rows.back().error;
    for (const auto& row : table.rows) {
        if (row.eoc && row.error >= factor * floor) out.push_back(*row.eoc);
    }
    return out;
}

std::vector<ErrorReport> convergence_sweep(const Problem& problem, Variant variant, std::span<const double> target_hs,
                                           std::span<const double> taus, int workers, double final_time) {
    if (target_hs.empty() || taus.empty()) throw ParameterError("convergence_sweep: empty grid");
    if (workers < 1) throw ParameterError("workers must be at least 1");
    for (double tau : taus) {
        SchemeConfig c;
        c.variant = variant;
        c.tau = tau;
        c.final_time = final_time;
        c.validate();
    }

    struct Level {
        Mesh mesh;
        BlockOperators ops;
    };
    std::vector<std::unique_ptr<Level>> levels;
    for (double h : target_hs) {
        auto lv = std::make_unique<Level>();
        lv->mesh = generate_disk_mesh(h);
        lv->ops = assemble_operators(lv->mesh, problem.alpha, problem.kappa);
        levels.push_back(std::move(lv));
    }

    const std::size_t cells = levels.size() * taus.size();
    std::vector<ErrorReport> out(cells);
    auto run_cell = [&](std::size_t idx) {
        const Level& lv = *levels[idx / taus.size()];
        SchemeConfig c;
        c.variant = variant;
        c.tau = taus[idx % taus.size()];
        c.final_time = final_time;
        ErrorAccumulator acc(lv.mesh, problem, lv.ops, c.tau);
        IntegrateOptions opt;
        opt.store_states = false;
        opt.observer = [&](const SchemeState& s) { acc.observe(s); };
        const Trajectory tr = integrate(lv.mesh, lv.ops, problem, c, opt);
        ErrorReport r = report_header(lv.mesh, problem, c);
        for (int it : tr.newton_iterations) r.newton_iters += it;
        r.err_linf_l2 = acc.linf_l2();
        r.err_l2_h1 = acc.l2_h1();
        r.wall_time_seconds = tr.wall_time_seconds;
        out[idx] = std::move(r);
    };

    const int n_threads = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(workers), cells));
    if (n_threads <= 1) {
        for (std::size_t i = 0; i < cells; ++i) run_cell(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (int w = 0; w < n_threads; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < cells; i = next++) {
                try {
                    run_cell(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return out;
}

std::vector<TraceConstantRow> trace_constants(std::span<const double> target_hs, int samples, std::uint64_t seed) {
    if (target_hs.size() < 3) throw ParameterError("trace_constants needs at least three levels");
    if (samples < 1) throw ParameterError("need at least one sample");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<TraceConstantRow> out;
    for (double target : target_hs) {
        const Mesh mesh = generate_disk_mesh(target);
        const BlockOperators ops = assemble_operators(mesh, 1.0, 1.0);
        const Factorization ml = factorize(ops.Mlambda, Factorization::Kind::Spd);
        TraceConstantRow row;
        row.h = mesh_stats(mesh).h;
        for (int s = 0; s < samples; ++s) {
            Vector p(ops.n_p);
            for (Eigen::Index i = 0; i < p.size(); ++i) p[i] = dist(rng);
            const Vector u2 = ml.solve(ops.Bp * p);
            const double pp = p.dot(ops.Mp * p);
            row.c_m = std::max(row.c_m, u2.dot(ops.M22 * u2) / (row.h * pp));
            row.c_k = std::max(row.c_k, row.h * u2.dot(ops.K22 * u2) / pp);
        }
        out.push_back(row);
    }
    return out;
}

namespace {

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

std::vector<SpeedupRow> speedup_benchmark(const Problem& problem, std::span<const double> target_hs,
                                          std::span<const double> taus, int repetitions, Variant split) {
    if (repetitions < 1) throw ParameterError("repetitions must be at least 1");
    if (target_hs.empty() || taus.empty()) throw ParameterError("speedup_benchmark: empty grid");
    std::vector<SpeedupRow> out;
    for (double target : target_hs) {
        const Mesh mesh = generate_disk_mesh(target);
        const BlockOperators ops = assemble_operators(mesh, problem.alpha, problem.kappa);
        const double h = mesh_stats(mesh).h;
        for (double tau : taus) {
            auto timed = [&](Variant v) {
                SchemeConfig c;
                c.variant = v;
                c.tau = tau;
                IntegrateOptions opt;
                opt.store_states = false;
                std::vector<double> t;
                for (int r = 0; r < repetitions; ++r) t.push_back(integrate(mesh, ops, problem, c, opt).wall_time_seconds);
                return median(std::move(t));
            };
            SpeedupRow row;
            row.h = h;
            row.tau = tau;
            row.monolithic_seconds = timed(Variant::Monolithic);
            row.splitting_seconds = timed(split);
            row.ratio = row.splitting_seconds > 0.0 ? row.monolithic_seconds / row.splitting_seconds : 0.0;
            out.push_back(row);
        }
    }
    return out;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw ParameterError("loglog_slope needs two equally long series");
    double mx = 0.0;
    double my = 0.0;
    const auto n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw ParameterError("loglog_slope: values must be positive");
        mx += std::log(x[i]) / n;
        my += std::log(y[i]) / n;
    }
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

std::string csv_row(const ErrorReport& r) {
    char buf[512];
    std::snprintf(buf, sizeof(buf), "%s,%s,%.17g,%d,%d,%.17g,%.17g,%.17g,%.17g,%ld", r.scheme.c_str(),
                  r.problem.c_str(), r.h, r.n_u, r.n_p, r.tau, r.err_linf_l2, r.err_l2_h1, r.wall_time_seconds,
                  r.newton_iters);
    return buf;
}

void write_csv(std::ostream& os, std::span<const ErrorReport> reports) {
    os << kCsvHeader << '\n';
    for (const auto& r : reports) os << csv_row(r) << '\n';
}

}  // namespace dynbc
