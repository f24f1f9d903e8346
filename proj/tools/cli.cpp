#include "cli.hpp"

#include "dynbc/analysis.hpp"
#include "dynbc/errors.hpp"
#include "dynbc/mesh.hpp"
#include "dynbc/problems.hpp"
#include "dynbc/schemes.hpp"
#include "dynbc/verify.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <ostream>

namespace dynbc::cli {

namespace {

const std::vector<std::string> kSchemes{"split-a", "split-b", "split-c", "aux", "mono", "third"};
const std::vector<std::string> kProblems{"linear", "semilinear"};

// "-" writes to the given stream.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
        if (path != "-") {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw Error("cannot open '" + path + "' for writing");
            os_ = file_.get();
        }
    }
    std::ostream& stream() { return *os_; }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* os_;
};

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct Flags {
    double target_h = 0.045;
    std::string out = "-";
    std::string scheme = "split-b";
    std::string problem = "linear";
    double tau = 0.0125;
    double final_time = 1.0;
    int h_levels = 6;
    double tau_max = 0.2;
    int tau_count = 9;
    int workers = 1;
    int repetitions = 3;
};

int cmd_mesh(const Flags& f, std::ostream& out) {
    const Mesh mesh = generate_disk_mesh(f.target_h);
    const auto problems = disk_mesh_violations(mesh);
    for (const auto& p : problems) out << "violation: " << p << '\n';
    if (!problems.empty()) return kExitFailure;
    if (f.out == "-") {
        out << format_mesh(mesh);
    } else {
        write_mesh(mesh, f.out);
        const MeshStats s = mesh_stats(mesh);
        out << "h " << fmt17(s.h) << " vertices " << s.n_vertices << " boundary " << s.n_boundary << '\n';
    }
    return kExitOk;
}

int cmd_run(const Flags& f, std::ostream& out) {
    SchemeConfig cfg;
    cfg.variant = parse_variant(f.scheme);
    cfg.tau = f.tau;
    cfg.final_time = f.final_time;
    cfg.validate();
    const Problem problem = problem_by_name(f.problem);
    const Mesh mesh = generate_disk_mesh(f.target_h);
    const BlockOperators ops = assemble_operators(mesh, problem.alpha, problem.kappa);
    ErrorAccumulator acc(mesh, problem, ops, cfg.tau);
    IntegrateOptions opt;
    opt.store_states = false;
    opt.observer = [&](const SchemeState& s) { acc.observe(s); };
    const Trajectory tr = integrate(mesh, ops, problem, cfg, opt);
    ErrorReport r;
    r.scheme = f.scheme;
    r.problem = problem.name;
    r.h = mesh_stats(mesh).h;
    r.n_u = ops.n_u;
    r.n_p = ops.n_p;
    r.tau = cfg.tau;
    r.err_linf_l2 = acc.linf_l2();
    r.err_l2_h1 = acc.l2_h1();
    r.wall_time_seconds = tr.wall_time_seconds;
    for (int it : tr.newton_iterations) r.newton_iters += it;
    Sink sink(f.out, out);
    const std::vector<ErrorReport> rows{r};
    write_csv(sink.stream(), rows);
    return kExitOk;
}

int cmd_sweep(const Flags& f, std::ostream& out) {
    const Variant v = parse_variant(f.scheme);
    const Problem problem = problem_by_name(f.problem);
    const auto levels = first_levels(f.h_levels);
    const auto taus = tau_grid(f.tau_max, f.tau_count);
    const auto rows = convergence_sweep(problem, v, levels, taus, f.workers, f.final_time);
    Sink sink(f.out, out);
    write_csv(sink.stream(), rows);
    return kExitOk;
}

int cmd_verify(std::ostream& out) {
    bool ok = true;
    for (const auto& c : run_verification()) {
        out << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
        ok = ok && c.passed;
    }
    return ok ? kExitOk : kExitFailure;
}

int cmd_speedup(const Flags& f, std::ostream& out) {
    const Problem problem = problem_by_name(f.problem);
    const auto levels = first_levels(f.h_levels);
    const auto taus = tau_grid(f.tau_max, f.tau_count);
    const auto rows = speedup_benchmark(problem, levels, taus, f.repetitions);
    Sink sink(f.out, out);
    sink.stream() << "h,tau,monolithic_s,splitting_s,ratio\n";
    for (const auto& r : rows) {
        sink.stream() << fmt17(r.h) << ',' << fmt17(r.tau) << ',' << fmt17(r.monolithic_seconds) << ','
                      << fmt17(r.splitting_seconds) << ',' << fmt17(r.ratio) << '\n';
    }
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Bulk-surface splitting schemes for parabolic problems with dynamic boundary conditions", "dynbc"};
    app.require_subcommand(1, 1);
    Flags f;

    auto* mesh = app.add_subcommand("mesh", "Generate a unit-disk mesh and write it in the text mesh format");
    mesh->add_option("--target-h", f.target_h, "Target mesh width, 0 < H < 1 (rings = round(1.4 / H))")
        ->required();
    mesh->add_option("--out", f.out, "Output path ('-' for stdout)");

    auto* run = app.add_subcommand("run", "Integrate one problem with one scheme and print one CSV error row");
    run->add_option("--scheme", f.scheme, "Time integrator")->check(CLI::IsMember(kSchemes));
    run->add_option("--problem", f.problem, "Manufactured problem")->check(CLI::IsMember(kProblems));
    run->add_option("--target-h", f.target_h, "Target mesh width, 0 < H < 1");
    run->add_option("--tau", f.tau, "Time step size (final time / tau must be an integer)");
    run->add_option("--final-time", f.final_time, "End of the time interval [0, T]");
    run->add_option("--out", f.out, "CSV output path ('-' for stdout)");

    auto* sweep = app.add_subcommand("sweep", "Error table over h-levels and tau = tau-max * 2^-k");
    sweep->add_option("--scheme", f.scheme, "Time integrator")->check(CLI::IsMember(kSchemes));
    sweep->add_option("--problem", f.problem, "Manufactured problem")->check(CLI::IsMember(kProblems));
    sweep->add_option("--h-levels", f.h_levels, "Number of mesh levels, coarsest first (1..7)");
    sweep->add_option("--tau-max", f.tau_max, "Largest time step");
    sweep->add_option("--tau-count", f.tau_count, "Number of halvings of tau-max, including tau-max");
    sweep->add_option("--final-time", f.final_time, "End of the time interval [0, T]");
    sweep->add_option("--workers", f.workers, "Concurrent cells (timings are only comparable with 1)")
        ->check(CLI::PositiveNumber);
    sweep->add_option("--out", f.out, "CSV output path ('-' for stdout)");

    auto* verify = app.add_subcommand(
        "verify", "Identity suite, defect orders, trace constants, dense-oracle steps and manufactured sources");

    auto* speedup = app.add_subcommand("speedup", "Wall-time ratio monolithic / split-b per (h, tau) cell");
    speedup->add_option("--problem", f.problem, "Manufactured problem")->check(CLI::IsMember(kProblems));
    speedup->add_option("--h-levels", f.h_levels, "Number of mesh levels, coarsest first (1..7)");
    speedup->add_option("--tau-max", f.tau_max, "Largest time step");
    speedup->add_option("--tau-count", f.tau_count, "Number of halvings of tau-max, including tau-max");
    speedup->add_option("--repetitions", f.repetitions, "Timed runs per cell; the median is reported")
        ->check(CLI::PositiveNumber);
    speedup->add_option("--out", f.out, "CSV output path ('-' for stdout)");

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        err << app.help();
        return kExitUsage;
    }

    try {
        if (mesh->parsed()) return cmd_mesh(f, out);
        if (run->parsed()) return cmd_run(f, out);
        if (sweep->parsed()) return cmd_sweep(f, out);
        if (verify->parsed()) return cmd_verify(out);
        if (speedup->parsed()) return cmd_speedup(f, out);
    } catch (const ParameterError& e) {
        err << "error: " << e.what() << '\n' << app.help();
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitUsage;
}

}  // namespace dynbc::cli
