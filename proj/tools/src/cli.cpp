#include "cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "contagion/analysis.hpp"
#include "contagion/csv.hpp"
#include "contagion/errors.hpp"
#include "contagion/laplace.hpp"
#include "contagion/parallel.hpp"
#include "contagion/serialization.hpp"
#include "contagion/simulator.hpp"
#include "contagion/stationarity.hpp"
#include "run_config.hpp"

namespace contagion::cli {

namespace fs = std::filesystem;

namespace {

struct Options {
    std::string config;
    unsigned threads = 0;

    std::string out_dir;

    std::optional<double> v1, v2;
    std::optional<int> n;
    std::optional<double> tol;
    std::string grid_out;

    std::optional<std::size_t> paths;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> algorithm;
    std::optional<double> horizon;
    std::optional<int> generations;
    std::optional<double> dt;

    std::optional<double> burn_in;
    std::string format = "json";
};

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

fs::path output_dir(const Options& o, const RunConfig& c, const char* fallback) {
    fs::path dir = !o.out_dir.empty() ? fs::path(o.out_dir)
                   : c.output.dir     ? fs::path(*c.output.dir)
                                      : fs::path(fallback);
    fs::create_directories(dir);
    return dir;
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream f(path);
    if (!f) throw ValidationError("cannot write " + path.string());
    f << text;
}

bool wants(const RunConfig& c, const char* format) {
    if (c.output.formats.empty()) return true;
    return std::find(c.output.formats.begin(), c.output.formats.end(), format) !=
           c.output.formats.end();
}

int cmd_check(const Options& o, std::ostream& out) {
    const RunConfig c = load_run_config(o.config);
    const ValidationReport r = validate(c.model);
    out << "params_hash " << params_hash(c.model) << '\n'
        << "spectral_radius " << fmt(r.spectral_radius) << '\n'
        << "sum_form_radius " << fmt(r.sum_form_radius) << '\n'
        << "finite_means " << (r.c1_ok ? "yes" : "no") << '\n'
        << "stationary " << (r.c2_ok ? "yes" : "no") << '\n';
    for (const auto& m : r.messages) out << "note: " << m << '\n';
    return kOk;
}

int cmd_moments(const Options& o, std::ostream& out) {
    const RunConfig c = load_run_config(o.config);
    const std::string json = moment_report_to_json(moment_report(c.model));
    out << json << '\n';
    if (!o.out_dir.empty() || c.output.dir)
        write_file(output_dir(o, c, "out") / "moments.json", json + "\n");
    return kOk;
}

int cmd_laplace(const Options& o, std::ostream& out) {
    const RunConfig c = load_run_config(o.config);
    if (o.v1.has_value() != o.v2.has_value())
        throw ValidationError("--v1 and --v2 must be given together");
    VPanel points;
    if (o.v1)
        points.emplace_back(*o.v1, *o.v2);
    else
        points = c.laplace.v;
    if (points.empty()) throw ValidationError("no evaluation points: pass --v1/--v2 or set laplace.v");

    const std::optional<int> n_opt = o.n ? o.n : (o.tol ? std::nullopt : c.laplace.n);
    const bool fixed = n_opt.has_value();
    const int n = n_opt.value_or(0);
    const double tol = o.tol ? *o.tol : c.laplace.tol.value_or(1e-9);

    LaplaceOptions lopt;
    lopt.max_generations = generation_cap_for(c.model, tol);
    out << "v1,v2,n,value,error_estimate,n_used\n";
    for (const auto& [v1, v2] : points) {
        const LaplaceResult r =
            fixed ? limiting_laplace_finite(c.model, v1, v2, n) : limiting_laplace(c.model, v1, v2, tol, lopt);
        out << fmt(v1) << ',' << fmt(v2) << ',' << (fixed ? std::to_string(n) : std::string("auto"))
            << ',' << fmt(r.value) << ',' << fmt(r.error_estimate) << ',' << r.n_used << '\n';
    }
    if (!o.grid_out.empty()) {
        const auto [v1, v2] = points.front();
        const int generations =
            fixed ? n : limiting_laplace(c.model, v1, v2, tol, lopt).n_used + 1;
        std::ofstream f(o.grid_out);
        if (!f) throw ValidationError("cannot write " + o.grid_out);
        write_laplace_grid_csv(f, limiting_l_grid(c.model, v1, v2, generations));
    }
    return kOk;
}

int cmd_simulate(const Options& o, std::ostream& out) {
    const RunConfig c = load_run_config(o.config);
    const std::size_t paths = o.paths.value_or(c.simulate.paths.value_or(1));
    const std::uint64_t seed = o.seed.value_or(c.simulate.seed.value_or(1));
    const std::string algorithm = o.algorithm.value_or(c.simulate.algorithm.value_or("thinning"));
    const double horizon = o.horizon.value_or(c.simulate.horizon.value_or(10.0));
    const int generations = o.generations.value_or(c.simulate.generations.value_or(30));
    const double dt = o.dt.value_or(c.simulate.dt.value_or(0.01));
    if (algorithm != "thinning" && algorithm != "cluster")
        throw ValidationError("algorithm must be thinning or cluster");
    if (!(dt > 0.0)) throw ValidationError("dt must be > 0");
    if (!(horizon >= 0.0)) throw ValidationError("horizon must be >= 0");
    const fs::path dir = output_dir(o, c, "out");

    std::vector<double> times;
    for (std::size_t j = 0;; ++j) {
        const double t = static_cast<double>(j) * dt;
        if (t > horizon) break;
        times.push_back(t);
    }

    std::vector<std::size_t> events(paths);
    std::vector<std::array<long, 2>> counts(paths);
    parallel_for(paths, o.threads == 0 ? default_thread_count() : o.threads, [&](std::size_t i) {
        RandomStream rng(seed, i);
        EventHistory h = algorithm == "thinning"
                             ? simulate_thinning(c.model, horizon, rng)
                             : simulate_cluster(c.model, horizon, generations, rng);
        h.seed = seed;
        events[i] = h.events.size();
        counts[i] = h.counts(horizon);
        const std::string stem = "path_" + std::to_string(i);
        std::ofstream ev(dir / (stem + "_events.csv"));
        write_events_csv(ev, h);
        std::ofstream in(dir / (stem + "_intensity.csv"));
        write_intensity_csv(in, h, c.model, times);
    });

    out << "path,records,N1,N2\n";
    for (std::size_t i = 0; i < paths; ++i)
        out << i << ',' << events[i] << ',' << counts[i][0] << ',' << counts[i][1] << '\n';
    return kOk;
}

int cmd_verify(const Options& o, std::ostream& out) {
    const RunConfig c = load_run_config(o.config);
    VerifyConfig vc;
    if (auto p = o.paths ? o.paths : c.verify.paths) vc.n_paths = *p;
    vc.seed = o.seed.value_or(c.verify.seed.value_or(1));
    vc.burn_in = o.burn_in ? o.burn_in : c.verify.burn_in;
    vc.horizon = o.horizon ? o.horizon : c.verify.horizon;
    if (c.verify.z_threshold) vc.z_threshold = *c.verify.z_threshold;
    if (!c.verify.v.empty()) vc.v_panel = c.verify.v;
    vc.threads = o.threads;

    const VerificationReport r = verify(c.model, vc);
    const std::string json = verification_to_json(r);
    out << (o.format == "text" ? verification_to_text(r) : json + "\n");
    if (!o.out_dir.empty() || c.output.dir) {
        const fs::path dir = output_dir(o, c, "out");
        if (wants(c, "json")) write_file(dir / "verify.json", json + "\n");
        if (wants(c, "text")) write_file(dir / "verify.txt", verification_to_text(r));
    }
    if (r.non_stationary) return kNonStationary;
    return r.overall_pass ? kOk : kVerificationFailed;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Bivariate dynamic contagion processes: moments, Laplace transforms, simulation"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    app.add_option("--threads", o.threads, "worker threads (default: CONTAGION_THREADS or cores)");

    auto config_opt = [&](CLI::App* sub) {
        sub->add_option("--config", o.config, "run config JSON")->required()->check(CLI::ExistingFile);
    };

    auto* check = app.add_subcommand("check", "validate a model and report its spectral radius");
    config_opt(check);

    auto* moments = app.add_subcommand("moments", "closed-form stationary moments as JSON");
    config_opt(moments);
    moments->add_option("--out", o.out_dir, "directory for moments.json");

    auto* laplace = app.add_subcommand("laplace", "limiting Laplace transform as CSV");
    config_opt(laplace);
    laplace->add_option("--v1", o.v1, "argument for component 1")->check(CLI::NonNegativeNumber);
    laplace->add_option("--v2", o.v2, "argument for component 2")->check(CLI::NonNegativeNumber);
    auto* n_opt = laplace->add_option("--n", o.n, "fixed generation count")->check(CLI::PositiveNumber);
    auto* tol_opt = laplace->add_option("--tol", o.tol, "stop when successive generations differ by less")
                        ->check(CLI::PositiveNumber);
    n_opt->excludes(tol_opt);
    laplace->add_option("--grid-out", o.grid_out, "write the l-functions of the first point as CSV");

    auto* simulate = app.add_subcommand("simulate", "simulate paths; writes events and intensity CSVs");
    config_opt(simulate);
    simulate->add_option("--paths", o.paths, "number of paths")->check(CLI::PositiveNumber);
    simulate->add_option("--seed", o.seed, "top-level seed; path i uses stream (seed, i)");
    simulate->add_option("--algorithm", o.algorithm, "thinning or cluster")
        ->check(CLI::IsMember({"thinning", "cluster"}));
    simulate->add_option("--horizon", o.horizon, "simulated time")->check(CLI::NonNegativeNumber);
    simulate->add_option("--generations", o.generations, "cluster truncation")
        ->check(CLI::NonNegativeNumber);
    simulate->add_option("--dt", o.dt, "spacing of the intensity CSV")->check(CLI::PositiveNumber);
    simulate->add_option("--out", o.out_dir, "output directory");

    auto* verify_cmd = app.add_subcommand("verify", "Monte Carlo check against the closed forms");
    config_opt(verify_cmd);
    verify_cmd->add_option("--paths", o.paths, "number of paths")->check(CLI::PositiveNumber);
    verify_cmd->add_option("--seed", o.seed, "top-level seed");
    verify_cmd->add_option("--burn-in", o.burn_in, "sampling time override")->check(CLI::PositiveNumber);
    verify_cmd->add_option("--horizon", o.horizon, "sampling time T")->check(CLI::PositiveNumber);
    verify_cmd->add_option("--format", o.format, "stdout format")->check(CLI::IsMember({"json", "text"}));
    verify_cmd->add_option("--out", o.out_dir, "directory for verify.json / verify.txt");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInvalid;
    }

    try {
        if (*check) return cmd_check(o, out);
        if (*moments) return cmd_moments(o, out);
        if (*laplace) return cmd_laplace(o, out);
        if (*simulate) return cmd_simulate(o, out);
        if (*verify_cmd) return cmd_verify(o, out);
    } catch (const NonStationaryError& e) {
        err << e.what() << '\n';
        return kNonStationary;
    } catch (const ConvergenceError& e) {
        err << "convergence failure: " << e.what() << '\n';
        return kConvergence;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kConvergence;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kInvalid;
    }
    return kInvalid;
}

}  // namespace contagion::cli
