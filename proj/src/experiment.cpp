#include "chaoslab/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "chaoslab/analysis.hpp"
#include "chaoslab/ann.hpp"
#include "chaoslab/control.hpp"
#include "chaoslab/dynamics.hpp"
#include "chaoslab/errors.hpp"
#include "chaoslab/integrate.hpp"
#include "chaoslab/version.hpp"

namespace chaoslab {

namespace {

namespace fs = std::filesystem;

LorenzParams lorenz_from(const ExperimentSpec& spec) {
    LorenzParams p;
    p.sigma = spec.get_double_or("system", "sigma", p.sigma);
    p.rho = spec.get_double_or("system", "rho", p.rho);
    p.beta = spec.get_double_or("system", "beta", p.beta);
    validate(p);
    return p;
}

ChuaParams chua_from(const ExperimentSpec& spec) {
    ChuaParams p;
    p.c1 = spec.get_double_or("system", "c1", p.c1);
    p.c2 = spec.get_double_or("system", "c2", p.c2);
    p.l = spec.get_double_or("system", "l", p.l);
    p.r_coupling = spec.get_double_or("system", "r", p.r_coupling);
    p.r_inductor = spec.get_double_or("system", "r_inductor", p.r_inductor);
    p.diode.ga = spec.get_double_or("system", "ga", p.diode.ga);
    p.diode.gb = spec.get_double_or("system", "gb", p.diode.gb);
    p.diode.bp = spec.get_double_or("system", "bp", p.diode.bp);
    validate(p);
    return p;
}

Vec3 lorenz_initial(const ExperimentSpec& spec) {
    return {spec.get_double_or("system", "x0", 1.0), spec.get_double_or("system", "y0", 1.0),
            spec.get_double_or("system", "z0", 1.0)};
}

Vec3 chua_initial(const ExperimentSpec& spec) {
    return {spec.get_double_or("system", "v1", 0.1), spec.get_double_or("system", "v2", 0.0),
            spec.get_double_or("system", "i_l", 0.0)};
}

IntegratorConfig integrator_from(const ExperimentSpec& spec) {
    IntegratorConfig cfg;
    cfg.dt = spec.get_double("integrator", "dt");
    cfg.n_steps = spec.get_int("integrator", "n_steps");
    cfg.transient_steps = spec.get_int_or("integrator", "transient_steps", 0);
    cfg.stride = spec.get_int_or("integrator", "stride", 1);
    cfg.divergence_bound = spec.get_double_or("integrator", "divergence_bound", 1e6);
    cfg.validate();
    return cfg;
}

Table trajectory_table(const Trajectory& traj) {
    Table t;
    switch (traj.tag) {
        case SystemTag::Chua: t.columns = {"t", "v1", "v2", "i_l"}; break;
        case SystemTag::Lorenz: t.columns = {"t", "x", "y", "z"}; break;
        default: t.columns = {"t", "x"}; break;
    }
    t.rows.reserve(traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i) {
        std::vector<Cell> row;
        row.emplace_back(traj.times[i]);
        for (int c = 0; c < traj.dim; ++c) row.emplace_back(traj.states[i][static_cast<std::size_t>(c)]);
        t.rows.push_back(std::move(row));
    }
    return t;
}

std::vector<Series> trajectory_series(const Trajectory& traj) {
    std::vector<std::string> names;
    switch (traj.tag) {
        case SystemTag::Chua: names = {"v1", "v2", "i_l"}; break;
        case SystemTag::Lorenz: names = {"x", "y", "z"}; break;
        default: names = {"x"}; break;
    }
    std::vector<Series> series(static_cast<std::size_t>(traj.dim));
    for (int c = 0; c < traj.dim; ++c) {
        auto& s = series[static_cast<std::size_t>(c)];
        s.name = names[static_cast<std::size_t>(c)];
        s.x = traj.times;
        s.y.reserve(traj.size());
        for (const Vec3& st : traj.states) s.y.push_back(st[static_cast<std::size_t>(c)]);
    }
    return series;
}

std::vector<int> parse_shape(const std::string& text) {
    std::vector<int> shape;
    std::string token;
    std::istringstream in(text);
    while (std::getline(in, token, '-')) {
        try {
            shape.push_back(std::stoi(token));
        } catch (const std::exception&) {
            throw ConfigError("ann shape '" + text + "' is not of the form 4-8-2");
        }
    }
    return shape;
}

struct Outputs {
    fs::path dir;
    std::vector<std::string> names;

    fs::path file(const std::string& name) {
        names.push_back(name);
        return dir / name;
    }
};

void run_simulate(const ExperimentSpec& spec, Outputs& out) {
    const std::string kind = spec.get_string("system", "kind");
    Trajectory traj;
    if (kind == "lorenz") {
        traj = simulate(LorenzSystem{lorenz_from(spec)}, lorenz_initial(spec), 0.0,
                        integrator_from(spec), SystemTag::Lorenz);
    } else if (kind == "chua") {
        const double u = spec.get_double_or("system", "u", 0.0);
        traj = simulate(ChuaSystem{chua_from(spec), u}, chua_initial(spec), 0.0,
                        integrator_from(spec), SystemTag::Chua);
    } else if (kind == "logistic") {
        const IntegratorConfig cfg = integrator_from(spec);
        const LogisticParams params{spec.get_double_or("system", "mu", 3.2)};
        const Trajectory full = logistic_trajectory(params, spec.get_double_or("system", "x0", 0.1),
                                                    cfg.transient_steps,
                                                    cfg.n_steps - cfg.transient_steps);
        traj.dim = 1;
        traj.tag = SystemTag::Logistic;
        for (std::size_t i = 0; i < full.size(); i += static_cast<std::size_t>(cfg.stride)) {
            traj.times.push_back(full.times[i]);
            traj.states.push_back(full.states[i]);
        }
    } else {
        throw ConfigError("simulate: unknown system kind '" + kind + "'");
    }
    emit_csv(trajectory_table(traj), out.file("trajectory.csv"));
    emit_svg_plot(trajectory_series(traj), out.file("trajectory.svg"), kind + " trajectory");
}

void run_bifurcate(const ExperimentSpec& spec, Outputs& out) {
    const std::string kind = spec.get_string("system", "kind");
    if (kind != "logistic")
        throw ConfigError("bifurcate: only the logistic map is supported, got '" + kind + "'");
    const BifurcationDiagram diagram = bifurcation_scan(
        spec.get_double("system", "mu_min"), spec.get_double("system", "mu_max"),
        static_cast<int>(spec.get_int("system", "n_mu")), spec.get_int("system", "transient"),
        spec.get_int("system", "n_samples"), spec.get_double_or("system", "x0", 0.1));

    Table t;
    t.columns = {"mu", "x"};
    for (std::size_t i = 0; i < diagram.mu_values.size(); ++i)
        for (double x : diagram.orbit_samples[i])
            t.rows.push_back({Cell{diagram.mu_values[i]}, Cell{x}});
    emit_csv(t, out.file("bifurcation.csv"));

    // Branch skeleton: one polyline per retained sample index.
    const std::size_t n_series =
        std::min<std::size_t>(32, diagram.orbit_samples.empty() ? 0 : diagram.orbit_samples[0].size());
    std::vector<Series> series(n_series);
    for (std::size_t k = 0; k < n_series; ++k) {
        series[k].x = diagram.mu_values;
        for (const auto& column : diagram.orbit_samples) series[k].y.push_back(column[k]);
    }
    emit_svg_plot(series, out.file("bifurcation.svg"), "logistic map bifurcation");
}

void run_lyapunov(const ExperimentSpec& spec, Outputs& out, RunManifest& manifest) {
    const std::string kind = spec.get_string("system", "kind");
    LyapunovEstimate est;
    if (kind == "lorenz") {
        est = lyapunov_flow(LorenzSystem{lorenz_from(spec)}, lorenz_initial(spec),
                            integrator_from(spec),
                            static_cast<int>(spec.get_int_or("integrator", "renorm_interval", 10)),
                            spec.get_double_or("integrator", "delta0", 1e-8));
    } else if (kind == "chua") {
        est = lyapunov_flow(ChuaSystem{chua_from(spec), 0.0}, chua_initial(spec),
                            integrator_from(spec),
                            static_cast<int>(spec.get_int_or("integrator", "renorm_interval", 10)),
                            spec.get_double_or("integrator", "delta0", 1e-8));
    } else if (kind == "logistic") {
        const LogisticParams params{spec.get_double_or("system", "mu", 4.0)};
        est = lyapunov_map(params, spec.get_double_or("system", "x0", 0.1),
                           spec.get_int_or("integrator", "transient_steps", 1000),
                           spec.get_int("integrator", "n_steps"));
    } else {
        throw ConfigError("lyapunov: unknown system kind '" + kind + "'");
    }

    Table t;
    t.columns = {"n", "lambda"};
    for (std::size_t i = 0; i < est.convergence_series.size(); ++i)
        t.rows.push_back({Cell{static_cast<double>(i + 1)}, Cell{est.convergence_series[i]}});
    emit_csv(t, out.file("lyapunov.csv"));

    Series s;
    s.name = "running lambda";
    for (std::size_t i = 0; i < est.convergence_series.size(); ++i) {
        s.x.push_back(static_cast<double>(i + 1));
        s.y.push_back(est.convergence_series[i]);
    }
    emit_svg_plot(std::span(&s, 1), out.file("lyapunov.svg"), kind + " largest Lyapunov exponent");
    manifest.metrics["lambda"] = est.lambda;
}

void run_sweep(const ExperimentSpec& spec, Outputs& out, RunManifest& manifest) {
    const std::string kind = spec.get_string("system", "kind");
    if (kind != "chua")
        throw ConfigError("sweep: only the Chua plant is supported, got '" + kind + "'");
    const SweepResult result = rc_sweep(
        chua_from(spec),
        {spec.get_double("system", "r_min"), spec.get_double("system", "r_max")},
        {spec.get_double("system", "c1_min"), spec.get_double("system", "c1_max")},
        static_cast<int>(spec.get_int("system", "n_r")),
        static_cast<int>(spec.get_int("system", "n_c1")), integrator_from(spec));

    Table t;
    t.columns = {"r", "c1", "verdict", "lambda"};
    int n_fixed = 0, n_periodic = 0, n_chaotic = 0, n_divergent = 0;
    for (const SweepCell& cell : result.cells) {
        t.rows.push_back({Cell{cell.r}, Cell{cell.c1}, Cell{to_string(cell.classification.verdict)},
                          Cell{cell.lambda}});
        switch (cell.classification.verdict) {
            case Verdict::FixedPoint: ++n_fixed; break;
            case Verdict::Periodic: ++n_periodic; break;
            case Verdict::Chaotic: ++n_chaotic; break;
            case Verdict::Divergent: ++n_divergent; break;
        }
    }
    emit_csv(t, out.file("sweep.csv"));
    manifest.metrics["fixed_point_cells"] = n_fixed;
    manifest.metrics["periodic_cells"] = n_periodic;
    manifest.metrics["chaotic_cells"] = n_chaotic;
    manifest.metrics["divergent_cells"] = n_divergent;

    // lambda vs R, one series per C1 column, divergent cells omitted
    std::vector<Series> series;
    for (std::size_t ci = 0; ci < result.c1_values.size(); ++ci) {
        Series s;
        char label[48];
        std::snprintf(label, sizeof label, "C1=%.3gnF", result.c1_values[ci] * 1e9);
        s.name = label;
        for (std::size_t ri = 0; ri < result.r_values.size(); ++ri) {
            const SweepCell& cell = result.at(ri, ci);
            if (std::isfinite(cell.lambda)) {
                s.x.push_back(cell.r);
                s.y.push_back(cell.lambda);
            }
        }
        if (!s.x.empty()) series.push_back(std::move(s));
    }
    if (!series.empty())
        emit_svg_plot(series, out.file("sweep.svg"), "largest Lyapunov exponent over the R-C1 grid");
}

void run_control(const ExperimentSpec& spec, Outputs& out, RunManifest& manifest,
                 std::uint64_t seed) {
    const std::string kind = spec.get_string("system", "kind");
    if (kind != "chua")
        throw ConfigError("control: only the Chua plant is supported, got '" + kind + "'");
    const ChuaParams base = chua_from(spec);

    ControllerConfig cfg;
    cfg.dt = spec.get_double("integrator", "dt");
    cfg.divergence_bound = spec.get_double_or("integrator", "divergence_bound", 1e6);
    cfg.net_shape = parse_shape(spec.get_string_or("ann", "shape", "4-8-2"));
    cfg.seed = seed;
    cfg.init_range = spec.get_double_or("ann", "init_range", cfg.init_range);
    cfg.control_interval = spec.get_int_or("control", "control_interval", cfg.control_interval);
    cfg.learning_rate = spec.get_double_or("control", "learning_rate", cfg.learning_rate);
    cfg.r_mult_lo = spec.get_double_or("control", "r_mult_lo", cfg.r_mult_lo);
    cfg.r_mult_hi = spec.get_double_or("control", "r_mult_hi", cfg.r_mult_hi);
    cfg.u_max = spec.get_double_or("control", "u_max", cfg.u_max);
    cfg.sensitivity_eps = spec.get_double_or("control", "sensitivity_eps", cfg.sensitivity_eps);
    cfg.snapshot_stride = spec.get_int_or("control", "snapshot_stride", 0);
    cfg.scaling.v1_scale = spec.get_double_or("control", "v1_scale", cfg.scaling.v1_scale);
    cfg.scaling.v2_scale = spec.get_double_or("control", "v2_scale", cfg.scaling.v2_scale);
    cfg.scaling.i_scale = spec.get_double_or("control", "i_scale", cfg.scaling.i_scale);
    cfg.scaling.err_scale = spec.get_double_or("control", "err_scale", cfg.scaling.err_scale);

    const std::string type = spec.get_string("objective", "type");
    ControlObjective objective;
    if (type == "setpoint")
        objective = Setpoint{spec.get_double("objective", "v1_star")};
    else if (type == "sinusoid")
        objective = Sinusoid{spec.get_double("objective", "amplitude"),
                             spec.get_double("objective", "frequency")};
    else if (type == "equilibrium")
        objective =
            PlantEquilibrium{static_cast<int>(spec.get_int_or("objective", "equilibrium_index", 1))};
    else
        throw ConfigError("objective: unknown type '" + type +
                          "' (expected setpoint | sinusoid | equilibrium)");

    const double duration = spec.get_double("control", "duration");
    const ClosedLoopResult result = run_closed_loop(base, chua_initial(spec), objective, cfg, duration);

    Table t;
    t.columns = {"t", "v1", "v2", "i_l", "r_eff", "u", "error"};
    for (std::size_t i = 0; i < result.trajectory.size(); ++i) {
        const Vec3& s = result.trajectory.states[i];
        const ControlSample& c = result.control_history[i];
        t.rows.push_back({Cell{result.trajectory.times[i]}, Cell{s[0]}, Cell{s[1]}, Cell{s[2]},
                          Cell{c.r_eff}, Cell{c.u}, Cell{c.error}});
    }
    emit_csv(t, out.file("control.csv"));

    for (const auto& [interval, net] : result.weight_snapshots) {
        char name[32];
        std::snprintf(name, sizeof name, "weights_%06lld.txt", static_cast<long long>(interval));
        save_mlp(net, out.file(name));
    }

    {
        std::vector<Series> series(2);
        series[0].name = "v1";
        series[0].x = result.trajectory.times;
        for (const Vec3& s : result.trajectory.states) series[0].y.push_back(s[0]);
        const ResolvedObjective ref = resolve_objective(objective, base);
        series[1].name = "reference";
        series[1].x = result.trajectory.times;
        for (double tt : result.trajectory.times) series[1].y.push_back(ref.reference(tt));
        emit_svg_plot(series, out.file("control.svg"), "ANN-controlled Chua output");
    }

    if (result.diverged)
        throw DivergenceError("control: plant diverged (partial outputs written)",
                              result.diverged_step);

    const ControlMetrics metrics = evaluate_control(result);
    manifest.metrics["rms_error_final_quarter"] = metrics.rms_error_final_quarter;
    manifest.metrics["uncontrolled_baseline_rms"] = result.uncontrolled_baseline_rms;
    manifest.metrics["suppression_ratio"] = metrics.suppression_ratio;
    manifest.notes["post_control_classification"] =
        to_string(metrics.post_control_classification.verdict);
}

void run_plot(const ExperimentSpec& spec, Outputs& out) {
    const RawCsv csv = read_csv(spec.get_string("system", "input"));
    const std::vector<double> xs = numeric_column(csv, spec.get_string("system", "x"));
    std::vector<Series> series;
    std::istringstream ycols(spec.get_string("system", "y"));
    std::string name;
    while (std::getline(ycols, name, ',')) {
        Series s;
        s.name = name;
        s.x = xs;
        s.y = numeric_column(csv, name);
        series.push_back(std::move(s));
    }
    if (series.empty())
        throw ConfigError("plot: no y columns given");
    emit_svg_plot(series, out.file("plot.svg"));
}

}  // namespace

RunManifest run_subcommand(const std::string& name, const ExperimentSpec& spec,
                           const std::filesystem::path& out_dir,
                           std::optional<std::uint64_t> seed_override) {
    const std::vector<std::string> problems = validate_spec(spec, name);
    if (!problems.empty()) {
        std::string msg = "invalid config for subcommand '" + name + "':";
        for (const std::string& p : problems) msg += "\n  " + p;
        throw ConfigError(msg);
    }

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec)
        throw IoError("cannot create output directory " + out_dir.string() + ": " + ec.message());

    const std::uint64_t seed =
        seed_override.value_or(spec.has("ann", "seed") ? spec.get_uint("ann", "seed") : 1);

    RunManifest manifest;
    manifest.artifact_version = kVersion;
    manifest.subcommand = name;
    manifest.seed = seed;
    manifest.config_text = serialize_config(spec);

    Outputs out{out_dir, {}};
    const auto start = std::chrono::steady_clock::now();
    if (name == "simulate")
        run_simulate(spec, out);
    else if (name == "bifurcate")
        run_bifurcate(spec, out);
    else if (name == "lyapunov")
        run_lyapunov(spec, out, manifest);
    else if (name == "sweep")
        run_sweep(spec, out, manifest);
    else if (name == "control")
        run_control(spec, out, manifest, seed);
    else if (name == "plot")
        run_plot(spec, out);
    else
        throw ConfigError("unknown subcommand '" + name + "'");

    manifest.outputs = out.names;
    manifest.duration_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_manifest(manifest, out_dir / "manifest.json");
    return manifest;
}

}  // namespace chaoslab
