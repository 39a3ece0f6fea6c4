#include "chaoslab/control.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "chaoslab/errors.hpp"

namespace chaoslab {

double ResolvedObjective::reference(double t) const {
    if (is_sinusoid)
        return amplitude * std::sin(2.0 * M_PI * frequency_hz * t);
    return value;
}

ResolvedObjective resolve_objective(const ControlObjective& objective, const ChuaParams& plant) {
    ResolvedObjective r;
    if (const auto* sp = std::get_if<Setpoint>(&objective)) {
        r.value = sp->v1_star;
    } else if (const auto* sn = std::get_if<Sinusoid>(&objective)) {
        if (!(sn->amplitude > 0.0) || !(sn->frequency_hz > 0.0))
            throw ConfigError("objective: sinusoid amplitude and frequency must be positive");
        r.is_sinusoid = true;
        r.amplitude = sn->amplitude;
        r.frequency_hz = sn->frequency_hz;
    } else {
        const auto& pe = std::get<PlantEquilibrium>(objective);
        const std::vector<Vec3> eqs = chua_equilibria(plant);
        if (pe.index < 0 || static_cast<std::size_t>(pe.index) >= eqs.size())
            throw ConfigError("objective: plant has " + std::to_string(eqs.size()) +
                              " equilibria, index " + std::to_string(pe.index) + " is invalid");
        r.value = eqs[static_cast<std::size_t>(pe.index)][0];
    }
    return r;
}

void ControllerConfig::validate() const {
    if (net_shape.size() < 2 || net_shape.front() != 4 || net_shape.back() != 2)
        throw ConfigError("controller: net shape must map 4 observations to 2 outputs");
    if (control_interval < 1)
        throw ConfigError("controller: control_interval must be >= 1");
    if (!(learning_rate >= 0.0))
        throw ConfigError("controller: learning_rate must be non-negative");
    if (!(r_mult_lo > 0.0) || !(r_mult_hi >= r_mult_lo))
        throw ConfigError("controller: R multiplier bounds must satisfy 0 < lo <= hi");
    if (!(u_max >= 0.0))
        throw ConfigError("controller: u_max must be non-negative");
    if (!(sensitivity_eps > 0.0 && sensitivity_eps < 0.5))
        throw ConfigError("controller: sensitivity_eps must lie in (0, 0.5)");
    if (!(dt > 0.0))
        throw ConfigError("controller: dt must be positive");
    if (!(init_range >= 0.0))
        throw ConfigError("controller: init_range must be non-negative");
    if (!(scaling.v1_scale > 0.0) || !(scaling.v2_scale > 0.0) || !(scaling.i_scale > 0.0) ||
        !(scaling.err_scale > 0.0))
        throw ConfigError("controller: observation scales must be positive");
}

std::array<double, 4> build_observation(const Vec3& state, double reference,
                                        const ObservationScaling& sc) {
    if (!std::isfinite(state[0]) || !std::isfinite(state[1]) || !std::isfinite(state[2]))
        throw DomainError("build_observation: non-finite state");
    return {(state[0] - sc.v1_center) / sc.v1_scale,
            (state[1] - sc.v2_center) / sc.v2_scale,
            (state[2] - sc.i_center) / sc.i_scale,
            (state[0] - reference) / sc.err_scale};
}

Vec3 unscale_observation(const std::array<double, 4>& obs, const ObservationScaling& sc) {
    return {obs[0] * sc.v1_scale + sc.v1_center,
            obs[1] * sc.v2_scale + sc.v2_center,
            obs[2] * sc.i_scale + sc.i_center};
}

namespace {

// R multiplier through (0, lo), (1/2, 1), (1, hi): written so that o = 1/2
// yields exactly 1.0 (the factor (1 - 2o) vanishes identically), which is
// what makes a zero-initialized controller bit-exactly neutral.
double r_multiplier(double o, double lo, double hi) {
    double m;
    if (o <= 0.5)
        m = 1.0 - (1.0 - lo) * (1.0 - 2.0 * o);
    else
        m = 1.0 + (hi - 1.0) * (2.0 * o - 1.0);
    return std::clamp(m, lo, hi);
}

}  // namespace

std::pair<ChuaParams, double> actuate(std::span<const double> net_output, const ChuaParams& base,
                                      const ControllerConfig& config) {
    if (net_output.size() != 2)
        throw ConfigError("actuate: expected 2 network outputs");
    ChuaParams eff = base;
    eff.r_coupling = base.r_coupling * r_multiplier(net_output[0], config.r_mult_lo, config.r_mult_hi);
    const double u = std::clamp(config.u_max * (2.0 * net_output[1] - 1.0), -config.u_max, config.u_max);
    return {eff, u};
}

std::array<double, 2> estimate_sensitivity(const Vec3& state, std::span<const double> net_output,
                                           double v1_end_nominal, const ChuaParams& base,
                                           const ControllerConfig& config) {
    std::array<double, 2> sens{0.0, 0.0};
    const Vec3 scale = ChuaSystem::metric_scale();
    for (std::size_t k = 0; k < 2; ++k) {
        std::array<double, 2> o{net_output[0], net_output[1]};
        const double eps = (o[k] + config.sensitivity_eps <= 1.0) ? config.sensitivity_eps
                                                                  : -config.sensitivity_eps;
        o[k] += eps;
        const auto [params, u] = actuate(o, base, config);
        const ChuaSystem sys{params, u};
        Vec3 s = state;
        bool diverged = false;
        try {
            for (std::int64_t i = 0; i < config.control_interval; ++i) {
                s = guarded_rk4_step([&](const Vec3& x) { return sys.deriv(x); }, s, config.dt, i);
                const double norm = scaled_max_norm(s, scale);
                if (!std::isfinite(norm) || norm > config.divergence_bound) {
                    diverged = true;
                    break;
                }
            }
        } catch (const DivergenceError&) {
            diverged = true;
        }
        sens[k] = diverged ? 0.0 : (s[0] - v1_end_nominal) / eps;
    }
    return sens;
}

namespace {

double rms(std::span<const double> values) {
    if (values.empty()) return 0.0;
    double acc = 0.0;
    for (double v : values) acc += v * v;
    return std::sqrt(acc / static_cast<double>(values.size()));
}

double final_quarter_rms(std::span<const double> values) {
    const std::size_t n = values.size();
    return rms(values.subspan(n - n / 4));
}

bool net_finite(const MLP& net) {
    for (const auto& layer : net.weights)
        for (double w : layer)
            if (!std::isfinite(w)) return false;
    for (const auto& layer : net.biases)
        for (double b : layer)
            if (!std::isfinite(b)) return false;
    return true;
}

}  // namespace

ClosedLoopResult run_closed_loop(const ChuaParams& base, const Vec3& initial,
                                 const ControlObjective& objective,
                                 const ControllerConfig& config, double duration_s) {
    config.validate();
    validate(base);
    const std::int64_t n_intervals =
        static_cast<std::int64_t>(duration_s / (config.dt * static_cast<double>(config.control_interval)));
    if (n_intervals < 100)
        throw ConfigError("run_closed_loop: duration must cover at least 100 control intervals");

    const ResolvedObjective ref = resolve_objective(objective, base);

    ClosedLoopResult result;
    result.base_params = base;
    result.config = config;
    result.objective = objective;
    result.initial = initial;
    result.trajectory.tag = SystemTag::Chua;
    result.trajectory.times.reserve(static_cast<std::size_t>(n_intervals));
    result.trajectory.states.reserve(static_cast<std::size_t>(n_intervals));
    result.control_history.reserve(static_cast<std::size_t>(n_intervals));
    result.error_series.reserve(static_cast<std::size_t>(n_intervals));

    MLP net = init_weights(config.net_shape, TrainConfig{.learning_rate = 1.0,
                                                         .epochs = 1,
                                                         .seed = config.seed,
                                                         .init_range = config.init_range});
    const std::int64_t snapshot_stride =
        config.snapshot_stride > 0 ? config.snapshot_stride
                                   : std::max<std::int64_t>(1, n_intervals / 10);
    result.weight_snapshots.emplace_back(0, net);

    const Vec3 scale = ChuaSystem::metric_scale();
    const double se2 = config.scaling.err_scale * config.scaling.err_scale;
    Vec3 state = initial;

    for (std::int64_t it = 0; it < n_intervals && !result.diverged; ++it) {
        const double t_now = static_cast<double>(it * config.control_interval) * config.dt;
        const std::array<double, 4> obs = build_observation(state, ref.reference(t_now), config.scaling);
        const ForwardTrace trace = forward(net, obs);
        const std::vector<double>& o = trace.output();
        const auto [eff_params, u] = actuate(o, base, config);
        const ChuaSystem sys{eff_params, u};

        const Vec3 interval_start = state;
        try {
            for (std::int64_t k = 1; k <= config.control_interval; ++k) {
                const std::int64_t global = it * config.control_interval + k;
                state = guarded_rk4_step([&](const Vec3& x) { return sys.deriv(x); }, state,
                                         config.dt, global);
                const double norm = scaled_max_norm(state, scale);
                if (!std::isfinite(norm) || norm > config.divergence_bound) {
                    result.diverged = true;
                    result.diverged_step = global;
                    break;
                }
            }
        } catch (const DivergenceError& e) {
            result.diverged = true;
            result.diverged_step = e.step();
        }
        if (result.diverged) break;

        const std::int64_t global_step = (it + 1) * config.control_interval;
        const double t_end = static_cast<double>(global_step) * config.dt;
        const double error = state[0] - ref.reference(t_end);

        result.trajectory.times.push_back(t_end);
        result.trajectory.states.push_back(state);
        result.control_history.push_back({t_end, eff_params.r_coupling, u, error});
        result.error_series.push_back(error);

        if (config.learning_rate > 0.0) {
            const std::array<double, 2> sens =
                estimate_sensitivity(interval_start, o, state[0], base, config);
            // dL/do for L = 1/2 (e / err_scale)^2 with e = v1 - ref
            const std::array<double, 2> err_signal{error * sens[0] / se2, error * sens[1] / se2};
            const Gradients grads = backprop_grad(net, trace, err_signal);
            net = sgd_update(std::move(net), grads, config.learning_rate);
            if (!net_finite(net))
                throw TrainingDivergenceError("run_closed_loop: weights became non-finite", it);
        }
        if ((it + 1) % snapshot_stride == 0)
            result.weight_snapshots.emplace_back(it + 1, net);
    }
    if (result.weight_snapshots.back().first != n_intervals && !result.diverged)
        result.weight_snapshots.emplace_back(n_intervals, net);

    // Uncontrolled baseline: neutral actuation over the same horizon.
    try {
        IntegratorConfig bcfg;
        bcfg.dt = config.dt;
        bcfg.n_steps = n_intervals * config.control_interval;
        bcfg.transient_steps = 0;
        bcfg.stride = config.control_interval;
        bcfg.divergence_bound = config.divergence_bound;
        const Trajectory baseline = simulate(ChuaSystem{base, 0.0}, initial, 0.0, bcfg, SystemTag::Chua);
        std::vector<double> berr(baseline.size());
        for (std::size_t i = 0; i < baseline.size(); ++i)
            berr[i] = baseline.states[i][0] - ref.reference(baseline.times[i]);
        result.uncontrolled_baseline_rms = final_quarter_rms(berr);
    } catch (const DivergenceError&) {
        result.baseline_diverged = true;
        result.uncontrolled_baseline_rms = std::numeric_limits<double>::quiet_NaN();
    }
    return result;
}

double lyapunov_frozen_loop(const ChuaParams& base, const ControllerConfig& config,
                            const ResolvedObjective& objective, const MLP& frozen_net,
                            const Vec3& start, double t_start, std::int64_t n_intervals,
                            double delta0) {
    config.validate();
    if (!(delta0 > 0.0))
        throw ConfigError("lyapunov_frozen_loop: delta0 must be positive");
    const Vec3 scale = ChuaSystem::metric_scale();
    const double interval_time = static_cast<double>(config.control_interval) * config.dt;

    const auto hold_interval = [&](Vec3& s, double t) {
        const std::array<double, 4> obs = build_observation(s, objective.reference(t), config.scaling);
        const auto [params, u] = actuate(forward(frozen_net, obs).output(), base, config);
        const ChuaSystem sys{params, u};
        for (std::int64_t k = 0; k < config.control_interval; ++k) {
            s = guarded_rk4_step([&](const Vec3& x) { return sys.deriv(x); }, s, config.dt, k);
            const double norm = scaled_max_norm(s, scale);
            if (!std::isfinite(norm) || norm > config.divergence_bound)
                throw DivergenceError("lyapunov_frozen_loop: trajectory diverged", k);
        }
    };

    Vec3 fid = start;
    Vec3 pert = start;
    pert[0] += delta0 / scale[0];
    std::vector<double> log_growth;
    log_growth.reserve(static_cast<std::size_t>(n_intervals));
    for (std::int64_t it = 0; it < n_intervals; ++it) {
        const double t = t_start + static_cast<double>(it) * interval_time;
        hold_interval(fid, t);
        hold_interval(pert, t);
        const double dx = (pert[0] - fid[0]) * scale[0];
        const double dy = (pert[1] - fid[1]) * scale[1];
        const double dz = (pert[2] - fid[2]) * scale[2];
        const double d = std::sqrt(dx * dx + dy * dy + dz * dz);
        if (!(d > 1e-250)) break;
        log_growth.push_back(std::log(d / delta0));
        const double shrink = delta0 / d;
        pert = {fid[0] + (pert[0] - fid[0]) * shrink, fid[1] + (pert[1] - fid[1]) * shrink,
                fid[2] + (pert[2] - fid[2]) * shrink};
    }
    if (log_growth.empty()) return -std::numeric_limits<double>::infinity();
    const std::size_t discard = log_growth.size() / 10;
    double acc = 0.0;
    for (std::size_t i = discard; i < log_growth.size(); ++i) acc += log_growth[i];
    return acc / (static_cast<double>(log_growth.size() - discard) * interval_time);
}

ControlMetrics evaluate_control(const ClosedLoopResult& result) {
    ControlMetrics metrics;
    if (result.diverged || result.baseline_diverged) {
        metrics.valid = false;
        metrics.post_control_classification = classify_divergent();
        metrics.rms_error_final_quarter = std::numeric_limits<double>::quiet_NaN();
        metrics.suppression_ratio = std::numeric_limits<double>::quiet_NaN();
        return metrics;
    }
    metrics.valid = true;
    metrics.rms_error_final_quarter = final_quarter_rms(result.error_series);
    metrics.suppression_ratio = result.uncontrolled_baseline_rms == 0.0
                                    ? (metrics.rms_error_final_quarter == 0.0 ? 1.0 :
                                       std::numeric_limits<double>::infinity())
                                    : metrics.rms_error_final_quarter / result.uncontrolled_baseline_rms;

    const std::size_t n = result.trajectory.size();
    const std::size_t start = n - n / 4;
    Trajectory quarter;
    quarter.dim = 3;
    quarter.tag = SystemTag::Chua;
    quarter.times.assign(result.trajectory.times.begin() + static_cast<std::ptrdiff_t>(start),
                         result.trajectory.times.end());
    quarter.states.assign(result.trajectory.states.begin() + static_cast<std::ptrdiff_t>(start),
                          result.trajectory.states.end());

    const ResolvedObjective ref = resolve_objective(result.objective, result.base_params);
    const MLP& frozen = result.weight_snapshots.back().second;
    const auto hook = [&]() {
        return lyapunov_frozen_loop(result.base_params, result.config, ref, frozen,
                                    result.trajectory.states.back(),
                                    result.trajectory.times.back(), 4000);
    };
    metrics.post_control_classification = classify_orbit(quarter, 1e-3, 1e-3, hook);
    return metrics;
}

namespace {

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    if (n == 1) {
        v[0] = lo;
        return v;
    }
    for (int i = 0; i < n; ++i)
        v[static_cast<std::size_t>(i)] =
            lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return v;
}

SweepCell sweep_cell(const ChuaParams& base, double r, double c1,
                     const IntegratorConfig& per_cell_sim) {
    // Classification tolerances for clean simulated cells: see classify_orbit.
    constexpr double kTolFp = 1e-4;
    constexpr double kTolPeriod = 1e-3;
    const Vec3 kCellInitial{0.1, 0.0, 0.0};

    SweepCell cell;
    cell.r = r;
    cell.c1 = c1;
    ChuaParams params = base;
    params.r_coupling = r;
    params.c1 = c1;
    const ChuaSystem sys{params, 0.0};
    try {
        const Trajectory traj = simulate(sys, kCellInitial, 0.0, per_cell_sim, SystemTag::Chua);
        const LyapunovEstimate lyap = lyapunov_flow(sys, kCellInitial, per_cell_sim);
        cell.lambda = lyap.lambda;
        cell.classification = classify_orbit(traj, kTolFp, kTolPeriod, [&] { return lyap.lambda; });
    } catch (const DivergenceError&) {
        cell.classification = classify_divergent();
        cell.lambda = std::numeric_limits<double>::quiet_NaN();
    }
    return cell;
}

SweepResult sweep_impl(const ChuaParams& base, std::pair<double, double> r_range,
                       std::pair<double, double> c1_range, int n_r, int n_c1,
                       const IntegratorConfig& per_cell_sim, bool parallel) {
    if (!(r_range.first > 0.0) || !(c1_range.first > 0.0) || r_range.second < r_range.first ||
        c1_range.second < c1_range.first)
        throw DomainError("rc_sweep: ranges must be positive and ordered");
    if (n_r < 1 || n_c1 < 1)
        throw DomainError("rc_sweep: grid must be at least 1x1");
    per_cell_sim.validate();

    SweepResult result;
    result.r_values = linspace(r_range.first, r_range.second, n_r);
    result.c1_values = linspace(c1_range.first, c1_range.second, n_c1);
    result.cells.resize(static_cast<std::size_t>(n_r) * static_cast<std::size_t>(n_c1));

    const int total = n_r * n_c1;
    const auto run_cell = [&](int idx) {
        const int ri = idx / n_c1;
        const int ci = idx % n_c1;
        result.cells[static_cast<std::size_t>(idx)] =
            sweep_cell(base, result.r_values[static_cast<std::size_t>(ri)],
                       result.c1_values[static_cast<std::size_t>(ci)], per_cell_sim);
    };

    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int idx = 0; idx < total; ++idx) run_cell(idx);
    } else {
        for (int idx = 0; idx < total; ++idx) run_cell(idx);
    }
    return result;
}

}  // namespace

SweepResult rc_sweep(const ChuaParams& base, std::pair<double, double> r_range,
                     std::pair<double, double> c1_range, int n_r, int n_c1,
                     const IntegratorConfig& per_cell_sim) {
    return sweep_impl(base, r_range, c1_range, n_r, n_c1, per_cell_sim, true);
}

SweepResult rc_sweep_serial(const ChuaParams& base, std::pair<double, double> r_range,
                            std::pair<double, double> c1_range, int n_r, int n_c1,
                            const IntegratorConfig& per_cell_sim) {
    return sweep_impl(base, r_range, c1_range, n_r, n_c1, per_cell_sim, false);
}

}  // namespace chaoslab
