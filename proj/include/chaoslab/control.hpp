#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "chaoslab/analysis.hpp"
#include "chaoslab/ann.hpp"
#include "chaoslab/dynamics.hpp"
#include "chaoslab/integrate.hpp"

namespace chaoslab {

// ---------------------------------------------------------------------------
// Objectives: the tracking error is always measured on v1.
// ---------------------------------------------------------------------------

struct Setpoint {
    double v1_star = 0.0;
};
struct Sinusoid {
    double amplitude = 1.0;
    double frequency_hz = 1000.0;
};
// Index into chua_equilibria(plant): 0 = origin, 1 = +outer, 2 = -outer.
struct PlantEquilibrium {
    int index = 1;
};

using ControlObjective = std::variant<Setpoint, Sinusoid, PlantEquilibrium>;

// PlantEquilibrium resolves against the plant's equilibria once, up front.
struct ResolvedObjective {
    bool is_sinusoid = false;
    double value = 0.0;      // setpoint / resolved equilibrium v1
    double amplitude = 0.0;  // sinusoid only
    double frequency_hz = 0.0;

    double reference(double t) const;
};

ResolvedObjective resolve_objective(const ControlObjective& objective, const ChuaParams& plant);

// ---------------------------------------------------------------------------
// Controller configuration
// ---------------------------------------------------------------------------

// Affine scales mapping plant signals into roughly [-1, 1] network inputs;
// centers default to zero. Values chosen from the double-scroll attractor
// extents at the default parameters (|v1| < ~4.5 V, |v2| < ~0.9 V,
// |I| < ~4 mA).
struct ObservationScaling {
    double v1_scale = 5.0;
    double v2_scale = 1.0;
    double i_scale = 5e-3;
    double err_scale = 5.0;
    double v1_center = 0.0;
    double v2_center = 0.0;
    double i_center = 0.0;
};

struct ControllerConfig {
    std::vector<int> net_shape{4, 8, 2};
    std::int64_t control_interval = 50;  // integrator steps between ANN actions
    double learning_rate = 0.2;          // 0 freezes the controller
    double r_mult_lo = 0.5;              // R multiplier bounds
    double r_mult_hi = 2.0;
    double u_max = 1e-3;                 // [A]
    double sensitivity_eps = 1e-2;       // output-space perturbation
    std::uint64_t seed = 1;
    double dt = 1e-6;                    // [s]
    double init_range = 0.05;            // uniform(-a, a) weight init
    double divergence_bound = 1e6;
    std::int64_t snapshot_stride = 0;    // intervals between snapshots; 0 = auto
    ObservationScaling scaling;

    void validate() const;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

// Network input [v1, v2, I, v1 - reference], each affinely scaled.
std::array<double, 4> build_observation(const Vec3& state, double reference,
                                        const ObservationScaling& scaling);

// Inverse of the state part of build_observation (error is derived, not stored).
Vec3 unscale_observation(const std::array<double, 4>& obs, const ObservationScaling& scaling);

// Maps the two sigmoid outputs onto the actuators:
//   o0 -> R multiplier, two linear segments through (0, lo), (1/2, 1), (1, hi)
//         so a neutral network (o0 = 1/2) reproduces the base R exactly;
//   o1 -> u = u_max (2 o1 - 1).
// Both results are clamped to their declared bounds.
std::pair<ChuaParams, double> actuate(std::span<const double> net_output, const ChuaParams& base,
                                      const ControllerConfig& config);

// Model-based sensitivity d v1(end of interval) / d o_k: re-integrates the
// interval from `state` with each output nudged by sensitivity_eps (flipped
// to -eps at the upper saturation). A perturbed run that diverges
// contributes zero sensitivity.
std::array<double, 2> estimate_sensitivity(const Vec3& state, std::span<const double> net_output,
                                           double v1_end_nominal, const ChuaParams& base,
                                           const ControllerConfig& config);

struct ControlSample {
    double t = 0.0;
    double r_eff = 0.0;
    double u = 0.0;
    double error = 0.0;
};

struct ClosedLoopResult {
    Trajectory trajectory;  // plant state strobed at control-interval ends
    std::vector<ControlSample> control_history;
    std::vector<std::pair<std::int64_t, MLP>> weight_snapshots;  // (interval, net)
    std::vector<double> error_series;
    double uncontrolled_baseline_rms = 0.0;  // final-quarter RMS, neutral actuation
    bool baseline_diverged = false;
    bool diverged = false;
    std::int64_t diverged_step = -1;

    // inputs echoed for downstream evaluation
    ChuaParams base_params;
    ControllerConfig config;
    ControlObjective objective;
    Vec3 initial{};
};

// One control episode: per interval the ANN observes (v1, v2, I, error),
// actuates (R_eff, u), the plant integrates `control_interval` RK4 steps, and
// the weights take one SGD step against the end-of-interval tracking error
// via the model-based sensitivity. Plant divergence yields a partial result
// flagged `diverged`; non-finite weights throw TrainingDivergenceError.
ClosedLoopResult run_closed_loop(const ChuaParams& base, const Vec3& initial,
                                 const ControlObjective& objective,
                                 const ControllerConfig& config, double duration_s);

struct ControlMetrics {
    bool valid = false;
    double rms_error_final_quarter = 0.0;
    double suppression_ratio = 0.0;
    OrbitClassification post_control_classification;
};

// Final-quarter RMS error, RMS ratio against the uncontrolled baseline, and
// the classification of the final-quarter controlled trajectory (Lyapunov
// hook = Benettin on the closed loop with the final frozen weights).
ControlMetrics evaluate_control(const ClosedLoopResult& result);

// Largest Lyapunov exponent of the zero-order-hold closed loop with frozen
// weights, by two-trajectory renormalization at interval boundaries.
double lyapunov_frozen_loop(const ChuaParams& base, const ControllerConfig& config,
                            const ResolvedObjective& objective, const MLP& frozen_net,
                            const Vec3& start, double t_start, std::int64_t n_intervals,
                            double delta0 = 1e-8);

// ---------------------------------------------------------------------------
// Manual R-C sweep baseline
// ---------------------------------------------------------------------------

struct SweepCell {
    double r = 0.0;   // coupling resistance [ohm]
    double c1 = 0.0;  // [F]
    OrbitClassification classification;
    double lambda = 0.0;  // NaN for divergent cells
};

struct SweepResult {
    std::vector<double> r_values;
    std::vector<double> c1_values;
    std::vector<SweepCell> cells;  // row-major: r index outer, c1 index inner

    const SweepCell& at(std::size_t ri, std::size_t ci) const {
        return cells[ri * c1_values.size() + ci];
    }
};

// Classifies the free-running plant over an R x C1 grid: per cell simulate
// from (0.1 V, 0, 0), estimate the largest Lyapunov exponent, classify.
// Divergent cells are recorded and the sweep continues. Cells are
// independent; the parallel version farms them over OpenMP threads and fills
// the grid in row-major order, bit-identical to the serial reference.
SweepResult rc_sweep(const ChuaParams& base, std::pair<double, double> r_range,
                     std::pair<double, double> c1_range, int n_r, int n_c1,
                     const IntegratorConfig& per_cell_sim);
SweepResult rc_sweep_serial(const ChuaParams& base, std::pair<double, double> r_range,
                            std::pair<double, double> c1_range, int n_r, int n_c1,
                            const IntegratorConfig& per_cell_sim);

}  // namespace chaoslab
