#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "chaoslab/dynamics.hpp"
#include "chaoslab/integrate.hpp"

namespace chaoslab {

// ---------------------------------------------------------------------------
// Logistic-map bifurcation diagram
// ---------------------------------------------------------------------------

struct BifurcationDiagram {
    std::vector<double> mu_values;                 // strictly increasing grid
    std::vector<std::vector<double>> orbit_samples;  // one column per mu
};

// Per-mu columns are independent; the parallel version distributes them over
// OpenMP threads and assembles results in grid order, so its output is
// bit-identical to the serial reference.
BifurcationDiagram bifurcation_scan(double mu_min, double mu_max, int n_mu,
                                    std::int64_t transient, std::int64_t n_samples, double x0);
BifurcationDiagram bifurcation_scan_serial(double mu_min, double mu_max, int n_mu,
                                           std::int64_t transient, std::int64_t n_samples,
                                           double x0);

// Number of distinct orbit values: sorts a copy and splits at gaps > tol.
int count_clusters(std::span<const double> samples, double tol);

// Bisects the mu grid between a 1-cluster and a >=2-cluster point until the
// first period-doubling is bracketed within `bracket_width`; returns the
// bracket midpoint.
double locate_first_bifurcation(double mu_lo, double mu_hi, double bracket_width,
                                double x0, std::int64_t transient, std::int64_t n_samples,
                                double cluster_tol);

// ---------------------------------------------------------------------------
// Largest Lyapunov exponent
// ---------------------------------------------------------------------------

struct LyapunovEstimate {
    double lambda = 0.0;         // per unit time (flows) / per iteration (maps)
    std::int64_t n_used = 0;     // averaged samples after the discard window
    std::vector<double> convergence_series;  // running estimates; ends at lambda
    std::int64_t n_skipped = 0;  // map terms skipped at f'(x) = 0
    bool collapsed = false;      // flow separation underflowed to zero
};

// Orbit average of ln|mu(1 - 2x)| over the post-transient logistic orbit.
LyapunovEstimate lyapunov_map(const LogisticParams& params, double x0,
                              std::int64_t transient, std::int64_t n);

namespace detail {
LyapunovEstimate finalize_flow_estimate(const std::vector<double>& log_growth,
                                        int renorm_interval, double dt);
}

// Benettin two-trajectory estimator: evolve a fiducial and a perturbed copy,
// renormalize their scaled separation to delta0 every `renorm_interval`
// steps, and average the log growth rates. The first 10% of the renorm events
// are discarded from the average as estimator transient. Fiducial divergence
// throws DivergenceError; separation underflow stops accumulation early and
// marks the estimate `collapsed`.
template <class System>
LyapunovEstimate lyapunov_flow(const System& system, const Vec3& state0,
                               const IntegratorConfig& cfg, int renorm_interval = 10,
                               double delta0 = 1e-8) {
    cfg.validate();
    if (!(delta0 > 0.0))
        throw ConfigError("lyapunov_flow: delta0 must be positive");
    if (renorm_interval < 1)
        throw ConfigError("lyapunov_flow: renorm_interval must be >= 1");

    const Vec3 scale = System::metric_scale();
    const auto deriv = [&](const Vec3& x) { return system.deriv(x); };

    Vec3 fid = state0;
    for (std::int64_t i = 1; i <= cfg.transient_steps; ++i) {
        fid = guarded_rk4_step(deriv, fid, cfg.dt, i);
        const double norm = scaled_max_norm(fid, scale);
        if (!std::isfinite(norm) || norm > cfg.divergence_bound)
            throw DivergenceError("lyapunov_flow: fiducial diverged in transient", i);
    }

    Vec3 pert = fid;
    pert[0] += delta0 / scale[0];

    const std::int64_t n_events = (cfg.n_steps - cfg.transient_steps) / renorm_interval;
    std::vector<double> log_growth;
    log_growth.reserve(static_cast<std::size_t>(n_events));
    bool collapsed = false;

    for (std::int64_t ev = 0; ev < n_events; ++ev) {
        for (int k = 0; k < renorm_interval; ++k) {
            const std::int64_t step = cfg.transient_steps + ev * renorm_interval + k + 1;
            fid = guarded_rk4_step(deriv, fid, cfg.dt, step);
            pert = guarded_rk4_step(deriv, pert, cfg.dt, step);
        }
        const double norm = scaled_max_norm(fid, scale);
        if (!std::isfinite(norm) || norm > cfg.divergence_bound)
            throw DivergenceError("lyapunov_flow: fiducial diverged",
                                  cfg.transient_steps + (ev + 1) * renorm_interval);
        const double dx = (pert[0] - fid[0]) * scale[0];
        const double dy = (pert[1] - fid[1]) * scale[1];
        const double dz = (pert[2] - fid[2]) * scale[2];
        const double d = std::sqrt(dx * dx + dy * dy + dz * dz);
        if (!(d > 1e-250)) {  // both orbits merged (strongly contracting flow)
            collapsed = true;
            break;
        }
        log_growth.push_back(std::log(d / delta0));
        const double shrink = delta0 / d;
        pert = {fid[0] + (pert[0] - fid[0]) * shrink,
                fid[1] + (pert[1] - fid[1]) * shrink,
                fid[2] + (pert[2] - fid[2]) * shrink};
    }

    LyapunovEstimate est = detail::finalize_flow_estimate(log_growth, renorm_interval, cfg.dt);
    est.collapsed = collapsed;
    return est;
}

// ---------------------------------------------------------------------------
// Orbit classification
// ---------------------------------------------------------------------------

enum class Verdict { FixedPoint, Periodic, Chaotic, Divergent };

std::string to_string(Verdict v);

struct ClassificationEvidence {
    double final_window_std = 0.0;
    int sample_period = 0;        // near-return period in samples (0 = none)
    double sample_period_err = 0.0;
    int peak_period = 0;          // near-return period in strobe peaks (0 = none)
    double peak_period_err = 0.0;
    std::int64_t n_peaks = 0;
    double lambda = 0.0;
    bool lambda_evaluated = false;
    bool residual_fallback = false;  // bounded, non-chaotic, but no clean match
};

struct OrbitClassification {
    Verdict verdict = Verdict::FixedPoint;
    std::int64_t period = 0;  // >= 1 when Periodic
    ClassificationEvidence evidence;
};

// Cascade (on a completed, post-transient trajectory of >= 1000 samples):
//  1. FixedPoint when the final-window per-component standard deviation is
//     below tol_fp.
//  2. Periodic{p} when uniformly strobed samples near-return with minimal
//     period p <= 64 samples at relative tolerance tol_period.
//  3. Periodic{q} when the component-0 peak sequence (parabola-interpolated
//     local maxima, a sampling-phase-free strobe for flows) near-returns with
//     minimal period q.
//  4. Chaotic when the Lyapunov estimate from `lyapunov_hook` is positive.
//  5. Otherwise the orbit is bounded and contracting but unmatched; it is
//     reported Periodic with the best peak candidate and
//     evidence.residual_fallback set.
// Divergent runs never reach this function: callers translate an aborted
// producing run via classify_divergent().
OrbitClassification classify_orbit(const Trajectory& traj, double tol_fp, double tol_period,
                                   const std::function<double()>& lyapunov_hook);

OrbitClassification classify_divergent();

// Counts alternations of component 0 between excursions beyond +threshold and
// beyond -threshold (double-scroll lobe switches for a Chua trajectory).
std::int64_t double_scroll_metric(const Trajectory& traj, double threshold);

}  // namespace chaoslab
