#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "chaoslab/dynamics.hpp"
#include "chaoslab/errors.hpp"

namespace chaoslab {

enum class SystemTag { Lorenz, Chua, Logistic, Synthetic };

std::string to_string(SystemTag tag);

struct IntegratorConfig {
    double dt = 1e-3;
    std::int64_t n_steps = 0;
    std::int64_t transient_steps = 0;
    std::int64_t stride = 1;
    double divergence_bound = 1e6;  // on the metric-scaled max-norm

    void validate() const;
};

// Recorded samples of one run: times strictly increasing, one state per time.
// `dim` is the number of meaningful components per state (1 for map orbits).
struct Trajectory {
    std::vector<double> times;
    std::vector<Vec3> states;
    int dim = 3;
    SystemTag tag = SystemTag::Synthetic;

    std::size_t size() const { return times.size(); }
    void check_invariants() const;  // throws DomainError if violated
};

// Classical fixed-step RK4 update. `deriv` maps a state to its derivative;
// non-finite intermediate stages surface as DivergenceError from the caller's
// guard (the step itself propagates whatever `deriv` throws).
template <class DerivFn>
Vec3 rk4_step(DerivFn&& deriv, const Vec3& s, double dt) {
    const Vec3 k1 = deriv(s);
    const Vec3 k2 = deriv(Vec3{s[0] + 0.5 * dt * k1[0], s[1] + 0.5 * dt * k1[1], s[2] + 0.5 * dt * k1[2]});
    const Vec3 k3 = deriv(Vec3{s[0] + 0.5 * dt * k2[0], s[1] + 0.5 * dt * k2[1], s[2] + 0.5 * dt * k2[2]});
    const Vec3 k4 = deriv(Vec3{s[0] + dt * k3[0], s[1] + dt * k3[1], s[2] + dt * k3[2]});
    return {s[0] + dt / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            s[1] + dt / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
            s[2] + dt / 6.0 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2])};
}

inline double scaled_max_norm(const Vec3& s, const Vec3& scale) {
    return std::max({std::fabs(s[0]) * scale[0], std::fabs(s[1]) * scale[1],
                     std::fabs(s[2]) * scale[2]});
}

// Inside an integration loop a non-finite intermediate means the trajectory
// blew past representable range within one step; report it as divergence at
// that step rather than a plain domain error.
template <class DerivFn>
Vec3 guarded_rk4_step(DerivFn&& deriv, const Vec3& s, double dt, std::int64_t step) {
    try {
        return rk4_step(deriv, s, dt);
    } catch (const DomainError& e) {
        throw DivergenceError(std::string("non-finite intermediate: ") + e.what(), step);
    }
}

// Integrates `system` from `initial` at time t0, skipping the transient and
// recording every `stride`-th step afterwards. Sample times are computed as
// t0 + i*dt from the global step index, so identical inputs give bit-identical
// trajectories. Throws DivergenceError (with the step index) the moment the
// scaled state norm exceeds the bound or goes non-finite.
template <class System>
Trajectory simulate(const System& system, const Vec3& initial, double t0,
                    const IntegratorConfig& cfg, SystemTag tag) {
    cfg.validate();
    const Vec3 scale = System::metric_scale();
    if (!(scaled_max_norm(initial, scale) <= cfg.divergence_bound))
        throw DivergenceError("simulate: initial state outside divergence bound", 0);

    Trajectory traj;
    traj.tag = tag;
    const std::int64_t n_recorded = (cfg.n_steps - cfg.transient_steps) / cfg.stride;
    traj.times.reserve(static_cast<std::size_t>(n_recorded));
    traj.states.reserve(static_cast<std::size_t>(n_recorded));

    Vec3 s = initial;
    for (std::int64_t i = 1; i <= cfg.n_steps; ++i) {
        s = guarded_rk4_step([&](const Vec3& x) { return system.deriv(x); }, s, cfg.dt, i);
        const double norm = scaled_max_norm(s, scale);
        if (!std::isfinite(norm) || norm > cfg.divergence_bound)
            throw DivergenceError("simulate: trajectory diverged", i);
        if (i > cfg.transient_steps && (i - cfg.transient_steps) % cfg.stride == 0) {
            traj.times.push_back(t0 + static_cast<double>(i) * cfg.dt);
            traj.states.push_back(s);
        }
    }
    return traj;
}

// Map-orbit helper: iterates the logistic map, discarding `transient` points
// and returning the next `n` iterates.
std::vector<double> logistic_orbit(const LogisticParams& params, double x0,
                                   std::int64_t transient, std::int64_t n);

// Logistic orbits wrapped as a Trajectory (dim = 1, time = iteration index).
Trajectory logistic_trajectory(const LogisticParams& params, double x0,
                               std::int64_t transient, std::int64_t n);

}  // namespace chaoslab
