#include "chaoslab/integrate.hpp"

namespace chaoslab {

std::string to_string(SystemTag tag) {
    switch (tag) {
        case SystemTag::Lorenz: return "lorenz";
        case SystemTag::Chua: return "chua";
        case SystemTag::Logistic: return "logistic";
        case SystemTag::Synthetic: return "synthetic";
    }
    return "unknown";
}

void IntegratorConfig::validate() const {
    if (!(dt > 0.0))
        throw ConfigError("integrator: dt must be positive");
    if (transient_steps < 0 || n_steps <= transient_steps)
        throw ConfigError("integrator: need n_steps > transient_steps >= 0");
    if (stride < 1)
        throw ConfigError("integrator: stride must be >= 1");
    if (!(divergence_bound > 0.0))
        throw ConfigError("integrator: divergence_bound must be positive");
}

void Trajectory::check_invariants() const {
    if (times.size() != states.size())
        throw DomainError("trajectory: times/states length mismatch");
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (i > 0 && !(times[i] > times[i - 1]))
            throw DomainError("trajectory: times not strictly increasing");
        for (int c = 0; c < dim; ++c)
            if (!std::isfinite(states[i][static_cast<std::size_t>(c)]))
                throw DomainError("trajectory: non-finite sample");
    }
}

std::vector<double> logistic_orbit(const LogisticParams& params, double x0,
                                   std::int64_t transient, std::int64_t n) {
    if (transient < 0 || n <= 0)
        throw ConfigError("logistic_orbit: need transient >= 0 and n > 0");
    double x = x0;
    for (std::int64_t i = 0; i < transient; ++i) x = logistic_step(x, params);
    std::vector<double> orbit;
    orbit.reserve(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) {
        x = logistic_step(x, params);
        orbit.push_back(x);
    }
    return orbit;
}

Trajectory logistic_trajectory(const LogisticParams& params, double x0,
                               std::int64_t transient, std::int64_t n) {
    const std::vector<double> orbit = logistic_orbit(params, x0, transient, n);
    Trajectory traj;
    traj.dim = 1;
    traj.tag = SystemTag::Logistic;
    traj.times.reserve(orbit.size());
    traj.states.reserve(orbit.size());
    for (std::size_t i = 0; i < orbit.size(); ++i) {
        traj.times.push_back(static_cast<double>(transient + static_cast<std::int64_t>(i) + 1));
        traj.states.push_back({orbit[i], 0.0, 0.0});
    }
    return traj;
}

}  // namespace chaoslab
