#include "chaoslab/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "chaoslab/errors.hpp"

namespace chaoslab {

namespace {

std::vector<double> mu_grid(double mu_min, double mu_max, int n_mu) {
    if (!(mu_min >= 0.0 && mu_min < mu_max && mu_max <= 4.0))
        throw DomainError("bifurcation_scan: need 0 <= mu_min < mu_max <= 4");
    if (n_mu < 1)
        throw DomainError("bifurcation_scan: n_mu must be positive");
    std::vector<double> grid(static_cast<std::size_t>(n_mu));
    if (n_mu == 1) {
        grid[0] = mu_min;
        return grid;
    }
    for (int i = 0; i < n_mu; ++i)
        grid[static_cast<std::size_t>(i)] =
            mu_min + (mu_max - mu_min) * static_cast<double>(i) / static_cast<double>(n_mu - 1);
    return grid;
}

BifurcationDiagram scan_impl(double mu_min, double mu_max, int n_mu, std::int64_t transient,
                             std::int64_t n_samples, double x0, bool parallel) {
    if (transient < 0 || n_samples <= 0)
        throw DomainError("bifurcation_scan: counts must be positive");
    if (!(x0 >= 0.0 && x0 <= 1.0))
        throw DomainError("bifurcation_scan: x0 must lie in [0, 1]");

    BifurcationDiagram diagram;
    diagram.mu_values = mu_grid(mu_min, mu_max, n_mu);
    diagram.orbit_samples.resize(diagram.mu_values.size());

    const auto column = [&](int i) {
        const LogisticParams params{diagram.mu_values[static_cast<std::size_t>(i)]};
        diagram.orbit_samples[static_cast<std::size_t>(i)] =
            logistic_orbit(params, x0, transient, n_samples);
    };

    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int i = 0; i < n_mu; ++i) column(i);
    } else {
        for (int i = 0; i < n_mu; ++i) column(i);
    }
    return diagram;
}

}  // namespace

BifurcationDiagram bifurcation_scan(double mu_min, double mu_max, int n_mu,
                                    std::int64_t transient, std::int64_t n_samples, double x0) {
    return scan_impl(mu_min, mu_max, n_mu, transient, n_samples, x0, true);
}

BifurcationDiagram bifurcation_scan_serial(double mu_min, double mu_max, int n_mu,
                                           std::int64_t transient, std::int64_t n_samples,
                                           double x0) {
    return scan_impl(mu_min, mu_max, n_mu, transient, n_samples, x0, false);
}

int count_clusters(std::span<const double> samples, double tol) {
    if (samples.empty()) return 0;
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    int clusters = 1;
    for (std::size_t i = 1; i < sorted.size(); ++i)
        if (sorted[i] - sorted[i - 1] > tol) ++clusters;
    return clusters;
}

double locate_first_bifurcation(double mu_lo, double mu_hi, double bracket_width,
                                double x0, std::int64_t transient, std::int64_t n_samples,
                                double cluster_tol) {
    const auto clusters_at = [&](double mu) {
        const std::vector<double> orbit = logistic_orbit(LogisticParams{mu}, x0, transient, n_samples);
        return count_clusters(orbit, cluster_tol);
    };
    if (clusters_at(mu_lo) != 1)
        throw DomainError("locate_first_bifurcation: lower endpoint is not single-valued");
    if (clusters_at(mu_hi) < 2)
        throw DomainError("locate_first_bifurcation: upper endpoint has not bifurcated");
    double lo = mu_lo, hi = mu_hi;
    while (hi - lo > bracket_width) {
        const double mid = 0.5 * (lo + hi);
        if (clusters_at(mid) >= 2)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

LyapunovEstimate lyapunov_map(const LogisticParams& params, double x0,
                              std::int64_t transient, std::int64_t n) {
    validate(params);
    if (!(x0 > 0.0 && x0 < 1.0))
        throw DomainError("lyapunov_map: x0 must lie in (0, 1)");
    if (transient < 0 || n <= 0)
        throw DomainError("lyapunov_map: counts must be positive");

    double x = x0;
    for (std::int64_t i = 0; i < transient; ++i) x = logistic_step(x, params);

    LyapunovEstimate est;
    double acc = 0.0;
    const std::int64_t series_stride = std::max<std::int64_t>(1, n / 512);
    for (std::int64_t i = 0; i < n; ++i) {
        const double fprime = params.mu * (1.0 - 2.0 * x);
        if (fprime == 0.0) {
            ++est.n_skipped;  // orbit hit x = 1/2 exactly; ln|f'| undefined
        } else {
            acc += std::log(std::fabs(fprime));
            ++est.n_used;
        }
        if (est.n_used > 0 && (i + 1) % series_stride == 0)
            est.convergence_series.push_back(acc / static_cast<double>(est.n_used));
        x = logistic_step(x, params);
    }
    if (est.n_used == 0)
        throw DomainError("lyapunov_map: every term fell on the f'(x)=0 singularity");
    est.lambda = acc / static_cast<double>(est.n_used);
    if (est.convergence_series.empty() || est.convergence_series.back() != est.lambda)
        est.convergence_series.push_back(est.lambda);
    return est;
}

namespace detail {

LyapunovEstimate finalize_flow_estimate(const std::vector<double>& log_growth,
                                        int renorm_interval, double dt) {
    LyapunovEstimate est;
    if (log_growth.empty())
        return est;
    const std::size_t discard = log_growth.size() / 10;
    const double interval_time = static_cast<double>(renorm_interval) * dt;

    double acc = 0.0;
    std::int64_t used = 0;
    const std::size_t n_incl = log_growth.size() - discard;
    const std::size_t series_stride = std::max<std::size_t>(1, n_incl / 512);
    for (std::size_t i = discard; i < log_growth.size(); ++i) {
        acc += log_growth[i];
        ++used;
        if ((i - discard + 1) % series_stride == 0)
            est.convergence_series.push_back(acc / (static_cast<double>(used) * interval_time));
    }
    est.n_used = used;
    est.lambda = acc / (static_cast<double>(used) * interval_time);
    if (est.convergence_series.empty() || est.convergence_series.back() != est.lambda)
        est.convergence_series.push_back(est.lambda);
    return est;
}

}  // namespace detail

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::FixedPoint: return "fixed_point";
        case Verdict::Periodic: return "periodic";
        case Verdict::Chaotic: return "chaotic";
        case Verdict::Divergent: return "divergent";
    }
    return "unknown";
}

namespace {

// Minimal p such that states[k + p] ~= states[k] for every k in the window,
// measured per component relative to the window amplitude. Returns 0 when
// nothing matches; *best_err reports the smallest maximal mismatch seen.
int sample_near_return(const Trajectory& traj, std::size_t window, int max_period, double tol,
                       double* best_err) {
    const std::size_t n = traj.size();
    const std::size_t w = std::min(window, n);
    const std::size_t start = n - w;
    const int dim = traj.dim;

    Vec3 scale{1e-12, 1e-12, 1e-12};
    for (std::size_t i = start; i < n; ++i)
        for (int c = 0; c < dim; ++c) {
            const auto ci = static_cast<std::size_t>(c);
            scale[ci] = std::max(scale[ci], std::fabs(traj.states[i][ci]));
        }

    *best_err = std::numeric_limits<double>::infinity();
    const int p_max = std::min<int>(max_period, static_cast<int>(w) / 4);
    for (int p = 1; p <= p_max; ++p) {
        double err = 0.0;
        for (std::size_t k = start; k + static_cast<std::size_t>(p) < n; ++k) {
            for (int c = 0; c < dim; ++c) {
                const auto ci = static_cast<std::size_t>(c);
                const double diff =
                    std::fabs(traj.states[k + static_cast<std::size_t>(p)][ci] - traj.states[k][ci]) /
                    scale[ci];
                err = std::max(err, diff);
            }
            if (err >= *best_err && err >= tol) break;
        }
        *best_err = std::min(*best_err, err);
        if (err < tol) return p;
    }
    return 0;
}

// Parabola-interpolated local maxima of component 0. Interpolation removes
// the O(sample interval) phase error of taking the raw maximal sample, which
// otherwise swamps a 1e-3 match tolerance for flows.
std::vector<double> interpolated_peaks(const Trajectory& traj, std::size_t start) {
    std::vector<double> peaks;
    for (std::size_t i = std::max<std::size_t>(start, 1); i + 1 < traj.size(); ++i) {
        const double a = traj.states[i - 1][0];
        const double b = traj.states[i][0];
        const double c = traj.states[i + 1][0];
        if (a < b && b >= c) {
            const double den = a - 2.0 * b + c;
            if (den != 0.0) {
                const double delta = 0.5 * (a - c) / den;
                peaks.push_back(b - 0.25 * (a - c) * delta);
            } else {
                peaks.push_back(b);
            }
        }
    }
    return peaks;
}

int peak_near_return(const std::vector<double>& peaks, int max_period, double tol,
                     double* best_err, int* best_q) {
    *best_err = std::numeric_limits<double>::infinity();
    *best_q = 1;
    const std::size_t m = std::min<std::size_t>(peaks.size(), 48);
    if (m < 8) return 0;
    const std::size_t start = peaks.size() - m;
    double scale = 1e-12;
    for (std::size_t i = start; i < peaks.size(); ++i) scale = std::max(scale, std::fabs(peaks[i]));

    const int q_max = std::min<int>(max_period, static_cast<int>(m) / 3);
    for (int q = 1; q <= q_max; ++q) {
        double err = 0.0;
        for (std::size_t k = start; k + static_cast<std::size_t>(q) < peaks.size(); ++k)
            err = std::max(err, std::fabs(peaks[k + static_cast<std::size_t>(q)] - peaks[k]) / scale);
        if (err < *best_err) {
            *best_err = err;
            *best_q = q;
        }
        if (err < tol) return q;
    }
    return 0;
}

}  // namespace

OrbitClassification classify_divergent() {
    OrbitClassification c;
    c.verdict = Verdict::Divergent;
    return c;
}

OrbitClassification classify_orbit(const Trajectory& traj, double tol_fp, double tol_period,
                                   const std::function<double()>& lyapunov_hook) {
    if (!(tol_fp > 0.0) || !(tol_period > 0.0))
        throw DomainError("classify_orbit: tolerances must be positive");
    const std::size_t n = traj.size();
    if (n < 1000)
        throw InsufficientDataError("classify_orbit: need at least 1000 samples, got " +
                                    std::to_string(n));

    OrbitClassification result;
    ClassificationEvidence& ev = result.evidence;

    // 1. fixed point: per-component std over the final window
    const std::size_t w = std::max<std::size_t>(256, n / 4);
    const std::size_t start = n - w;
    double max_std = 0.0;
    for (int c = 0; c < traj.dim; ++c) {
        const auto ci = static_cast<std::size_t>(c);
        double mean = 0.0;
        for (std::size_t i = start; i < n; ++i) mean += traj.states[i][ci];
        mean /= static_cast<double>(w);
        double var = 0.0;
        for (std::size_t i = start; i < n; ++i) {
            const double d = traj.states[i][ci] - mean;
            var += d * d;
        }
        max_std = std::max(max_std, std::sqrt(var / static_cast<double>(w)));
    }
    ev.final_window_std = max_std;
    if (max_std < tol_fp) {
        result.verdict = Verdict::FixedPoint;
        return result;
    }

    // 2. uniformly strobed near-return (exact for maps and synthetic signals)
    ev.sample_period = sample_near_return(traj, 512, 64, tol_period, &ev.sample_period_err);
    if (ev.sample_period > 0) {
        result.verdict = Verdict::Periodic;
        result.period = ev.sample_period;
        return result;
    }

    // 3. peak-strobed near-return (sampling-phase free; flows)
    const std::vector<double> peaks = interpolated_peaks(traj, n / 2);
    ev.n_peaks = static_cast<std::int64_t>(peaks.size());
    int best_q = 1;
    ev.peak_period = peak_near_return(peaks, 16, tol_period, &ev.peak_period_err, &best_q);
    if (ev.peak_period > 0) {
        result.verdict = Verdict::Periodic;
        result.period = ev.peak_period;
        return result;
    }

    // 4. chaos certificate
    ev.lambda = lyapunov_hook ? lyapunov_hook() : 0.0;
    ev.lambda_evaluated = static_cast<bool>(lyapunov_hook);
    if (ev.lambda > 0.0) {
        result.verdict = Verdict::Chaotic;
        return result;
    }

    // 5. bounded and non-expanding but unmatched: still a (slow) approach to
    // a periodic set; report the best peak candidate and flag the fallback.
    result.verdict = Verdict::Periodic;
    result.period = std::max(1, best_q);
    ev.residual_fallback = true;
    return result;
}

std::int64_t double_scroll_metric(const Trajectory& traj, double threshold) {
    if (!(threshold > 0.0))
        throw DomainError("double_scroll_metric: threshold must be positive");
    std::int64_t transitions = 0;
    int lobe = 0;
    for (const Vec3& s : traj.states) {
        if (s[0] > threshold) {
            if (lobe == -1) ++transitions;
            lobe = 1;
        } else if (s[0] < -threshold) {
            if (lobe == 1) ++transitions;
            lobe = -1;
        }
    }
    return transitions;
}

}  // namespace chaoslab
