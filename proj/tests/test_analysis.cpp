#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "chaoslab/analysis.hpp"
#include "chaoslab/errors.hpp"
#include "chaoslab/rng.hpp"

using namespace chaoslab;

namespace {

// brute-force iteration oracle, independent of the library map path
std::vector<double> iterate_oracle(double mu, double x0, int transient, int n) {
    double x = x0;
    for (int i = 0; i < transient; ++i) x = mu * x * (1.0 - x);
    std::vector<double> out;
    for (int i = 0; i < n; ++i) {
        x = mu * x * (1.0 - x);
        out.push_back(x);
    }
    return out;
}

Trajectory synthetic_trajectory(const std::vector<double>& values) {
    Trajectory t;
    t.dim = 1;
    t.tag = SystemTag::Synthetic;
    for (std::size_t i = 0; i < values.size(); ++i) {
        t.times.push_back(static_cast<double>(i));
        t.states.push_back({values[i], 0.0, 0.0});
    }
    return t;
}

IntegratorConfig lorenz_lyap_config() {
    IntegratorConfig cfg;
    cfg.dt = 0.01;
    cfg.n_steps = 60000;
    cfg.transient_steps = 10000;
    return cfg;
}

}  // namespace

TEST_CASE("bifurcation columns reproduce the period-doubling cascade") {
    const BifurcationDiagram d = bifurcation_scan(2.8, 3.5, 8, 3000, 200, 0.1);
    REQUIRE(d.mu_values.size() == 8);
    CHECK(d.mu_values[0] == doctest::Approx(2.8));
    CHECK(d.mu_values[4] == doctest::Approx(3.2));
    CHECK(d.mu_values[7] == doctest::Approx(3.5));

    const int c28 = count_clusters(d.orbit_samples[0], 1e-3);
    const int c32 = count_clusters(d.orbit_samples[4], 1e-3);
    const int c35 = count_clusters(d.orbit_samples[7], 1e-3);
    CHECK(c28 == 1);
    CHECK(c32 == 2);
    CHECK(c35 == 4);

    // mu = 2.8 column sits on the stable fixed point
    double lo = 1.0, hi = 0.0;
    for (double x : d.orbit_samples[0]) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    CHECK(hi - lo < 1e-6);

    // cross-check the recorded samples against the independent oracle,
    // iterated at the exact grid value of mu
    const auto oracle = iterate_oracle(d.mu_values[4], 0.1, 3000, 200);
    CHECK(d.orbit_samples[4] == oracle);

    for (const auto& column : d.orbit_samples)
        for (double x : column) {
            CHECK(x >= 0.0);
            CHECK(x <= 1.0);
        }
}

TEST_CASE("bifurcation scan rejects bad ranges") {
    CHECK_THROWS_AS(bifurcation_scan(3.0, 2.0, 10, 10, 10, 0.1), DomainError);
    CHECK_THROWS_AS(bifurcation_scan(-0.5, 2.0, 10, 10, 10, 0.1), DomainError);
    CHECK_THROWS_AS(bifurcation_scan(2.0, 4.5, 10, 10, 10, 0.1), DomainError);
}

TEST_CASE("first period-doubling is located near mu = 3") {
    const double mu_star = locate_first_bifurcation(2.8, 3.2, 0.02, 0.1, 50000, 256, 1e-4);
    CHECK(std::fabs(mu_star - 3.0) <= 0.02);
}

TEST_CASE("map Lyapunov exponent: analytic checkpoints") {
    const LyapunovEstimate full = lyapunov_map({4.0}, 0.1, 1000, 200000);
    CHECK(full.lambda == doctest::Approx(std::log(2.0)).epsilon(0.01 / std::log(2.0)));
    CHECK(full.convergence_series.back() == full.lambda);

    // stable fixed point x* = 1 - 1/mu, lambda = ln|2 - mu|
    const LyapunovEstimate fp = lyapunov_map({2.5}, 0.3, 1000, 20000);
    CHECK(std::fabs(fp.lambda - std::log(0.5)) < 0.01);

    const LyapunovEstimate p2 = lyapunov_map({3.2}, 0.1, 1000, 20000);
    CHECK(p2.lambda < 0.0);
}

TEST_CASE("map Lyapunov at mu=4 converges to ln 2 from random starting points") {
    Rng rng(12345);
    for (int i = 0; i < 10; ++i) {
        const double x0 = rng.uniform(0.05, 0.95);
        const LyapunovEstimate est = lyapunov_map({4.0}, x0, 1000, 300000);
        CHECK(std::fabs(est.lambda - std::log(2.0)) < 0.01);
    }
}

TEST_CASE("map Lyapunov domain errors") {
    CHECK_THROWS_AS(lyapunov_map({4.0}, 0.0, 10, 10), DomainError);
    CHECK_THROWS_AS(lyapunov_map({4.0}, 1.0, 10, 10), DomainError);
    CHECK_THROWS_AS(lyapunov_map({4.5}, 0.5, 10, 10), DomainError);
}

TEST_CASE("flow Lyapunov exponent: classic Lorenz value") {
    const LyapunovEstimate est =
        lyapunov_flow(LorenzSystem{LorenzParams{}}, {1, 1, 1}, lorenz_lyap_config());
    CHECK(est.lambda == doctest::Approx(0.905).epsilon(0.15 / 0.905));
    CHECK(est.convergence_series.back() == est.lambda);
    CHECK(est.n_used > 0);
}

TEST_CASE("flow Lyapunov exponent is negative when the origin is globally stable") {
    LorenzParams p;
    p.rho = 0.5;
    IntegratorConfig cfg;
    cfg.dt = 0.01;
    cfg.n_steps = 30000;
    cfg.transient_steps = 2000;
    const LyapunovEstimate est = lyapunov_flow(LorenzSystem{p}, {1, 1, 1}, cfg);
    CHECK(est.lambda < 0.0);
}

TEST_CASE("flow Lyapunov estimate is robust to renorm interval and delta0") {
    const LyapunovEstimate base =
        lyapunov_flow(LorenzSystem{LorenzParams{}}, {1, 1, 1}, lorenz_lyap_config(), 10, 1e-8);
    const LyapunovEstimate half_interval =
        lyapunov_flow(LorenzSystem{LorenzParams{}}, {1, 1, 1}, lorenz_lyap_config(), 5, 1e-8);
    const LyapunovEstimate small_d =
        lyapunov_flow(LorenzSystem{LorenzParams{}}, {1, 1, 1}, lorenz_lyap_config(), 10, 1e-9);
    const LyapunovEstimate large_d =
        lyapunov_flow(LorenzSystem{LorenzParams{}}, {1, 1, 1}, lorenz_lyap_config(), 10, 1e-7);
    CHECK(std::fabs(half_interval.lambda - base.lambda) < 0.1 * std::fabs(base.lambda));
    CHECK(std::fabs(small_d.lambda - base.lambda) < 0.1 * std::fabs(base.lambda));
    CHECK(std::fabs(large_d.lambda - base.lambda) < 0.1 * std::fabs(base.lambda));
}

TEST_CASE("classify_orbit: constant trajectory is a fixed point for any tolerance") {
    const Trajectory traj = synthetic_trajectory(std::vector<double>(2000, 0.75));
    for (double tol : {1e-12, 1e-6, 1e-2}) {
        const OrbitClassification c = classify_orbit(traj, tol, 1e-3, nullptr);
        CHECK(c.verdict == Verdict::FixedPoint);
    }
}

TEST_CASE("classify_orbit: sampled sinusoid is periodic with the constructed period") {
    std::vector<double> values;
    const int period = 32;
    for (int i = 0; i < 4000; ++i)
        values.push_back(std::sin(2.0 * M_PI * static_cast<double>(i) / period));
    const OrbitClassification c =
        classify_orbit(synthetic_trajectory(values), 1e-6, 1e-3, nullptr);
    CHECK(c.verdict == Verdict::Periodic);
    CHECK(c.period == period);
}

TEST_CASE("classify_orbit: logistic period-4 orbit") {
    const auto orbit = iterate_oracle(3.5, 0.1, 4000, 2000);
    const OrbitClassification c =
        classify_orbit(synthetic_trajectory(orbit), 1e-9, 1e-3, nullptr);
    CHECK(c.verdict == Verdict::Periodic);
    CHECK(c.period == 4);
}

TEST_CASE("classify_orbit: classic Lorenz run is chaotic") {
    IntegratorConfig cfg;
    cfg.dt = 0.01;
    cfg.n_steps = 60000;
    cfg.transient_steps = 10000;
    cfg.stride = 10;
    const Trajectory traj =
        simulate(LorenzSystem{LorenzParams{}}, {1, 1, 1}, 0.0, cfg, SystemTag::Lorenz);
    const OrbitClassification c = classify_orbit(traj, 1e-6, 1e-3, [] {
        return lyapunov_flow(LorenzSystem{LorenzParams{}}, {1, 1, 1}, lorenz_lyap_config()).lambda;
    });
    CHECK(c.verdict == Verdict::Chaotic);
    CHECK(c.evidence.lambda > 0.0);
}

TEST_CASE("classify_orbit: too-short trajectory raises insufficient data") {
    const Trajectory traj = synthetic_trajectory(std::vector<double>(999, 0.0));
    CHECK_THROWS_AS(classify_orbit(traj, 1e-6, 1e-3, nullptr), InsufficientDataError);
}

TEST_CASE("double_scroll_metric on constructed signals") {
    const PiecewiseLinearDiode d;
    CHECK(double_scroll_metric(synthetic_trajectory(std::vector<double>(100, 0.0)), d.bp) == 0);

    // square wave alternating +-2 bp, 10 half-periods -> 9 transitions
    std::vector<double> square;
    for (int half = 0; half < 10; ++half)
        for (int i = 0; i < 25; ++i) square.push_back((half % 2 == 0 ? 2.0 : -2.0) * d.bp);
    CHECK(double_scroll_metric(synthetic_trajectory(square), d.bp) == 9);

    // excursions that never cross the threshold do not count
    std::vector<double> small;
    for (int i = 0; i < 200; ++i)
        small.push_back(0.5 * d.bp * std::sin(0.3 * static_cast<double>(i)));
    CHECK(double_scroll_metric(synthetic_trajectory(small), d.bp) == 0);

    CHECK_THROWS_AS(double_scroll_metric(synthetic_trajectory(square), -1.0), DomainError);
}

TEST_CASE("cluster counting") {
    const std::vector<double> one{0.5, 0.5 + 1e-9, 0.5 - 1e-9};
    CHECK(count_clusters(one, 1e-6) == 1);
    const std::vector<double> two{0.51, 0.80, 0.51, 0.80};
    CHECK(count_clusters(two, 1e-3) == 2);
    CHECK(count_clusters(std::vector<double>{}, 1e-3) == 0);
}
