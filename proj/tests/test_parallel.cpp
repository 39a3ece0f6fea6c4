// The OpenMP kernels must agree bit for bit with their serial reference
// implementations regardless of thread count or scheduling.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "chaoslab/analysis.hpp"
#include "chaoslab/control.hpp"

using namespace chaoslab;

TEST_CASE("bifurcation_scan: parallel output is bit-identical to the serial reference") {
    const BifurcationDiagram serial = bifurcation_scan_serial(2.5, 4.0, 160, 2000, 80, 0.1);
    const BifurcationDiagram parallel = bifurcation_scan(2.5, 4.0, 160, 2000, 80, 0.1);
    REQUIRE(serial.mu_values.size() == parallel.mu_values.size());
    CHECK(serial.mu_values == parallel.mu_values);
    REQUIRE(serial.orbit_samples.size() == parallel.orbit_samples.size());
    for (std::size_t i = 0; i < serial.orbit_samples.size(); ++i)
        CHECK(serial.orbit_samples[i] == parallel.orbit_samples[i]);
}

TEST_CASE("rc_sweep: parallel grid is bit-identical to the serial reference") {
    IntegratorConfig cfg;
    cfg.dt = 1e-6;
    cfg.n_steps = 150000;
    cfg.transient_steps = 100000;
    const ChuaParams base;

    const SweepResult serial = rc_sweep_serial(base, {1600.0, 2000.0}, {8e-9, 12e-9}, 3, 3, cfg);
    const SweepResult parallel = rc_sweep(base, {1600.0, 2000.0}, {8e-9, 12e-9}, 3, 3, cfg);

    CHECK(serial.r_values == parallel.r_values);
    CHECK(serial.c1_values == parallel.c1_values);
    REQUIRE(serial.cells.size() == parallel.cells.size());
    for (std::size_t i = 0; i < serial.cells.size(); ++i) {
        const SweepCell& a = serial.cells[i];
        const SweepCell& b = parallel.cells[i];
        CHECK(a.r == b.r);
        CHECK(a.c1 == b.c1);
        CHECK(a.classification.verdict == b.classification.verdict);
        CHECK(a.classification.period == b.classification.period);
        if (std::isnan(a.lambda))
            CHECK(std::isnan(b.lambda));
        else
            CHECK(a.lambda == b.lambda);
    }
}

TEST_CASE("repeated parallel runs are stable") {
    const BifurcationDiagram a = bifurcation_scan(3.4, 4.0, 60, 1000, 50, 0.2);
    const BifurcationDiagram b = bifurcation_scan(3.4, 4.0, 60, 1000, 50, 0.2);
    for (std::size_t i = 0; i < a.orbit_samples.size(); ++i)
        CHECK(a.orbit_samples[i] == b.orbit_samples[i]);
}
