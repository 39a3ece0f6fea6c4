// Compares the OpenMP kernels against their serial reference implementations:
// wall time, speedup, and a bit-identity check of the results.

#include <chrono>
#include <cmath>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "chaoslab/analysis.hpp"
#include "chaoslab/control.hpp"

using namespace chaoslab;

namespace {

double now_seconds() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

bool same_diagram(const BifurcationDiagram& a, const BifurcationDiagram& b) {
    if (a.mu_values != b.mu_values || a.orbit_samples.size() != b.orbit_samples.size())
        return false;
    for (std::size_t i = 0; i < a.orbit_samples.size(); ++i)
        if (a.orbit_samples[i] != b.orbit_samples[i]) return false;
    return true;
}

bool same_sweep(const SweepResult& a, const SweepResult& b) {
    if (a.r_values != b.r_values || a.c1_values != b.c1_values ||
        a.cells.size() != b.cells.size())
        return false;
    for (std::size_t i = 0; i < a.cells.size(); ++i) {
        const SweepCell& x = a.cells[i];
        const SweepCell& y = b.cells[i];
        const bool lambda_same =
            (std::isnan(x.lambda) && std::isnan(y.lambda)) || x.lambda == y.lambda;
        if (x.classification.verdict != y.classification.verdict ||
            x.classification.period != y.classification.period || !lambda_same)
            return false;
    }
    return true;
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads = %d\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP; parallel kernels run serially\n");
#endif

    {
        std::printf("\nbifurcation_scan: 1200 mu columns, 20000 transient + 400 samples each\n");
        const double t0 = now_seconds();
        const BifurcationDiagram serial = bifurcation_scan_serial(2.5, 4.0, 1200, 20000, 400, 0.1);
        const double t1 = now_seconds();
        const BifurcationDiagram parallel = bifurcation_scan(2.5, 4.0, 1200, 20000, 400, 0.1);
        const double t2 = now_seconds();
        std::printf("  serial   %.3f s\n", t1 - t0);
        std::printf("  parallel %.3f s  (speedup %.2fx)\n", t2 - t1, (t1 - t0) / (t2 - t1));
        std::printf("  bit-identical: %s\n", same_diagram(serial, parallel) ? "yes" : "NO");
    }

    {
        std::printf("\nrc_sweep: 6x6 grid, 0.4 s simulated per cell\n");
        IntegratorConfig cfg;
        cfg.dt = 1e-6;
        cfg.n_steps = 400000;
        cfg.transient_steps = 300000;
        cfg.stride = 1;
        const ChuaParams base;
        const double t0 = now_seconds();
        const SweepResult serial = rc_sweep_serial(base, {1500.0, 2100.0}, {7e-9, 13e-9}, 6, 6, cfg);
        const double t1 = now_seconds();
        const SweepResult parallel = rc_sweep(base, {1500.0, 2100.0}, {7e-9, 13e-9}, 6, 6, cfg);
        const double t2 = now_seconds();
        std::printf("  serial   %.3f s\n", t1 - t0);
        std::printf("  parallel %.3f s  (speedup %.2fx)\n", t2 - t1, (t1 - t0) / (t2 - t1));
        std::printf("  bit-identical: %s\n", same_sweep(serial, parallel) ? "yes" : "NO");
    }
    return 0;
}
