#pragma once

#include <array>
#include <vector>

namespace chaoslab {

using Vec3 = std::array<double, 3>;

// ---------------------------------------------------------------------------
// Lorenz flow
//   dx/dt = sigma (y - x)
//   dy/dt = x (rho - z) - y
//   dz/dt = x y - beta z
// ---------------------------------------------------------------------------

struct LorenzParams {
    double sigma = 10.0;
    double rho = 28.0;
    double beta = 8.0 / 3.0;
};

// State components are (x, y, z); sample times live in Trajectory.
Vec3 lorenz_deriv(const Vec3& state, const LorenzParams& params);

// The three analytic fixed points for rho > 1: origin and the symmetric pair
// C+- = (+-sqrt(beta (rho - 1)), +-sqrt(beta (rho - 1)), rho - 1).
std::vector<Vec3> lorenz_fixed_points(const LorenzParams& params);

// ---------------------------------------------------------------------------
// Logistic map  x' = mu x (1 - x)  on [0, 1], 0 <= mu <= 4
// ---------------------------------------------------------------------------

struct LogisticParams {
    double mu = 3.2;
};

double logistic_step(double x, const LogisticParams& params);

// ---------------------------------------------------------------------------
// Chua circuit
//   C1 dv1/dt = (v2 - v1)/R - i_d(v1) + u
//   C2 dv2/dt = -(v2 - v1)/R + I
//   L  dI/dt  = -r I - v2
// with the three-segment odd piecewise-linear diode current
//   i_d(v) = gb v + (ga - gb)/2 (|v + bp| - |v - bp|)
// (slope ga inside |v| < bp, slope gb outside). u is an optional control
// current injected at the v1 node; u = 0 is the free-running circuit.
// ---------------------------------------------------------------------------

struct PiecewiseLinearDiode {
    double ga = -0.757e-3;  // inner slope [S]
    double gb = -0.409e-3;  // outer slope [S]
    double bp = 1.1;        // breakpoint [V]
};

struct ChuaParams {
    double c1 = 10e-9;          // [F]
    double c2 = 100e-9;         // [F]
    double l = 18e-3;           // [H]
    double r_coupling = 1800.0; // R [ohm]; chaos-verified default, see configs/
    double r_inductor = 12.0;   // r [ohm]
    PiecewiseLinearDiode diode;
};

double chua_diode_current(double v, const PiecewiseLinearDiode& diode);

// State components are (v1 [V], v2 [V], I [A]).
Vec3 chua_deriv(const Vec3& state, const ChuaParams& params, double u);

// Node-equation residuals in physical balance units (A, A, V): the rates
// multiplied by C1, C2, L. Used as the scaled measure of "this is an
// equilibrium" that is insensitive to the huge 1/C factors.
Vec3 chua_residual(const Vec3& state, const ChuaParams& params, double u);

// Origin plus the symmetric outer pair when the outer diode segment
// intersects the load line (solutions of i_d(v1) + v1/(R+r) = 0).
std::vector<Vec3> chua_equilibria(const ChuaParams& params);

void validate(const LorenzParams& params);
void validate(const LogisticParams& params);
void validate(const ChuaParams& params);

// ---------------------------------------------------------------------------
// System adapters used by the integrator and the Lyapunov machinery.
// `metric_scale` defines the per-component weights of the norm used for
// divergence guards and trajectory-separation measurements; for Chua the
// inductor current (mA scale) is weighted up so all components are
// volt-comparable.
// ---------------------------------------------------------------------------

struct LorenzSystem {
    LorenzParams params;
    Vec3 deriv(const Vec3& s) const { return lorenz_deriv(s, params); }
    static constexpr Vec3 metric_scale() { return {1.0, 1.0, 1.0}; }
};

struct ChuaSystem {
    ChuaParams params;
    double u = 0.0;
    Vec3 deriv(const Vec3& s) const { return chua_deriv(s, params, u); }
    static constexpr Vec3 metric_scale() { return {1.0, 1.0, 1000.0}; }
};

}  // namespace chaoslab
