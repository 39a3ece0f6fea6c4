#include "chaoslab/dynamics.hpp"

#include <cmath>

#include "chaoslab/errors.hpp"

namespace chaoslab {

namespace {

bool all_finite(const Vec3& v) {
    return std::isfinite(v[0]) && std::isfinite(v[1]) && std::isfinite(v[2]);
}

}  // namespace

void validate(const LorenzParams& p) {
    if (!std::isfinite(p.sigma) || !std::isfinite(p.rho) || !std::isfinite(p.beta))
        throw DomainError("Lorenz parameters must be finite");
    if (p.beta <= 0.0)
        throw DomainError("Lorenz beta must be positive");
}

void validate(const LogisticParams& p) {
    if (!(p.mu >= 0.0 && p.mu <= 4.0))
        throw DomainError("logistic mu must lie in [0, 4]");
}

void validate(const ChuaParams& p) {
    if (!(p.c1 > 0.0) || !(p.c2 > 0.0) || !(p.l > 0.0) || !(p.r_coupling > 0.0))
        throw DomainError("Chua C1, C2, L, R must be positive");
    if (!(p.r_inductor >= 0.0))
        throw DomainError("Chua inductor resistance must be non-negative");
    if (!(p.diode.bp > 0.0))
        throw DomainError("Chua diode breakpoint must be positive");
}

Vec3 lorenz_deriv(const Vec3& s, const LorenzParams& p) {
    if (!all_finite(s))
        throw DomainError("lorenz_deriv: non-finite state");
    const double x = s[0], y = s[1], z = s[2];
    return {p.sigma * (y - x), x * (p.rho - z) - y, x * y - p.beta * z};
}

std::vector<Vec3> lorenz_fixed_points(const LorenzParams& p) {
    std::vector<Vec3> fps;
    fps.push_back({0.0, 0.0, 0.0});
    if (p.rho > 1.0) {
        const double s = std::sqrt(p.beta * (p.rho - 1.0));
        fps.push_back({s, s, p.rho - 1.0});
        fps.push_back({-s, -s, p.rho - 1.0});
    }
    return fps;
}

double logistic_step(double x, const LogisticParams& p) {
    validate(p);
    if (!(x >= 0.0 && x <= 1.0))
        throw DomainError("logistic_step: x must lie in [0, 1]");
    return p.mu * x * (1.0 - x);
}

double chua_diode_current(double v, const PiecewiseLinearDiode& d) {
    if (!std::isfinite(v))
        throw DomainError("chua_diode_current: non-finite voltage");
    return d.gb * v + 0.5 * (d.ga - d.gb) * (std::fabs(v + d.bp) - std::fabs(v - d.bp));
}

Vec3 chua_deriv(const Vec3& s, const ChuaParams& p, double u) {
    if (!all_finite(s) || !std::isfinite(u))
        throw DomainError("chua_deriv: non-finite input");
    const double v1 = s[0], v2 = s[1], il = s[2];
    const double i_r = (v2 - v1) / p.r_coupling;
    const double i_d = chua_diode_current(v1, p.diode);
    return {(i_r - i_d + u) / p.c1,
            (-i_r + il) / p.c2,
            (-p.r_inductor * il - v2) / p.l};
}

Vec3 chua_residual(const Vec3& s, const ChuaParams& p, double u) {
    const double v1 = s[0], v2 = s[1], il = s[2];
    const double i_r = (v2 - v1) / p.r_coupling;
    return {i_r - chua_diode_current(v1, p.diode) + u,
            -i_r + il,
            -p.r_inductor * il - v2};
}

std::vector<Vec3> chua_equilibria(const ChuaParams& p) {
    validate(p);
    std::vector<Vec3> eqs;
    eqs.push_back({0.0, 0.0, 0.0});

    // Equilibrium conditions: I = (v2 - v1)/R, v2 = -r I, and the v1 node
    // balance, which combine to i_d(v1) + v1/(R + r) = 0. On the outer
    // segment (|v1| > bp) this is linear in v1.
    const double g_load = 1.0 / (p.r_coupling + p.r_inductor);
    const double denom = p.diode.gb + g_load;
    if (denom > 0.0) {
        const double v1 = (p.diode.gb - p.diode.ga) * p.diode.bp / denom;
        if (v1 > p.diode.bp) {
            const double il = -v1 * g_load;
            const double v2 = -p.r_inductor * il;
            eqs.push_back({v1, v2, il});
            eqs.push_back({-v1, -v2, -il});
        }
    }
    return eqs;
}

}  // namespace chaoslab
