#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "chaoslab/dynamics.hpp"
#include "chaoslab/errors.hpp"
#include "chaoslab/rng.hpp"

using namespace chaoslab;

namespace {

// Independent bisection root-finder for the equilibrium condition
// i_d(v) + v/(R+r) = 0 on the outer diode segment.
double bisect_equilibrium(const ChuaParams& p, double lo, double hi) {
    const auto f = [&](double v) {
        return chua_diode_current(v, p.diode) + v / (p.r_coupling + p.r_inductor);
    };
    REQUIRE(f(lo) * f(hi) < 0.0);
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (f(lo) * f(mid) <= 0.0)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

double scaled_residual_norm(const Vec3& state, const ChuaParams& p) {
    const Vec3 r = chua_residual(state, p, 0.0);
    return std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
}

}  // namespace

TEST_CASE("lorenz derivative at the origin and at hand-evaluated points") {
    const LorenzParams p;
    const Vec3 zero = lorenz_deriv({0, 0, 0}, p);
    CHECK(zero[0] == 0.0);
    CHECK(zero[1] == 0.0);
    CHECK(zero[2] == 0.0);

    const Vec3 d = lorenz_deriv({1, 1, 1}, p);
    CHECK(d[0] == doctest::Approx(0.0));
    CHECK(d[1] == doctest::Approx(26.0));
    CHECK(d[2] == doctest::Approx(-5.0 / 3.0));
}

TEST_CASE("lorenz vector field vanishes at the analytic fixed points") {
    for (const LorenzParams p : {LorenzParams{}, LorenzParams{16.0, 45.6, 4.0}}) {
        const auto fps = lorenz_fixed_points(p);
        REQUIRE(fps.size() == 3);
        for (const Vec3& fp : fps) {
            const Vec3 d = lorenz_deriv(fp, p);
            for (double c : d) CHECK(std::fabs(c) < 1e-12);
        }
    }
    // contracting regime: only the origin
    CHECK(lorenz_fixed_points(LorenzParams{10.0, 0.5, 8.0 / 3.0}).size() == 1);
}

TEST_CASE("lorenz derivative rejects non-finite input") {
    CHECK_THROWS_AS(lorenz_deriv({std::nan(""), 0, 0}, LorenzParams{}), DomainError);
}

TEST_CASE("logistic step fixed point, hand value, and domain errors") {
    CHECK(logistic_step(0.5, {2.0}) == doctest::Approx(0.5));
    CHECK(logistic_step(0.3, {4.0}) == doctest::Approx(0.84));
    CHECK_THROWS_AS(logistic_step(-0.1, {2.0}), DomainError);
    CHECK_THROWS_AS(logistic_step(1.1, {2.0}), DomainError);
    CHECK_THROWS_AS(logistic_step(0.5, {4.5}), DomainError);
    CHECK_THROWS_AS(logistic_step(0.5, {-0.1}), DomainError);
}

TEST_CASE("logistic map keeps [0,1] invariant for all mu in [0,4]") {
    Rng rng(7);
    for (int i = 0; i < 2000; ++i) {
        const double mu = rng.uniform(0.0, 4.0);
        const double x = rng.uniform01();
        const double y = logistic_step(x, {mu});
        CHECK(y >= 0.0);
        CHECK(y <= 1.0);
    }
}

TEST_CASE("logistic mu=3.2 orbit settles on the analytic period-2 cycle") {
    // brute-force iteration oracle, independent of the library path
    const double mu = 3.2;
    double x = 0.1;
    for (int i = 0; i < 10000; ++i) x = mu * x * (1.0 - x);
    // analytic 2-cycle: roots of f(f(x)) = x besides the fixed points
    const double disc = std::sqrt((mu + 1.0) * (mu - 3.0));
    const double hi = (mu + 1.0 + disc) / (2.0 * mu);
    const double lo = (mu + 1.0 - disc) / (2.0 * mu);
    CHECK(hi == doctest::Approx(0.7995).epsilon(1e-3));
    CHECK(lo == doctest::Approx(0.5130).epsilon(1e-3));

    const double a = x;
    const double b = logistic_step(a, {mu});
    const double c = logistic_step(b, {mu});
    CHECK(std::fabs(a - c) < 1e-9);  // period 2
    CHECK(std::min(a, b) == doctest::Approx(lo).epsilon(1e-6));
    CHECK(std::max(a, b) == doctest::Approx(hi).epsilon(1e-6));
}

TEST_CASE("chua diode current piecewise values and odd symmetry") {
    const PiecewiseLinearDiode d;
    CHECK(chua_diode_current(0.0, d) == 0.0);
    CHECK(chua_diode_current(d.bp, d) == doctest::Approx(d.ga * d.bp));
    CHECK(chua_diode_current(2.0 * d.bp, d) ==
          doctest::Approx(2.0 * d.gb * d.bp + (d.ga - d.gb) * d.bp));

    Rng rng(3);
    for (int i = 0; i < 500; ++i) {
        const double v = rng.uniform(-10.0, 10.0);
        CHECK(chua_diode_current(-v, d) ==
              doctest::Approx(-chua_diode_current(v, d)).epsilon(1e-12));
    }
}

TEST_CASE("chua diode slopes are ga inside and gb outside the breakpoint") {
    const PiecewiseLinearDiode d;
    const double h = 1e-4;
    const auto slope = [&](double v) {
        return (chua_diode_current(v + h, d) - chua_diode_current(v - h, d)) / (2.0 * h);
    };
    CHECK(slope(0.0) == doctest::Approx(d.ga).epsilon(1e-9));
    CHECK(slope(0.5 * d.bp) == doctest::Approx(d.ga).epsilon(1e-9));
    CHECK(slope(2.0 * d.bp) == doctest::Approx(d.gb).epsilon(1e-9));
    CHECK(slope(-3.0 * d.bp) == doctest::Approx(d.gb).epsilon(1e-9));
    // continuity across the breakpoint
    CHECK(chua_diode_current(d.bp + 1e-12, d) ==
          doctest::Approx(chua_diode_current(d.bp - 1e-12, d)).epsilon(1e-9));
}

TEST_CASE("chua derivative at the origin and a hand-evaluated state") {
    const ChuaParams p;
    const Vec3 zero = chua_deriv({0, 0, 0}, p, 0.0);
    CHECK(zero[0] == 0.0);
    CHECK(zero[1] == 0.0);
    CHECK(zero[2] == 0.0);

    const Vec3 d = chua_deriv({0, 1, 0}, p, 0.0);
    CHECK(d[0] == doctest::Approx(1.0 / (p.r_coupling * p.c1)));
    CHECK(d[1] == doctest::Approx(-1.0 / (p.r_coupling * p.c2)));
    CHECK(d[2] == doctest::Approx(-1.0 / p.l));

    CHECK_THROWS_AS(chua_deriv({0, 0, 0}, p, std::nan("")), DomainError);
}

TEST_CASE("chua vector field is odd at u = 0") {
    const ChuaParams p;
    Rng rng(11);
    for (int i = 0; i < 500; ++i) {
        const Vec3 s{rng.uniform(-5, 5), rng.uniform(-1, 1), rng.uniform(-5e-3, 5e-3)};
        const Vec3 d = chua_deriv(s, p, 0.0);
        const Vec3 dm = chua_deriv({-s[0], -s[1], -s[2]}, p, 0.0);
        for (int c = 0; c < 3; ++c)
            CHECK(dm[static_cast<std::size_t>(c)] ==
                  doctest::Approx(-d[static_cast<std::size_t>(c)]).epsilon(1e-12));
    }
}

TEST_CASE("chua equilibria: origin, symmetric pair, bisection oracle, residuals") {
    const ChuaParams p;
    const auto eqs = chua_equilibria(p);
    REQUIRE(eqs.size() == 3);
    CHECK(eqs[0][0] == 0.0);
    CHECK(eqs[0][1] == 0.0);
    CHECK(eqs[0][2] == 0.0);

    // symmetric pair
    CHECK(eqs[1][0] == doctest::Approx(-eqs[2][0]));
    CHECK(eqs[1][1] == doctest::Approx(-eqs[2][1]));
    CHECK(eqs[1][2] == doctest::Approx(-eqs[2][2]));
    CHECK(eqs[1][0] > p.diode.bp);

    // independent root-finding oracle for v1*
    const double v_oracle = bisect_equilibrium(p, p.diode.bp, 100.0);
    CHECK(eqs[1][0] == doctest::Approx(v_oracle).epsilon(1e-9));

    for (const Vec3& eq : eqs) CHECK(scaled_residual_norm(eq, p) < 1e-12);
}

TEST_CASE("chua equilibria: pair disappears when the load line misses the outer segment") {
    ChuaParams p;
    p.r_coupling = 18000.0;  // gb + 1/(R + r) < 0: no outer intersection
    CHECK(chua_equilibria(p).size() == 1);
}

TEST_CASE("parameter validation") {
    ChuaParams p;
    p.c1 = -1e-9;
    CHECK_THROWS_AS(validate(p), DomainError);
    LorenzParams lp;
    lp.beta = 0.0;
    CHECK_THROWS_AS(validate(lp), DomainError);
}
