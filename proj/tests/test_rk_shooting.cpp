#include "tibo/bench_harness.hpp"
#include "tibo/error.hpp"
#include "tibo/periodic_extension.hpp"
#include "tibo/rk_shooting.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace tibo;

namespace {

const StateFunction kZero = [](double, double, double) { return 0.0; };
const StateFunction kOsc = [](double, double v, double) { return -v; };

double sin_error(int steps) {
    const auto r = rk4_ivp(kOsc, 0.0, 2.0, 0.0, 1.0, steps);
    double worst = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) worst = std::max(worst, std::abs(r.y[i] - std::sin(r.nodes[i])));
    return worst;
}

}  // namespace

TEST_CASE("free motion is exact") {
    const auto r = rk4_ivp(kZero, 1.0, 3.0, 2.0, -0.5, 7);
    REQUIRE(r.nodes.size() == 8);
    CHECK(r.nodes.back() == 3.0);
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
        CHECK(r.y[i] == doctest::Approx(2.0 - 0.5 * (r.nodes[i] - 1.0)).epsilon(1e-14));
        CHECK(r.yp[i] == -0.5);
    }
}

TEST_CASE("fourth order on the harmonic oscillator") {
    CHECK(sin_error(64) <= 1e-8);
    const double e1 = sin_error(16), e2 = sin_error(32), e3 = sin_error(64);
    CHECK(std::log2(e1 / e2) == doctest::Approx(4.0).epsilon(0.08));
    CHECK(std::log2(e2 / e3) == doctest::Approx(4.0).epsilon(0.08));
}

TEST_CASE("backward integration undoes forward integration") {
    const StateFunction f = [](double x, double v, double u) { return -v + 0.3 * u * std::cos(x); };
    const auto fwd = rk4_ivp(f, 0.0, 1.5, 0.7, -0.2, 200);
    const auto back = rk4_ivp(f, 1.5, 0.0, fwd.y.back(), fwd.yp.back(), 200);
    CHECK(back.step < 0.0);
    CHECK(back.y.back() == doctest::Approx(0.7).epsilon(1e-9));
    CHECK(back.yp.back() == doctest::Approx(-0.2).epsilon(1e-9));
}

TEST_CASE("dense output") {
    const auto r = rk4_ivp(kOsc, 0.0, 2.0, 0.0, 1.0, 64);
    const auto [v, u] = rk4_dense_value(kOsc, r, 0.7);
    CHECK(v == doctest::Approx(std::sin(0.7)).epsilon(1e-8));
    CHECK(u == doctest::Approx(std::cos(0.7)).epsilon(1e-8));
    const auto at_node = rk4_dense_value(kOsc, r, r.nodes[10]);
    CHECK(at_node.first == r.y[10]);
    CHECK(rk4_dense_value(kOsc, r, 2.0).first == r.y.back());
}

TEST_CASE("ivp errors") {
    CHECK_THROWS_AS(rk4_ivp(kZero, 0.0, 1.0, 0.0, 0.0, 0), ValidationError);
    const StateFunction blowup = [](double, double v, double) { return v * v * v * v; };
    CHECK_THROWS_AS(rk4_ivp(blowup, 0.0, 10.0, 10.0, 0.0, 50), NumericalError);
}

TEST_CASE("dirichlet shooting on simple problems") {
    const auto lin = shoot_dirichlet(kZero, 0.0, 1.0, 0.0, 1.0, 5.0, 16);
    REQUIRE(lin.status == ShootingStatus::converged);
    CHECK(lin.u_s == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(lin.v_s == 0.0);

    const auto osc = shoot_dirichlet(kOsc, 0.0, std::numbers::pi / 2, 0.0, 1.0, 0.3, 256);
    REQUIRE(osc.status == ShootingStatus::converged);
    CHECK(osc.u_s == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(osc.residual <= 1e-9);
}

TEST_CASE("mixed shooting") {
    BoundaryConditions ivp_rows;
    ivp_rows.d = {{{1, 0, 0, 0}, {0, 1, 0, 0}}};
    ivp_rows.alpha = 0.25;
    ivp_rows.beta = -1.5;
    const auto id = shoot_mixed(kOsc, 1.0, 3.0, ivp_rows, 9.0, 9.0, 32);
    REQUIRE(id.status == ShootingStatus::converged);
    CHECK(id.v_s == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(id.u_s == doctest::Approx(-1.5).epsilon(1e-12));

    // y = a + b x: a + 2b = alpha, a + 4b = beta on [1, 3]
    BoundaryConditions mix;
    mix.d = {{{1, 1, 0, 0}, {0, 0, 1, 1}}};
    mix.alpha = 1.0;
    mix.beta = 2.0;
    const auto r = shoot_mixed(kZero, 1.0, 3.0, mix, 0.0, 0.0, 16);
    REQUIRE(r.status == ShootingStatus::converged);
    const double b = 0.5, a = 0.0;
    CHECK(std::abs(r.u_s - b) <= 1e-10);
    CHECK(std::abs(r.v_s - (a + b)) <= 1e-10);

    BoundaryConditions singular;
    singular.d = {{{1, 0, 0, 0}, {2, 0, 0, 0}}};
    singular.beta = 1.0;
    CHECK(shoot_mixed(kZero, 1.0, 3.0, singular, 0.0, 0.0, 16).status == ShootingStatus::failed);
}

TEST_CASE("shooting reproduces the example solution to discretisation accuracy") {
    ExampleFamily fam;
    fam.theta = std::numbers::pi / 2;
    for (BcType type : {BcType::neumann, BcType::dirichlet, BcType::mix}) {
        const auto ex = build_example(fam, type);
        const auto& p = ex.problem;
        const double us = fam.base_slope(fam.s) + 0.05;
        const ShootingResult shot = type == BcType::dirichlet
                                        ? shoot_dirichlet(p.rhs, p.s, p.e, ex.bc.alpha, ex.bc.beta, us, 64)
                                        : shoot_mixed(p.rhs, p.s, p.e, ex.bc, fam.base(fam.s) + 0.05, us, 64);
        REQUIRE(shot.status == ShootingStatus::converged);
        const auto ivp = rk4_ivp(p.rhs, p.s, p.e, shot.v_s, shot.u_s, 64);
        // boundary rows hold on the discrete trajectory
        CHECK(std::abs(ex.bc.apply_row(0, ivp.y.front(), ivp.yp.front(), ivp.y.back(), ivp.yp.back()) - ex.bc.alpha) <=
              1e-9);
        CHECK(std::abs(ex.bc.apply_row(1, ivp.y.front(), ivp.yp.front(), ivp.y.back(), ivp.yp.back()) - ex.bc.beta) <=
              1e-9);
        double worst = 0.0;
        for (int i = 0; i <= 1000; ++i) {
            const double x = 1.0 + 2.0 * i / 1000.0;
            worst = std::max(worst, std::abs(rk4_dense_value(p.rhs, ivp, x).first - fam.base(x)));
        }
        CHECK(worst < 1e-5);
        if (type == BcType::dirichlet) {
            CHECK(worst > 1e-7);
            CHECK(worst < 2e-6);
        }
    }
}

TEST_CASE("initial state for the optimizer") {
    const auto g = make_grid(1.0, 3.0, 1.0, 5);
    OdeProblem zero;
    zero.rhs = kZero;
    zero.d_dv = kZero;
    zero.d_du = kZero;
    zero.s = 1.0;
    zero.e = 3.0;
    const auto calm = tibo_initial_state(extend_rhs(zero, g), g, 0.5, 0.5);
    CHECK_FALSE(calm.linear_fallback);
    REQUIRE(calm.z.size() == g.M);
    for (double v : calm.z) CHECK(v == 0.0);

    OdeProblem wild = zero;
    wild.rhs = [](double, double v, double) { return 1e3 * v * v * v; };
    const auto fb = tibo_initial_state(extend_rhs(wild, g), g, 5.0, 5.0);
    CHECK(fb.linear_fallback);
    for (double v : fb.z) CHECK(std::isfinite(v));

    CHECK_THROWS_AS(tibo_initial_state(extend_rhs(zero, g), g, 0.0, 0.0, 0), ValidationError);
}
