#include "tibo/error.hpp"
#include "tibo/periodic_extension.hpp"

#include <doctest.h>

#include <cmath>

using namespace tibo;

namespace {

OdeProblem constant_problem(double c, double s, double e) {
    OdeProblem p;
    p.rhs = [c](double, double, double) { return c; };
    p.d_dv = [](double, double, double) { return 0.0; };
    p.d_du = [](double, double, double) { return 0.0; };
    p.s = s;
    p.e = e;
    return p;
}

}  // namespace

TEST_CASE("grid geometry for the standard interval") {
    const auto g = make_grid(1.0, 3.0, 1.0, 7);
    CHECK(g.half_period == 4.0);
    CHECK(g.M == 128);
    CHECK(g.N == 256);
    CHECK(g.m == 32);
    CHECK(g.n == 64);
    CHECK(g.lambda == doctest::Approx(1.0 / 32));
    CHECK(g.x(g.M) == 0.0);
    CHECK(g.x(g.M + g.m) == doctest::Approx(g.shifted_s()));
    CHECK(g.x(g.M + g.m + g.n) == doctest::Approx(g.shifted_e()));
    CHECK(g.shifted_s() == 1.0);
    CHECK(g.shifted_e() == 3.0);

    const auto g4 = make_grid(1.0, 3.0, 1.0, 4);
    CHECK(g4.m == 4);
    CHECK(g4.n == 8);
}

TEST_CASE("default padding keeps indices integral") {
    for (int q = 3; q <= 10; ++q) {
        const auto g = make_grid(-2.0, 5.0, default_delta(-2.0, 5.0), q);
        CHECK(g.m == g.N / 8);
        CHECK(g.n == g.N / 4);
    }
}

TEST_CASE("non-integral grid offsets are rejected") {
    // b = 3, lambda = 3/8, m = 4/3
    CHECK_THROWS_AS(make_grid(0.0, 2.0, 0.5, 3), ValidationError);
    try {
        make_grid(0.0, 2.0, 0.5, 3);
    } catch (const ValidationError& err) {
        CHECK(std::string(err.what()).find("delta") != std::string::npos);
    }
    CHECK_THROWS_AS(make_grid(3.0, 1.0, 1.0, 5), ValidationError);
    CHECK_THROWS_AS(make_grid(1.0, 3.0, 0.0, 5), ValidationError);
    CHECK_THROWS_AS(make_grid(1.0, 3.0, 1.0, 2), ValidationError);
}

TEST_CASE("cutoff values") {
    const CutoffFn h{1.0, 3.0, 1.0};
    CHECK(cutoff_value(h, 2.0) == 1.0);
    CHECK(cutoff_value(h, 1.0) == 1.0);
    CHECK(cutoff_value(h, 3.0) == 1.0);
    CHECK(cutoff_value(h, 0.0) == 0.0);
    CHECK(cutoff_value(h, 4.0) == 0.0);
    CHECK(cutoff_value(h, -5.0) == 0.0);
    CHECK(cutoff_value(h, 0.5) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(cutoff_value(h, 3.5) == doctest::Approx(0.5).epsilon(1e-15));
    for (double k : {0.5, 1.0, 2.0}) CHECK(smooth_step(0.5, k) == doctest::Approx(0.5));
}

TEST_CASE("cutoff is monotone on the transitions and bounded") {
    const CutoffFn h{1.0, 3.0, 1.0};
    double prev = 0.0;
    for (int i = 0; i <= 200; ++i) {
        const double x = static_cast<double>(i) / 200.0;
        const double v = cutoff_value(h, x);
        CHECK(v >= prev);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        prev = v;
    }
    prev = 1.0;
    for (int i = 0; i <= 200; ++i) {
        const double v = cutoff_value(h, 3.0 + static_cast<double>(i) / 200.0);
        CHECK(v <= prev);
        prev = v;
    }
}

TEST_CASE("cutoff derivatives vanish at the transition ends") {
    const CutoffFn h{1.0, 3.0, 1.0};
    for (double x : {0.0, 1.0, 3.0, 4.0}) {
        double last1 = 1e300, last2 = 1e300;
        for (double step : {1e-3, 1e-4}) {
            const double d1 = (cutoff_value(h, x + step) - cutoff_value(h, x - step)) / (2 * step);
            const double d2 =
                (cutoff_value(h, x + step) - 2 * cutoff_value(h, x) + cutoff_value(h, x - step)) / (step * step);
            CHECK(std::abs(d1) <= last1);
            CHECK(std::abs(d2) <= last2);
            last1 = std::abs(d1);
            last2 = std::abs(d2);
        }
        CHECK(last1 < 1e-12);
        CHECK(last2 < 1e-8);
    }
}

TEST_CASE("extended rhs on the shifted domain") {
    const auto g = make_grid(1.0, 3.0, 1.0, 5);
    const auto one = extend_rhs(constant_problem(1.0, 1.0, 3.0), g);
    CHECK(one.value(2.0, 0.0, 0.0) == 1.0);
    CHECK(one.value(0.0, 0.0, 0.0) == 0.0);

    OdeProblem ident = constant_problem(0.0, 1.0, 3.0);
    ident.rhs = [](double x, double, double) { return x; };
    const auto ext = extend_rhs(ident, g);
    // shifted t = 0.5 is original x = 0.5 + o = 0.5, halfway up the ramp
    CHECK(ext.value(0.5, 0.0, 0.0) == doctest::Approx(0.5 * 0.5));
    CHECK(ext.value(3.0, 0.0, 0.0) == doctest::Approx(3.0));
}

TEST_CASE("rhs is not evaluated outside the cutoff support") {
    const auto g = make_grid(1.0, 3.0, 1.0, 5);
    int calls = 0;
    OdeProblem p = constant_problem(0.0, 1.0, 3.0);
    p.rhs = [&calls](double, double, double) {
        ++calls;
        return std::nan("");
    };
    const auto ext = extend_rhs(p, g);
    const auto vals = ext.evaluate(0.0, 1e300, 1e300);
    CHECK(vals.value == 0.0);
    CHECK(vals.d_dv == 0.0);
    CHECK(vals.d_du == 0.0);
    CHECK(calls == 0);
    CHECK(std::isnan(ext.value(3.9, 0.0, 0.0)));  // NaN inside support
    CHECK(calls == 1);
}
