#include "tibo/bench_harness.hpp"
#include "tibo/config.hpp"
#include "tibo/error.hpp"
#include "tibo/report.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace tibo;

namespace {

constexpr double kHalfPi = std::numbers::pi / 2;

HarnessOptions quick() {
    HarnessOptions o;
    o.q = 5;
    o.eval_q = 7;
    o.workers = 1;
    return o;
}

}  // namespace

TEST_CASE("the known solution satisfies the example equation") {
    for (double theta : {kHalfPi, 3 * kHalfPi}) {
        ExampleFamily fam;
        fam.theta = theta;
        const auto ex = build_example(fam, BcType::mix);
        for (int i = 0; i < 100; ++i) {
            const double x = 1.0 + 2.0 * i / 99.0;
            // second derivative by finite differences of the closed form
            const double h = 1e-4;
            const double ypp = (fam.base(x + h) - 2 * fam.base(x) + fam.base(x - h)) / (h * h);
            CHECK(std::abs(ypp - fam.base_curvature(x)) < 1e-5);
            const double r = fam.base_curvature(x) - ex.problem.rhs(x, fam.base(x), fam.base_slope(x));
            CHECK(std::abs(r) <= 1e-10);
        }
    }
}

TEST_CASE("boundary targets of the example") {
    ExampleFamily fam;
    fam.theta = kHalfPi;
    // y_b(1) = cos(pi/2) = 0
    CHECK(std::abs(build_example(fam, BcType::neumann).bc.alpha) < 1e-15);
    // y_b(3) = 3 cos(3 pi / 2) = 0
    const auto dir = build_example(fam, BcType::dirichlet);
    CHECK(std::abs(dir.bc.alpha) < 1e-15);
    CHECK(std::abs(dir.bc.beta) < 1e-15);
    const auto rows = boundary_rows(BcType::mix);
    CHECK(rows[0] == std::array<double, 4>{1, 1, 0, 0});
    CHECK(rows[1] == std::array<double, 4>{0, 0, 1, 1});
}

TEST_CASE("scenario table") {
    ExampleFamily fam;
    fam.theta = kHalfPi;
    const double vs = fam.base(1.0), us = fam.base_slope(1.0);
    const auto mix = make_scenarios(BcType::mix, kHalfPi);
    REQUIRE(mix.size() == 25);
    for (std::size_t i = 0; i < 25; ++i) CHECK(mix[i].id == static_cast<int>(i + 1));
    CHECK(mix[15].init_vs == doctest::Approx(vs + 3 * 0.41));
    CHECK(mix[15].init_us == doctest::Approx(us + 3 * 0.31));
    CHECK(mix[2].init_vs == doctest::Approx(vs - 0.40));
    CHECK(mix[2].init_us == doctest::Approx(us + 0.13));
    CHECK(mix[24].init_us == doctest::Approx(us - 3 * 0.46));
    for (const auto& sc : make_scenarios(BcType::dirichlet, kHalfPi)) CHECK(sc.init_vs == vs);
}

TEST_CASE("classification") {
    CHECK(classify(1e-6, 1e-6) == RunStatus::to_yb);
    CHECK(classify(1e-6, 0.3) == RunStatus::to_ys);
    CHECK(classify(1e-2, 0.0) == RunStatus::diverge);
    CHECK(classify(std::nan(""), 0.0) == RunStatus::diverge);
    CHECK(classify(1e-4, 1e-4) == RunStatus::to_yb);
    CHECK(parse_bc_type("dirichlet") == BcType::dirichlet);
    CHECK_THROWS_AS(parse_bc_type("robin"), ValidationError);
}

TEST_CASE("first group reaches the known solution for every row type") {
    auto opts = quick();
    opts.q = 7;
    opts.eval_q = 8;
    for (BcType type : {BcType::neumann, BcType::dirichlet, BcType::mix}) {
        // the first Dirichlet guess lands on the other solution
        const auto spec = make_scenarios(type, kHalfPi)[type == BcType::dirichlet ? 1 : 0];
        const auto rep = run_scenario(spec, opts);
        CHECK_FALSE(rep.crashed);
        CHECK(rep.status == RunStatus::to_yb);
        CHECK(rep.max_dev_base <= 1e-7);
        CHECK(rep.max_resid <= 1e-6);
        CHECK(rep.curve.x.size() == (std::size_t{1} << opts.eval_q));
    }
}

TEST_CASE("batch runs are deterministic and ordered") {
    auto specs = make_scenarios(BcType::neumann, kHalfPi);
    specs.resize(4);
    std::swap(specs[0], specs[3]);
    auto opts = quick();
    opts.workers = 2;
    const auto a = run_batch(specs, opts);
    const auto b = run_batch(specs, opts);
    REQUIRE(a.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(a[i].id == static_cast<int>(i + 1));
        CHECK(a[i].max_dev_base == b[i].max_dev_base);
        CHECK(a[i].iterations == b[i].iterations);
    }
}

TEST_CASE("report output") {
    std::ostringstream empty;
    write_report_csv(empty, {});
    CHECK(empty.str() == std::string(kReportCsvHeader) + "\n");

    std::vector<RunReport> reps(3);
    reps[0].id = 1;
    reps[0].status = RunStatus::to_yb;
    reps[1].id = 2;
    reps[1].status = RunStatus::to_ys;
    reps[1].max_dev_alt = 1e-9;
    reps[2].id = 3;
    reps[2].status = RunStatus::to_yb;
    std::ostringstream out;
    write_report_csv(out, reps);
    std::string line;
    std::istringstream in(out.str());
    int lines = 0;
    while (std::getline(in, line)) ++lines;
    CHECK(lines == 4);
    const auto summary = format_summary(reps);
    CHECK(summary.find("to_yb") != std::string::npos);
    CHECK(summary.find("2") != std::string::npos);
}

TEST_CASE("constraint parsing and resolution") {
    CHECK_FALSE(parse_constraint("none").has_value());
    const auto lb = parse_constraint("lbound:-0.01");
    REQUIRE(lb.has_value());
    CHECK(std::get<LowerBound>(*lb).level == -0.01);
    const auto rel = parse_constraint("dwindow:base:0.1");
    REQUIRE(rel.has_value());
    CHECK(*std::get<DerivativeWindowSpec>(*rel).base_fraction == 0.1);
    const auto abs = parse_constraint("dwindow:-1.5,0.2");
    CHECK(std::get<DerivativeWindowSpec>(*abs).center == -1.5);
    CHECK(std::get<DerivativeWindowSpec>(*abs).radius == 0.2);
    CHECK_THROWS_AS(parse_constraint("ubound:3"), ValidationError);
    CHECK_THROWS_AS(parse_constraint("dwindow:1"), ValidationError);

    const auto set = resolve_constraints({*rel}, -2.0);
    REQUIRE(set.has_value());
    const auto& w = std::get<DerivativeWindow>(set->items[0]);
    CHECK(w.center == -2.0);
    CHECK(w.radius == doctest::Approx(0.2));
    CHECK_THROWS_AS(resolve_constraints({*rel}, std::nullopt), ValidationError);
    CHECK_FALSE(resolve_constraints({}, 1.0).has_value());
}

TEST_CASE("solve config") {
    std::istringstream in(
        "# comment\n"
        "s = 0\n"
        "e = 2\n"
        "q = 6\n"
        "rhs = manufactured_sine\n"
        "d11 = 1\nd12 = 0\nd21 = 0\nd22 = 0\nd23 = 1\n"
        "constraint = lbound:-1\n"
        "constraint = dwindow:0,1\n");
    const auto cfg = parse_solve_config(in);
    CHECK(cfg.s == 0.0);
    CHECK(cfg.e == 2.0);
    CHECK(cfg.q == 6);
    CHECK(cfg.rhs == RhsKind::manufactured_sine);
    CHECK(cfg.d[1][2] == 1.0);
    CHECK(cfg.constraints.size() == 2);
    const auto prob = build_configured_problem(cfg);
    REQUIRE(prob.truth);
    CHECK(prob.bc.alpha == doctest::Approx(prob.truth(0.0)));
    CHECK(prob.bc.beta == doctest::Approx(prob.truth(2.0)));

    std::istringstream bad("s = 0\nwibble = 3\n");
    try {
        parse_solve_config(bad);
        FAIL("expected a parse error");
    } catch (const ValidationError& err) {
        CHECK(std::string(err.what()).find("2") != std::string::npos);
    }
}
