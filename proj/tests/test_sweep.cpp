#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cstddef>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"
#include "udw/sweep.hpp"

using namespace udw;

namespace {

SweepSpec small_map() {
    SweepSpec s;
    s.fixed.alpha = 1.0 / std::numbers::sqrt2;
    s.fixed.omega_gap = 1.0;
    s.fixed.lambda_a = s.fixed.lambda_b = 1.0;
    s.axes = {AxisSpec{Axis::LOverSigma, 0.5, 4.0, 5, {}},
              AxisSpec{Axis::DtauOverSigma, 0.0, 3.0, 4, {}}};
    return s;
}

std::string to_csv(const std::vector<ResultRow>& rows) {
    std::ostringstream os;
    write_csv(rows, os);
    return os.str();
}

} // namespace

TEST_CASE("axis names round-trip") {
    for (Axis a : {Axis::Lambda, Axis::LambdaA, Axis::LambdaB, Axis::Alpha,
                   Axis::LOverSigma, Axis::DtauOverSigma, Axis::EtaOverSigma,
                   Axis::ThetaPhase})
        CHECK(axis_from_name(axis_name(a)) == a);
    CHECK_THROWS_AS(axis_from_name("coupling"), validation_error);
    CHECK_THROWS_AS(axis_from_name(""), validation_error);
}

TEST_CASE("axis grids") {
    const AxisSpec range{Axis::Lambda, 0.0, 5.0, 11, {}};
    const auto g = range.grid();
    REQUIRE(g.size() == 11);
    CHECK(g.front() == 0.0);
    CHECK(g.back() == 5.0);
    CHECK_THAT(g[4], Catch::Matchers::WithinAbs(2.0, 1e-15));

    const AxisSpec list{Axis::Alpha, 0.0, 0.0, 0, {0.1, 0.7}};
    CHECK(list.grid() == std::vector<double>{0.1, 0.7});
}

TEST_CASE("sweep specs are validated up front") {
    SweepSpec s = small_map();

    SECTION("no axes") {
        s.axes.clear();
        CHECK_THROWS_AS(validate_spec(s), validation_error);
    }
    SECTION("three axes") {
        s.axes.push_back(AxisSpec{Axis::Alpha, 0.0, 1.0, 3, {}});
        CHECK_THROWS_AS(validate_spec(s), validation_error);
    }
    SECTION("too few steps") {
        s.axes[0].steps = 1;
        CHECK_THROWS_AS(validate_spec(s), validation_error);
    }
    SECTION("axis escapes the parameter domain") {
        s.axes[0] = AxisSpec{Axis::Alpha, 0.0, 2.0, 5, {}};
        CHECK_THROWS_AS(validate_spec(s), validation_error);
    }
    SECTION("negative delay grid") {
        s.axes[1] = AxisSpec{Axis::DtauOverSigma, -1.0, 1.0, 5, {}};
        CHECK_THROWS_AS(validate_spec(s), validation_error);
    }
    SECTION("well-formed spec passes") {
        CHECK_NOTHROW(validate_spec(s));
    }
}

TEST_CASE("a single grid point evaluates to a consistent row") {
    SweepParams p;
    p.alpha = 1.0 / std::numbers::sqrt2;
    p.omega_gap = 1.0;
    p.lambda_a = p.lambda_b = 1.0;
    p.separation = 10.0;
    p.delay = 0.0;
    const ResultRow row = evaluate_point(p);

    CHECK(row.family == "gg");
    CHECK(row.L == 10.0);
    CHECK(row.dtau == 0.0);
    CHECK(row.f_a == row.f_b);
    CHECK(row.theta_comm == 0.0);
    CHECK(row.omega_anti < 0.0);
    CHECK_THAT(row.r11 + row.r22 + row.r33 + row.r44,
               Catch::Matchers::WithinAbs(1.0, 1e-12));
    CHECK(row.concurrence > 0.0);
    CHECK(row.mutual_information > 0.0);
}

TEST_CASE("sweep rows come out in row-major axis order") {
    const SweepSpec s = small_map();
    const auto rows = run_sweep(s);
    REQUIRE(rows.size() == 20);
    const auto outer = s.axes[0].grid();
    const auto inner = s.axes[1].grid();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].L == outer[i / inner.size()]);
        CHECK(rows[i].dtau == inner[i % inner.size()]);
    }
}

TEST_CASE("sweep output is deterministic and worker-count independent") {
    const SweepSpec s = small_map();
    const std::string first = to_csv(run_sweep(s, 1));
    const std::string second = to_csv(run_sweep(s, 1));
    const std::string pooled = to_csv(run_sweep(s, 4));
    CHECK(first == second);
    CHECK(first == pooled);
}

TEST_CASE("csv format") {
    SweepSpec s = small_map();
    s.axes = {AxisSpec{Axis::Lambda, 0.5, 1.5, 3, {}}};
    const std::string csv = to_csv(run_sweep(s));

    std::istringstream is(csv);
    std::string line;
    REQUIRE(std::getline(is, line));
    CHECK(line == csv_header);

    std::size_t rows = 0;
    while (std::getline(is, line)) {
        ++rows;
        CHECK(std::count(line.begin(), line.end(), ',') == 23);
        CHECK(line.substr(0, 3) == "gg,");
    }
    CHECK(rows == 3);
}

TEST_CASE("csv numbers round-trip to the exact double") {
    SweepSpec s = small_map();
    s.axes = {AxisSpec{Axis::Lambda, 1.0, 1.0 / 3.0, 2, {}}};
    const auto rows = run_sweep(s);
    const std::string csv = to_csv(rows);

    std::istringstream is(csv);
    std::string line;
    std::getline(is, line); // header
    std::getline(is, line);
    std::getline(is, line); // lambda = 1/3 row

    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) fields.push_back(field);
    REQUIRE(fields.size() == 24);
    CHECK(std::stod(fields[4]) == rows[1].lambda_a);
    CHECK(std::stod(fields[9]) == rows[1].f_a);
    CHECK(std::stod(fields[23]) == rows[1].mutual_information);
}

TEST_CASE("presets") {
    SECTION("every advertised name resolves") {
        for (const char* name : preset_names())
            CHECK_NOTHROW(validate_spec(preset_spec(name)));
        CHECK(preset_names().size() == 9);
    }
    SECTION("unknown name is rejected") {
        CHECK_THROWS_AS(preset_spec("fig7"), validation_error);
    }
    SECTION("single-detector trade-off curve") {
        const SweepSpec s = preset_spec("fig1");
        CHECK(s.fixed.lambda_a == 0.0);
        CHECK_THAT(s.fixed.alpha, Catch::Matchers::WithinAbs(1.0 / 3.0, 1e-15));
        REQUIRE(s.axes.size() == 1);
        CHECK(s.axes[0].axis == Axis::LambdaB);
        CHECK(s.axes[0].stop == 10.0);
        CHECK(s.axes[0].steps == 200);
    }
    SECTION("spacetime maps share a grid") {
        const SweepSpec a = preset_spec("fig2");
        const SweepSpec b = preset_spec("fig4");
        CHECK(a.fixed.alpha == b.fixed.alpha);
        CHECK(a.axes[0].axis == Axis::LOverSigma);
        CHECK(a.axes[1].axis == Axis::DtauOverSigma);
        CHECK(b.axes[0].steps == a.axes[0].steps);
        CHECK(preset_spec("fig5").fixed.alpha == 0.0);
    }
    SECTION("coupling sweeps split spacelike and lightlike") {
        const SweepSpec sl = preset_spec("fig3a");
        CHECK(sl.fixed.separation == 10.0);
        CHECK(sl.fixed.delay == 0.0);
        const SweepSpec ll = preset_spec("fig3b");
        CHECK(ll.fixed.separation == 1.0);
        CHECK(ll.fixed.delay == 1.0);
        CHECK(ll.axes[0].axis == Axis::Lambda);
        CHECK(ll.axes[0].stop == 5.0);
        CHECK(preset_spec("fig3c").fixed.separation == 10.0);
        CHECK(preset_spec("fig3d").fixed.delay == 1.0);
    }
    SECTION("near-separable harvesting curves") {
        const SweepSpec s = preset_spec("fig6");
        REQUIRE(s.axes.size() == 2);
        CHECK(s.axes[0].axis == Axis::Alpha);
        CHECK(s.axes[0].values ==
              std::vector<double>{0.0, 1.0 / 5000.0, 1.0 / 2000.0});
        CHECK(s.axes[1].axis == Axis::Lambda);
        CHECK(s.axes[1].stop == 3.0);
    }
}

TEST_CASE("the built-in verification gauntlet passes on the honest pipeline") {
    const VerifyReport report = run_verification();
    for (const CheckResult& c : report.checks) {
        INFO(c.name << " max error " << c.max_error << " at " << c.worst_point);
        CHECK(c.pass);
        CHECK(c.max_error <= c.tolerance);
        CHECK_FALSE(c.worst_point.empty());
    }
    CHECK(report.pass);
    CHECK(report.checks.size() >= 5);
}

TEST_CASE("the verification gauntlet catches an injected kernel fault") {
    const VerifyReport report = run_verification(false, 1e-3);
    CHECK_FALSE(report.pass);
    bool f_check_failed = false;
    for (const CheckResult& c : report.checks)
        if (!c.pass && c.name == "f vs quadrature") f_check_failed = true;
    CHECK(f_check_failed);
}
