#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "sea/catalog.hpp"
#include "sea/units.hpp"

using namespace sea;
using Catch::Matchers::WithinRel;

namespace {

// Independent definitions: pound-mass times standard gravity, and the
// mechanical horsepower of 550 ft*lbf/s.
constexpr double kLbfOracle = 0.45359237 * 9.80665;
constexpr double kHpOracle = 550.0 * 12.0 * 0.0254 * kLbfOracle;

const std::vector<Unit> kAll = {
    Unit::Newton, Unit::PoundForce, Unit::Meter,  Unit::Inch,       Unit::MeterPerSecond,
    Unit::InchPerSecond, Unit::NewtonPerMeter, Unit::PoundForcePerInch, Unit::Watt,
    Unit::Horsepower, Unit::Hertz, Unit::Kilogram, Unit::PoundMass,
};

}  // namespace

TEST_CASE("defined conversion constants") {
    CHECK_THAT(to_si(pounds_force(100)), WithinRel(100 * kLbfOracle, 1e-14));
    CHECK_THAT(to_si({11, Unit::InchPerSecond}), WithinRel(0.2794, 1e-14));
    CHECK_THAT(to_si({1, Unit::Horsepower}), WithinRel(kHpOracle, 1e-12));
    const UnitValue same = convert({0.22, Unit::Horsepower}, Unit::Horsepower);
    CHECK(same.magnitude == 0.22);
    CHECK(same.unit == Unit::Horsepower);
}

TEST_CASE("spring rate in lbf/in") {
    const double oracle = 1285.2 * kLbfOracle / 0.0254;
    CHECK_THAT(to_si({1285.2, Unit::PoundForcePerInch}), WithinRel(oracle, 1e-12));
    CHECK_THAT(oracle, WithinRel(2.2508e5, 1e-4));
}

TEST_CASE("round trips within a dimension are lossless") {
    for (Unit a : kAll) {
        for (Unit b : kAll) {
            if (dimension_of(a) != dimension_of(b)) continue;
            for (double v : {1e-6, 0.37, 1.0, 127.0, 2.2508e5, -3.5}) {
                const UnitValue back = convert(convert({v, a}, b), a);
                CHECK_THAT(back.magnitude, WithinRel(v, 1e-12));
            }
        }
    }
}

TEST_CASE("dimension mismatch names both units") {
    try {
        convert({1, Unit::PoundForce}, Unit::Inch);
        FAIL("expected UnitError");
    } catch (const UnitError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("lbf") != std::string::npos);
        CHECK(msg.find("in") != std::string::npos);
    }
}

TEST_CASE("unit suffixes parse case-insensitively") {
    CHECK(parse_unit("LBF") == Unit::PoundForce);
    CHECK(parse_unit("lbf/in") == Unit::PoundForcePerInch);
    CHECK(parse_unit("hz") == Unit::Hertz);
    CHECK(parse_unit("In/S") == Unit::InchPerSecond);
    CHECK_THROWS_AS(parse_unit("furlong"), UnitError);
}

TEST_CASE("built-in table rows") {
    const auto& cat = builtin_catalog();
    REQUIRE(cat.size() == 4);
    CHECK(cat[0].name == "SEA-23-23");
    CHECK(find_spec("SEA-23-23").continuous_force.magnitude == 127);
    CHECK(find_spec("SEA-23-23").continuous_force.unit == Unit::PoundForce);
    CHECK(find_spec("HyEA-75-32").continuous_power.magnitude == 24.5);
    CHECK(find_spec("SEA-12-25").small_force_bandwidth.magnitude == 25);
    CHECK(find_spec("HyEA-50-31").actuation_kind == ActuationKind::Hydraulic);
    CHECK_THROWS_AS(find_spec("SEA-99-99"), std::invalid_argument);
    for (const auto& s : cat) CHECK_NOTHROW(validate(s));
}

TEST_CASE("peak force falls back to continuous") {
    CHECK(find_spec("SEA-23-23").peak_force().magnitude == 300);
    CHECK(find_spec("HyEA-75-32").peak_force().magnitude == 1324);
}

TEST_CASE("invalid specs are rejected") {
    ActuatorSpec s = find_spec("SEA-23-23");
    s.weight.magnitude = -1;
    CHECK_THROWS_AS(validate(s), std::invalid_argument);
    s = find_spec("SEA-23-23");
    s.small_force_bandwidth.magnitude = 0;
    CHECK_THROWS_AS(validate(s), std::invalid_argument);
}

TEST_CASE("continuous power against force times speed") {
    struct Row {
        const char* name;
        double force_lbf, speed_in_s, listed_hp, rel;
    };
    // rel is |F*v/6600 - listed| / listed computed by hand
    for (const Row& r : {Row{"SEA-23-23", 127, 11, 0.22, std::abs(127.0 * 11 / 6600 - 0.22) / 0.22},
                         Row{"SEA-12-25", 30, 13, 0.06, std::abs(30.0 * 13 / 6600 - 0.06) / 0.06},
                         Row{"HyEA-75-32", 1324, 122, 24.5, std::abs(1324.0 * 122 / 6600 - 24.5) / 24.5}}) {
        const auto checks = consistency_report(find_spec(r.name));
        REQUIRE(checks[0].name == "continuous_power");
        CHECK_THAT(checks[0].derived, WithinRel(r.force_lbf * r.speed_in_s / 6600.0, 1e-12));
        CHECK(checks[0].listed == r.listed_hp);
        CHECK_THAT(checks[0].relative_error, WithinRel(r.rel, 1e-9));
    }
    CHECK_THAT(consistency_report(find_spec("SEA-23-23"))[0].relative_error, WithinRel(0.0379, 1e-2));
}

TEST_CASE("every gated check is within 5 percent") {
    for (const auto& spec : builtin_catalog()) {
        for (const auto& c : consistency_report(spec)) {
            INFO(spec.name << " " << c.name);
            if (c.gated) CHECK(c.relative_error < 0.05);
        }
    }
}

TEST_CASE("stiffness from the large-force bandwidth") {
    const auto k_lbf_in = [](const char* name) {
        return derive_spring_stiffness(find_spec(name), {}, Unit::PoundForcePerInch).stiffness.magnitude;
    };
    const double two_pi = 2.0 * std::numbers::pi;
    CHECK_THAT(k_lbf_in("SEA-23-23"), WithinRel(two_pi * 7.5 * 300 / 11, 1e-12));
    CHECK_THAT(k_lbf_in("SEA-23-23"), WithinRel(1285.2, 1e-4));
    CHECK_THAT(k_lbf_in("SEA-12-25"), WithinRel(210.2, 1e-3));
    CHECK_THAT(k_lbf_in("HyEA-75-32"), WithinRel(681.9, 1e-3));
    CHECK_THAT(derive_spring_stiffness(find_spec("SEA-23-23")).stiffness.magnitude, WithinRel(2.2508e5, 1e-4));
    CHECK(derive_spring_stiffness(find_spec("SEA-23-23")).derivation.find("SEA-23-23") != std::string::npos);
}

TEST_CASE("stiffness is homogeneous in force and speed") {
    const ActuatorSpec base = find_spec("SEA-12-25");
    const double k = derive_spring_stiffness(base, pounds_force(50)).stiffness.magnitude;
    CHECK(derive_spring_stiffness(base, pounds_force(100)).stiffness.magnitude == 2 * k);
    ActuatorSpec fast = base;
    fast.max_speed.magnitude *= 2;
    CHECK(derive_spring_stiffness(fast, pounds_force(50)).stiffness.magnitude == k / 2);
    CHECK_THROWS_AS(derive_spring_stiffness(base, UnitValue{1, Unit::Inch}), UnitError);
    CHECK_THROWS_AS(derive_spring_stiffness(base, pounds_force(0)), std::invalid_argument);
}
