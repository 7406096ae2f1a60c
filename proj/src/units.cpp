#include "sea/units.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <string>

namespace sea {

namespace {

struct UnitInfo {
    Unit unit;
    Dimension dimension;
    std::string_view symbol;
    double to_si;  // multiply to obtain the canonical SI magnitude
};

constexpr double kLbfPerInch = units::kNewtonsPerPoundForce / units::kMetersPerInch;

constexpr std::array<UnitInfo, 13> kUnits{{
    {Unit::Newton, Dimension::Force, "N", 1.0},
    {Unit::PoundForce, Dimension::Force, "lbf", units::kNewtonsPerPoundForce},
    {Unit::Meter, Dimension::Length, "m", 1.0},
    {Unit::Inch, Dimension::Length, "in", units::kMetersPerInch},
    {Unit::MeterPerSecond, Dimension::Speed, "m/s", 1.0},
    {Unit::InchPerSecond, Dimension::Speed, "in/s", units::kMetersPerInch},
    {Unit::NewtonPerMeter, Dimension::Stiffness, "N/m", 1.0},
    {Unit::PoundForcePerInch, Dimension::Stiffness, "lbf/in", kLbfPerInch},
    {Unit::Watt, Dimension::Power, "W", 1.0},
    {Unit::Horsepower, Dimension::Power, "hp", units::kWattsPerHorsepower},
    {Unit::Hertz, Dimension::Frequency, "Hz", 1.0},
    {Unit::Kilogram, Dimension::Mass, "kg", 1.0},
    {Unit::PoundMass, Dimension::Mass, "lb", units::kKilogramsPerPound},
}};

const UnitInfo& info(Unit unit) {
    for (const auto& u : kUnits) {
        if (u.unit == unit) return u;
    }
    throw UnitError("unknown unit tag");
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

}  // namespace

Dimension dimension_of(Unit unit) { return info(unit).dimension; }

Unit canonical_unit(Dimension dim) {
    switch (dim) {
        case Dimension::Force: return Unit::Newton;
        case Dimension::Length: return Unit::Meter;
        case Dimension::Speed: return Unit::MeterPerSecond;
        case Dimension::Stiffness: return Unit::NewtonPerMeter;
        case Dimension::Power: return Unit::Watt;
        case Dimension::Frequency: return Unit::Hertz;
        case Dimension::Mass: return Unit::Kilogram;
    }
    throw UnitError("unknown dimension");
}

std::string_view unit_symbol(Unit unit) { return info(unit).symbol; }

Unit parse_unit(std::string_view symbol) {
    const std::string key = lower(symbol);
    for (const auto& u : kUnits) {
        if (lower(u.symbol) == key) return u.unit;
    }
    // Accepted aliases.
    if (key == "lbs" || key == "lbm") return Unit::PoundMass;
    if (key == "inch" || key == "inches") return Unit::Inch;
    throw UnitError("unknown unit '" + std::string(symbol) + "'");
}

UnitValue convert(const UnitValue& value, Unit target) {
    const UnitInfo& from = info(value.unit);
    const UnitInfo& to = info(target);
    if (from.dimension != to.dimension) {
        throw UnitError("cannot convert " + std::string(from.symbol) + " to " +
                        std::string(to.symbol) + ": dimension mismatch");
    }
    if (value.unit == target) return value;
    return {value.magnitude * from.to_si / to.to_si, target};
}

double to_si(const UnitValue& value) { return value.magnitude * info(value.unit).to_si; }

}  // namespace sea
