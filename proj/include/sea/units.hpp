#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sea {

enum class Unit {
    Newton,
    PoundForce,
    Meter,
    Inch,
    MeterPerSecond,
    InchPerSecond,
    NewtonPerMeter,
    PoundForcePerInch,
    Watt,
    Horsepower,
    Hertz,
    Kilogram,
    PoundMass,
};

enum class Dimension { Force, Length, Speed, Stiffness, Power, Frequency, Mass };

// Exact by definition.
namespace units {
inline constexpr double kMetersPerInch = 0.0254;
inline constexpr double kNewtonsPerPoundForce = 4.4482216152605;
inline constexpr double kKilogramsPerPound = 0.45359237;
inline constexpr double kWattsPerHorsepower = 745.6998715822702;
inline constexpr double kInchPoundForcePerSecondPerHorsepower = 6600.0;
}  // namespace units

class UnitError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct UnitValue {
    double magnitude = 0.0;
    Unit unit = Unit::Newton;
};

Dimension dimension_of(Unit unit);

/// SI unit of the dimension (N, m, m/s, N/m, W, Hz, kg).
Unit canonical_unit(Dimension dim);

std::string_view unit_symbol(Unit unit);

/// Parses a unit suffix such as "lbf", "in/s", "lbf/in", "Hz" (case-insensitive).
/// Throws UnitError for unknown suffixes.
Unit parse_unit(std::string_view symbol);

/// Rescales by exact constants. Throws UnitError naming both units when the
/// dimensions differ.
UnitValue convert(const UnitValue& value, Unit target);

/// Magnitude expressed in the canonical SI unit of its dimension.
double to_si(const UnitValue& value);

inline UnitValue newtons(double v) { return {v, Unit::Newton}; }
inline UnitValue pounds_force(double v) { return {v, Unit::PoundForce}; }

}  // namespace sea
