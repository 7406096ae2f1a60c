#pragma once

#include <string>
#include <vector>

#include "sea/analysis.hpp"
#include "sea/config.hpp"
#include "sea/stance.hpp"

namespace sea {

/// A file an experiment wants written, by bare file name.
struct Artifact {
    std::string name;
    std::string content;
};

struct Outcome {
    ExperimentReport report;
    std::vector<Artifact> artifacts;
};

// Frequency sweeps: frequency_hz,ratio,phase_deg,unstable
std::string bode_csv(const std::vector<FreqResponsePoint>& points);
// frequency_hz,impedance_N_per_m
std::string impedance_csv(const std::vector<ImpedancePoint>& points);
// foot_index,fx,fy,fz,normal_component,tangential_magnitude
std::string stance_csv(const StanceProblem& problem, const StanceSolution& solution);
/// Aligned per-foot table with the residual and active constraints.
std::string stance_text(const StanceProblem& problem, const StanceSolution& solution);

// One runner per subcommand. All are deterministic in the settings.
Outcome run_simulate(const Settings& settings);
Outcome run_bode(const Settings& settings);
Outcome run_impedance(const Settings& settings);
Outcome run_resolve(const Settings& settings);
Outcome run_chatter(const Settings& settings);
Outcome run_shock(const Settings& settings);
Outcome run_energy(const Settings& settings);
Outcome run_stance(const Settings& settings);

enum class Source { Published, Derived };
enum class Bound { Within, AtMost, AtLeast };

/// A target the report grades against. Within: |measured - value| <= tol.
/// AtMost / AtLeast: one-sided, tol is the allowed excursion past the bound.
/// With `relative`, tol is a fraction of |value|.
struct GoldenRecord {
    std::string metric;
    double value = 0.0;
    std::string unit;
    double tolerance = 0.0;
    bool relative = false;
    Source source = Source::Derived;
    Bound bound = Bound::Within;
};

/// Throws std::invalid_argument for a non-positive tolerance.
void validate(const GoldenRecord& golden);
bool passes(const GoldenRecord& golden, double measured);

struct ReportRow {
    GoldenRecord golden;
    double measured = 0.0;
    bool pass = false;
};

struct SuiteReport {
    std::string catalog;
    std::uint64_t seed = 0;
    std::vector<ReportRow> rows;
    std::vector<ExperimentReport> details;
    std::vector<Artifact> artifacts;
    /// Nonzero iff a published target failed.
    int exit_status = 0;
};

/// Runs bode (small and large amplitude), the quasi-static check, impedance,
/// resolve, chatter, shock, energy and the step check against the settings.
SuiteReport run_report(const Settings& settings);

/// Plain text, columns: metric, measured, target, tolerance, verdict.
std::string format_report(const SuiteReport& report);

}  // namespace sea
