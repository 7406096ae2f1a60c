#include "sea/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include "sea/catalog.hpp"
#include "sea/config.hpp"
#include "sea/csv.hpp"
#include "sea/report.hpp"

namespace sea {

namespace {

namespace fs = std::filesystem;

struct Flags {
    std::string config_path;
    std::string out_dir = "results";
    std::optional<std::uint64_t> seed;
    bool csv = true;
    std::optional<std::string> catalog;
    std::vector<std::string> sets;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

Settings load_settings(const Flags& f) {
    std::string text = f.config_path.empty() ? std::string() : read_file(f.config_path);
    // --set lines go last, unprefixed; repeating a file key is a duplicate error
    if (!f.sets.empty()) text += "\n[]";
    for (const auto& s : f.sets) text += "\n" + s;
    Settings settings = resolve(parse_config(text), f.catalog);
    if (f.seed) settings.system.seed = *f.seed;
    return settings;
}

void write_artifacts(const Flags& f, const std::string& sub, const std::vector<Artifact>& files,
                     std::ostream& out) {
    const fs::path dir = fs::path(f.out_dir) / sub;
    fs::create_directories(dir);
    for (const auto& a : files) {
        const fs::path p = dir / a.name;
        std::ofstream file(p, std::ios::binary);
        if (!file) throw std::runtime_error("cannot write '" + p.string() + "'");
        file << a.content;
        out << "wrote " << p.string() << '\n';
    }
}

std::string header(const std::string& sub, const Settings& s) {
    return "sea " + sub + "  catalog " + s.catalog + "  seed " + std::to_string(s.system.seed) + '\n';
}

std::string pad(const std::string& s, std::size_t w) { return s + std::string(w - std::min(w, s.size()), ' '); }

int run_catalog(const Flags& f, std::ostream& out) {
    std::vector<std::vector<std::string>> rows;
    rows.push_back({"name", "quantity", "derived", "listed", "rel_error", "gated"});
    std::string csv_text = "name,quantity,derived,listed,rel_error\n";
    bool ok = true;
    std::vector<std::string> stiffness;
    for (const auto& spec : builtin_catalog()) {
        if (f.catalog && spec.name != *f.catalog) continue;
        for (const auto& c : consistency_report(spec)) {
            rows.push_back({spec.name, c.name, csv::fixed(c.derived, 4), csv::fixed(c.listed, 4),
                            csv::fixed(c.relative_error, 4), c.gated ? "yes" : "no"});
            csv_text += spec.name + ',' + c.name + ',' + csv::number(c.derived) + ',' + csv::number(c.listed) + ',' +
                        csv::number(c.relative_error) + '\n';
            if (c.gated && c.relative_error > 0.05) ok = false;
        }
        stiffness.push_back(derive_spring_stiffness(spec).derivation);
    }
    if (rows.size() == 1) find_spec(*f.catalog);  // throws for the unknown name

    std::vector<std::size_t> width(rows[0].size(), 0);
    for (const auto& r : rows) {
        for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
    }
    for (const auto& r : rows) {
        std::string line;
        for (std::size_t c = 0; c < r.size(); ++c) line += pad(r[c], width[c] + 2);
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out << line << '\n';
    }
    out << '\n';
    for (const auto& s : stiffness) out << s << '\n';
    out << (ok ? "all gated checks within 5%" : "gated check outside 5%") << '\n';
    if (f.csv) write_artifacts(f, "catalog", {{"catalog.csv", csv_text}}, out);
    return ok ? 0 : 1;
}

int run_experiment(const Flags& f, const std::string& sub, const std::function<Outcome(const Settings&)>& runner,
                   std::ostream& out) {
    const Settings settings = load_settings(f);
    const Outcome o = runner(settings);
    std::string text = header(sub, settings) + o.report.to_text();
    for (const auto& a : o.artifacts) {
        if (a.name == "stance.txt") text += a.content;
    }
    out << text;
    if (f.csv) {
        std::vector<Artifact> files = o.artifacts;
        files.push_back({sub + ".txt", text});
        files.push_back({"config.ini", emit_config(settings)});
        write_artifacts(f, sub, files, out);
    }
    return 0;
}

int run_full_report(const Flags& f, std::ostream& out) {
    const Settings settings = load_settings(f);
    const SuiteReport rep = run_report(settings);
    const std::string text = format_report(rep);
    out << text;
    if (f.csv) {
        std::vector<Artifact> files = rep.artifacts;
        files.push_back({"report.txt", text});
        files.push_back({"config.ini", emit_config(settings)});
        write_artifacts(f, "report", files, out);
    }
    return rep.exit_status;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Series elastic actuator experiments", "sea"};
    app.require_subcommand(1, 1);
    Flags f;
    std::uint64_t seed = 0;
    std::string catalog;
    app.add_option("--config", f.config_path, "run configuration file")->check(CLI::ExistingFile);
    app.add_option("--out", f.out_dir, "directory for written files")->capture_default_str();
    auto* seed_opt = app.add_option("--seed", seed, "noise seed (default 0, or experiment.seed)");
    app.add_flag("--csv,!--no-csv", f.csv, "write CSV and text files (default on)");
    auto* catalog_opt = app.add_option("--catalog", catalog, "built-in actuator");
    app.add_option("--set", f.sets, "extra config line, e.g. --set 'controller.kp = 3'");

    struct Sub {
        const char* name;
        const char* help;
        std::function<Outcome(const Settings&)> runner;
    };
    const std::vector<Sub> experiments = {
        {"simulate", "closed-loop episode from the load and command keys", run_simulate},
        {"bode", "small and large amplitude force tracking sweeps", run_bode},
        {"impedance", "output impedance sweep, elastic and rigid proxy", run_impedance},
        {"resolve", "smallest resolvable force", run_resolve},
        {"chatter", "step into stiff contact at x1 and rigid stiffness", run_chatter},
        {"shock", "impact of a free mass on the output", run_shock},
        {"energy", "work and energy audit of a tracking episode", run_energy},
        {"stance", "foot force distribution", run_stance},
    };
    app.add_subcommand("catalog", "built-in specs and consistency checks")->fallthrough();
    for (const auto& s : experiments) app.add_subcommand(s.name, s.help)->fallthrough();
    app.add_subcommand("report", "full suite against the published targets")->fallthrough();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }
    if (seed_opt->count() > 0) f.seed = seed;
    if (catalog_opt->count() > 0) f.catalog = catalog;

    const std::string sub = app.get_subcommands().front()->get_name();
    try {
        if (sub == "catalog") return run_catalog(f, out);
        if (sub == "report") return run_full_report(f, out);
        for (const auto& s : experiments) {
            if (sub == s.name) return run_experiment(f, sub, s.runner, out);
        }
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}

}  // namespace sea
