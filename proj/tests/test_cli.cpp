#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "sea/cli.hpp"

using namespace sea;
using Catch::Matchers::ContainsSubstring;
namespace fs = std::filesystem;

namespace {

struct Run {
    int status;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int status = run_cli(args, out, err);
    return {status, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path fresh(const std::string& name) {
    const fs::path p = fs::path("cli_out") / name;
    fs::remove_all(p);
    return p;
}

}  // namespace

TEST_CASE("catalog subcommand") {
    const fs::path dir = fresh("catalog");
    const Run r = cli({"catalog", "--out", dir.string()});
    CHECK(r.status == 0);
    CHECK_THAT(r.out, ContainsSubstring("HyEA-50-31"));
    CHECK_THAT(r.out, ContainsSubstring("continuous_power"));
    CHECK_THAT(r.out, ContainsSubstring("lbf/in"));
    const std::string csv = slurp(dir / "catalog" / "catalog.csv");
    CHECK(csv.rfind("name,quantity,derived,listed,rel_error\n", 0) == 0);

    const Run one = cli({"catalog", "--no-csv", "--catalog", "SEA-12-25"});
    CHECK(one.status == 0);
    CHECK_THAT(one.out, ContainsSubstring("SEA-12-25"));
    CHECK(one.out.find("SEA-23-23") == std::string::npos);
}

TEST_CASE("stance subcommand writes text and csv") {
    const fs::path dir = fresh("stance");
    const Run r = cli({"stance", "--out", dir.string(), "--seed", "4"});
    CHECK(r.status == 0);
    CHECK_THAT(r.out, ContainsSubstring("seed 4"));
    CHECK_THAT(r.out, ContainsSubstring("387.097"));
    CHECK(fs::exists(dir / "stance" / "stance.csv"));
    CHECK(fs::exists(dir / "stance" / "config.ini"));
}

TEST_CASE("simulate honours config and --set") {
    const fs::path dir = fresh("simulate");
    fs::create_directories(dir);
    {
        std::ofstream cfg(dir / "run.ini");
        cfg << "[command]\namplitude = 50 lbf\nduration = 0.2\n[load]\ntype = inertial\nmass = 2 kg\n";
    }
    const Run r = cli({"simulate", "--config", (dir / "run.ini").string(), "--out", dir.string(), "--set",
                       "controller.kp = 1.5"});
    CHECK(r.status == 0);
    const std::string traj = slurp(dir / "simulate" / "trajectory.csv");
    CHECK(traj.rfind("time_s,x_m,v_m,x_l,v_l,deflection_m,force_true_N,force_meas_N,cmd_N,effort_N,stuck\n", 0) == 0);
    CHECK_THAT(slurp(dir / "simulate" / "config.ini"), ContainsSubstring("kp = 1.5"));
}

TEST_CASE("config errors exit with status 2") {
    const Run r = cli({"bode", "--no-csv", "--set", "plant.sprng_stiffness = 1"});
    CHECK(r.status == 2);
    CHECK_THAT(r.err, ContainsSubstring("plant.sprng_stiffness"));
    CHECK(cli({"report", "--no-csv", "--catalog", "SEA-00"}).status == 2);
    CHECK(cli({"frobnicate"}).status != 0);
    CHECK(cli({}).status != 0);
}

TEST_CASE("no-csv writes nothing") {
    const fs::path dir = fresh("quiet");
    CHECK(cli({"shock", "--no-csv", "--out", dir.string()}).status == 0);
    CHECK_FALSE(fs::exists(dir));
}

TEST_CASE("report runs are byte-identical and the status follows the published rows") {
    const fs::path a = fresh("report_a");
    const fs::path b = fresh("report_b");
    const Run ra = cli({"report", "--out", a.string()});
    const Run rb = cli({"report", "--out", b.string()});
    CHECK(ra.status == rb.status);
    CHECK_THAT(ra.out, ContainsSubstring("seed 0"));
    CHECK_THAT(ra.out, ContainsSubstring("metric"));

    std::size_t files = 0;
    for (const auto& e : fs::directory_iterator(a / "report")) {
        ++files;
        const fs::path other = b / "report" / e.path().filename();
        INFO(e.path().filename().string());
        REQUIRE(fs::exists(other));
        CHECK(slurp(e.path()) == slurp(other));
    }
    CHECK(files >= 5);

    // exit status is nonzero exactly when a published row failed
    const std::string text = slurp(a / "report" / "report.txt");
    const bool published_fail = text.find("FAIL (published)") != std::string::npos;
    CHECK((ra.status != 0) == published_fail);
}
