#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "swapsim/scenario.hpp"

namespace fs = std::filesystem;
using namespace swapsim;

namespace {

/// Run a shell command, returning its exit code.
int run(const std::string& cmd) {
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string bin() { return std::string(SWAPSIM_BIN); }

fs::path work_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "swapsim_cli_test";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Reduced-sample copy of the reference scenario so subprocess runs that
/// exercise the Monte-Carlo path stay fast.
fs::path small_scenario() {
    static const fs::path path = [] {
        Scenario s = canonical_scenario();
        s.name = "cli-test";
        s.monte_carlo.n_samples = 60;
        const fs::path p = work_dir() / "small.json";
        std::ofstream out(p, std::ios::binary);
        save_scenario(s, out);
        return p;
    }();
    return path;
}

std::string strip_timestamp(const std::string& manifest) {
    std::istringstream in(manifest);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line))
        if (line.find("timestamp") == std::string::npos) out << line << "\n";
    return out.str();
}

}  // namespace

TEST_CASE("help exits 0, bad usage exits 1") {
    CHECK(run(bin() + " --help > /dev/null 2>&1") == 0);
    CHECK(run(bin() + " curve --help > /dev/null 2>&1") == 0);
    CHECK(run(bin() + " --version > /dev/null 2>&1") == 0);
    CHECK(run(bin() + " frobnicate > /dev/null 2>&1") == 1);
    CHECK(run(bin() + " > /dev/null 2>&1") == 1);
    CHECK(run(bin() + " dock > /dev/null 2>&1") == 1);  // missing --start
}

TEST_CASE("scenario problems exit 1 and name the file") {
    CHECK(run(bin() + " curve --scenario /no/such.json > /dev/null 2>&1") ==
          1);
    const fs::path bad = work_dir() / "broken.json";
    std::ofstream(bad) << "{\"schema_version\": ";
    const fs::path log = work_dir() / "stderr.txt";
    CHECK(run(bin() + " curve --scenario " + bad.string() + " 2> " +
              log.string() + " > /dev/null") == 1);
    CHECK(slurp(log).find("broken.json") != std::string::npos);
}

TEST_CASE("unwritable output directory exits 2") {
    CHECK(run(bin() + " reproduce --out /dev/null/x > /dev/null 2>&1") == 2);
    CHECK(run(bin() + " optimize --out /dev/null/x > /dev/null 2>&1") == 2);
}

TEST_CASE("invalid argument values exit 1") {
    CHECK(run(bin() + " dock --start nonsense > /dev/null 2>&1") == 1);
    CHECK(run(bin() + " dock --start 0.1,0,0 > /dev/null 2>&1") == 1);
    CHECK(run(bin() + " thermal --body chassis > /dev/null 2>&1") == 1);
    CHECK(run(bin() + " coverage --topology ring > /dev/null 2>&1") == 1);
    CHECK(run(bin() + " optimize --grid bad --out " +
              (work_dir() / "g").string() + " > /dev/null 2>&1") == 1);
    CHECK(run("SWAPSIM_SEED=oops " + bin() + " fleet > /dev/null 2>&1") == 1);
}

TEST_CASE("curve emits the discretized wall polyline") {
    const fs::path csv = work_dir() / "curve.csv";
    CHECK(run(bin() + " curve --theta 45 --weight 0 --emit " + csv.string() +
              " > /dev/null") == 0);
    const std::string text = slurp(csv);
    CHECK(text.rfind("x_m,y_m\n", 0) == 0);
    CHECK(text.find("\n0,0.16\n") != std::string::npos);  // mouth lip row
}

TEST_CASE("dock writes one trajectory row per recorded pose") {
    const fs::path csv = work_dir() / "traj.csv";
    const fs::path log = work_dir() / "dock.txt";
    CHECK(run(bin() + " dock --start -0.3,0.03,15 --trajectory " +
              csv.string() + " > " + log.string()) == 0);
    CHECK(slurp(log).find("SUCCESS") != std::string::npos);
    const std::string text = slurp(csv);
    CHECK(text.rfind("step,x_m,y_m,yaw_deg\n", 0) == 0);
    CHECK(text.find("\n0,-0.3,0.03,15\n") != std::string::npos);
}

TEST_CASE("seed precedence: env beats scenario, flag beats env") {
    const fs::path log = work_dir() / "fleet.txt";
    CHECK(run("SWAPSIM_SEED=123 " + bin() + " fleet > " + log.string()) == 0);
    CHECK(slurp(log).find("seed 123") != std::string::npos);
    CHECK(run("SWAPSIM_SEED=123 " + bin() + " fleet --seed 99 > " +
              log.string()) == 0);
    CHECK(slurp(log).find("seed 99") != std::string::npos);
}

TEST_CASE("the exchange-protocol event log is well-formed") {
    const fs::path csv = work_dir() / "events.csv";
    CHECK(run(bin() + " fleet --hours 6 --events " + csv.string() +
              " > /dev/null") == 0);
    std::istringstream in(slurp(csv));
    std::string header;
    std::getline(in, header);
    CHECK(header == "time_s,kind,rover,terminal,module,value,detail");
    std::string line;
    int rows = 0;
    double last_t = 0.0;
    while (std::getline(in, line)) {
        ++rows;
        const double t = std::stod(line.substr(0, line.find(',')));
        REQUIRE(t >= last_t);  // chronological order
        last_t = t;
    }
    CHECK(rows > 50);
}

TEST_CASE("optimize produces a complete, reproducible artifact set") {
    const fs::path out_a = work_dir() / "opt_a";
    const fs::path out_b = work_dir() / "opt_b";
    const std::string base_cmd = bin() + " optimize --scenario " +
                                 small_scenario().string() +
                                 " --grid 90,1 --jobs 4 --out ";
    CHECK(run(base_cmd + out_a.string() + " > /dev/null 2>&1") == 0);
    for (const char* f :
         {"ranking.csv", "optimal_curve.csv", "success_region.csv",
          "success_region_hull.off", "summary.json", "manifest.json"})
        CHECK(fs::exists(out_a / f));

    // Same invocation, fresh directory: identical bytes except timestamps.
    CHECK(run(base_cmd + out_b.string() + " > /dev/null 2>&1") == 0);
    for (const char* f : {"ranking.csv", "optimal_curve.csv",
                          "success_region.csv", "summary.json"})
        CHECK(slurp(out_a / f) == slurp(out_b / f));
    CHECK(strip_timestamp(slurp(out_a / "manifest.json")).find("90,1") !=
          std::string::npos);

    // A different seed moves the Monte-Carlo cloud but not the grid ranking.
    const fs::path out_c = work_dir() / "opt_c";
    CHECK(run(base_cmd + out_c.string() + " --seed 8 > /dev/null 2>&1") == 0);
    CHECK(slurp(out_a / "ranking.csv") == slurp(out_c / "ranking.csv"));
    CHECK(slurp(out_a / "success_region.csv") !=
          slurp(out_c / "success_region.csv"));
}

TEST_CASE("coverage writes hub and boundary tables on request") {
    const fs::path out = work_dir() / "cov";
    CHECK(run(bin() + " coverage --topology chain --hubs 3 --out " +
              out.string() + " > /dev/null") == 0);
    CHECK(fs::exists(out / "hubs.csv"));
    CHECK(fs::exists(out / "boundary.csv"));
    CHECK(fs::exists(out / "coverage.json"));
    CHECK(fs::exists(out / "manifest.json"));
    std::istringstream in(slurp(out / "hubs.csv"));
    std::string line;
    int rows = -1;  // header
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 3);
}

TEST_CASE("thermal emits the cooling curve") {
    const fs::path csv = work_dir() / "cool.csv";
    const fs::path log = work_dir() / "thermal.txt";
    CHECK(run(bin() + " thermal --body battery --emit " + csv.string() +
              " > " + log.string()) == 0);
    CHECK(slurp(log).find("480.076") != std::string::npos);
    const std::string text = slurp(csv);
    CHECK(text.rfind("time_s,temp_k\n", 0) == 0);
    CHECK(text.find("\n0,313.15\n") != std::string::npos);
}
