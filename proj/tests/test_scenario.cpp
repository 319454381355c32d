#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "swapsim/errors.hpp"
#include "swapsim/scenario.hpp"

using namespace swapsim;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("serialisation round-trips byte for byte") {
    const Scenario s = canonical_scenario();
    const std::string text = scenario_text(s);
    std::istringstream in(text);
    const Scenario back = load_scenario(in);
    CHECK(scenario_text(back) == text);
    CHECK(scenario_hash(back) == scenario_hash(s));
}

TEST_CASE("the shipped reference file matches the built-in scenario") {
    const std::string shipped =
        slurp(std::string(SWAPSIM_SCENARIO_DIR) + "/canonical.json");
    CHECK(shipped == scenario_text(canonical_scenario()));
}

TEST_CASE("scenario hash is stable") {
    // Pinned so that manifests stay comparable across builds.
    CHECK(scenario_hash(canonical_scenario()) == 0xa12676aed1db931eull);
}

TEST_CASE("resolve by name, empty string, or path") {
    const Scenario builtin = canonical_scenario();
    CHECK(scenario_hash(resolve_scenario("canonical")) ==
          scenario_hash(builtin));
    CHECK(scenario_hash(resolve_scenario("")) == scenario_hash(builtin));
    const std::string path =
        std::string(SWAPSIM_SCENARIO_DIR) + "/canonical.json";
    CHECK(scenario_hash(resolve_scenario(path)) == scenario_hash(builtin));
    CHECK_THROWS_AS(resolve_scenario("/no/such/file.json"), ValidationError);
}

TEST_CASE("temperatures may be given in celsius") {
    nlohmann::ordered_json j =
        nlohmann::ordered_json::parse(scenario_text(canonical_scenario()));
    j["thermal"]["rover"]["t_initial"] = {{"celsius", 40.0}};
    j["thermal"]["rover"]["t_limit"] = {{"celsius", -40.0}};
    const Scenario s = scenario_from_json(j);
    CHECK(s.thermal_rover.t_initial_k == doctest::Approx(313.15));
    CHECK(s.thermal_rover.t_limit_k == doctest::Approx(233.15));
}

TEST_CASE("malformed documents are rejected with context") {
    std::istringstream garbage("{\"schema_version\": ");
    CHECK_THROWS_AS(load_scenario(garbage), ValidationError);
    CHECK_THROWS_AS(load_scenario_file("/no/such/file.json"),
                    ValidationError);
}

TEST_CASE("invalid values fail validation with a field name") {
    Scenario s = canonical_scenario();
    s.curve.mouth_halfwidth_m = s.curve.throat_halfwidth_m / 2.0;
    CHECK_THROWS_AS(s.validate(), ValidationError);
    s = canonical_scenario();
    s.hardstop_x_m = s.curve.depth_m * 0.5;
    CHECK_THROWS_AS(s.validate(), ValidationError);
    s = canonical_scenario();
    s.thermal_battery.emissivity = 2.0;
    CHECK_THROWS_AS(s.validate(), ValidationError);
    CHECK_NOTHROW(canonical_scenario().validate());
}

TEST_CASE("scenario edits change the hash") {
    Scenario s = canonical_scenario();
    const std::uint64_t base = scenario_hash(s);
    s.seed += 1;
    CHECK(scenario_hash(s) != base);
    s = canonical_scenario();
    s.curve.weight = 0.25;
    CHECK(scenario_hash(s) != base);
}

TEST_CASE("the derived docking port matches the scenario curve") {
    const Scenario s = canonical_scenario();
    const PortGeometry port = s.port();
    CHECK(port.hardstop_x_m == s.hardstop_x_m);
    CHECK(port.throat_halfwidth_m == s.curve.throat_halfwidth_m);
    CHECK(port.left_guide.vertices.front().y ==
          doctest::Approx(s.curve.mouth_halfwidth_m));
}

TEST_CASE("the protocol config derives support hardware from the fleet") {
    const Scenario s = canonical_scenario();
    const FleetSimConfig cfg = s.protocol_config();
    CHECK(cfg.n_rovers == s.protocol.n_rovers);
    CHECK(cfg.n_terminals == required_terminals(cfg.n_rovers));
    CHECK(cfg.n_modules == required_modules(cfg.n_rovers, cfg.n_terminals));
    CHECK(cfg.seed == s.seed);
}
