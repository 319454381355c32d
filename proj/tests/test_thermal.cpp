#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "swapsim/errors.hpp"
#include "swapsim/scenario.hpp"
#include "swapsim/thermal.hpp"
#include "swapsim/thermal_body.hpp"
#include "swapsim/units.hpp"

using namespace swapsim;

TEST_CASE("radiated power follows the fourth-power law") {
    ThermalBody b;
    b.name = "probe";
    b.mass_kg = 2.0;
    b.specific_heat = 900.0;
    b.area_m2 = 1.302;
    b.emissivity = 0.85;
    b.t_initial_k = 300.0;
    b.t_limit_k = 250.0;
    const double expect =
        0.85 * kStefanBoltzmann * 1.302 * std::pow(300.0, 4);
    CHECK(radiated_power_w(b, 300.0) == doctest::Approx(expect));
    // A warm environment pushes power back.
    b.t_ambient_k = 250.0;
    const double with_env = radiated_power_w(b, 300.0);
    CHECK(with_env < expect);
    CHECK(with_env ==
          doctest::Approx(0.85 * kStefanBoltzmann * 1.302 *
                          (std::pow(300.0, 4) - std::pow(250.0, 4))));
}

TEST_CASE("integrator matches the closed form for cooling to vacuum") {
    const Scenario s = canonical_scenario();
    for (const ThermalBody* b : {&s.thermal_rover, &s.thermal_battery}) {
        const CoolingCurve curve = simulate_cooldown(*b, {});
        REQUIRE(curve.crossed);
        const double closed = cooldown_closed_form_s(*b);
        CHECK(std::abs(curve.crossing_time_s - closed) / closed < 1e-3);
    }
}

TEST_CASE("reference bodies hit their limits at the expected times") {
    const Scenario s = canonical_scenario();
    const CoolingCurve rover = simulate_cooldown(s.thermal_rover, {});
    REQUIRE(rover.crossed);
    CHECK(rover.crossing_time_s == doctest::Approx(2064.356).epsilon(1e-4));
    const CoolingCurve battery = simulate_cooldown(s.thermal_battery, {});
    REQUIRE(battery.crossed);
    CHECK(battery.crossing_time_s == doctest::Approx(480.076).epsilon(1e-4));
}

TEST_CASE("temperature decreases monotonically while above ambient") {
    const Scenario s = canonical_scenario();
    const CoolingCurve c = simulate_cooldown(s.thermal_rover, {});
    REQUIRE(c.time_s.size() == c.temp_k.size());
    REQUIRE(c.time_s.size() >= 2);
    CHECK(c.time_s.front() == 0.0);
    for (std::size_t i = 1; i < c.temp_k.size(); ++i) {
        REQUIRE(c.temp_k[i] < c.temp_k[i - 1]);
        REQUIRE(c.time_s[i] > c.time_s[i - 1]);
    }
    // The crossing is bracketed by the recorded samples.
    CHECK(c.crossing_time_s <= c.time_s.back());
    CHECK(c.temp_k.back() <= s.thermal_rover.t_limit_k + 1e-9);
}

TEST_CASE("step refinement does not move the crossing") {
    const Scenario s = canonical_scenario();
    ThermalParams coarse;
    coarse.step_s = 2.0;
    ThermalParams fine;
    fine.step_s = 0.25;
    const double a = simulate_cooldown(s.thermal_battery, coarse).crossing_time_s;
    const double b = simulate_cooldown(s.thermal_battery, fine).crossing_time_s;
    CHECK(std::abs(a - b) < 0.05);
}

TEST_CASE("a warm environment slows cooling and can prevent crossing") {
    ThermalBody b;
    b.name = "box";
    b.mass_kg = 1.0;
    b.specific_heat = 900.0;
    b.area_m2 = 0.5;
    b.emissivity = 1.0;
    b.t_initial_k = 320.0;
    b.t_ambient_k = 0.0;
    b.t_limit_k = 260.0;
    const double vacuum = simulate_cooldown(b, {}).crossing_time_s;

    b.t_ambient_k = 200.0;
    const CoolingCurve warm = simulate_cooldown(b, {});
    REQUIRE(warm.crossed);
    CHECK(warm.crossing_time_s > vacuum);

    // Radiative equilibrium sits at the ambient temperature, so a limit
    // below it is never reached.
    b.t_limit_k = 180.0;
    ThermalParams cap;
    cap.max_time_s = 20000.0;
    const CoolingCurve never = simulate_cooldown(b, cap);
    CHECK_FALSE(never.crossed);
    CHECK(never.temp_k.back() > 200.0);
}

TEST_CASE("invalid bodies and parameters are rejected") {
    ThermalBody b;
    b.name = "bad";
    b.mass_kg = -1.0;
    b.specific_heat = 900.0;
    b.area_m2 = 1.0;
    b.emissivity = 1.0;
    b.t_initial_k = 300.0;
    b.t_limit_k = 250.0;
    CHECK_THROWS_AS(b.validate(), ValidationError);
    b.mass_kg = 1.0;
    b.emissivity = 1.5;
    CHECK_THROWS_AS(b.validate(), ValidationError);
    b.emissivity = 1.0;
    CHECK_NOTHROW(b.validate());

    // Closed form needs a limit at or below the start and vacuum outside.
    ThermalBody warm = b;
    warm.t_limit_k = 400.0;
    CHECK_THROWS_AS(cooldown_closed_form_s(warm), std::domain_error);
}
