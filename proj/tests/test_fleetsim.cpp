#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "swapsim/errors.hpp"
#include "swapsim/fleet_sim.hpp"
#include "swapsim/fleet_spec.hpp"
#include "swapsim/scenario.hpp"

using namespace swapsim;

namespace {

const Scenario& ref() {
    static const Scenario s = canonical_scenario();
    return s;
}

}  // namespace

TEST_CASE("fleet size at the reference power draws") {
    FleetSpec f = ref().fleet;
    CHECK(fleet_size(f) == 88);
    f.p_rover_w = 900.0;
    CHECK(fleet_size(f) == 6);
    f.p_rover_w = 410.0;
    CHECK(fleet_size(f) == 13);
}

TEST_CASE("fleet size scales as expected with its inputs") {
    FleetSpec f = ref().fleet;
    const int base = fleet_size(f);
    f.p_gen_w *= 2.0;
    CHECK(fleet_size(f) >= 2 * base - 1);
    f = ref().fleet;
    f.p_hub_w = f.p_gen_w / 2.0;  // hub overhead eats half the budget
    CHECK(fleet_size(f) <= (base + 1) / 2 + 1);
    f = ref().fleet;
    f.p_gen_w = 0.1;
    CHECK(fleet_size(f) == 0);
}

TEST_CASE("terminal and module sizing for small fleets") {
    CHECK(required_terminals(1) == 2);
    CHECK(required_terminals(2) == 3);
    CHECK(required_modules(1, required_terminals(1)) == 2);
    CHECK(required_modules(2, required_terminals(2)) == 4);
    // One spare terminal/module beyond the rover count, always.
    for (int n = 1; n <= 6; ++n) {
        CHECK(required_terminals(n) == n + 1);
        CHECK(required_modules(n, required_terminals(n)) == n + n);
    }
}

TEST_CASE("return threshold covers the trip home plus the reserve") {
    const double thr =
        return_threshold_ah(ref().fleet, ref().protocol.work_distance_m,
                            ref().protocol.reserve_margin);
    // 25 m at 1 m/s and 31.08 W is ~0.0097 Ah; reserve is 0.28 Ah.
    CHECK(thr == doctest::Approx(0.2897).epsilon(1e-3));
    CHECK(thr < ref().fleet.q_b_ah);
    const double farther =
        return_threshold_ah(ref().fleet, 1000.0, ref().protocol.reserve_margin);
    CHECK(farther > thr);
}

TEST_CASE("reference run: 48 h, two rovers, no faults") {
    const FleetSimResult r = run_swap_sim(ref().protocol_config());
    CHECK(r.total_swaps == 52);
    CHECK(r.total_failures == 0);
    REQUIRE(r.rovers.size() == 2);
    for (const RoverStats& rs : r.rovers) {
        CHECK(rs.swaps_completed == 26);
        CHECK_FALSE(rs.stranded);
        CHECK(rs.mean_service_s == doctest::Approx(98.0).epsilon(1e-9));
    }
    CHECK(r.uptime(0) == doctest::Approx(0.9776).epsilon(1e-3));
    CHECK(r.uptime(1) == doctest::Approx(0.9770).epsilon(1e-3));
    REQUIRE(r.final_module_charge_ah.size() == 4);
    CHECK(r.final_module_charge_ah[0] == doctest::Approx(2.1490).epsilon(1e-3));
    CHECK(r.final_module_charge_ah[3] == doctest::Approx(1.6092).epsilon(1e-3));
}

TEST_CASE("nominal service time equals the sum of the stage durations") {
    const SwapDurations d;
    CHECK(d.total_s() == doctest::Approx(98.0));
    FleetSimConfig cfg = ref().protocol_config();
    cfg.sim_duration_s = 6.0 * 3600.0;
    const FleetSimResult r = run_swap_sim(cfg);
    for (const SwapEvent& e : r.events)
        if (e.kind == "swap_complete")
            CHECK(e.value == doctest::Approx(d.total_s()));
}

TEST_CASE("event replay reconstructs the final module inventory") {
    const FleetSimResult r = run_swap_sim(ref().protocol_config());
    const auto replayed = replay_module_charges(r.events, 4);
    REQUIRE(replayed.size() == r.final_module_charge_ah.size());
    for (std::size_t i = 0; i < replayed.size(); ++i)
        CHECK(replayed[i] ==
              doctest::Approx(r.final_module_charge_ah[i]).epsilon(1e-12));
}

TEST_CASE("identical configs replay identical event logs") {
    const FleetSimResult a = run_swap_sim(ref().protocol_config());
    const FleetSimResult b = run_swap_sim(ref().protocol_config());
    REQUIRE(a.events.size() == b.events.size());
    for (std::size_t i = 0; i < a.events.size(); ++i) {
        REQUIRE(a.events[i].time_s == b.events[i].time_s);
        REQUIRE(a.events[i].kind == b.events[i].kind);
        REQUIRE(a.events[i].rover_id == b.events[i].rover_id);
        REQUIRE(a.events[i].module_id == b.events[i].module_id);
        REQUIRE(a.events[i].value == b.events[i].value);
    }
}

TEST_CASE("module charges stay within physical bounds") {
    FleetSimConfig cfg = ref().protocol_config();
    cfg.failures.continuity_fail_prob = 0.05;
    cfg.failures.shift_jam_prob = 0.05;
    cfg.failures.aux_power_fail_prob = 0.02;
    const FleetSimResult r = run_swap_sim(cfg);
    for (double q : r.final_module_charge_ah) {
        REQUIRE(q >= -1e-9);
        REQUIRE(q <= cfg.fleet.q_b_ah + 1e-9);
    }
    // Time bookkeeping per rover adds up to the simulated horizon.
    for (const RoverStats& rs : r.rovers) {
        const double accounted = rs.field_time_s + rs.travel_time_s +
                                 rs.queue_time_s + rs.service_time_s;
        REQUIRE(accounted <= cfg.sim_duration_s + 1e-6);
    }
}

TEST_CASE("faults appear, are retried, and degrade uptime") {
    FleetSimConfig clean = ref().protocol_config();
    const double clean_uptime = run_swap_sim(clean).uptime(0);

    FleetSimConfig faulty = clean;
    faulty.failures.continuity_fail_prob = 0.2;
    faulty.failures.shift_jam_prob = 0.2;
    const FleetSimResult r = run_swap_sim(faulty);
    CHECK(r.total_failures > 0);
    int seen = 0;
    for (const SwapEvent& e : r.events) seen += e.kind == "failure";
    CHECK(seen == r.total_failures);
    CHECK(r.uptime(0) < clean_uptime);
    // Heavier faults under a different seed give a different history.
    FleetSimConfig other = faulty;
    other.seed = faulty.seed + 1;
    const FleetSimResult r2 = run_swap_sim(other);
    CHECK(r2.events.size() != r.events.size());
}

TEST_CASE("a single rover with minimal support keeps working") {
    FleetSimConfig cfg = ref().protocol_config();
    cfg.n_rovers = 1;
    cfg.n_terminals = required_terminals(1);
    cfg.n_modules = required_modules(1, cfg.n_terminals);
    cfg.sim_duration_s = 24.0 * 3600.0;
    const FleetSimResult r = run_swap_sim(cfg);
    CHECK(r.total_swaps == 13);
    CHECK(r.uptime(0) == doctest::Approx(0.977442).epsilon(1e-4));
    CHECK_FALSE(r.rovers[0].stranded);
}

TEST_CASE("configuration validation") {
    FleetSimConfig cfg = ref().protocol_config();
    cfg.n_rovers = 0;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg = ref().protocol_config();
    cfg.n_modules = cfg.n_rovers - 1;  // fewer modules than rovers
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg = ref().protocol_config();
    cfg.failures.continuity_fail_prob = 1.5;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    CHECK_NOTHROW(ref().protocol_config().validate());
}
