/**
 * End-to-end acceptance battery.  Each check covers one headline capability,
 * prints exactly one PASS/FAIL line with the measured numbers, and carries
 * its own wall-clock budget; blowing the budget fails the check.  The
 * process exits non-zero when any check fails, so this binary doubles as a
 * release gate under ctest.
 */

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "swapsim/coverage.hpp"
#include "swapsim/dock_geometry.hpp"
#include "swapsim/dock_sim.hpp"
#include "swapsim/fleet_sim.hpp"
#include "swapsim/fleet_spec.hpp"
#include "swapsim/guide_curve.hpp"
#include "swapsim/hull.hpp"
#include "swapsim/optimize.hpp"
#include "swapsim/rng.hpp"
#include "swapsim/scenario.hpp"
#include "swapsim/thermal.hpp"
#include "swapsim/units.hpp"

using namespace swapsim;

namespace {

constexpr int kWorkers = 4;

int g_failures = 0;

/// Run one named check under a wall-clock budget and print its verdict.
template <typename Fn>
void check(const std::string& name, double budget_s, Fn&& body) {
    std::string detail;
    bool ok = false;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        ok = false;
        detail = std::string("exception: ") + e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    if (elapsed > budget_s) {
        ok = false;
        detail += " [exceeded " + std::to_string(budget_s) + " s budget]";
    }
    std::printf("%s  %-24s %s  (%.2f s)\n", ok ? "PASS" : "FAIL", name.c_str(),
                detail.c_str(), elapsed);
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

std::string fmt(double v, int prec = 3) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*f", prec, v);
    return buf;
}

const Scenario& ref() {
    static const Scenario s = canonical_scenario();
    return s;
}

// ---- independent oracles -------------------------------------------------

/// Lens overlap of two equal disks via Simpson quadrature after the
/// substitution x = r sin(phi), which removes the endpoint singularity:
/// area = 4 r^2 * integral_{asin(d/2r)}^{pi/2} cos^2(phi) dphi.
double lens_overlap_quadrature(double r, double d) {
    if (d >= 2.0 * r) return 0.0;
    const double lo = std::asin(std::min(1.0, d / (2.0 * r)));
    const double hi = std::numbers::pi / 2.0;
    const int n = 2000;  // even
    const double h = (hi - lo) / n;
    auto f = [](double phi) {
        const double c = std::cos(phi);
        return c * c;
    };
    double sum = f(lo) + f(hi);
    for (int i = 1; i < n; ++i) sum += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
    return 4.0 * r * r * sum * h / 3.0;
}

/// Union area of n disks in a row by plain Monte-Carlo over the bounding box.
double chain_union_sampled(int n, double r, double d, std::uint64_t samples,
                           std::uint64_t seed) {
    const std::vector<Vec2> hubs = chain_hub_positions(n, d);
    const double x_lo = -r, x_hi = (n - 1) * d + r;
    const double y_lo = -r, y_hi = r;
    Rng rng(seed);
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < samples; ++i) {
        const double x = rng.uniform(x_lo, x_hi);
        const double y = rng.uniform(y_lo, y_hi);
        for (const Vec2& h : hubs) {
            const double dx = x - h.x, dy = y - h.y;
            if (dx * dx + dy * dy <= r * r) {
                ++hits;
                break;
            }
        }
    }
    return (x_hi - x_lo) * (y_hi - y_lo) * static_cast<double>(hits) /
           static_cast<double>(samples);
}

DockSim make_ref_sim(double theta, double weight, bool bumpers = false) {
    GuideCurve c = ref().curve;
    c.theta_deg = theta;
    c.weight = weight;
    RoverShape shape = ref().rover;
    shape.bumpers = bumpers;
    return DockSim(PortGeometry::from_curve(c, ref().hardstop_x_m,
                                            ref().max_chord_error_m),
                   shape.body(), ref().sim);
}

// ---- the checks ----------------------------------------------------------

bool check_rover_cooldown(std::string& detail) {
    const CoolingCurve c = simulate_cooldown(ref().thermal_rover, {});
    if (!c.crossed) {
        detail = "limit never reached";
        return false;
    }
    const double minutes = c.crossing_time_s / 60.0;
    const double closed = cooldown_closed_form_s(ref().thermal_rover);
    const double rel = std::abs(c.crossing_time_s - closed) / closed;
    detail = fmt(minutes) + " min, integrator vs closed form rel " +
             fmt(rel, 9);
    // 40 min nominal with 15 % slack, and the two solutions must agree.
    return minutes >= 34.0 && minutes <= 46.0 && rel <= 1e-3;
}

bool check_battery_cooldown(std::string& detail) {
    const CoolingCurve c = simulate_cooldown(ref().thermal_battery, {});
    if (!c.crossed) {
        detail = "limit never reached";
        return false;
    }
    const double minutes = c.crossing_time_s / 60.0;
    const double closed = cooldown_closed_form_s(ref().thermal_battery);
    const double rel = std::abs(c.crossing_time_s - closed) / closed;
    detail = fmt(minutes) + " min, integrator vs closed form rel " +
             fmt(rel, 9);
    // 8 min nominal with 15 % slack.
    return minutes >= 6.8 && minutes <= 9.2 && rel <= 1e-3;
}

bool check_fleet_sizing(std::string& detail) {
    FleetSpec f = ref().fleet;
    f.p_rover_w = 900.0;
    const int heavy = fleet_size(f);
    f.p_rover_w = 410.0;
    const int light = fleet_size(f);

    // Per-call cost must stay under a millisecond.
    const auto t0 = std::chrono::steady_clock::now();
    volatile int sink = 0;
    for (int i = 0; i < 1000; ++i) sink = sink + fleet_size(f);
    const double per_call =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count() /
        1000.0;

    detail = "900 W -> " + std::to_string(heavy) + ", 410 W -> " +
             std::to_string(light) + ", " + fmt(per_call * 1e6, 2) +
             " us/call";
    return std::abs(heavy - 6) <= 1 && std::abs(light - 13) <= 1 &&
           per_call < 1e-3;
}

bool check_coverage(std::string& detail) {
    // (a) closed-form lens vs quadrature, 100 random geometries.
    Rng rng(20260823);
    double worst_rel = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double r = rng.uniform(0.2, 50.0);
        const double d = rng.uniform(0.0, 1.9 * r);
        const double got = overlap_area_m2(r, d);
        const double want = lens_overlap_quadrature(r, d);
        worst_rel = std::max(worst_rel, std::abs(got - want) / want);
    }
    if (worst_rel > 1e-6) {
        detail = "lens mismatch, worst rel " + fmt(worst_rel, 9);
        return false;
    }
    // (b) chain closed form vs 1e7-sample union for several chain lengths.
    double worst_chain = 0.0;
    for (int n : {1, 2, 3, 5}) {
        const double want = chain_coverage_m2(n, 1.0, 1.0);
        const double got =
            chain_union_sampled(n, 1.0, 1.0, 10000000ull, 8800 + n);
        worst_chain = std::max(worst_chain, std::abs(got - want) / want);
    }
    if (worst_chain > 0.002) {
        detail = "chain union mismatch, worst rel " + fmt(worst_chain, 6);
        return false;
    }
    // (c) hex grid at sqrt(3) spacing leaves no gap at r/200 resolution.
    const double e = endurance_hours(ref().fleet.q_b_ah, ref().fleet.v_b_v,
                                     ref().fleet.p_rover_w);
    const double r = service_radius_m(ref().fleet.v_rover_mps, e);
    const std::vector<Vec2> hubs = hex_hub_positions(7, r * std::sqrt(3.0));
    if (!gapless(hubs, r, r / 200.0)) {
        detail = "hex grid shows gaps at sqrt(3) spacing";
        return false;
    }
    detail = "lens rel " + fmt(worst_rel, 9) + ", chain rel " +
             fmt(worst_chain, 6) + ", hex gap-free at r " + fmt(r, 0) + " m";
    return true;
}

bool check_region_ordering(std::string& detail) {
    DockSim base = make_ref_sim(90.0, 0.0);
    DockSim opt = make_ref_sim(ref().curve.theta_deg, ref().curve.weight);
    DockSim padded =
        make_ref_sim(ref().curve.theta_deg, ref().curve.weight, true);
    const Rng rng(ref().seed);
    const SuccessRegion r0 =
        monte_carlo_region(base, ref().monte_carlo, rng, kWorkers);
    const SuccessRegion r1 =
        monte_carlo_region(opt, ref().monte_carlo, rng, kWorkers);
    const SuccessRegion r2 =
        monte_carlo_region(padded, ref().monte_carlo, rng, kWorkers);
    const IterationReport rep = compare_iterations({r0, r1, r2});
    const double ratio =
        rep.ratios_defined ? rep.ratio_to_first.back() : 0.0;
    detail = "volumes " + fmt(rep.volumes[0], 4) + " -> " +
             fmt(rep.volumes[1], 4) + " -> " + fmt(rep.volumes[2], 4) +
             ", final/baseline " + fmt(ratio, 2);
    // Each design iteration must grow the region, and the final one must
    // beat the straight-wall baseline by a clear factor.
    return rep.ratios_defined && rep.inversions.empty() && ratio > 1.5;
}

bool check_capture_search(std::string& detail) {
    DockSim sim = make_ref_sim(ref().curve.theta_deg, ref().curve.weight);
    CompensationConfig cfg;
    cfg.axis = PerturbAxis::kYawDeg;
    cfg.upper = 90.0;
    cfg.tolerance = 0.05;
    const CompensationResult bin = max_compensation(sim, cfg);
    const auto pts = compensation_sweep(sim, PerturbAxis::kYawDeg,
                                        cfg.base_start, 1.0, 90.0, 0.1);
    const double swept = sweep_max_passing(pts);
    const double diff = std::abs(bin.max_positive - swept);
    detail = "bisection " + fmt(bin.max_positive, 4) + " deg vs 0.1-deg sweep " +
             fmt(swept, 1) + " deg, diff " + fmt(diff, 3) + ", " +
             std::to_string(bin.simulations) + " sims";
    return bin.monotonic && !bin.used_sweep_fallback &&
           bin.max_positive >= 10.0 && bin.max_positive <= 35.0 &&
           diff <= 0.1;
}

bool check_exchange_protocol(std::string& detail) {
    const FleetSimResult r = run_swap_sim(ref().protocol_config());
    double service = 0.0;
    for (const RoverStats& rs : r.rovers) service += rs.service_time_s;
    const double mean = r.total_swaps > 0 ? service / r.total_swaps : -1.0;

    FleetSimConfig solo = ref().protocol_config();
    solo.n_rovers = 1;
    solo.n_terminals = required_terminals(1);
    solo.n_modules = required_modules(1, solo.n_terminals);
    solo.sim_duration_s = 24.0 * 3600.0;
    const FleetSimResult lone = run_swap_sim(solo);
    const double uptime = lone.uptime(0);

    detail = std::to_string(r.total_swaps) + " swaps, " +
             std::to_string(r.total_failures) + " failures, mean service " +
             fmt(mean, 2) + " s; solo 24 h uptime " + fmt(uptime, 4);
    return r.total_swaps >= 50 && r.total_failures == 0 &&
           std::abs(mean - 98.0) <= 1.0 && uptime >= 0.97;
}

bool property_hulls() {
    Rng rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        PointCloud3 cloud;
        const int n = 20 + static_cast<int>(rng.uniform_index(60));
        for (int i = 0; i < n; ++i)
            cloud.points.push_back({rng.uniform(-1.0, 1.0),
                                    rng.uniform(-1.0, 1.0),
                                    rng.uniform(-1.0, 1.0)});
        const Hull3 hull = quickhull3(cloud);
        if (hull.degenerate) return false;
        for (const Vec3& p : cloud.points)
            if (!hull_contains(hull, cloud, p, 1e-7)) return false;

        // Growing the cloud can only grow the hull.
        PointCloud3 grown = cloud;
        for (int i = 0; i < 8; ++i)
            grown.points.push_back({rng.uniform(-1.1, 1.1),
                                    rng.uniform(-1.1, 1.1),
                                    rng.uniform(-1.1, 1.1)});
        if (quickhull3(grown).volume < hull.volume - 1e-12) return false;

        // Rotation about z preserves volume.
        const double a = rng.uniform(0.0, 2.0 * std::numbers::pi);
        const double ca = std::cos(a), sa = std::sin(a);
        PointCloud3 rotated;
        for (const Vec3& p : cloud.points)
            rotated.points.push_back(
                {ca * p.x - sa * p.y, sa * p.x + ca * p.y, p.z});
        const double turned = quickhull3(rotated).volume;
        if (std::abs(turned - hull.volume) > 1e-9 * hull.volume) return false;
    }
    return true;
}

bool property_docking(int& mismatches) {
    DockSim sim = make_ref_sim(ref().curve.theta_deg, ref().curve.weight);
    mismatches = 0;
    int idx = 0;
    for (int iy = 0; iy < 25; ++iy) {
        for (int iw = 0; iw < 20; ++iw) {
            const double y = 0.002 + 0.006 * iy;      // up to 0.146 m
            const double yaw = -38.0 + 4.0 * iw;      // +/- 38 deg
            const DockResult a = sim.simulate_entry({-0.3, y, yaw});
            const DockResult b = sim.simulate_entry({-0.3, -y, -yaw});
            if (a.outcome != b.outcome) ++mismatches;
            // Spot-check determinism on a subset.
            if (++idx % 10 == 0) {
                const DockResult c = sim.simulate_entry({-0.3, y, yaw});
                if (c.outcome != a.outcome || c.steps != a.steps ||
                    c.final_pose.y_lateral != a.final_pose.y_lateral)
                    ++mismatches;
            }
        }
    }
    return mismatches == 0;
}

bool property_protocol() {
    // Event replay must reconstruct the final inventory, clean or faulty.
    for (double p : {0.0, 0.15}) {
        FleetSimConfig cfg = ref().protocol_config();
        cfg.failures.continuity_fail_prob = p;
        cfg.failures.shift_jam_prob = p;
        const FleetSimResult r = run_swap_sim(cfg);
        const auto replayed =
            replay_module_charges(r.events, cfg.n_modules);
        if (replayed.size() != r.final_module_charge_ah.size()) return false;
        for (std::size_t i = 0; i < replayed.size(); ++i)
            if (std::abs(replayed[i] - r.final_module_charge_ah[i]) > 1e-9)
                return false;
        int swaps = 0;
        for (const RoverStats& rs : r.rovers) swaps += rs.swaps_completed;
        if (swaps != r.total_swaps) return false;
        for (double q : r.final_module_charge_ah)
            if (q < -1e-9 || q > cfg.fleet.q_b_ah + 1e-9) return false;
    }
    return true;
}

bool property_scenarios() {
    Scenario s = ref();
    for (int i = 0; i < 5; ++i) {
        s.seed = 1000 + 17 * i;
        s.curve.weight = 0.1 * i;
        s.monte_carlo.sd_yaw_deg = 4.0 + i;
        const std::string text = scenario_text(s);
        std::istringstream in(text);
        if (scenario_text(load_scenario(in)) != text) return false;
    }
    return true;
}

bool check_property_suites(std::string& detail) {
    const bool hulls = property_hulls();
    int mirror_mismatches = -1;
    const bool docking = property_docking(mirror_mismatches);
    const bool protocol = property_protocol();
    const bool scenarios = property_scenarios();
    detail = std::string("hulls ") + (hulls ? "ok" : "FAIL") +
             ", docking mirror/determinism " +
             (docking ? "ok" : "FAIL (" +
                                   std::to_string(mirror_mismatches) +
                                   " mismatches)") +
             ", protocol replay " + (protocol ? "ok" : "FAIL") +
             ", scenario round-trip " + (scenarios ? "ok" : "FAIL");
    return hulls && docking && protocol && scenarios;
}

}  // namespace

int main() {
    std::printf("acceptance battery: reference scenario %s, seed %llu\n",
                ref().name.c_str(),
                static_cast<unsigned long long>(ref().seed));

    check("rover-cooldown", 1.0, check_rover_cooldown);
    check("battery-cooldown", 1.0, check_battery_cooldown);
    check("fleet-sizing", 1.0, check_fleet_sizing);
    check("coverage-geometry", 120.0, check_coverage);
    check("region-ordering", 600.0, check_region_ordering);
    check("capture-search", 60.0, check_capture_search);
    check("exchange-protocol", 5.0, check_exchange_protocol);
    check("property-suites", 300.0, check_property_suites);

    if (g_failures == 0) {
        std::printf("all 8 checks passed\n");
        return 0;
    }
    std::printf("%d check(s) FAILED\n", g_failures);
    return 1;
}
