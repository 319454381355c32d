/**
 * swapsim — command-line front end for the battery-swap rover toolkit.
 *
 * Subcommands:
 *   curve      evaluate / export a docking-guide wall curve
 *   dock       run one quasi-static docking entry
 *   optimize   grid-search guide shapes and map Monte-Carlo success regions
 *   coverage   hub-network coverage areas and gap checks
 *   thermal    radiative cooldown of a body to its temperature limit
 *   fleet      discrete-event simulation of the exchange protocol
 *   reproduce  run the reference scenario end to end and check the headline
 *              numbers against their expected values
 *
 * Exit codes: 0 success, 1 invalid input (bad flags, malformed scenario,
 * values out of range), 2 runtime failure (unwritable output, I/O error).
 *
 * The random seed is taken from the scenario file, then overridden by the
 * SWAPSIM_SEED environment variable, then by an explicit --seed flag.
 * Every file-producing command drops a manifest.json next to its outputs;
 * two runs with identical inputs produce identical files except for the
 * manifest timestamp.
 */

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "swapsim/coverage.hpp"
#include "swapsim/dock_geometry.hpp"
#include "swapsim/dock_sim.hpp"
#include "swapsim/errors.hpp"
#include "swapsim/fleet_sim.hpp"
#include "swapsim/fleet_spec.hpp"
#include "swapsim/guide_curve.hpp"
#include "swapsim/hull.hpp"
#include "swapsim/optimize.hpp"
#include "swapsim/rng.hpp"
#include "swapsim/scenario.hpp"
#include "swapsim/thermal.hpp"
#include "swapsim/thermal_body.hpp"
#include "swapsim/units.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace swapsim;

namespace {

constexpr const char* kToolVersion = "1.0.0";

/// Reconstructed invocation, recorded in manifests.
std::string g_command_line;

// --------------------------------------------------------------------------
// formatting helpers
// --------------------------------------------------------------------------

std::string fmt_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string fmt_f(double v, int prec) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*f", prec, v);
    return buf;
}

std::string hex16(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(v));
    return buf;
}

/// RFC-4180 quoting; always quoted so embedded commas/quotes are safe.
std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

std::string iso8601_utc_now() {
    const std::time_t now =
        std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// --------------------------------------------------------------------------
// output helpers
// --------------------------------------------------------------------------

std::ofstream open_output(const fs::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw std::runtime_error("cannot open output file: " + path.string());
    return os;
}

/// Create `dir` if needed and prove it is writable (probe file).
void ensure_writable_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    // create_directories on an existing dir is fine; writability is what we
    // actually need, so probe with a real file.
    const fs::path probe = dir / ".swapsim_write_probe";
    {
        std::ofstream os(probe);
        if (!os)
            throw std::runtime_error("output directory not writable: " +
                                     dir.string());
    }
    fs::remove(probe, ec);
}

void write_manifest(const fs::path& dir, const Scenario& s,
                    std::uint64_t seed, std::vector<std::string> outputs) {
    std::sort(outputs.begin(), outputs.end());
    ordered_json m;
    m["command"] = g_command_line;
    m["scenario"] = s.name;
    m["scenario_hash"] = hex16(scenario_hash(s));
    m["seed"] = seed;
    m["tool_version"] = kToolVersion;
    m["timestamp_utc"] = iso8601_utc_now();
    m["outputs"] = outputs;
    auto os = open_output(dir / "manifest.json");
    os << m.dump(2) << "\n";
}

// --------------------------------------------------------------------------
// shared option handling
// --------------------------------------------------------------------------

/// scenario.seed < SWAPSIM_SEED env < --seed flag.
std::uint64_t resolve_seed(const Scenario& s, bool flag_given,
                           std::uint64_t flag_value) {
    std::uint64_t seed = s.seed;
    if (const char* env = std::getenv("SWAPSIM_SEED")) {
        char* end = nullptr;
        errno = 0;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (errno != 0 || end == env || *end != '\0')
            throw ValidationError(
                "SWAPSIM_SEED must be an unsigned integer, got \"" +
                std::string(env) + "\"");
        seed = v;
    }
    if (flag_given) seed = flag_value;
    return seed;
}

int resolve_jobs(int jobs) {
    if (jobs > 0) return jobs;
    const unsigned hc = std::thread::hardware_concurrency();
    return static_cast<int>(std::clamp(hc, 1u, 8u));
}

// --------------------------------------------------------------------------
// curve
// --------------------------------------------------------------------------

struct CurveOpts {
    std::string scenario = "canonical";
    double theta_deg = 0.0;
    bool theta_set = false;
    double weight = 0.0;
    bool weight_set = false;
    std::string emit;
};

int run_curve(const CurveOpts& o) {
    Scenario s = resolve_scenario(o.scenario);
    if (o.theta_set) s.curve.theta_deg = o.theta_deg;
    if (o.weight_set) s.curve.weight = o.weight;

    const auto cp = s.curve.control_points();
    const Polyline2D poly = s.curve.discretize(s.max_chord_error_m);

    std::cout << "guide curve: theta = " << fmt_g(s.curve.theta_deg)
              << " deg, weight = " << fmt_g(s.curve.weight) << "\n";
    std::cout << "  mouth halfwidth  " << fmt_g(s.curve.mouth_halfwidth_m)
              << " m\n";
    std::cout << "  throat halfwidth " << fmt_g(s.curve.throat_halfwidth_m)
              << " m\n";
    std::cout << "  depth            " << fmt_g(s.curve.depth_m) << " m\n";
    std::cout << "  control points   P0=(" << fmt_g(cp[0].x) << ", "
              << fmt_g(cp[0].y) << ")  P1=(" << fmt_g(cp[1].x) << ", "
              << fmt_g(cp[1].y) << ")  P2=(" << fmt_g(cp[2].x) << ", "
              << fmt_g(cp[2].y) << ")\n";
    std::cout << "  polyline         " << poly.vertices.size()
              << " vertices at max chord error " << fmt_g(s.max_chord_error_m)
              << " m\n";

    if (!o.emit.empty()) {
        auto os = open_output(o.emit);
        os << "x_m,y_m\n";
        for (const Vec2& p : poly.vertices)
            os << fmt_g(p.x) << "," << fmt_g(p.y) << "\n";
        std::cout << "wrote " << poly.vertices.size() << " vertices to "
                  << o.emit << "\n";
    }
    return 0;
}

// --------------------------------------------------------------------------
// dock
// --------------------------------------------------------------------------

struct DockOpts {
    std::string scenario = "canonical";
    std::string start;
    std::string trajectory;
};

int run_dock(const DockOpts& o) {
    double x = 0.0, y = 0.0, yaw = 0.0;
    int consumed = 0;
    if (std::sscanf(o.start.c_str(), " %lf , %lf , %lf %n", &x, &y, &yaw,
                    &consumed) != 3 ||
        o.start[static_cast<std::size_t>(consumed)] != '\0')
        throw ValidationError("--start must be \"x,y,yaw\" (m, m, deg), got \"" +
                              o.start + "\"");

    Scenario s = resolve_scenario(o.scenario);
    SimParams params = s.sim;
    if (!o.trajectory.empty()) params.record_trajectory = true;

    DockSim sim(s.port(), s.rover.body(), params);
    const DockResult r = sim.simulate_entry(Pose2D{x, y, yaw});

    std::cout << "start pose: x = " << fmt_g(x) << " m, y = " << fmt_g(y)
              << " m, yaw = " << fmt_g(yaw) << " deg\n";
    std::cout << "outcome: " << to_string(r.outcome) << " after " << r.steps
              << " steps\n";
    std::cout << "final pose: x = " << fmt_g(r.final_pose.x_axial)
              << " m, y = " << fmt_g(r.final_pose.y_lateral)
              << " m, yaw = " << fmt_g(r.final_pose.yaw_deg) << " deg\n";
    if (!r.detail.empty()) std::cout << "detail: " << r.detail << "\n";

    if (!o.trajectory.empty()) {
        auto os = open_output(o.trajectory);
        os << "step,x_m,y_m,yaw_deg\n";
        for (std::size_t i = 0; i < r.trajectory.size(); ++i) {
            const Pose2D& p = r.trajectory[i];
            os << i << "," << fmt_g(p.x_axial) << "," << fmt_g(p.y_lateral)
               << "," << fmt_g(p.yaw_deg) << "\n";
        }
        std::cout << "trajectory: wrote " << r.trajectory.size()
                  << " poses to " << o.trajectory << "\n";
    }
    return 0;
}

// --------------------------------------------------------------------------
// optimize
// --------------------------------------------------------------------------

struct OptimizeOpts {
    std::string scenario = "canonical";
    std::string grid;  ///< "theta-step,weight-step", empty = default grid
    std::string out;
    int jobs = 0;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

/// Monte-Carlo success regions for baseline (straight funnel), the winning
/// curve, and the winning curve with the bumper nose fitted.  All three use
/// the same root generator, so every design sees the same start offsets.
struct RegionTriple {
    SuccessRegion baseline;
    SuccessRegion optimized;
    SuccessRegion bumpers;
    IterationReport report;
};

RegionTriple run_region_triple(const Scenario& s, const GuideCurve& winner,
                               std::uint64_t seed, int jobs) {
    GuideCurve base_curve = s.curve;
    base_curve.theta_deg = 90.0;
    base_curve.weight = 0.0;

    RoverShape plain = s.rover;
    plain.bumpers = false;
    RoverShape padded = s.rover;
    padded.bumpers = true;

    const Rng rng(seed);
    RegionTriple t;
    {
        DockSim sim(PortGeometry::from_curve(base_curve, s.hardstop_x_m,
                                             s.max_chord_error_m),
                    plain.body(), s.sim);
        t.baseline = monte_carlo_region(sim, s.monte_carlo, rng, jobs);
    }
    {
        DockSim sim(PortGeometry::from_curve(winner, s.hardstop_x_m,
                                             s.max_chord_error_m),
                    plain.body(), s.sim);
        t.optimized = monte_carlo_region(sim, s.monte_carlo, rng, jobs);
    }
    {
        DockSim sim(PortGeometry::from_curve(winner, s.hardstop_x_m,
                                             s.max_chord_error_m),
                    padded.body(), s.sim);
        t.bumpers = monte_carlo_region(sim, s.monte_carlo, rng, jobs);
    }
    t.report = compare_iterations({t.baseline, t.optimized, t.bumpers});
    return t;
}

int run_optimize(const OptimizeOpts& o) {
    Scenario s = resolve_scenario(o.scenario);
    const std::uint64_t seed = resolve_seed(s, o.seed_set, o.seed);
    const int jobs = resolve_jobs(o.jobs);
    const fs::path out(o.out);
    ensure_writable_dir(out);

    GridSearchConfig gcfg = GridSearchConfig::default_grid(
        s.curve, s.hardstop_x_m, s.rover.body());
    gcfg.sim_params = s.sim;
    gcfg.max_chord_error_m = s.max_chord_error_m;
    gcfg.workers = jobs;
    if (!o.grid.empty()) {
        double theta_step = 0.0, weight_step = 0.0;
        int consumed = 0;
        if (std::sscanf(o.grid.c_str(), " %lf , %lf %n", &theta_step,
                        &weight_step, &consumed) != 2 ||
            o.grid[static_cast<std::size_t>(consumed)] != '\0')
            throw ValidationError(
                "--grid must be \"theta-step,weight-step\", got \"" + o.grid +
                "\"");
        if (!(theta_step > 0.0) || theta_step > 90.0)
            throw ValidationError("--grid theta step must be in (0, 90]");
        if (!(weight_step > 0.0) || weight_step > 1.0)
            throw ValidationError("--grid weight step must be in (0, 1]");
        gcfg.theta_values_deg.clear();
        for (double v = 0.0; v <= 90.0 + 1e-9; v += theta_step)
            gcfg.theta_values_deg.push_back(std::min(v, 90.0));
        gcfg.weight_values.clear();
        for (double v = 0.0; v <= 1.0 + 1e-9; v += weight_step)
            gcfg.weight_values.push_back(std::min(v, 1.0));
    }

    std::cerr << "grid search: " << gcfg.theta_values_deg.size() << " x "
              << gcfg.weight_values.size() << " cells, " << jobs
              << " worker(s)\n";
    const GridSearchResult grid = grid_search(gcfg);
    if (grid.best_index < 0)
        throw std::runtime_error("grid search found no valid guide shape");
    const GridCell& best = grid.cells[static_cast<std::size_t>(grid.best_index)];

    GuideCurve winner = s.curve;
    winner.theta_deg = best.theta_deg;
    winner.weight = best.weight;

    // Capture limits of the winner along each axis, via bisection.
    DockSim winner_sim(PortGeometry::from_curve(winner, s.hardstop_x_m,
                                                s.max_chord_error_m),
                       s.rover.body(), s.sim);
    const CompensationResult yaw_comp = max_compensation(winner_sim, gcfg.yaw);
    const CompensationResult lat_comp =
        max_compensation(winner_sim, gcfg.lateral);

    std::cerr << "monte-carlo regions: " << s.monte_carlo.n_samples
              << " samples x 3 designs\n";
    const RegionTriple triple = run_region_triple(s, winner, seed, jobs);

    // ---- files ----
    std::vector<std::string> outputs;
    {
        auto os = open_output(out / "ranking.csv");
        os << "rank,theta_deg,weight,max_yaw_deg,max_lateral_m,score,valid,"
              "simulations,note\n";
        for (std::size_t i = 0; i < grid.ranking.size(); ++i) {
            const GridCell& c =
                grid.cells[static_cast<std::size_t>(grid.ranking[i])];
            os << (i + 1) << "," << fmt_g(c.theta_deg) << "," << fmt_g(c.weight)
               << "," << fmt_g(c.max_yaw_deg) << "," << fmt_g(c.max_lateral_m)
               << "," << fmt_g(c.score) << "," << (c.valid ? 1 : 0) << ","
               << c.simulations << "," << csv_quote(c.note) << "\n";
        }
        outputs.push_back("ranking.csv");
    }
    {
        auto os = open_output(out / "optimal_curve.csv");
        os << "x_m,y_m\n";
        for (const Vec2& p : winner.discretize(s.max_chord_error_m).vertices)
            os << fmt_g(p.x) << "," << fmt_g(p.y) << "\n";
        outputs.push_back("optimal_curve.csv");
    }
    {
        // Success cloud of the final design (winning curve + bumpers).
        auto os = open_output(out / "success_region.csv");
        const PointCloud3& cloud = triple.bumpers.pass_cloud;
        os << cloud.axis_labels[0] << "," << cloud.axis_labels[1] << ","
           << cloud.axis_labels[2] << "\n";
        for (const Vec3& p : cloud.points)
            os << fmt_g(p.x) << "," << fmt_g(p.y) << "," << fmt_g(p.z) << "\n";
        outputs.push_back("success_region.csv");
    }
    {
        auto os = open_output(out / "success_region_hull.off");
        write_off(triple.bumpers.hull, triple.bumpers.pass_cloud, os);
        outputs.push_back("success_region_hull.off");
    }

    ordered_json summary;
    summary["scenario"] = s.name;
    summary["scenario_hash"] = hex16(scenario_hash(s));
    summary["seed"] = seed;
    {
        ordered_json g;
        g["theta_values"] = gcfg.theta_values_deg.size();
        g["weight_values"] = gcfg.weight_values.size();
        g["total_simulations"] = grid.total_simulations;
        ordered_json b;
        b["theta_deg"] = best.theta_deg;
        b["weight"] = best.weight;
        b["max_yaw_deg"] = best.max_yaw_deg;
        b["max_lateral_m"] = best.max_lateral_m;
        b["score"] = best.score;
        g["best"] = b;
        summary["grid"] = g;
    }
    {
        ordered_json c;
        c["max_yaw_deg"] = yaw_comp.max_magnitude;
        c["yaw_monotonic"] = yaw_comp.monotonic;
        c["max_lateral_m"] = lat_comp.max_magnitude;
        c["lateral_monotonic"] = lat_comp.monotonic;
        c["simulations"] = yaw_comp.simulations + lat_comp.simulations;
        summary["compensation"] = c;
    }
    {
        const char* names[3] = {"baseline", "optimized", "optimized_bumpers"};
        ordered_json arr = ordered_json::array();
        for (std::size_t i = 0; i < 3; ++i) {
            ordered_json it;
            it["name"] = names[i];
            it["volume"] = triple.report.volumes[i];
            it["passed"] = triple.report.passed[i];
            if (triple.report.ratios_defined)
                it["ratio_to_baseline"] = triple.report.ratio_to_first[i];
            arr.push_back(it);
        }
        summary["iterations"] = arr;
        summary["ordering_ok"] = triple.report.inversions.empty();
        if (triple.report.ratios_defined)
            summary["final_to_baseline_ratio"] =
                triple.report.ratio_to_first.back();
    }
    {
        auto os = open_output(out / "summary.json");
        os << summary.dump(2) << "\n";
        outputs.push_back("summary.json");
    }
    write_manifest(out, s, seed, outputs);

    // ---- console ----
    std::cout << "best guide: theta = " << fmt_g(best.theta_deg)
              << " deg, weight = " << fmt_g(best.weight) << " (score "
              << fmt_f(best.score, 4) << ", " << grid.total_simulations
              << " grid simulations)\n";
    std::cout << "capture limits: yaw " << fmt_f(yaw_comp.max_magnitude, 2)
              << " deg, lateral " << fmt_f(lat_comp.max_magnitude, 4)
              << " m\n";
    std::cout << "success-region volumes (n = " << s.monte_carlo.n_samples
              << " samples each):\n";
    const char* names[3] = {"baseline", "optimized", "optimized+bumpers"};
    for (std::size_t i = 0; i < 3; ++i) {
        std::cout << "  " << names[i] << ": volume "
                  << fmt_f(triple.report.volumes[i], 4) << " ("
                  << triple.report.passed[i] << " passes";
        if (triple.report.ratios_defined)
            std::cout << ", x" << fmt_f(triple.report.ratio_to_first[i], 2)
                      << " vs baseline";
        std::cout << ")\n";
    }
    std::cout << "ordering "
              << (triple.report.inversions.empty() ? "monotone" : "VIOLATED")
              << "; wrote " << outputs.size() + 1 << " files to " << o.out
              << "\n";
    return 0;
}

// --------------------------------------------------------------------------
// coverage
// --------------------------------------------------------------------------

struct CoverageOpts {
    std::string scenario = "canonical";
    std::string topology = "hex";
    int hubs = 3;
    double spacing_m = 0.0;  ///< 0 = topology default
    std::string out;
};

int run_coverage(const CoverageOpts& o) {
    Scenario s = resolve_scenario(o.scenario);
    if (o.topology != "chain" && o.topology != "hex")
        throw ValidationError("--topology must be chain or hex, got \"" +
                              o.topology + "\"");
    if (o.hubs < 1) throw ValidationError("--hubs must be >= 1");

    const double endurance_h = endurance_hours(
        s.fleet.q_b_ah, s.fleet.v_b_v, s.fleet.p_rover_w);
    const double r = service_radius_m(s.fleet.v_rover_mps, endurance_h);
    double d = o.spacing_m;
    if (d <= 0.0) d = (o.topology == "hex") ? r * std::sqrt(3.0) : r;

    const bool hex = o.topology == "hex";
    const std::vector<Vec2> hubs =
        hex ? hex_hub_positions(o.hubs, d) : chain_hub_positions(o.hubs, d);
    const double area = hex ? hex_coverage_m2(o.hubs, r, d)
                            : chain_coverage_m2(o.hubs, r, d);
    const double pair_overlap = overlap_area_m2(r, d);
    const bool no_gaps = gapless(hubs, r, r / 200.0);

    std::cout << "topology: " << o.topology << ", " << o.hubs << " hub(s)\n";
    std::cout << "  endurance        " << fmt_f(endurance_h, 3) << " h\n";
    std::cout << "  service radius   " << fmt_f(r, 1) << " m\n";
    std::cout << "  hub spacing      " << fmt_f(d, 1) << " m\n";
    std::cout << "  single-disk area " << fmt_g(std::numbers::pi * r * r)
              << " m^2\n";
    std::cout << "  adjacent overlap " << fmt_g(pair_overlap) << " m^2\n";
    std::cout << "  total coverage   " << fmt_g(area) << " m^2\n";
    std::cout << "  gap-free         " << (no_gaps ? "yes" : "no") << "\n";
    std::cout << "hub positions:\n";
    for (std::size_t i = 0; i < hubs.size(); ++i)
        std::cout << "  hub " << i << ": (" << fmt_f(hubs[i].x, 1) << ", "
                  << fmt_f(hubs[i].y, 1) << ") m\n";

    if (!o.out.empty()) {
        const fs::path out(o.out);
        ensure_writable_dir(out);
        std::vector<std::string> outputs;
        {
            auto os = open_output(out / "hubs.csv");
            os << "hub,x_m,y_m\n";
            for (std::size_t i = 0; i < hubs.size(); ++i)
                os << i << "," << fmt_g(hubs[i].x) << "," << fmt_g(hubs[i].y)
                   << "\n";
            outputs.push_back("hubs.csv");
        }
        {
            auto os = open_output(out / "boundary.csv");
            os << "hub,x_m,y_m\n";
            constexpr int kArcPoints = 128;
            for (std::size_t i = 0; i < hubs.size(); ++i) {
                for (int k = 0; k < kArcPoints; ++k) {
                    const double a = 2.0 * std::numbers::pi * k / kArcPoints;
                    os << i << "," << fmt_g(hubs[i].x + r * std::cos(a)) << ","
                       << fmt_g(hubs[i].y + r * std::sin(a)) << "\n";
                }
            }
            outputs.push_back("boundary.csv");
        }
        {
            ordered_json j;
            j["scenario"] = s.name;
            j["scenario_hash"] = hex16(scenario_hash(s));
            j["topology"] = o.topology;
            j["hubs"] = o.hubs;
            j["endurance_h"] = endurance_h;
            j["service_radius_m"] = r;
            j["spacing_m"] = d;
            j["adjacent_overlap_m2"] = pair_overlap;
            j["coverage_m2"] = area;
            j["gapless"] = no_gaps;
            auto os = open_output(out / "coverage.json");
            os << j.dump(2) << "\n";
            outputs.push_back("coverage.json");
        }
        write_manifest(out, s, s.seed, outputs);
        std::cout << "wrote " << outputs.size() + 1 << " files to " << o.out
                  << "\n";
    }
    return 0;
}

// --------------------------------------------------------------------------
// thermal
// --------------------------------------------------------------------------

struct ThermalOpts {
    std::string scenario = "canonical";
    std::string body;
    std::string emit;
    double step_s = 1.0;
};

int run_thermal(const ThermalOpts& o) {
    Scenario s = resolve_scenario(o.scenario);
    const ThermalBody* body = nullptr;
    if (o.body == "rover") body = &s.thermal_rover;
    else if (o.body == "battery") body = &s.thermal_battery;
    else
        throw ValidationError("--body must be rover or battery, got \"" +
                              o.body + "\"");
    if (!(o.step_s > 0.0)) throw ValidationError("--step-s must be > 0");

    ThermalParams params;
    params.step_s = o.step_s;
    const CoolingCurve curve = simulate_cooldown(*body, params);

    const double to_c = 273.15;
    std::cout << "body: " << body->name << " (" << fmt_g(body->mass_kg)
              << " kg, " << fmt_g(body->area_m2) << " m^2, emissivity "
              << fmt_g(body->emissivity) << ")\n";
    std::cout << "  initial " << fmt_f(body->t_initial_k, 2) << " K ("
              << fmt_f(body->t_initial_k - to_c, 2) << " C), limit "
              << fmt_f(body->t_limit_k, 2) << " K ("
              << fmt_f(body->t_limit_k - to_c, 2) << " C), ambient "
              << fmt_f(body->t_ambient_k, 2) << " K\n";
    if (curve.crossed) {
        std::cout << "  time to limit " << fmt_f(curve.crossing_time_s, 3)
                  << " s (" << fmt_f(curve.crossing_time_s / 60.0, 3)
                  << " min)\n";
    } else {
        std::cout << "  limit not reached within "
                  << fmt_g(curve.time_s.back()) << " s\n";
    }
    if (body->t_ambient_k == 0.0) {
        const double closed = cooldown_closed_form_s(*body);
        std::cout << "  closed form   " << fmt_f(closed, 3) << " s";
        if (curve.crossed)
            std::cout << " (rel diff "
                      << fmt_g(std::abs(curve.crossing_time_s - closed) /
                               closed)
                      << ")";
        std::cout << "\n";
    }

    if (!o.emit.empty()) {
        auto os = open_output(o.emit);
        os << "time_s,temp_k\n";
        for (std::size_t i = 0; i < curve.time_s.size(); ++i)
            os << fmt_g(curve.time_s[i]) << "," << fmt_g(curve.temp_k[i])
               << "\n";
        std::cout << "wrote " << curve.time_s.size() << " samples to "
                  << o.emit << "\n";
    }
    return 0;
}

// --------------------------------------------------------------------------
// fleet
// --------------------------------------------------------------------------

struct FleetOpts {
    std::string scenario = "canonical";
    int rovers = 0;
    bool rovers_set = false;
    double hours = 0.0;
    bool hours_set = false;
    std::string fail_profile;
    std::string events;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

FailureSpec load_fail_profile(const std::string& path, FailureSpec base) {
    std::ifstream is(path);
    if (!is)
        throw ValidationError("cannot open failure profile: " + path);
    ordered_json j;
    try {
        j = ordered_json::parse(is);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("malformed failure profile " + path + ": " +
                              e.what());
    }
    static const std::vector<std::string> known = {
        "continuity_fail_prob", "shift_jam_prob",      "aux_power_fail_prob",
        "continuity_retry_cap", "shift_jam_retry_cap", "reboot_delay_s"};
    for (const auto& item : j.items()) {
        if (std::find(known.begin(), known.end(), item.key()) == known.end())
            throw ValidationError("unknown failure profile field \"" +
                                  item.key() + "\" in " + path);
    }
    base.continuity_fail_prob =
        j.value("continuity_fail_prob", base.continuity_fail_prob);
    base.shift_jam_prob = j.value("shift_jam_prob", base.shift_jam_prob);
    base.aux_power_fail_prob =
        j.value("aux_power_fail_prob", base.aux_power_fail_prob);
    base.continuity_retry_cap =
        j.value("continuity_retry_cap", base.continuity_retry_cap);
    base.shift_jam_retry_cap =
        j.value("shift_jam_retry_cap", base.shift_jam_retry_cap);
    base.reboot_delay_s = j.value("reboot_delay_s", base.reboot_delay_s);
    return base;
}

int run_fleet(const FleetOpts& o) {
    Scenario s = resolve_scenario(o.scenario);
    FleetSimConfig cfg = s.protocol_config();
    if (o.rovers_set) {
        if (o.rovers < 1) throw ValidationError("--rovers must be >= 1");
        cfg.n_rovers = o.rovers;
        cfg.n_terminals = required_terminals(o.rovers);
        cfg.n_modules = required_modules(o.rovers, cfg.n_terminals);
    }
    if (o.hours_set) {
        if (!(o.hours > 0.0)) throw ValidationError("--hours must be > 0");
        cfg.sim_duration_s = o.hours * 3600.0;
    }
    if (!o.fail_profile.empty())
        cfg.failures = load_fail_profile(o.fail_profile, cfg.failures);
    cfg.seed = resolve_seed(s, o.seed_set, o.seed);
    cfg.record_events = true;

    const int sized_fleet = fleet_size(s.fleet);
    const double threshold =
        return_threshold_ah(cfg.fleet, cfg.work_distance_m, cfg.reserve_margin);
    const FleetSimResult r = run_swap_sim(cfg);

    std::cout << "fleet sizing: " << sized_fleet
              << " rover(s) sustainable at " << fmt_g(s.fleet.p_gen_w)
              << " W generation\n";
    std::cout << "simulated: " << cfg.n_rovers << " rover(s), "
              << cfg.n_terminals << " terminal(s), " << cfg.n_modules
              << " module(s), " << fmt_g(cfg.sim_duration_s / 3600.0)
              << " h, seed " << cfg.seed << "\n";
    std::cout << "return threshold: " << fmt_f(threshold, 3) << " Ah of "
              << fmt_g(cfg.fleet.q_b_ah) << " Ah\n";
    std::cout << "swaps completed: " << r.total_swaps << ", failures: "
              << r.total_failures << "\n";
    for (std::size_t i = 0; i < r.rovers.size(); ++i) {
        const RoverStats& rs = r.rovers[i];
        std::cout << "  rover " << i << ": " << rs.swaps_completed
                  << " swaps, " << rs.failures_seen << " failures, uptime "
                  << fmt_f(r.uptime(static_cast<int>(i)), 4)
                  << ", mean service " << fmt_f(rs.mean_service_s, 2) << " s"
                  << (rs.stranded ? ", STRANDED" : "") << "\n";
    }
    std::cout << "final module charge (Ah):";
    for (double q : r.final_module_charge_ah) std::cout << " " << fmt_f(q, 4);
    std::cout << "\n";

    if (!o.events.empty()) {
        auto os = open_output(o.events);
        os << "time_s,kind,rover,terminal,module,value,detail\n";
        for (const SwapEvent& e : r.events)
            os << fmt_g(e.time_s) << "," << e.kind << "," << e.rover_id << ","
               << e.terminal_id << "," << e.module_id << "," << fmt_g(e.value)
               << "," << csv_quote(e.detail) << "\n";
        std::cout << "wrote " << r.events.size() << " events to " << o.events
                  << "\n";
    }
    return 0;
}

// --------------------------------------------------------------------------
// reproduce
// --------------------------------------------------------------------------

struct ReproduceOpts {
    std::string scenario = "canonical";
    std::string out;
    int jobs = 0;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

struct ReproRow {
    std::string name;
    double value = 0.0;
    std::string expected;
    bool pass = false;
};

int run_reproduce(const ReproduceOpts& o) {
    Scenario s = resolve_scenario(o.scenario);
    const std::uint64_t seed = resolve_seed(s, o.seed_set, o.seed);
    const int jobs = resolve_jobs(o.jobs);
    const fs::path out(o.out);
    ensure_writable_dir(out);

    std::vector<ReproRow> rows;

    // Radiative cooldown of the rover body: expect 40 min within 15 %.
    {
        const CoolingCurve c = simulate_cooldown(s.thermal_rover, {});
        const double minutes = c.crossed ? c.crossing_time_s / 60.0 : -1.0;
        rows.push_back({"rover_cooldown_min", minutes, "40 +/- 15%",
                        c.crossed && minutes >= 34.0 && minutes <= 46.0});
    }
    // Battery module cooldown: expect 8 min within 15 %.
    {
        const CoolingCurve c = simulate_cooldown(s.thermal_battery, {});
        const double minutes = c.crossed ? c.crossing_time_s / 60.0 : -1.0;
        rows.push_back({"battery_cooldown_min", minutes, "8 +/- 15%",
                        c.crossed && minutes >= 6.8 && minutes <= 9.2});
    }
    // Sustainable fleet size for two reference rover power draws.
    {
        FleetSpec f = s.fleet;
        f.p_rover_w = 900.0;
        const int n = fleet_size(f);
        rows.push_back({"fleet_size_900w_rover", static_cast<double>(n),
                        "6 +/- 1", std::abs(n - 6) <= 1});
        f.p_rover_w = 410.0;
        const int m = fleet_size(f);
        rows.push_back({"fleet_size_410w_rover", static_cast<double>(m),
                        "13 +/- 1", std::abs(m - 13) <= 1});
    }
    // Exchange protocol: mean bay-entry-to-exit service time, expect 98 s.
    {
        FleetSimConfig cfg = s.protocol_config();
        cfg.seed = seed;
        const FleetSimResult r = run_swap_sim(cfg);
        double service = 0.0;
        for (const RoverStats& rs : r.rovers) service += rs.service_time_s;
        const double mean =
            r.total_swaps > 0 ? service / r.total_swaps : -1.0;
        rows.push_back({"mean_service_s", mean, "98 +/- 1",
                        r.total_swaps >= 50 && std::abs(mean - 98.0) <= 1.0});
    }
    // Single rover over 24 h: fraction of time on station, expect >= 0.97.
    {
        FleetSimConfig cfg = s.protocol_config();
        cfg.n_rovers = 1;
        cfg.n_terminals = required_terminals(1);
        cfg.n_modules = required_modules(1, cfg.n_terminals);
        cfg.sim_duration_s = 24.0 * 3600.0;
        cfg.seed = seed;
        const FleetSimResult r = run_swap_sim(cfg);
        const double uptime = r.uptime(0);
        rows.push_back(
            {"single_rover_uptime_24h", uptime, ">= 0.97", uptime >= 0.97});
    }
    // Guide-shape iterations: success-region volume must grow monotonically
    // and the final design must beat the straight funnel by > 1.5x.
    double final_ratio = 0.0;
    {
        std::cerr << "monte-carlo regions: " << s.monte_carlo.n_samples
                  << " samples x 3 designs, " << jobs << " worker(s)\n";
        const RegionTriple t = run_region_triple(s, s.curve, seed, jobs);
        final_ratio =
            t.report.ratios_defined ? t.report.ratio_to_first.back() : 0.0;
        rows.push_back({"success_volume_ratio", final_ratio, "> 1.5",
                        t.report.ratios_defined && final_ratio > 1.5 &&
                            t.report.inversions.empty()});
    }
    // Hex hub grid at sqrt(3) spacing leaves no gaps inside the array hull.
    {
        const double endurance_h = endurance_hours(
            s.fleet.q_b_ah, s.fleet.v_b_v, s.fleet.p_rover_w);
        const double r = service_radius_m(s.fleet.v_rover_mps, endurance_h);
        const std::vector<Vec2> hubs =
            hex_hub_positions(3, r * std::sqrt(3.0));
        const bool ok = gapless(hubs, r, r / 200.0);
        rows.push_back(
            {"hex_gapless_sqrt3", ok ? 1.0 : 0.0, "gap-free", ok});
    }

    // ---- files ----
    std::vector<std::string> outputs;
    {
        auto os = open_output(out / "report.csv");
        os << "row,name,value,expected,pass\n";
        for (std::size_t i = 0; i < rows.size(); ++i)
            os << (i + 1) << "," << rows[i].name << "," << fmt_g(rows[i].value)
               << "," << csv_quote(rows[i].expected) << ","
               << (rows[i].pass ? 1 : 0) << "\n";
        outputs.push_back("report.csv");
    }
    bool all_pass = true;
    {
        ordered_json j;
        j["scenario"] = s.name;
        j["scenario_hash"] = hex16(scenario_hash(s));
        j["seed"] = seed;
        ordered_json arr = ordered_json::array();
        for (const ReproRow& row : rows) {
            ordered_json rj;
            rj["name"] = row.name;
            rj["value"] = row.value;
            rj["expected"] = row.expected;
            rj["pass"] = row.pass;
            arr.push_back(rj);
            all_pass = all_pass && row.pass;
        }
        j["rows"] = arr;
        j["all_pass"] = all_pass;
        auto os = open_output(out / "summary.json");
        os << j.dump(2) << "\n";
        outputs.push_back("summary.json");
    }
    write_manifest(out, s, seed, outputs);

    // ---- console ----
    std::cout << "reproduction report (scenario " << s.name << ", seed "
              << seed << ")\n";
    std::printf("  %-26s %12s   %-12s %s\n", "row", "computed", "expected",
                "status");
    for (const ReproRow& row : rows)
        std::printf("  %-26s %12s   %-12s %s\n", row.name.c_str(),
                    fmt_f(row.value, 4).c_str(), row.expected.c_str(),
                    row.pass ? "PASS" : "FAIL");
    int n_pass = 0;
    for (const ReproRow& row : rows) n_pass += row.pass ? 1 : 0;
    std::cout << "overall: " << (all_pass ? "PASS" : "FAIL") << " (" << n_pass
              << "/" << rows.size() << " rows)\n";
    return all_pass ? 0 : 1;
}

}  // namespace

// --------------------------------------------------------------------------

int main(int argc, char** argv) {
    for (int i = 0; i < argc; ++i) {
        if (i) g_command_line += ' ';
        g_command_line += argv[i];
    }

    CLI::App app{"battery-swap rover fleet: docking, coverage, thermal and "
                 "exchange-protocol models"};
    app.name("swapsim");
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    CurveOpts curve_opts;
    auto* curve_cmd =
        app.add_subcommand("curve", "evaluate / export a guide wall curve");
    curve_cmd->add_option("--scenario", curve_opts.scenario,
                          "scenario file, or \"canonical\"");
    auto* theta_opt = curve_cmd->add_option("--theta", curve_opts.theta_deg,
                                            "override exit angle (deg)");
    auto* weight_opt = curve_cmd->add_option("--weight", curve_opts.weight,
                                             "override control-point weight");
    curve_cmd->add_option("--emit", curve_opts.emit, "write polyline CSV here");

    DockOpts dock_opts;
    auto* dock_cmd =
        app.add_subcommand("dock", "run one quasi-static docking entry");
    dock_cmd->add_option("--scenario", dock_opts.scenario,
                         "scenario file, or \"canonical\"");
    dock_cmd
        ->add_option("--start", dock_opts.start,
                     "start pose \"x,y,yaw\" (m, m, deg); x must be < 0")
        ->required();
    dock_cmd->add_option("--trajectory", dock_opts.trajectory,
                         "write pose-per-step CSV here");

    OptimizeOpts opt_opts;
    auto* opt_cmd = app.add_subcommand(
        "optimize", "grid-search guide shapes and map success regions");
    opt_cmd->add_option("--scenario", opt_opts.scenario,
                        "scenario file, or \"canonical\"");
    opt_cmd->add_option("--grid", opt_opts.grid,
                        "grid steps \"theta-step,weight-step\"");
    opt_cmd->add_option("--out", opt_opts.out, "output directory")->required();
    opt_cmd->add_option("--jobs", opt_opts.jobs, "worker threads (0 = auto)");
    auto* opt_seed =
        opt_cmd->add_option("--seed", opt_opts.seed, "override random seed");

    CoverageOpts cov_opts;
    auto* cov_cmd =
        app.add_subcommand("coverage", "hub-network coverage geometry");
    cov_cmd->add_option("--scenario", cov_opts.scenario,
                        "scenario file, or \"canonical\"");
    cov_cmd->add_option("--topology", cov_opts.topology, "chain or hex");
    cov_cmd->add_option("--hubs", cov_opts.hubs, "number of hubs");
    cov_cmd->add_option("--spacing", cov_opts.spacing_m,
                        "hub spacing in m (default: hex r*sqrt(3), chain r)");
    cov_cmd->add_option("--out", cov_opts.out,
                        "write hub/boundary CSVs to this directory");

    ThermalOpts th_opts;
    auto* th_cmd =
        app.add_subcommand("thermal", "radiative cooldown to a limit");
    th_cmd->add_option("--scenario", th_opts.scenario,
                       "scenario file, or \"canonical\"");
    th_cmd->add_option("--body", th_opts.body, "rover or battery")->required();
    th_cmd->add_option("--emit", th_opts.emit, "write cooling curve CSV here");
    th_cmd->add_option("--step-s", th_opts.step_s, "integrator step (s)");

    FleetOpts fleet_opts;
    auto* fleet_cmd = app.add_subcommand(
        "fleet", "discrete-event simulation of the exchange protocol");
    fleet_cmd->add_option("--scenario", fleet_opts.scenario,
                          "scenario file, or \"canonical\"");
    auto* rovers_opt = fleet_cmd->add_option("--rovers", fleet_opts.rovers,
                                             "override rover count");
    auto* hours_opt = fleet_cmd->add_option("--hours", fleet_opts.hours,
                                            "override duration (h)");
    fleet_cmd->add_option("--fail-profile", fleet_opts.fail_profile,
                          "JSON file overriding failure probabilities");
    fleet_cmd->add_option("--events", fleet_opts.events,
                          "write event log CSV here");
    auto* fleet_seed =
        fleet_cmd->add_option("--seed", fleet_opts.seed, "override random seed");

    ReproduceOpts rep_opts;
    auto* rep_cmd = app.add_subcommand(
        "reproduce", "run the reference scenario and check headline numbers");
    rep_cmd->add_option("--scenario", rep_opts.scenario,
                        "scenario file, or \"canonical\"");
    rep_cmd->add_option("--out", rep_opts.out, "output directory")->required();
    rep_cmd->add_option("--jobs", rep_opts.jobs, "worker threads (0 = auto)");
    auto* rep_seed =
        rep_cmd->add_option("--seed", rep_opts.seed, "override random seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    curve_opts.theta_set = theta_opt->count() > 0;
    curve_opts.weight_set = weight_opt->count() > 0;
    opt_opts.seed_set = opt_seed->count() > 0;
    fleet_opts.rovers_set = rovers_opt->count() > 0;
    fleet_opts.hours_set = hours_opt->count() > 0;
    fleet_opts.seed_set = fleet_seed->count() > 0;
    rep_opts.seed_set = rep_seed->count() > 0;

    try {
        if (curve_cmd->parsed()) return run_curve(curve_opts);
        if (dock_cmd->parsed()) return run_dock(dock_opts);
        if (opt_cmd->parsed()) return run_optimize(opt_opts);
        if (cov_cmd->parsed()) return run_coverage(cov_opts);
        if (th_cmd->parsed()) return run_thermal(th_opts);
        if (fleet_cmd->parsed()) return run_fleet(fleet_opts);
        if (rep_cmd->parsed()) return run_reproduce(rep_opts);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const GeometryError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
