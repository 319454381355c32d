#include "swapsim/scenario.hpp"

#include <fstream>
#include <sstream>

#include "swapsim/errors.hpp"
#include "swapsim/rng.hpp"
#include "swapsim/units.hpp"

namespace swapsim {

using nlohmann::ordered_json;

RoverBody RoverShape::body() const {
    return RoverBody::make(halfwidth_m, length_m, bumpers, bumper_protrusion_m);
}

void Scenario::validate() const {
    if (schema_version != 1)
        throw ValidationError("Scenario.schema_version: only version 1 is "
                              "understood");
    fleet.validate();
    curve.validate();
    rover.body().validate();
    monte_carlo.validate();
    thermal_rover.validate();
    thermal_battery.validate();
    protocol_config().validate();
    if (!(hardstop_x_m > curve.depth_m))
        throw ValidationError("Scenario.hardstop_x_m must sit beyond the "
                              "guide depth");
    if (!(max_chord_error_m > 0.0))
        throw ValidationError("Scenario.max_chord_error_m must be > 0");
}

PortGeometry Scenario::port() const {
    return PortGeometry::from_curve(curve, hardstop_x_m, max_chord_error_m);
}

FleetSimConfig Scenario::protocol_config() const {
    FleetSimConfig cfg;
    cfg.fleet = fleet;
    cfg.n_rovers = protocol.n_rovers;
    cfg.n_terminals = required_terminals(protocol.n_rovers);
    cfg.n_modules = required_modules(protocol.n_rovers, cfg.n_terminals);
    cfg.sim_duration_s = protocol.sim_duration_s;
    cfg.work_distance_m = protocol.work_distance_m;
    cfg.reserve_margin = protocol.reserve_margin;
    cfg.durations = protocol.durations;
    cfg.failures = protocol.failures;
    cfg.seed = seed;
    return cfg;
}

Scenario canonical_scenario() {
    Scenario s;
    s.schema_version = 1;
    s.name = "canonical";
    s.seed = 7041u;
    s.notes = {
        "hub overhead power is taken as zero; the full generator budget goes "
        "to module charging",
        "thermal bodies radiate to a 0 K environment with unit emissivity",
        "rover electronics survive to -40 C; battery modules are kept above "
        "0 C",
    };

    s.fleet.p_gen_w = 5500.0;
    s.fleet.p_hub_w = 0.0;
    s.fleet.q_b_ah = 2.8;
    s.fleet.v_b_v = 22.2;
    s.fleet.charge_time_h = 1.0;
    s.fleet.p_rover_w = 31.08;
    s.fleet.v_rover_mps = 1.0;
    s.fleet.v_hub_mps = 0.5;
    s.fleet.n_terminals = 3;
    s.fleet.swap_time_s = 98.0;

    // Grid-search optimum for this port/rover family (exit tangent pitched
    // 45 degrees, control point pulled fully to the tangent anchor).
    s.curve.theta_deg = 45.0;
    s.curve.weight = 0.0;
    s.curve.mouth_halfwidth_m = 0.16;
    s.curve.throat_halfwidth_m = 0.113;
    s.curve.depth_m = 0.10;
    s.curve.anchor = TangentAnchor::kPortBox;
    s.hardstop_x_m = 0.40;
    s.max_chord_error_m = 5e-4;

    s.rover = RoverShape{};   // 220 mm wide, 260 mm long, square corners
    s.sim = SimParams{};
    s.monte_carlo = MonteCarloSpec{};
    // Wider yaw/lateral spread so the sampled cloud actually probes the
    // capture boundary instead of sitting entirely inside it.
    s.monte_carlo.sd_yaw_deg = 12.0;
    s.monte_carlo.sd_lateral_m = 0.025;

    s.thermal_rover = ThermalBody{"rover", 11.0, 897.0, 1.302, 1.0,
                                  313.15, 0.0, 233.15};
    s.thermal_battery = ThermalBody{"battery", 0.4, 960.0, 0.0776, 1.0,
                                    313.15, 0.0, 273.15};

    s.protocol = ProtocolSpec{};
    return s;
}

namespace {

ordered_json temperature_json(double kelvin) {
    return ordered_json{{"kelvin", kelvin}};
}

double parse_temperature_k(const ordered_json& j, const std::string& where) {
    if (j.is_object()) {
        if (j.contains("kelvin")) return j.at("kelvin").get<double>();
        if (j.contains("celsius"))
            return celsius_to_kelvin(j.at("celsius").get<double>());
    }
    throw ValidationError(where + ": temperature must be tagged "
                          "{\"kelvin\": x} or {\"celsius\": x}");
}

std::string anchor_name(TangentAnchor a) {
    return a == TangentAnchor::kPortBox ? "port_box" : "mouth_line";
}

TangentAnchor parse_anchor(const std::string& s) {
    if (s == "port_box") return TangentAnchor::kPortBox;
    if (s == "mouth_line") return TangentAnchor::kMouthLine;
    throw ValidationError("guide.anchor: expected \"port_box\" or "
                          "\"mouth_line\", got \"" + s + "\"");
}

ordered_json thermal_json(const ThermalBody& b) {
    return ordered_json{
        {"name", b.name},
        {"mass_kg", b.mass_kg},
        {"specific_heat_j_per_kg_k", b.specific_heat},
        {"area_m2", b.area_m2},
        {"emissivity", b.emissivity},
        {"t_initial", temperature_json(b.t_initial_k)},
        {"t_ambient", temperature_json(b.t_ambient_k)},
        {"t_limit", temperature_json(b.t_limit_k)},
    };
}

ThermalBody parse_thermal(const ordered_json& j, const std::string& where) {
    ThermalBody b;
    b.name = j.at("name").get<std::string>();
    b.mass_kg = j.at("mass_kg").get<double>();
    b.specific_heat = j.at("specific_heat_j_per_kg_k").get<double>();
    b.area_m2 = j.at("area_m2").get<double>();
    b.emissivity = j.at("emissivity").get<double>();
    b.t_initial_k = parse_temperature_k(j.at("t_initial"), where + ".t_initial");
    b.t_ambient_k = parse_temperature_k(j.at("t_ambient"), where + ".t_ambient");
    b.t_limit_k = parse_temperature_k(j.at("t_limit"), where + ".t_limit");
    return b;
}

}  // namespace

ordered_json scenario_to_json(const Scenario& s) {
    ordered_json j;
    j["schema_version"] = s.schema_version;
    j["name"] = s.name;
    j["seed"] = s.seed;
    j["notes"] = s.notes;

    j["fleet"] = ordered_json{
        {"p_gen_w", s.fleet.p_gen_w},
        {"p_hub_w", s.fleet.p_hub_w},
        {"q_b_ah", s.fleet.q_b_ah},
        {"v_b_v", s.fleet.v_b_v},
        {"charge_time_h", s.fleet.charge_time_h},
        {"p_rover_w", s.fleet.p_rover_w},
        {"v_rover_mps", s.fleet.v_rover_mps},
        {"v_hub_mps", s.fleet.v_hub_mps},
        {"n_terminals", s.fleet.n_terminals},
        {"swap_time_s", s.fleet.swap_time_s},
    };

    j["docking"] = ordered_json{
        {"guide",
         ordered_json{
             {"theta_deg", s.curve.theta_deg},
             {"weight", s.curve.weight},
             {"mouth_halfwidth_m", s.curve.mouth_halfwidth_m},
             {"throat_halfwidth_m", s.curve.throat_halfwidth_m},
             {"depth_m", s.curve.depth_m},
             {"anchor", anchor_name(s.curve.anchor)},
         }},
        {"hardstop_x_m", s.hardstop_x_m},
        {"max_chord_error_m", s.max_chord_error_m},
        {"rover",
         ordered_json{
             {"halfwidth_m", s.rover.halfwidth_m},
             {"length_m", s.rover.length_m},
             {"bumpers", s.rover.bumpers},
             {"bumper_protrusion_m", s.rover.bumper_protrusion_m},
         }},
        {"sim",
         ordered_json{
             {"step_m", s.sim.step_m},
             {"lateral_tolerance_m", s.sim.lateral_tolerance_m},
             {"yaw_tolerance_deg", s.sim.yaw_tolerance_deg},
             {"max_steps", s.sim.max_steps},
             {"max_resolve_iterations", s.sim.max_resolve_iterations},
             {"resolve_tolerance_m", s.sim.resolve_tolerance_m},
             {"max_rotation_per_iter_deg", s.sim.max_rotation_per_iter_deg},
             {"wall_sample_spacing_m", s.sim.wall_sample_spacing_m},
             {"stall_window_steps", s.sim.stall_window_steps},
             {"front_wall_extent_m", s.sim.front_wall_extent_m},
             {"record_trajectory", s.sim.record_trajectory},
         }},
        {"monte_carlo",
         ordered_json{
             {"n_samples", s.monte_carlo.n_samples},
             {"mean_axial_m", s.monte_carlo.mean_axial_m},
             {"mean_lateral_m", s.monte_carlo.mean_lateral_m},
             {"mean_yaw_deg", s.monte_carlo.mean_yaw_deg},
             {"sd_axial_m", s.monte_carlo.sd_axial_m},
             {"sd_lateral_m", s.monte_carlo.sd_lateral_m},
             {"sd_yaw_deg", s.monte_carlo.sd_yaw_deg},
         }},
    };

    j["thermal"] = ordered_json{
        {"rover", thermal_json(s.thermal_rover)},
        {"battery", thermal_json(s.thermal_battery)},
    };

    j["protocol"] = ordered_json{
        {"n_rovers", s.protocol.n_rovers},
        {"sim_duration_s", s.protocol.sim_duration_s},
        {"work_distance_m", s.protocol.work_distance_m},
        {"reserve_margin", s.protocol.reserve_margin},
        {"durations_s",
         ordered_json{
             {"entry", s.protocol.durations.entry_s},
             {"lift", s.protocol.durations.lift_s},
             {"continuity_check", s.protocol.durations.continuity_check_s},
             {"index_empty", s.protocol.durations.index_empty_s},
             {"shift_out", s.protocol.durations.shift_out_s},
             {"index_full", s.protocol.durations.index_full_s},
             {"shift_in", s.protocol.durations.shift_in_s},
             {"lower", s.protocol.durations.lower_s},
             {"exit", s.protocol.durations.exit_s},
         }},
        {"failures",
         ordered_json{
             {"continuity_fail_prob", s.protocol.failures.continuity_fail_prob},
             {"shift_jam_prob", s.protocol.failures.shift_jam_prob},
             {"aux_power_fail_prob", s.protocol.failures.aux_power_fail_prob},
             {"continuity_retry_cap", s.protocol.failures.continuity_retry_cap},
             {"shift_jam_retry_cap", s.protocol.failures.shift_jam_retry_cap},
             {"reboot_delay_s", s.protocol.failures.reboot_delay_s},
         }},
    };
    return j;
}

Scenario scenario_from_json(const ordered_json& j) {
    try {
        Scenario s;
        s.schema_version = j.at("schema_version").get<int>();
        if (s.schema_version != 1)
            throw ValidationError("scenario: unsupported schema_version " +
                                  std::to_string(s.schema_version));
        s.name = j.at("name").get<std::string>();
        s.seed = j.at("seed").get<std::uint64_t>();
        s.notes = j.at("notes").get<std::vector<std::string>>();

        const auto& f = j.at("fleet");
        s.fleet.p_gen_w = f.at("p_gen_w").get<double>();
        s.fleet.p_hub_w = f.at("p_hub_w").get<double>();
        s.fleet.q_b_ah = f.at("q_b_ah").get<double>();
        s.fleet.v_b_v = f.at("v_b_v").get<double>();
        s.fleet.charge_time_h = f.at("charge_time_h").get<double>();
        s.fleet.p_rover_w = f.at("p_rover_w").get<double>();
        s.fleet.v_rover_mps = f.at("v_rover_mps").get<double>();
        s.fleet.v_hub_mps = f.at("v_hub_mps").get<double>();
        s.fleet.n_terminals = f.at("n_terminals").get<int>();
        s.fleet.swap_time_s = f.at("swap_time_s").get<double>();

        const auto& d = j.at("docking");
        const auto& g = d.at("guide");
        s.curve.theta_deg = g.at("theta_deg").get<double>();
        s.curve.weight = g.at("weight").get<double>();
        s.curve.mouth_halfwidth_m = g.at("mouth_halfwidth_m").get<double>();
        s.curve.throat_halfwidth_m = g.at("throat_halfwidth_m").get<double>();
        s.curve.depth_m = g.at("depth_m").get<double>();
        s.curve.anchor = parse_anchor(g.at("anchor").get<std::string>());
        s.hardstop_x_m = d.at("hardstop_x_m").get<double>();
        s.max_chord_error_m = d.at("max_chord_error_m").get<double>();

        const auto& r = d.at("rover");
        s.rover.halfwidth_m = r.at("halfwidth_m").get<double>();
        s.rover.length_m = r.at("length_m").get<double>();
        s.rover.bumpers = r.at("bumpers").get<bool>();
        s.rover.bumper_protrusion_m = r.at("bumper_protrusion_m").get<double>();

        const auto& p = d.at("sim");
        s.sim.step_m = p.at("step_m").get<double>();
        s.sim.lateral_tolerance_m = p.at("lateral_tolerance_m").get<double>();
        s.sim.yaw_tolerance_deg = p.at("yaw_tolerance_deg").get<double>();
        s.sim.max_steps = p.at("max_steps").get<int>();
        s.sim.max_resolve_iterations =
            p.at("max_resolve_iterations").get<int>();
        s.sim.resolve_tolerance_m = p.at("resolve_tolerance_m").get<double>();
        s.sim.max_rotation_per_iter_deg =
            p.at("max_rotation_per_iter_deg").get<double>();
        s.sim.wall_sample_spacing_m =
            p.at("wall_sample_spacing_m").get<double>();
        s.sim.stall_window_steps = p.at("stall_window_steps").get<int>();
        s.sim.front_wall_extent_m = p.at("front_wall_extent_m").get<double>();
        s.sim.record_trajectory = p.at("record_trajectory").get<bool>();

        const auto& m = d.at("monte_carlo");
        s.monte_carlo.n_samples = m.at("n_samples").get<int>();
        s.monte_carlo.mean_axial_m = m.at("mean_axial_m").get<double>();
        s.monte_carlo.mean_lateral_m = m.at("mean_lateral_m").get<double>();
        s.monte_carlo.mean_yaw_deg = m.at("mean_yaw_deg").get<double>();
        s.monte_carlo.sd_axial_m = m.at("sd_axial_m").get<double>();
        s.monte_carlo.sd_lateral_m = m.at("sd_lateral_m").get<double>();
        s.monte_carlo.sd_yaw_deg = m.at("sd_yaw_deg").get<double>();

        const auto& t = j.at("thermal");
        s.thermal_rover = parse_thermal(t.at("rover"), "thermal.rover");
        s.thermal_battery = parse_thermal(t.at("battery"), "thermal.battery");

        const auto& q = j.at("protocol");
        s.protocol.n_rovers = q.at("n_rovers").get<int>();
        s.protocol.sim_duration_s = q.at("sim_duration_s").get<double>();
        s.protocol.work_distance_m = q.at("work_distance_m").get<double>();
        s.protocol.reserve_margin = q.at("reserve_margin").get<double>();
        const auto& dur = q.at("durations_s");
        s.protocol.durations.entry_s = dur.at("entry").get<double>();
        s.protocol.durations.lift_s = dur.at("lift").get<double>();
        s.protocol.durations.continuity_check_s =
            dur.at("continuity_check").get<double>();
        s.protocol.durations.index_empty_s = dur.at("index_empty").get<double>();
        s.protocol.durations.shift_out_s = dur.at("shift_out").get<double>();
        s.protocol.durations.index_full_s = dur.at("index_full").get<double>();
        s.protocol.durations.shift_in_s = dur.at("shift_in").get<double>();
        s.protocol.durations.lower_s = dur.at("lower").get<double>();
        s.protocol.durations.exit_s = dur.at("exit").get<double>();
        const auto& fl = q.at("failures");
        s.protocol.failures.continuity_fail_prob =
            fl.at("continuity_fail_prob").get<double>();
        s.protocol.failures.shift_jam_prob =
            fl.at("shift_jam_prob").get<double>();
        s.protocol.failures.aux_power_fail_prob =
            fl.at("aux_power_fail_prob").get<double>();
        s.protocol.failures.continuity_retry_cap =
            fl.at("continuity_retry_cap").get<int>();
        s.protocol.failures.shift_jam_retry_cap =
            fl.at("shift_jam_retry_cap").get<int>();
        s.protocol.failures.reboot_delay_s =
            fl.at("reboot_delay_s").get<double>();
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("scenario parse: ") + e.what());
    }
}

std::string scenario_text(const Scenario& s) {
    return scenario_to_json(s).dump(2) + "\n";
}

std::uint64_t scenario_hash(const Scenario& s) {
    return fnv1a64(scenario_text(s));
}

void save_scenario(const Scenario& s, std::ostream& out) {
    out << scenario_text(s);
}

Scenario load_scenario(std::istream& in) {
    ordered_json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("scenario parse: ") + e.what());
    }
    return scenario_from_json(j);
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open scenario file: " + path);
    try {
        return load_scenario(in);
    } catch (const ValidationError& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

Scenario resolve_scenario(const std::string& name_or_path) {
    if (name_or_path.empty() || name_or_path == "canonical")
        return canonical_scenario();
    return load_scenario_file(name_or_path);
}

}  // namespace swapsim
