#pragma once
/// A scenario bundles every model input — guide geometry, rover outline,
/// docking-sim knobs, Monte-Carlo scatter, thermal bodies, fleet electrical
/// figures and exchange-protocol settings — into one JSON-serialisable value,
/// so a run can be pinned down by a single file and a seed.
///
/// Temperatures are written as tagged objects ({"kelvin": 313.15}); input
/// files may use {"celsius": 40.0} instead and are converted on load.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "swapsim/dock_geometry.hpp"
#include "swapsim/dock_sim.hpp"
#include "swapsim/fleet_sim.hpp"
#include "swapsim/fleet_spec.hpp"
#include "swapsim/guide_curve.hpp"
#include "swapsim/optimize.hpp"
#include "swapsim/thermal_body.hpp"

namespace swapsim {

/// Parametric rover footprint; expands to a RoverBody polygon.
struct RoverShape {
    double halfwidth_m = 0.11;
    double length_m = 0.26;
    bool bumpers = false;
    double bumper_protrusion_m = 0.012;

    RoverBody body() const;
};

/// Exchange-protocol settings that are not already part of FleetSpec.
struct ProtocolSpec {
    int n_rovers = 2;
    double sim_duration_s = 48.0 * 3600.0;
    double work_distance_m = 25.0;
    double reserve_margin = 0.1;
    SwapDurations durations;
    FailureSpec failures;
};

struct Scenario {
    int schema_version = 1;
    std::string name = "canonical";
    std::uint64_t seed = 7041u;
    /// Free-form modelling assumptions worth surfacing next to the numbers.
    std::vector<std::string> notes;

    FleetSpec fleet;
    GuideCurve curve;
    double hardstop_x_m = 0.55;
    double max_chord_error_m = 5e-4;
    RoverShape rover;
    SimParams sim;
    MonteCarloSpec monte_carlo;
    ThermalBody thermal_rover;
    ThermalBody thermal_battery;
    ProtocolSpec protocol;

    void validate() const;
    /// Discretised port walls for this scenario's curve and hardstop.
    PortGeometry port() const;
    /// Assembled config for run_swap_sim (terminal/module counts derived
    /// from n_rovers).
    FleetSimConfig protocol_config() const;
};

/// The built-in reference scenario all defaults and tests key off.
Scenario canonical_scenario();

nlohmann::ordered_json scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const nlohmann::ordered_json& j);

/// Canonical textual form: two-space-indented JSON plus a trailing newline.
/// Serialising a freshly loaded scenario reproduces this byte-for-byte.
std::string scenario_text(const Scenario& s);
/// FNV-1a 64 over scenario_text; identifies a configuration in manifests.
std::uint64_t scenario_hash(const Scenario& s);

void save_scenario(const Scenario& s, std::ostream& out);
Scenario load_scenario(std::istream& in);
Scenario load_scenario_file(const std::string& path);

/// "canonical" (or empty) yields the built-in scenario; anything else is
/// read as a file path.
Scenario resolve_scenario(const std::string& name_or_path);

}  // namespace swapsim
