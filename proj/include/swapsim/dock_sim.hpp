#pragma once

/**
 * Quasi-static simulation of a rover entering a docking port.
 *
 * Contact model: frictionless rigid sliding.  Each step advances the rover
 * one fixed increment along the approach axis, then iteratively projects any
 * wall penetration back out - a minimal translation along the deepest
 * contact's normal, plus a yaw rotation about that contact point whenever a
 * second, conflicting contact would otherwise remain.  An entry succeeds
 * when the reference point reaches the hardstop within the lateral and yaw
 * tolerances; it fails WEDGED when projection cannot clear the penetration,
 * MISSED_PORT when progress stalls outside the opening or the rover arrives
 * misaligned, and EXCEEDED_STEPS on the step cap.
 *
 * The simulation is a pure function of its inputs: identical inputs give
 * byte-identical trajectories.
 */

#include <string>
#include <vector>

#include "swapsim/dock_geometry.hpp"
#include "swapsim/pose.hpp"

namespace swapsim {

enum class DockOutcome { kSuccess, kWedged, kMissedPort, kExceededSteps };

const char* to_string(DockOutcome o);

struct SimParams {
    double step_m = 1e-3;                 ///< axial advance per step
    double lateral_tolerance_m = 5e-3;    ///< |y| bound at the hardstop
    double yaw_tolerance_deg = 2.0;       ///< |yaw| bound at the hardstop
    long max_steps = 100000;
    int max_resolve_iterations = 50;      ///< projection iterations per step
    double resolve_tolerance_m = 2e-5;    ///< residual penetration accepted
    double max_rotation_per_iter_deg = 2.0;
    double wall_sample_spacing_m = 2.5e-3;///< contact sampling of the walls
    int stall_window_steps = 200;         ///< no-progress window => stalled
    double front_wall_extent_m = 0.6;     ///< hub face height past the mouth
    bool record_trajectory = true;
};

struct DockResult {
    DockOutcome outcome = DockOutcome::kMissedPort;
    Pose2D final_pose;
    std::vector<Pose2D> trajectory;  ///< starts at the start pose
    long steps = 0;
    std::string detail;              ///< human-readable failure context
};

struct ResolveResult {
    Pose2D pose;
    bool resolved = false;  ///< false = WEDGED (penetration not cleared)
    int iterations = 0;
};

/**
 * Precomputed contact field for one (port, rover) pairing; build once, then
 * run many entries.  Throws GeometryError when the rover cannot fit through
 * the mouth at all (halfwidth > mouth halfwidth).
 */
class DockSim {
public:
    DockSim(PortGeometry port, RoverBody rover, SimParams params = {});

    /// Project penetration out of `pose` without advancing.
    ResolveResult contact_resolve(const Pose2D& pose) const;

    /// Run a full entry from `start`.  Throws ValidationError when the start
    /// pose does not place the rover fully outside the mouth plane.
    DockResult simulate_entry(const Pose2D& start) const;

    const PortGeometry& port() const { return port_; }
    const RoverBody& rover() const { return rover_; }
    const SimParams& params() const { return params_; }

private:
    struct Contact {
        Vec2 point;    // world position of the contact
        Vec2 normal;   // unit push direction applied to the rover
        double depth;  // m, current penetration
        bool on_rover; // true when the point rides with the rover body
    };

    void detect(const Pose2D& pose, std::vector<Contact>& out) const;
    double channel_halfwidth(double x) const;

    PortGeometry port_;
    RoverBody rover_;
    SimParams params_;

    /// Funnel profile (x ascending, y = halfwidth) from mouth through throat.
    std::vector<Vec2> profile_;
    /// Dense wall sample points, upper side (front face + guide + throat).
    std::vector<Vec2> wall_samples_;
    /// Upper wall as segments for nearest-point queries.
    std::vector<std::pair<Vec2, Vec2>> wall_segments_;
};

/// One-shot convenience wrapper.
DockResult simulate_entry(const PortGeometry& port, const RoverBody& rover,
                          const Pose2D& start, const SimParams& params = {});

}  // namespace swapsim
