#pragma once

/**
 * Rigid geometry for the docking study: the rover footprint and the
 * docking-port channel it must thread.
 *
 * Port frame: +x runs from the port mouth (x = 0) into the hub; the guide
 * walls narrow from mouth_halfwidth at x = 0 to throat_halfwidth at
 * x = depth, after which straight throat walls continue past the hardstop.
 * The hub's front face closes the mouth plane outside the opening.
 * Everything is mirror-symmetric about the approach axis.
 */

#include <vector>

#include "swapsim/guide_curve.hpp"
#include "swapsim/pose.hpp"

namespace swapsim {

/**
 * Rover collision footprint: a simple CCW polygon in the body frame with
 * the origin at the centre of the front face (front face lies in the body
 * plane x = 0, body extends to x = -length).
 */
struct RoverBody {
    std::vector<Vec2> outline;  ///< CCW, closed implicitly (last -> first)
    double halfwidth_m = 0.0;   ///< m, max |y| of the outline
    double length_m = 0.0;      ///< m, axial extent of the outline
    bool bumpers = false;       ///< true when front corners carry roller bumpers

    /**
     * Rectangular footprint, optionally with quarter-round corner bumpers of
     * radius `bumper_protrusion_m` replacing the sharp front corners.  The arc is
     * approximated with short facets so contact handling stays polygonal.
     */
    static RoverBody make(double halfwidth_m, double length_m,
                          bool bumpers = false, double bumper_protrusion_m = 0.012);

    /// Throws GeometryError/ValidationError on malformed outlines.
    void validate() const;
};

struct PortGeometry {
    Polyline2D left_guide;   ///< +y wall, mouth -> throat
    Polyline2D right_guide;  ///< -y wall, exact mirror of left_guide
    double hardstop_x_m = 0.0;       ///< m, axial station of the hardstops
    double throat_halfwidth_m = 0.0; ///< m

    double mouth_halfwidth_m() const { return left_guide.vertices.front().y; }
    double depth_m() const { return left_guide.vertices.back().x; }

    /**
     * Build the port around a guide curve: the curve is discretized at
     * max_chord_error_m and mirrored for the lower wall.
     */
    static PortGeometry from_curve(const GuideCurve& curve, double hardstop_x_m,
                                   double max_chord_error_m = 5e-4);

    /// Checks mirror symmetry, monotone narrowing and hardstop placement.
    void validate() const;
};

}  // namespace swapsim
