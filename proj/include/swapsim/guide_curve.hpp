#pragma once

/**
 * Quadratic Bezier description of a docking-port entry guide wall.
 *
 * The guide is drawn in the port frame for the upper (+y) wall; the lower
 * wall is its mirror image.  The curve runs from the mouth corner
 * P0 = (0, mouth_halfwidth) to the throat entry P2 = (depth, throat_halfwidth)
 * and is shaped by two scalars:
 *
 *   theta_deg - angle, in degrees, between the approach axis and the wall
 *               tangent at the throat entry P2.  theta = 0 blends the guide
 *               smoothly into the straight throat; theta = 90 ends the guide
 *               in a wall perpendicular to the approach axis.
 *   weight    - in [0, 1]; slides the middle control point P1 along the
 *               P2 tangent line.  The tangent ray traced backwards from P2
 *               leaves the port box (x in [0, depth], y <= mouth_halfwidth)
 *               at an anchor point X; P1 = X + weight * (P2 - X).  weight = 0
 *               pushes the curve as far toward the mouth as the box allows,
 *               weight = 1 collapses P1 onto P2 and the curve degenerates to
 *               the straight chord P0-P2.
 *
 * With TangentAnchor::kPortBox (the default) the anchor is always defined.
 * TangentAnchor::kMouthLine is a stricter variant that anchors on the mouth
 * line y = mouth_halfwidth only, and reports a degenerate-geometry error
 * when that intersection falls outside the segment between P0 and the throat
 * plane (shallow tangents), instead of clamping.
 */

#include <array>
#include <vector>

#include "swapsim/errors.hpp"
#include "swapsim/pose.hpp"

namespace swapsim {

/// Open polygonal chain; vertices in order of traversal.
struct Polyline2D {
    std::vector<Vec2> vertices;

    double length() const;

    /// Throws GeometryError on <2 vertices, non-finite coordinates or
    /// self-intersection.  O(n^2); intended for tests and load-time checks.
    void validate() const;
};

/// Mirror across the approach axis (y -> -y), preserving vertex order.
Polyline2D mirrored(const Polyline2D& p);

enum class TangentAnchor {
    kPortBox,   ///< anchor where the tangent ray leaves the port box (total)
    kMouthLine, ///< anchor strictly on the mouth line; may be degenerate
};

struct GuideCurve {
    double theta_deg = 0.0;          ///< deg, wall tangent angle at the throat
    double weight = 0.5;             ///< dimensionless, in [0, 1]
    double mouth_halfwidth_m = 0.0;  ///< m, half-opening at the mouth
    double throat_halfwidth_m = 0.0; ///< m, half-opening at the throat
    double depth_m = 0.0;            ///< m, axial length of the guide section
    TangentAnchor anchor = TangentAnchor::kPortBox;

    /// Throws ValidationError naming the first field outside its range.
    void validate() const;

    /**
     * Control points {P0, P1, P2} of the upper guide wall.
     * Throws GeometryError when the anchor construction is degenerate
     * (possible only with TangentAnchor::kMouthLine).
     */
    std::array<Vec2, 3> control_points() const;

    /// Point on the curve at parameter t in [0, 1] (0 = mouth, 1 = throat).
    /// Throws std::domain_error outside [0, 1].
    Vec2 evaluate(double t) const;

    /**
     * Polyline approximation whose maximum deviation from the true curve is
     * <= max_chord_error_m.  Vertices run from the mouth to the throat;
     * both endpoints are exact.  A straight (degenerate) curve yields
     * exactly its two endpoints.
     */
    Polyline2D discretize(double max_chord_error_m) const;
};

}  // namespace swapsim
