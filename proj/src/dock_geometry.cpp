#include "swapsim/dock_geometry.hpp"

#include <algorithm>
#include <cmath>

#include "swapsim/errors.hpp"
#include "swapsim/units.hpp"

namespace swapsim {

RoverBody RoverBody::make(double halfwidth_m, double length_m, bool bumpers,
                          double bumper_protrusion_m) {
    if (!(halfwidth_m > 0.0))
        throw ValidationError("RoverBody.halfwidth_m must be > 0");
    if (!(length_m > 0.0))
        throw ValidationError("RoverBody.length_m must be > 0");
    RoverBody body;
    body.halfwidth_m = halfwidth_m;
    body.length_m = length_m;
    body.bumpers = bumpers;
    if (bumpers) {
        const double b =
            std::min({bumper_protrusion_m, 0.45 * halfwidth_m, 0.9 * length_m});
        if (!(b > 0.0))
            throw ValidationError("RoverBody bumper_protrusion_m must be > 0");
        // Full-width bow bumper: the flat nose is replaced by a shallow
        // circular arc that bulges `b` ahead of the corners.  The footprint
        // keeps its full width at every axial station, so the bumper can only
        // add deflection surface, never a narrower leading section.
        constexpr int kArcSegments = 12;
        const double h = halfwidth_m;
        const double arc_r = (h * h + b * b) / (2.0 * b);
        const double cx = b - arc_r;  // arc center (cx, 0)
        for (int i = 0; i <= kArcSegments; ++i) {
            const double y = -h + 2.0 * h * i / kArcSegments;
            body.outline.push_back(
                {cx + std::sqrt(std::max(0.0, arc_r * arc_r - y * y)), y});
        }
        body.outline.push_back({-length_m, h});
        body.outline.push_back({-length_m, -h});
    } else {
        body.outline = {{0.0, -halfwidth_m},
                        {0.0, halfwidth_m},
                        {-length_m, halfwidth_m},
                        {-length_m, -halfwidth_m}};
    }
    body.validate();
    return body;
}

void RoverBody::validate() const {
    if (outline.size() < 3)
        throw GeometryError("RoverBody outline needs at least 3 vertices");
    double area2 = 0.0;
    double max_x = -1e300, min_x = 1e300, max_ay = 0.0;
    for (std::size_t i = 0; i < outline.size(); ++i) {
        const Vec2& a = outline[i];
        const Vec2& b = outline[(i + 1) % outline.size()];
        if (!std::isfinite(a.x) || !std::isfinite(a.y))
            throw GeometryError("RoverBody outline has a non-finite vertex");
        area2 += a.cross(b);
        max_x = std::max(max_x, a.x);
        min_x = std::min(min_x, a.x);
        max_ay = std::max(max_ay, std::abs(a.y));
    }
    if (area2 <= 0.0)
        throw GeometryError("RoverBody outline must be counter-clockwise");
    // The nominal front face sits at body x = 0; protruding bumper rollers
    // may reach ahead of it, but never by more than the body halfwidth.
    if (max_x < -1e-9 || max_x > halfwidth_m)
        throw GeometryError(
            "RoverBody outline must reach body x = 0 (front face), with any "
            "bumper protrusion smaller than the halfwidth");
    if (std::abs(max_ay - halfwidth_m) > 1e-9)
        throw ValidationError("RoverBody.halfwidth_m inconsistent with outline");
    if (std::abs(-min_x - length_m) > 1e-9)
        throw ValidationError("RoverBody.length_m inconsistent with outline");
}

PortGeometry PortGeometry::from_curve(const GuideCurve& curve,
                                      double hardstop_x_m,
                                      double max_chord_error_m) {
    PortGeometry port;
    port.left_guide = curve.discretize(max_chord_error_m);
    port.right_guide = mirrored(port.left_guide);
    port.hardstop_x_m = hardstop_x_m;
    port.throat_halfwidth_m = curve.throat_halfwidth_m;
    port.validate();
    return port;
}

void PortGeometry::validate() const {
    left_guide.validate();
    right_guide.validate();
    if (left_guide.vertices.size() != right_guide.vertices.size())
        throw GeometryError("PortGeometry guides are not mirror images");
    for (std::size_t i = 0; i < left_guide.vertices.size(); ++i) {
        const Vec2& l = left_guide.vertices[i];
        const Vec2& r = right_guide.vertices[i];
        if (l.x != r.x || l.y != -r.y)
            throw GeometryError("PortGeometry guides are not mirror images");
        if (!(l.y > 0.0))
            throw GeometryError("PortGeometry left guide must stay above the axis");
    }
    if (std::abs(left_guide.vertices.back().y - throat_halfwidth_m) > 1e-9)
        throw GeometryError("PortGeometry guide does not end at the throat halfwidth");
    if (!(hardstop_x_m > depth_m()))
        throw GeometryError("PortGeometry hardstop must lie beyond the guide depth");
}

}  // namespace swapsim
