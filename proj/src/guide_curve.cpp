#include "swapsim/guide_curve.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "swapsim/units.hpp"

namespace swapsim {

double Polyline2D::length() const {
    double total = 0.0;
    for (std::size_t i = 1; i < vertices.size(); ++i)
        total += (vertices[i] - vertices[i - 1]).norm();
    return total;
}

namespace {

/// Proper segment intersection test (shared endpoints of adjacent segments
/// are not counted).
bool segments_cross(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
    const auto orient = [](const Vec2& p, const Vec2& q, const Vec2& r) {
        const double v = (q - p).cross(r - p);
        if (v > 0.0) return 1;
        if (v < 0.0) return -1;
        return 0;
    };
    const int o1 = orient(a, b, c), o2 = orient(a, b, d);
    const int o3 = orient(c, d, a), o4 = orient(c, d, b);
    return o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0;
}

}  // namespace

void Polyline2D::validate() const {
    if (vertices.size() < 2)
        throw GeometryError("Polyline2D needs at least 2 vertices");
    for (const Vec2& v : vertices)
        if (!std::isfinite(v.x) || !std::isfinite(v.y))
            throw GeometryError("Polyline2D has a non-finite vertex");
    for (std::size_t i = 0; i + 1 < vertices.size(); ++i)
        for (std::size_t j = i + 2; j + 1 < vertices.size(); ++j)
            if (segments_cross(vertices[i], vertices[i + 1], vertices[j],
                               vertices[j + 1]))
                throw GeometryError("Polyline2D self-intersects");
}

Polyline2D mirrored(const Polyline2D& p) {
    Polyline2D out;
    out.vertices.reserve(p.vertices.size());
    for (const Vec2& v : p.vertices) out.vertices.push_back({v.x, -v.y});
    return out;
}

void GuideCurve::validate() const {
    if (!(theta_deg >= 0.0) || theta_deg > 90.0)
        throw ValidationError("GuideCurve.theta_deg must be in [0, 90]");
    if (!(weight >= 0.0) || weight > 1.0)
        throw ValidationError("GuideCurve.weight must be in [0, 1]");
    if (!(throat_halfwidth_m > 0.0))
        throw ValidationError("GuideCurve.throat_halfwidth_m must be > 0");
    if (!(mouth_halfwidth_m > throat_halfwidth_m))
        throw ValidationError(
            "GuideCurve.mouth_halfwidth_m must exceed throat_halfwidth_m");
    if (!(depth_m > 0.0))
        throw ValidationError("GuideCurve.depth_m must be > 0");
}

std::array<Vec2, 3> GuideCurve::control_points() const {
    validate();
    const double m = mouth_halfwidth_m;
    const double t = throat_halfwidth_m;
    const double d = depth_m;
    const Vec2 p0{0.0, m};
    const Vec2 p2{d, t};

    // Backward tangent ray from P2: P(s) = P2 + s * (-cos(theta), +sin(theta)).
    const double th = deg_to_rad(theta_deg);
    const double c = std::cos(th), s = std::sin(th);
    const double inf = std::numeric_limits<double>::infinity();
    const double s_mouth_plane = c > 0.0 ? d / c : inf;        // hits x = 0
    const double s_mouth_line = s > 0.0 ? (m - t) / s : inf;   // hits y = m

    Vec2 anchor_pt;
    if (anchor == TangentAnchor::kMouthLine) {
        if (!(s_mouth_line < inf))
            throw GeometryError(
                "GuideCurve: tangent parallel to the mouth line; no anchor");
        anchor_pt = {d - s_mouth_line * c, m};
        if (anchor_pt.x < 0.0)
            throw GeometryError(
                "GuideCurve: tangent anchor falls outside the segment between "
                "P0 and the throat plane (tangent too shallow)");
    } else {
        const double sx = std::min(s_mouth_plane, s_mouth_line);
        anchor_pt = {d - sx * c, t + sx * s};
    }

    const Vec2 p1 = anchor_pt + weight * (p2 - anchor_pt);
    return {p0, p1, p2};
}

Vec2 GuideCurve::evaluate(double t) const {
    if (!(t >= 0.0) || t > 1.0)
        throw std::domain_error("GuideCurve::evaluate: t outside [0, 1]");
    const auto cp = control_points();
    const double u = 1.0 - t;
    return u * u * cp[0] + 2.0 * u * t * cp[1] + t * t * cp[2];
}

namespace {

/// Max deviation of a quadratic Bezier from its chord is |P1 - mid| / 2,
/// attained at t = 1/2.
double flatness(const Vec2& p0, const Vec2& p1, const Vec2& p2) {
    const Vec2 mid = (p0 + p2) * 0.5;
    return 0.5 * (p1 - mid).norm();
}

void subdivide(const Vec2& p0, const Vec2& p1, const Vec2& p2, double eps,
               std::vector<Vec2>& out) {
    if (flatness(p0, p1, p2) <= eps) {
        out.push_back(p2);
        return;
    }
    // de Casteljau split at t = 1/2.
    const Vec2 a = (p0 + p1) * 0.5;
    const Vec2 b = (p1 + p2) * 0.5;
    const Vec2 mid = (a + b) * 0.5;
    subdivide(p0, a, mid, eps, out);
    subdivide(mid, b, p2, eps, out);
}

}  // namespace

Polyline2D GuideCurve::discretize(double max_chord_error_m) const {
    if (!(max_chord_error_m > 0.0))
        throw ValidationError("GuideCurve::discretize: max_chord_error_m must be > 0");
    const auto cp = control_points();
    Polyline2D out;
    out.vertices.push_back(cp[0]);
    subdivide(cp[0], cp[1], cp[2], max_chord_error_m, out.vertices);
    out.vertices.back() = cp[2];  // endpoint exact regardless of splits
    return out;
}

}  // namespace swapsim
