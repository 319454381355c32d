#include "swapsim/dock_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "swapsim/errors.hpp"
#include "swapsim/units.hpp"

namespace swapsim {

const char* to_string(DockOutcome o) {
    switch (o) {
        case DockOutcome::kSuccess: return "SUCCESS";
        case DockOutcome::kWedged: return "WEDGED";
        case DockOutcome::kMissedPort: return "MISSED_PORT";
        case DockOutcome::kExceededSteps: return "EXCEEDED_STEPS";
    }
    return "?";
}

namespace {

Vec2 closest_on_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 d = b - a;
    const double len2 = d.norm_sq();
    if (len2 <= 0.0) return a;
    const double t = std::clamp((p - a).dot(d) / len2, 0.0, 1.0);
    return a + d * t;
}

bool point_in_polygon(const std::vector<Vec2>& poly, const Vec2& p) {
    bool in = false;
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[j];
        if ((a.y > p.y) != (b.y > p.y) &&
            p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x)
            in = !in;
    }
    return in;
}

}  // namespace

DockSim::DockSim(PortGeometry port, RoverBody rover, SimParams params)
    : port_(std::move(port)), rover_(std::move(rover)), params_(params) {
    port_.validate();
    rover_.validate();
    if (rover_.halfwidth_m > port_.mouth_halfwidth_m())
        throw GeometryError(
            "rover outline is wider than the port mouth opening");

    // Funnel profile: guide wall extended with the straight throat wall.
    const double x_end = port_.hardstop_x_m + 0.05;
    for (const Vec2& v : port_.left_guide.vertices) {
        if (!profile_.empty() && v.x <= profile_.back().x + 1e-12) {
            profile_.back().y = std::min(profile_.back().y, v.y);
        } else {
            profile_.push_back(v);
        }
    }
    profile_.push_back({x_end, port_.throat_halfwidth_m});

    // Upper wall chain: hub front face, guide, throat wall.
    const double mouth = port_.mouth_halfwidth_m();
    std::vector<Vec2> chain;
    chain.push_back({0.0, mouth + params_.front_wall_extent_m});
    for (const Vec2& v : port_.left_guide.vertices) chain.push_back(v);
    chain.push_back({x_end, port_.throat_halfwidth_m});
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
        wall_segments_.emplace_back(chain[i], chain[i + 1]);
        const Vec2 d = chain[i + 1] - chain[i];
        const double len = d.norm();
        const int pieces =
            std::max(1, static_cast<int>(
                            std::ceil(len / params_.wall_sample_spacing_m)));
        for (int k = 0; k < pieces; ++k)
            wall_samples_.push_back(chain[i] +
                                    d * (static_cast<double>(k) / pieces));
    }
    wall_samples_.push_back(chain.back());
}

double DockSim::channel_halfwidth(double x) const {
    if (x <= profile_.front().x) return profile_.front().y;
    if (x >= profile_.back().x) return profile_.back().y;
    auto it = std::upper_bound(
        profile_.begin(), profile_.end(), x,
        [](double value, const Vec2& v) { return value < v.x; });
    const Vec2& b = *it;
    const Vec2& a = *(it - 1);
    const double t = (x - a.x) / (b.x - a.x);
    return a.y + t * (b.y - a.y);
}

void DockSim::detect(const Pose2D& pose, std::vector<Contact>& out) const {
    out.clear();
    thread_local std::vector<Vec2> world;
    world.clear();
    for (const Vec2& b : rover_.outline) world.push_back(pose.to_world(b));

    double min_x = 1e300, max_x = -1e300, min_y = 1e300, max_y = -1e300;
    for (const Vec2& v : world) {
        min_x = std::min(min_x, v.x);
        max_x = std::max(max_x, v.x);
        min_y = std::min(min_y, v.y);
        max_y = std::max(max_y, v.y);
    }

    // (a) rover vertices penetrating a wall: push the vertex to the nearest
    // point of the violated side's wall chain.
    for (const Vec2& v : world) {
        if (v.x < 0.0) continue;
        const double w = channel_halfwidth(v.x);
        if (std::abs(v.y) <= w) continue;
        const Vec2 q{v.x, v.y >= 0.0 ? v.y : -v.y};  // mirror to upper side
        Vec2 best{0.0, 0.0};
        double best_d2 = std::numeric_limits<double>::max();
        for (const auto& seg : wall_segments_) {
            const Vec2 c = closest_on_segment(q, seg.first, seg.second);
            const double d2 = (c - q).norm_sq();
            if (d2 < best_d2) {
                best_d2 = d2;
                best = c;
            }
        }
        if (v.y < 0.0) best.y = -best.y;  // mirror back
        const double depth = std::sqrt(best_d2);
        if (depth <= 0.0) continue;
        out.push_back({v, (best - v) / depth, depth, true});
    }

    // (b) wall sample points swallowed by the rover polygon: push the rover
    // off the nearest footprint edge.
    const auto sample_contact = [&](const Vec2& s) {
        if (s.x < min_x || s.x > max_x || s.y < min_y || s.y > max_y) return;
        if (!point_in_polygon(world, s)) return;
        Vec2 best{0.0, 0.0};
        double best_d2 = std::numeric_limits<double>::max();
        for (std::size_t i = 0, j = world.size() - 1; i < world.size();
             j = i++) {
            const Vec2 c = closest_on_segment(s, world[j], world[i]);
            const double d2 = (c - s).norm_sq();
            if (d2 < best_d2) {
                best_d2 = d2;
                best = c;
            }
        }
        const double depth = std::sqrt(best_d2);
        if (depth <= 0.0) return;
        // Moving the rover along (s - nearest boundary point) carries that
        // boundary past s, releasing the sample.
        out.push_back({s, (s - best) / depth, depth, false});
    };
    for (const Vec2& s : wall_samples_) {
        sample_contact(s);
        sample_contact({s.x, -s.y});
    }
}

ResolveResult DockSim::contact_resolve(const Pose2D& pose) const {
    ResolveResult rr;
    rr.pose = pose;
    thread_local std::vector<Contact> cs;

    const auto deepest = [this](const std::vector<Contact>& v) {
        int idx = -1;
        double dmax = params_.resolve_tolerance_m;
        for (std::size_t i = 0; i < v.size(); ++i)
            if (v[i].depth > dmax) {  // strict: first wins on exact ties
                dmax = v[i].depth;
                idx = static_cast<int>(i);
            }
        return idx;
    };

    const double rot_cap = deg_to_rad(params_.max_rotation_per_iter_deg);
    for (int iter = 0; iter < params_.max_resolve_iterations; ++iter) {
        rr.iterations = iter;
        detect(rr.pose, cs);
        const int i1 = deepest(cs);
        if (i1 < 0) {
            rr.resolved = true;
            return rr;
        }
        const Contact c1 = cs[i1];
        const Vec2 t = c1.normal * c1.depth;
        rr.pose = Pose2D(rr.pose.x_axial + t.x, rr.pose.y_lateral + t.y,
                         rr.pose.yaw_deg);
        const Vec2 pivot = c1.on_rover ? c1.point + t : c1.point;

        detect(rr.pose, cs);
        const int i2 = deepest(cs);
        if (i2 < 0) continue;
        const Contact& c2 = cs[i2];
        if (c1.normal.dot(c2.normal) < -0.1) {
            // Conflicting pair: relieve the second contact by rotating about
            // the first contact point.
            const Vec2 r = c2.point - pivot;
            const double denom = r.perp().dot(c2.normal);
            if (std::abs(denom) > 1e-12) {
                double dpsi = c2.depth / denom;  // rad, first order
                dpsi = std::clamp(dpsi, -rot_cap, rot_cap);
                const double c = std::cos(dpsi), s = std::sin(dpsi);
                const Vec2 rel{rr.pose.x_axial - pivot.x,
                               rr.pose.y_lateral - pivot.y};
                rr.pose = Pose2D(pivot.x + c * rel.x - s * rel.y,
                                 pivot.y + s * rel.x + c * rel.y,
                                 rr.pose.yaw_deg + rad_to_deg(dpsi));
            }
        }
    }
    detect(rr.pose, cs);
    rr.resolved = deepest(cs) < 0;
    rr.iterations = params_.max_resolve_iterations;
    return rr;
}

DockResult DockSim::simulate_entry(const Pose2D& start) const {
    for (const Vec2& b : rover_.outline)
        if (start.to_world(b).x >= 0.0)
            throw ValidationError(
                "simulate_entry: start pose must place the rover fully "
                "outside the port mouth plane");

    DockResult res;
    res.final_pose = start;
    if (params_.record_trajectory) res.trajectory.push_back(start);

    Pose2D pose = start;
    const int window = std::max(1, params_.stall_window_steps);
    std::vector<double> x_hist(static_cast<std::size_t>(window), start.x_axial);

    for (long k = 1; k <= params_.max_steps; ++k) {
        pose = Pose2D(pose.x_axial + params_.step_m, pose.y_lateral,
                      pose.yaw_deg);
        const ResolveResult rr = contact_resolve(pose);
        pose = rr.pose;
        res.steps = k;
        if (params_.record_trajectory) res.trajectory.push_back(pose);
        res.final_pose = pose;

        if (!rr.resolved) {
            res.outcome = DockOutcome::kWedged;
            res.detail = "penetration not cleared within the iteration cap";
            return res;
        }
        if (pose.x_axial >= port_.hardstop_x_m) {
            const bool ok =
                std::abs(pose.y_lateral) <= params_.lateral_tolerance_m &&
                std::abs(pose.yaw_deg) <= params_.yaw_tolerance_deg;
            res.outcome = ok ? DockOutcome::kSuccess : DockOutcome::kMissedPort;
            if (!ok) res.detail = "reached the hardstop outside tolerances";
            return res;
        }
        const std::size_t slot = static_cast<std::size_t>(k % window);
        if (k >= window) {
            const double progress = pose.x_axial - x_hist[slot];
            if (progress < 0.25 * params_.step_m * window) {
                const bool engaged =
                    std::abs(pose.y_lateral) <= port_.mouth_halfwidth_m();
                res.outcome = engaged ? DockOutcome::kWedged
                                      : DockOutcome::kMissedPort;
                res.detail = engaged
                                 ? "progress stalled inside the opening"
                                 : "progress stalled against the hub face";
                return res;
            }
        }
        x_hist[slot] = pose.x_axial;
    }
    res.outcome = DockOutcome::kExceededSteps;
    res.detail = "step cap reached before the hardstop";
    return res;
}

DockResult simulate_entry(const PortGeometry& port, const RoverBody& rover,
                          const Pose2D& start, const SimParams& params) {
    return DockSim(port, rover, params).simulate_entry(start);
}

}  // namespace swapsim
