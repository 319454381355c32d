#include "swapsim/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include "swapsim/errors.hpp"

namespace swapsim {

double endurance_hours(double q_b_ah, double v_b_v, double p_rover_w) {
    if (!(q_b_ah > 0.0)) throw ValidationError("endurance: q_b_ah must be > 0");
    if (!(v_b_v > 0.0)) throw ValidationError("endurance: v_b_v must be > 0");
    if (!(p_rover_w > 0.0))
        throw ValidationError("endurance: p_rover_w must be > 0");
    return q_b_ah * v_b_v / p_rover_w;  // Ah * V = Wh; Wh / W = h
}

double service_radius_m(double v_mps, double endurance_h) {
    if (v_mps < 0.0) throw ValidationError("service_radius: v_mps must be >= 0");
    if (!(endurance_h > 0.0))
        throw ValidationError("service_radius: endurance_h must be > 0");
    return 0.5 * v_mps * endurance_h * 3600.0;
}

double overlap_area_m2(double r_m, double d_m) {
    if (!(r_m > 0.0)) throw ValidationError("overlap_area: r_m must be > 0");
    if (d_m < 0.0) throw ValidationError("overlap_area: d_m must be >= 0");
    const double full = std::numbers::pi * r_m * r_m;
    if (d_m >= 2.0 * r_m) return 0.0;  // disjoint disks
    if (d_m == 0.0) return full;       // coincident disks
    const double a = 2.0 * r_m * r_m * std::acos(d_m / (2.0 * r_m)) -
                     0.5 * d_m * std::sqrt(4.0 * r_m * r_m - d_m * d_m);
    return std::clamp(a, 0.0, full);
}

double chain_coverage_m2(int n_hubs, double r_m, double d_m) {
    if (n_hubs < 1) throw ValidationError("chain_coverage: n_hubs must be >= 1");
    const double a_hub = std::numbers::pi * r_m * r_m;
    const double a_ov = overlap_area_m2(r_m, d_m);
    return n_hubs * (a_hub - a_ov) + a_ov;
}

double hex_coverage_m2(int n_hubs, double r_m, double d_m) {
    if (n_hubs < 1) throw ValidationError("hex_coverage: n_hubs must be >= 1");
    const double a_hub = std::numbers::pi * r_m * r_m;
    const double a_ov = overlap_area_m2(r_m, d_m);
    return n_hubs * a_hub - std::max(0, 2 * n_hubs - 3) * a_ov;
}

std::vector<Vec2> chain_hub_positions(int n_hubs, double d_m) {
    if (n_hubs < 1) throw ValidationError("chain positions: n_hubs must be >= 1");
    std::vector<Vec2> out;
    for (int i = 0; i < n_hubs; ++i) out.push_back({i * d_m, 0.0});
    return out;
}

std::vector<Vec2> hex_hub_positions(int n_hubs, double d_m) {
    if (n_hubs < 1) throw ValidationError("hex positions: n_hubs must be >= 1");
    // Triangular lattice walked ring by ring from the origin; within a ring,
    // corners first starting due east, counter-clockwise.
    std::vector<Vec2> out{{0.0, 0.0}};
    const double h = d_m * std::numbers::sqrt3 / 2.0;
    for (int ring = 1; static_cast<int>(out.size()) < n_hubs; ++ring) {
        // Six ring corners.
        const Vec2 corners[6] = {
            {ring * d_m, 0.0},          {ring * d_m / 2.0, ring * h},
            {-ring * d_m / 2.0, ring * h}, {-ring * d_m, 0.0},
            {-ring * d_m / 2.0, -ring * h}, {ring * d_m / 2.0, -ring * h}};
        for (int side = 0; side < 6 && static_cast<int>(out.size()) < n_hubs;
             ++side) {
            const Vec2 from = corners[side];
            const Vec2 to = corners[(side + 1) % 6];
            for (int step = 0;
                 step < ring && static_cast<int>(out.size()) < n_hubs; ++step)
                out.push_back(from + (to - from) * (static_cast<double>(step) /
                                                    ring));
        }
    }
    return out;
}

double union_area_grid_m2(const std::vector<Vec2>& hubs, double r_m,
                          std::uint64_t n_samples, int workers) {
    if (hubs.empty()) throw ValidationError("union_area: hubs must be non-empty");
    if (!(r_m > 0.0)) throw ValidationError("union_area: r_m must be > 0");
    if (n_samples == 0) throw ValidationError("union_area: n_samples must be > 0");
    double min_x = hubs[0].x, max_x = hubs[0].x;
    double min_y = hubs[0].y, max_y = hubs[0].y;
    for (const Vec2& h : hubs) {
        min_x = std::min(min_x, h.x);
        max_x = std::max(max_x, h.x);
        min_y = std::min(min_y, h.y);
        max_y = std::max(max_y, h.y);
    }
    min_x -= r_m;
    max_x += r_m;
    min_y -= r_m;
    max_y += r_m;
    const double w = max_x - min_x, h = max_y - min_y;
    // Grid with the requested sample budget and near-square cells.
    const double aspect = w / h;
    std::uint64_t nx = static_cast<std::uint64_t>(
        std::llround(std::sqrt(static_cast<double>(n_samples) * aspect)));
    nx = std::max<std::uint64_t>(nx, 1);
    const std::uint64_t ny = std::max<std::uint64_t>(n_samples / nx, 1);
    const double r2 = r_m * r_m;

    std::vector<std::uint64_t> row_hits(ny, 0);
    const auto run_rows = [&](std::uint64_t lo, std::uint64_t hi) {
        for (std::uint64_t j = lo; j < hi; ++j) {
            const double y = min_y + h * (j + 0.5) / ny;
            std::uint64_t hits = 0;
            for (std::uint64_t i = 0; i < nx; ++i) {
                const double x = min_x + w * (i + 0.5) / nx;
                for (const Vec2& c : hubs) {
                    const double dx = x - c.x, dy = y - c.y;
                    if (dx * dx + dy * dy <= r2) {
                        ++hits;
                        break;
                    }
                }
            }
            row_hits[j] = hits;
        }
    };
    if (workers <= 1) {
        run_rows(0, ny);
    } else {
        std::vector<std::thread> pool;
        const std::uint64_t chunk = (ny + workers - 1) / workers;
        for (int t = 0; t < workers; ++t) {
            const std::uint64_t lo = t * chunk;
            const std::uint64_t hi = std::min(ny, lo + chunk);
            if (lo < hi) pool.emplace_back(run_rows, lo, hi);
        }
        for (auto& t : pool) t.join();
    }
    std::uint64_t total = 0;
    for (std::uint64_t v : row_hits) total += v;
    return w * h * static_cast<double>(total) /
           (static_cast<double>(nx) * static_cast<double>(ny));
}

namespace {

/// Andrew monotone chain; returns CCW hull (may be a point or segment).
std::vector<Vec2> convex_hull_2d(std::vector<Vec2> pts) {
    std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const Vec2& a, const Vec2& b) {
                              return a.x == b.x && a.y == b.y;
                          }),
              pts.end());
    if (pts.size() < 3) return pts;
    std::vector<Vec2> hull(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 &&
               (hull[k - 1] - hull[k - 2]).cross(pts[i] - hull[k - 2]) <= 0.0)
            --k;
        hull[k++] = pts[i];
    }
    const std::size_t lower = k + 1;
    for (std::size_t i = pts.size() - 1; i-- > 0;) {
        while (k >= lower &&
               (hull[k - 1] - hull[k - 2]).cross(pts[i] - hull[k - 2]) <= 0.0)
            --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

bool in_convex_polygon(const std::vector<Vec2>& hull, const Vec2& p,
                       double eps) {
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const Vec2& a = hull[i];
        const Vec2& b = hull[(i + 1) % hull.size()];
        if ((b - a).cross(p - a) < -eps) return false;
    }
    return true;
}

}  // namespace

bool gapless(const std::vector<Vec2>& hubs, double r_m, double grid_step_m) {
    if (hubs.empty()) throw ValidationError("gapless: hubs must be non-empty");
    if (!(r_m > 0.0)) throw ValidationError("gapless: r_m must be > 0");
    if (!(grid_step_m > 0.0))
        throw ValidationError("gapless: grid_step_m must be > 0");
    const double r_tol = r_m * (1.0 + 1e-9);  // boundary points count
    const double r2 = r_tol * r_tol;
    const auto covered = [&](const Vec2& p) {
        for (const Vec2& c : hubs) {
            const double dx = p.x - c.x, dy = p.y - c.y;
            if (dx * dx + dy * dy <= r2) return true;
        }
        return false;
    };

    const std::vector<Vec2> hull = convex_hull_2d(hubs);
    if (hull.size() == 1) return covered(hull[0]);
    if (hull.size() == 2) {  // degenerate: sample along the segment
        const Vec2 d = hull[1] - hull[0];
        const int n = std::max(1, static_cast<int>(std::ceil(d.norm() /
                                                             grid_step_m)));
        for (int i = 0; i <= n; ++i)
            if (!covered(hull[0] + d * (static_cast<double>(i) / n)))
                return false;
        return true;
    }
    double min_x = hull[0].x, max_x = hull[0].x;
    double min_y = hull[0].y, max_y = hull[0].y;
    for (const Vec2& v : hull) {
        min_x = std::min(min_x, v.x);
        max_x = std::max(max_x, v.x);
        min_y = std::min(min_y, v.y);
        max_y = std::max(max_y, v.y);
    }
    const double eps = 1e-12 * std::max(max_x - min_x, max_y - min_y);
    for (double y = min_y; y <= max_y + 0.5 * grid_step_m; y += grid_step_m)
        for (double x = min_x; x <= max_x + 0.5 * grid_step_m;
             x += grid_step_m) {
            const Vec2 p{std::min(x, max_x), std::min(y, max_y)};
            if (in_convex_polygon(hull, p, eps) && !covered(p)) return false;
        }
    return true;
}

double Trajectory::length_m() const {
    double total = 0.0;
    for (std::size_t i = 1; i < waypoints_m.size(); ++i)
        total += (waypoints_m[i] - waypoints_m[i - 1]).norm();
    return total;
}

TrajectoryCheck validate_trajectory(const Trajectory& traj,
                                    const std::vector<Vec2>& hubs, double r_m,
                                    double snap_tol_m) {
    if (hubs.empty())
        throw ValidationError("validate_trajectory: hubs must be non-empty");
    if (traj.waypoints_m.size() < 2)
        return {false, "trajectory needs at least two waypoints"};
    const auto near_hub = [&](const Vec2& p) {
        for (const Vec2& c : hubs)
            if ((p - c).norm() <= snap_tol_m) return true;
        return false;
    };
    if (!near_hub(traj.waypoints_m.front()))
        return {false, "start is not at a hub"};
    if (!near_hub(traj.waypoints_m.back()))
        return {false, "end is not at a hub"};
    const double limit = 2.0 * r_m * (1.0 + 1e-12) + 1e-9;
    if (traj.length_m() > limit)
        return {false, "length exceeds the out-and-back range"};
    return {true, ""};
}

}  // namespace swapsim
