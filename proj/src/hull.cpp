#include "swapsim/hull.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <ostream>
#include <stdexcept>
#include <thread>
#include <utility>

namespace swapsim {

double Vec3::norm() const { return std::sqrt(x * x + y * y + z * z); }

namespace {

struct Face {
    std::array<int, 3> v;      // cloud indices, outward CCW
    Vec3 n;                    // unit outward normal (working coordinates)
    double off = 0.0;          // plane: n . x = off
    std::array<int, 3> nb;     // neighbour across edge (v[i], v[i+1])
    std::vector<int> outside;  // points strictly above this face
    int farthest = -1;
    double farthest_d = 0.0;
    bool alive = true;
};

double face_dist(const Face& f, const Vec3& p) { return f.n.dot(p) - f.off; }

void set_plane(Face& f, const std::vector<Vec3>& pts) {
    const Vec3& a = pts[f.v[0]];
    const Vec3 n = (pts[f.v[1]] - a).cross(pts[f.v[2]] - a);
    const double len = n.norm();
    f.n = len > 0.0 ? n * (1.0 / len) : Vec3{0.0, 0.0, 0.0};
    f.off = f.n.dot(a);
}

double dist_point_line(const Vec3& p, const Vec3& a, const Vec3& b) {
    const Vec3 d = b - a;
    const double len = d.norm();
    if (len == 0.0) return (p - a).norm();
    return (p - a).cross(d).norm() / len;
}

/// Deterministic microscopic perturbation used only to disambiguate the
/// hull combinatorics; all reported geometry uses the original points.
std::vector<Vec3> joggled_copy(const std::vector<Vec3>& pts, double scale) {
    std::vector<Vec3> out = pts;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const auto u01 = [](std::uint64_t h) {
            return static_cast<double>(h >> 11) * 0x1.0p-53 - 0.5;
        };
        const std::uint64_t h = splitmix64(static_cast<std::uint64_t>(i) + 1);
        out[i].x += scale * u01(h);
        out[i].y += scale * u01(splitmix64(h));
        out[i].z += scale * u01(splitmix64(splitmix64(h)));
    }
    return out;
}

}  // namespace

Hull3 quickhull3(const PointCloud3& cloud) {
    const std::vector<Vec3>& raw = cloud.points;
    const int n = static_cast<int>(raw.size());
    if (n < 4)
        throw std::invalid_argument("quickhull3: need at least 4 points");

    Vec3 lo = raw[0], hi = raw[0];
    for (const Vec3& p : raw) {
        lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
        hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
    }
    const double diag = (hi - lo).norm();

    Hull3 hull;

    // ---- initial simplex on the raw coordinates (degeneracy detection) ----
    // Axis-extreme candidates; scanning ascending keeps the lowest index on
    // ties, the project-wide tie rule.
    std::array<int, 6> ext{0, 0, 0, 0, 0, 0};
    for (int i = 1; i < n; ++i) {
        if (raw[i].x < raw[ext[0]].x) ext[0] = i;
        if (raw[i].x > raw[ext[1]].x) ext[1] = i;
        if (raw[i].y < raw[ext[2]].y) ext[2] = i;
        if (raw[i].y > raw[ext[3]].y) ext[3] = i;
        if (raw[i].z < raw[ext[4]].z) ext[4] = i;
        if (raw[i].z > raw[ext[5]].z) ext[5] = i;
    }
    int ia = ext[0], ib = ext[0];
    double best = -1.0;
    for (int u : ext)
        for (int v : ext) {
            const double d = (raw[u] - raw[v]).norm();
            if (d > best) {
                best = d;
                ia = std::min(u, v);
                ib = std::max(u, v);
            }
        }
    if (best <= kHullDegenerateEps) {  // all points coincident
        hull.degenerate = true;
        return hull;
    }
    int ic = -1;
    best = kHullDegenerateEps;
    for (int i = 0; i < n; ++i) {
        const double d = dist_point_line(raw[i], raw[ia], raw[ib]);
        if (d > best) {
            best = d;
            ic = i;
        }
    }
    if (ic < 0) {  // collinear within tolerance
        hull.degenerate = true;
        return hull;
    }
    Vec3 pn = (raw[ib] - raw[ia]).cross(raw[ic] - raw[ia]);
    pn = pn * (1.0 / pn.norm());
    const double poff = pn.dot(raw[ia]);
    int id = -1;
    best = kHullDegenerateEps;
    for (int i = 0; i < n; ++i) {
        const double d = std::abs(pn.dot(raw[i]) - poff);
        if (d > best) {
            best = d;
            id = i;
        }
    }
    if (id < 0) {  // coplanar within tolerance
        hull.degenerate = true;
        return hull;
    }

    // ---- working (joggled) coordinates for the combinatorial phase ----
    const double joggle = 1e-10 * diag;
    const double eps = 1e-13 * diag;
    const std::vector<Vec3> pts = joggled_copy(raw, joggle);

    const Vec3 centroid =
        (pts[ia] + pts[ib] + pts[ic] + pts[id]) * 0.25;  // interior forever

    std::vector<Face> faces;
    const auto make_face = [&](int a, int b, int c) {
        Face f;
        f.v = {a, b, c};
        set_plane(f, pts);
        if (face_dist(f, centroid) > 0.0) {  // flip to point outward
            std::swap(f.v[1], f.v[2]);
            set_plane(f, pts);
        }
        f.nb = {-1, -1, -1};
        return f;
    };
    faces.push_back(make_face(ia, ib, ic));
    faces.push_back(make_face(ia, ib, id));
    faces.push_back(make_face(ia, ic, id));
    faces.push_back(make_face(ib, ic, id));

    // Adjacency from scratch for a face set (used for the seed tetrahedron).
    const auto link_all = [&faces]() {
        std::map<std::pair<int, int>, std::pair<int, int>> edges;
        for (int fi = 0; fi < static_cast<int>(faces.size()); ++fi) {
            if (!faces[fi].alive) continue;
            for (int e = 0; e < 3; ++e) {
                const int u = faces[fi].v[e], v = faces[fi].v[(e + 1) % 3];
                const auto key = std::minmax(u, v);
                auto it = edges.find(key);
                if (it == edges.end()) {
                    edges[key] = {fi, e};
                } else {
                    faces[fi].nb[e] = it->second.first;
                    faces[it->second.first].nb[it->second.second] = fi;
                }
            }
        }
    };
    link_all();

    const auto push_outside = [&](int pi) {
        for (Face& f : faces) {
            if (!f.alive) continue;
            const double d = face_dist(f, pts[pi]);
            if (d > eps) {
                f.outside.push_back(pi);
                if (d > f.farthest_d ||
                    (d == f.farthest_d && pi < f.farthest)) {
                    f.farthest_d = d;
                    f.farthest = pi;
                }
                return true;
            }
        }
        return false;
    };
    for (int i = 0; i < n; ++i) {
        if (i == ia || i == ib || i == ic || i == id) continue;
        push_outside(i);
    }

    // ---- main loop ----
    // Safety valve only; each apex adds a vertex so n iterations suffice.
    long guard = 16l * n + 64;
    std::vector<int> stack, visible;
    for (int verify_rounds = 0; verify_rounds < 4; ++verify_rounds) {
        for (;;) {
            if (--guard < 0)
                throw std::logic_error("quickhull3: iteration guard tripped");
            int fsel = -1;
            for (int fi = 0; fi < static_cast<int>(faces.size()); ++fi)
                if (faces[fi].alive && !faces[fi].outside.empty()) {
                    fsel = fi;
                    break;
                }
            if (fsel < 0) break;
            const int apex = faces[fsel].farthest;
            const Vec3 ap = pts[apex];

            // Visible region (BFS over adjacency).
            visible.clear();
            stack.assign(1, fsel);
            std::vector<char> seen(faces.size(), 0);
            seen[fsel] = 1;
            while (!stack.empty()) {
                const int fi = stack.back();
                stack.pop_back();
                visible.push_back(fi);
                for (int e = 0; e < 3; ++e) {
                    const int nb = faces[fi].nb[e];
                    if (nb < 0 || seen[nb] || !faces[nb].alive) continue;
                    if (face_dist(faces[nb], ap) > eps) {
                        seen[nb] = 1;
                        stack.push_back(nb);
                    }
                }
            }

            // Horizon edges in BFS discovery order (deterministic).
            struct HorizonEdge {
                int a, b, outer;
            };
            std::vector<HorizonEdge> horizon;
            for (int fi : visible)
                for (int e = 0; e < 3; ++e) {
                    const int nb = faces[fi].nb[e];
                    if (nb >= 0 && !seen[nb])
                        horizon.push_back(
                            {faces[fi].v[e], faces[fi].v[(e + 1) % 3], nb});
                }

            // Cone of new faces.
            std::vector<int> fresh;
            std::map<std::pair<int, int>, std::pair<int, int>> open_edges;
            for (const HorizonEdge& he : horizon) {
                Face f;
                f.v = {he.a, he.b, apex};
                set_plane(f, pts);
                if (face_dist(f, centroid) > 0.0) {
                    std::swap(f.v[1], f.v[2]);
                    set_plane(f, pts);
                }
                f.nb = {-1, -1, -1};
                const int nfi = static_cast<int>(faces.size());
                faces.push_back(f);
                fresh.push_back(nfi);
                // Stitch across the horizon edge.
                Face& outer = faces[he.outer];
                for (int e = 0; e < 3; ++e) {
                    const auto key = std::minmax(faces[nfi].v[e],
                                                 faces[nfi].v[(e + 1) % 3]);
                    if (key == std::minmax(he.a, he.b)) {
                        faces[nfi].nb[e] = he.outer;
                        for (int oe = 0; oe < 3; ++oe)
                            if (std::minmax(outer.v[oe],
                                            outer.v[(oe + 1) % 3]) == key)
                                outer.nb[oe] = nfi;
                    } else {
                        auto it = open_edges.find(key);
                        if (it == open_edges.end()) {
                            open_edges[key] = {nfi, e};
                        } else {
                            faces[nfi].nb[e] = it->second.first;
                            faces[it->second.first].nb[it->second.second] =
                                nfi;
                        }
                    }
                }
            }

            // Retire visible faces and re-home their outside points.
            std::vector<int> orphans;
            for (int fi : visible) {
                faces[fi].alive = false;
                for (int pi : faces[fi].outside)
                    if (pi != apex) orphans.push_back(pi);
                faces[fi].outside.clear();
            }
            for (int pi : orphans)
                for (int nfi : fresh) {
                    Face& f = faces[nfi];
                    const double d = face_dist(f, pts[pi]);
                    if (d > eps) {
                        f.outside.push_back(pi);
                        if (d > f.farthest_d ||
                            (d == f.farthest_d && pi < f.farthest)) {
                            f.farthest_d = d;
                            f.farthest = pi;
                        }
                        break;
                    }
                }
        }

        // Verification sweep: every input point must now be inside the
        // joggled hull.  Re-home any escapee and run the loop again (guards
        // against rare orphan-partition corner cases).
        bool clean = true;
        for (int i = 0; i < n; ++i)
            if (push_outside(i)) clean = false;
        if (clean) break;
    }

    // ---- report in original coordinates ----
    std::vector<char> used(n, 0);
    for (const Face& f : faces) {
        if (!f.alive) continue;
        hull.faces.push_back(f.v);
        for (int v : f.v) used[v] = 1;
    }
    for (int i = 0; i < n; ++i)
        if (used[i]) hull.vertex_indices.push_back(i);

    Vec3 c{0, 0, 0};
    for (int v : hull.vertex_indices) c = c + raw[v];
    c = c * (1.0 / static_cast<double>(hull.vertex_indices.size()));
    double vol6 = 0.0;
    for (const auto& f : hull.faces) {
        const Vec3 a = raw[f[0]] - c, b = raw[f[1]] - c, d = raw[f[2]] - c;
        vol6 += a.dot(b.cross(d));
    }
    hull.volume = vol6 / 6.0;
    return hull;
}

bool hull_contains(const Hull3& hull, const PointCloud3& cloud, const Vec3& p,
                   double slack) {
    if (hull.degenerate || hull.faces.empty()) return false;
    for (const auto& fv : hull.faces) {
        const Vec3& a = cloud.points[fv[0]];
        const Vec3 n =
            (cloud.points[fv[1]] - a).cross(cloud.points[fv[2]] - a);
        const double len = n.norm();
        if (len <= 0.0) continue;  // sliver face; other faces bound it
        if (n.dot(p - a) / len > slack) return false;
    }
    return true;
}

double hull_volume_oracle(const Hull3& hull, const PointCloud3& cloud,
                          std::uint64_t n_samples, const Rng& rng,
                          int workers) {
    if (hull.degenerate || hull.faces.empty()) return 0.0;
    if (workers < 1) workers = 1;
    Vec3 lo = cloud.points[hull.vertex_indices[0]];
    Vec3 hi = lo;
    for (int v : hull.vertex_indices) {
        const Vec3& p = cloud.points[v];
        lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
        hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
    }
    const Vec3 span = hi - lo;
    const double box_vol = span.x * span.y * span.z;
    if (box_vol <= 0.0) return 0.0;

    // Fixed stripe decomposition: stripe i always draws from sub-stream i,
    // so the estimate is independent of the worker count.
    const int stripes = 64;
    std::vector<std::uint64_t> hits(stripes, 0);
    const auto run_stripe = [&](int s) {
        Rng r = rng.derive("hull-volume-oracle", static_cast<std::uint64_t>(s));
        const std::uint64_t count =
            n_samples / stripes + (static_cast<std::uint64_t>(s) <
                                           n_samples % stripes
                                       ? 1
                                       : 0);
        std::uint64_t h = 0;
        for (std::uint64_t i = 0; i < count; ++i) {
            const Vec3 p{lo.x + span.x * r.uniform(),
                         lo.y + span.y * r.uniform(),
                         lo.z + span.z * r.uniform()};
            if (hull_contains(hull, cloud, p, 0.0)) ++h;
        }
        hits[s] = h;
    };
    if (workers == 1) {
        for (int s = 0; s < stripes; ++s) run_stripe(s);
    } else {
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&]() {
                for (;;) {
                    const int s = next.fetch_add(1);
                    if (s >= stripes) return;
                    run_stripe(s);
                }
            });
        for (auto& t : pool) t.join();
    }
    std::uint64_t total = 0;
    for (std::uint64_t h : hits) total += h;
    return box_vol * static_cast<double>(total) /
           static_cast<double>(n_samples);
}

void write_off(const Hull3& hull, const PointCloud3& cloud, std::ostream& os) {
    std::vector<int> remap(cloud.points.size(), -1);
    for (std::size_t i = 0; i < hull.vertex_indices.size(); ++i)
        remap[hull.vertex_indices[i]] = static_cast<int>(i);
    os << "OFF\n";
    os << "# axes: " << cloud.axis_labels[0] << ", " << cloud.axis_labels[1]
       << ", " << cloud.axis_labels[2] << "\n";
    os << hull.vertex_indices.size() << " " << hull.faces.size() << " 0\n";
    for (int v : hull.vertex_indices) {
        const Vec3& p = cloud.points[v];
        os << p.x << " " << p.y << " " << p.z << "\n";
    }
    for (const auto& f : hull.faces)
        os << "3 " << remap[f[0]] << " " << remap[f[1]] << " " << remap[f[2]]
           << "\n";
}

}  // namespace swapsim
