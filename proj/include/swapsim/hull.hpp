#pragma once

/**
 * Convex hulls of 3D point clouds via the quickhull algorithm.
 *
 * The toolkit uses hulls to summarise docking success regions whose axes are
 * (axial offset m, lateral offset m, yaw deg).  The "volume" of such a hull
 * mixes units (m * m * deg); it is meaningful only as a comparison metric
 * between hulls built over the same axes, never as a physical volume.
 * Axis labels travel with the cloud so exports stay self-describing.
 *
 * Determinism: all selection ties break toward the lowest point index, and
 * the construction applies a fixed microscopic joggle (~1e-12 of the cloud
 * extent, derived from point indices) to keep exactly-coplanar inputs such
 * as box faces combinatorially unambiguous.  Reported vertices, faces,
 * volume and containment all use the original, unjoggled coordinates, so
 * exact inputs give exact volumes.  Identical clouds always give identical
 * hulls.
 */

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "swapsim/rng.hpp"

namespace swapsim {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm() const;
};

struct PointCloud3 {
    std::vector<Vec3> points;
    std::array<std::string, 3> axis_labels = {"x", "y", "z"};
};

struct Hull3 {
    /// Indices (into the source cloud) of points on the hull, ascending.
    std::vector<int> vertex_indices;
    /// Triangular faces as cloud indices, outward-oriented.
    std::vector<std::array<int, 3>> faces;
    /// Signed-tetra volume in the cloud's mixed units; 0 when degenerate.
    double volume = 0.0;
    /// True when the cloud is collinear/coplanar within the 1e-9 tolerance.
    bool degenerate = false;
};

/// Degeneracy tolerance: clouds flat within this distance collapse to
/// volume 0 with the degenerate flag set.
inline constexpr double kHullDegenerateEps = 1e-9;

/**
 * Convex hull of the cloud.  Throws std::invalid_argument on fewer than
 * 4 points.  Collinear/coplanar clouds (within kHullDegenerateEps) return
 * degenerate = true, volume 0 and no faces.
 */
Hull3 quickhull3(const PointCloud3& cloud);

/// True when p lies inside or on the hull, with `slack` metres/degrees of
/// tolerance beyond each face plane.
bool hull_contains(const Hull3& hull, const PointCloud3& cloud, const Vec3& p,
                   double slack = kHullDegenerateEps);

/**
 * Monte-Carlo estimate of the hull volume: rejection sampling of the
 * vertex bounding box against the hull's face planes.  Splitting the work
 * across `workers` stripes does not change the result; every stripe draws
 * from its own sub-stream of `rng`.
 */
double hull_volume_oracle(const Hull3& hull, const PointCloud3& cloud,
                          std::uint64_t n_samples, const Rng& rng,
                          int workers = 1);

/// Object File Format export of the hull mesh (with axis-label comment).
void write_off(const Hull3& hull, const PointCloud3& cloud, std::ostream& os);

}  // namespace swapsim
