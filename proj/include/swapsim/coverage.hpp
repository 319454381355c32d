#pragma once

/**
 * Coverage geometry for networks of charging hubs.
 *
 * A rover tethered to a hub can roam a disk of radius
 * service_radius = v * endurance / 2 (half the range is kept for the
 * return leg).  Networks of hubs extend coverage; the chain and hex
 * estimators below follow simple pairwise-overlap bookkeeping:
 *
 *   chain:  A = n * (A_hub - A_overlap) + A_overlap
 *   hex:    A = n * A_hub - max(0, 2n - 3) * A_overlap
 *
 * The hex formula counts overlaps with a fixed coefficient rather than from
 * the actual adjacency graph, so for some layouts it deviates from the true
 * union area; union_area_grid() reports the sampled truth so both numbers
 * can be compared side by side.  All lengths are metres, areas m^2.
 */

#include <cstdint>
#include <string>
#include <vector>

#include "swapsim/pose.hpp"

namespace swapsim {

/// Hours a rover can operate on one module charge: Q_b * V_b / P_rover.
double endurance_hours(double q_b_ah, double v_b_v, double p_rover_w);

/// Metres a hub serves in every direction: v * endurance / 2.
double service_radius_m(double v_mps, double endurance_h);

/**
 * Area of the lens where two service disks of radius r_m, centres d_m
 * apart, overlap.  Clamped to [0, pi r^2]; disjoint disks (d >= 2r)
 * return 0.
 */
double overlap_area_m2(double r_m, double d_m);

/// Chain-topology coverage estimate for n_hubs spaced d_m apart.
double chain_coverage_m2(int n_hubs, double r_m, double d_m);

/// Hex-topology coverage estimate (fixed-coefficient bookkeeping above).
double hex_coverage_m2(int n_hubs, double r_m, double d_m);

/// Hub centres along a line, spacing d_m.
std::vector<Vec2> chain_hub_positions(int n_hubs, double d_m);

/// Hub centres packed on a triangular lattice (ring by ring), pitch d_m.
std::vector<Vec2> hex_hub_positions(int n_hubs, double d_m);

/**
 * Sampled area of the union of service disks: a regular grid of about
 * n_samples points over the bounding box.  Deterministic; `workers` only
 * splits the rows and never changes the result.
 */
double union_area_grid_m2(const std::vector<Vec2>& hubs, double r_m,
                          std::uint64_t n_samples, int workers = 1);

/**
 * True when every grid point (pitch grid_step_m) of the convex hull of the
 * hub centres lies within r_m of some hub.  Points exactly at distance r
 * count as covered (1e-9 relative slack).
 */
bool gapless(const std::vector<Vec2>& hubs, double r_m, double grid_step_m);

struct Trajectory {
    std::vector<Vec2> waypoints_m;  ///< polyline the rover drives

    double length_m() const;
};

struct TrajectoryCheck {
    bool ok = false;
    std::string reason;  ///< empty when ok
};

/**
 * A rover sortie is valid when it starts and ends within snap_tol_m of a
 * hub and its total length does not exceed the out-and-back range 2 * r_m.
 */
TrajectoryCheck validate_trajectory(const Trajectory& traj,
                                    const std::vector<Vec2>& hubs, double r_m,
                                    double snap_tol_m = 1.0);

}  // namespace swapsim
