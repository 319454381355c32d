#pragma once
/// Search utilities built on top of the docking simulator: per-axis maximum
/// compensable misalignment, a theta/weight grid search over guide shapes,
/// and Monte-Carlo mapping of the successful-start region.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "swapsim/dock_geometry.hpp"
#include "swapsim/dock_sim.hpp"
#include "swapsim/guide_curve.hpp"
#include "swapsim/hull.hpp"
#include "swapsim/pose.hpp"
#include "swapsim/rng.hpp"

namespace swapsim {

enum class PerturbAxis { kYawDeg, kLateralM };

struct CompensationConfig {
    PerturbAxis axis = PerturbAxis::kYawDeg;
    /// Search ceiling, degrees or metres to match the axis.
    double upper = 90.0;
    /// Bisection stops once the bracket is narrower than this.
    double tolerance = 0.05;
    int max_iterations = 60;
    Pose2D base_start{-0.15, 0.0, 0.0};
    /// Probe both perturbation signs and report the smaller edge, so the
    /// result reads "any offset up to X is recovered".
    bool both_signs = true;
};

struct CompensationResult {
    /// Largest magnitude on the axis that still docks (0 when none).
    double max_magnitude = 0.0;
    double max_positive = 0.0;
    double max_negative = 0.0;
    /// False when even the unperturbed start fails; magnitude is 0 then.
    bool aligned_ok = false;
    /// False when probing found passes beyond the bisection edge.
    bool monotonic = true;
    bool used_sweep_fallback = false;
    int simulations = 0;
    std::string diagnostic;
};

CompensationResult max_compensation(const DockSim& sim,
                                    const CompensationConfig& cfg);

struct SweepPoint {
    double magnitude = 0.0;
    bool passed = false;
};

/// Uniform scan of one perturbation sign from 0 to `upper` inclusive.
std::vector<SweepPoint> compensation_sweep(const DockSim& sim, PerturbAxis axis,
                                           const Pose2D& base, double sign,
                                           double upper, double step);

/// Largest passing magnitude in a sweep; -1 when nothing passed.
double sweep_max_passing(const std::vector<SweepPoint>& points);

struct GridSearchConfig {
    std::vector<double> theta_values_deg;
    std::vector<double> weight_values;
    /// Template curve; theta/weight are overwritten per cell.
    GuideCurve base_curve;
    double hardstop_x_m = 0.55;
    double max_chord_error_m = 5e-4;
    RoverBody rover;
    SimParams sim_params;
    CompensationConfig yaw;
    CompensationConfig lateral;
    /// Score normalisation: score = hypot(max_yaw / yaw_scale,
    /// max_lateral / lateral_scale).
    double score_yaw_scale_deg = 90.0;
    double score_lateral_scale_m = 0.24;
    int workers = 1;

    /// 11 tangent angles (0..90 deg) crossed with 11 weights (0..1).
    static GridSearchConfig default_grid(const GuideCurve& base,
                                         double hardstop_x_m,
                                         const RoverBody& rover);
};

struct GridCell {
    double theta_deg = 0.0;
    double weight = 0.0;
    double max_yaw_deg = 0.0;
    double max_lateral_m = 0.0;
    /// Root-sum-square of the two capture ranges, each normalised by its
    /// search ceiling (90 deg, mouth halfwidth).  Higher is better.
    double score = 0.0;
    /// False when the geometry is invalid or the aligned start fails;
    /// such cells score 0 and carry an explanation in `note`.
    bool valid = false;
    int simulations = 0;
    std::string note;
};

struct GridSearchResult {
    std::vector<GridCell> cells;  ///< theta-major scan order
    /// Cell indices sorted best-first; invalid cells rank after all valid
    /// ones, ties broken by ascending theta, then ascending weight.
    std::vector<int> ranking;
    /// Index of the top-ranked valid cell, or -1 when no cell is valid.
    int best_index = -1;
    int total_simulations = 0;
};

GridSearchResult grid_search(const GridSearchConfig& cfg);

/// Start-pose scatter for the Monte-Carlo region map.  Offsets are drawn as
/// independent Gaussians and added to the mean start pose.
struct MonteCarloSpec {
    int n_samples = 1000;
    double mean_axial_m = -0.15;
    double mean_lateral_m = 0.0;
    double mean_yaw_deg = 0.0;
    double sd_axial_m = 0.01;
    double sd_lateral_m = 0.02;
    double sd_yaw_deg = 8.0;

    void validate() const;
    bool same_distribution(const MonteCarloSpec& other) const;
};

/// Successful-start region of one guide configuration.  The cloud stores the
/// drawn offsets (axial m, lateral m, yaw deg) of every successful attempt;
/// the hull volume mixes metres and degrees, which is fine for the
/// ratio-style comparisons it exists for.
struct SuccessRegion {
    MonteCarloSpec spec;
    std::uint64_t seed = 0;
    int n_passed = 0;
    PointCloud3 pass_cloud;
    Hull3 hull;
    std::vector<DockOutcome> outcomes;  ///< per sample, index order
};

/// Sample `spec.n_samples` starts and hull the successful offsets.  Each
/// sample derives its own generator from `rng` by index, so results do not
/// depend on `workers`.  Fewer than four successes (or a flat cloud) yields a
/// degenerate hull with volume 0.
SuccessRegion monte_carlo_region(const DockSim& sim, const MonteCarloSpec& spec,
                                 const Rng& rng, int workers = 1);

/// Volume table across design iterations, all relative to the first entry.
struct IterationReport {
    std::vector<double> volumes;
    std::vector<int> passed;
    /// volume[i] / volume[0]; only meaningful when ratios_defined.
    std::vector<double> ratio_to_first;
    /// False when the first region has zero volume (ratios undefined).
    bool ratios_defined = false;
    /// Indices i where volumes[i] < volumes[i-1] (ordering inversions).
    std::vector<std::size_t> inversions;
};

/// Compare region maps drawn from the same seed and distribution; throws
/// std::invalid_argument on fewer than two regions or mismatched sampling.
IterationReport compare_iterations(const std::vector<SuccessRegion>& regions);

}  // namespace swapsim
