#include "swapsim/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "swapsim/errors.hpp"

namespace swapsim {

namespace {

Pose2D perturbed(const Pose2D& base, PerturbAxis axis, double signed_mag) {
    Pose2D p = base;
    if (axis == PerturbAxis::kYawDeg)
        p.yaw_deg = base.yaw_deg + signed_mag;
    else
        p.y_lateral = base.y_lateral + signed_mag;
    return p;
}

bool docks(const DockSim& sim, const Pose2D& start, int& simulations) {
    ++simulations;
    try {
        return sim.simulate_entry(start).outcome == DockOutcome::kSuccess;
    } catch (const ValidationError&) {
        // Start pose already pokes past the port plane; treat as a miss.
        return false;
    }
}

struct SideResult {
    double edge = 0.0;
    bool monotonic = true;
    bool fallback = false;
    std::string note;
};

SideResult side_max(const DockSim& sim, const CompensationConfig& cfg,
                    double sign, int& simulations) {
    const auto pass = [&](double mag) {
        return docks(sim, perturbed(cfg.base_start, cfg.axis, sign * mag),
                     simulations);
    };
    if (pass(cfg.upper))
        return {cfg.upper, true, false, "passes at the search ceiling"};
    double lo = 0.0, hi = cfg.upper;
    for (int i = 0; i < cfg.max_iterations && (hi - lo) > cfg.tolerance; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (pass(mid))
            lo = mid;
        else
            hi = mid;
    }
    // The bisection assumed pass/fail splits cleanly at one edge; probe just
    // beyond and just inside it to catch islands.
    const bool beyond = pass(std::min(cfg.upper, hi + cfg.tolerance));
    const bool inside = lo <= cfg.tolerance || pass(lo - 0.5 * cfg.tolerance);
    if (beyond || !inside) {
        auto pts = compensation_sweep(sim, cfg.axis, cfg.base_start, sign,
                                      cfg.upper, cfg.tolerance);
        simulations += static_cast<int>(pts.size());
        const double best = sweep_max_passing(pts);
        return {std::max(best, 0.0), false, true,
                "pass boundary is not monotone; swept at tolerance resolution"};
    }
    return {lo, true, false, ""};
}

}  // namespace

CompensationResult max_compensation(const DockSim& sim,
                                    const CompensationConfig& cfg) {
    if (!(cfg.upper > 0.0) || !(cfg.tolerance > 0.0) || cfg.max_iterations < 1)
        throw std::invalid_argument(
            "max_compensation: upper, tolerance and max_iterations must be "
            "positive");
    CompensationResult r;
    if (!docks(sim, cfg.base_start, r.simulations)) {
        r.aligned_ok = false;
        r.diagnostic = "the unperturbed start fails to dock; no compensation "
                       "range exists";
        return r;
    }
    r.aligned_ok = true;
    const SideResult pos = side_max(sim, cfg, +1.0, r.simulations);
    const SideResult neg =
        cfg.both_signs ? side_max(sim, cfg, -1.0, r.simulations) : pos;
    r.max_positive = pos.edge;
    r.max_negative = neg.edge;
    r.max_magnitude = std::min(pos.edge, neg.edge);
    r.monotonic = pos.monotonic && neg.monotonic;
    r.used_sweep_fallback = pos.fallback || neg.fallback;
    if (!pos.note.empty()) r.diagnostic = "+: " + pos.note;
    if (cfg.both_signs && !neg.note.empty()) {
        if (!r.diagnostic.empty()) r.diagnostic += "; ";
        r.diagnostic += "-: " + neg.note;
    }
    return r;
}

std::vector<SweepPoint> compensation_sweep(const DockSim& sim, PerturbAxis axis,
                                           const Pose2D& base, double sign,
                                           double upper, double step) {
    if (!(step > 0.0) || !(upper > 0.0))
        throw std::invalid_argument("compensation_sweep: step and upper must "
                                    "be positive");
    std::vector<SweepPoint> out;
    int ignored = 0;
    const int n = static_cast<int>(std::floor(upper / step + 1e-9));
    for (int k = 0; k <= n; ++k) {
        const double mag = k * step;
        out.push_back({mag, docks(sim, perturbed(base, axis, sign * mag),
                                  ignored)});
    }
    if (n * step < upper - 1e-12 * upper)
        out.push_back({upper, docks(sim, perturbed(base, axis, sign * upper),
                                    ignored)});
    return out;
}

double sweep_max_passing(const std::vector<SweepPoint>& points) {
    double best = -1.0;
    for (const SweepPoint& p : points)
        if (p.passed) best = std::max(best, p.magnitude);
    return best;
}

GridSearchConfig GridSearchConfig::default_grid(const GuideCurve& base,
                                                double hardstop_x_m,
                                                const RoverBody& rover) {
    GridSearchConfig cfg;
    for (int i = 0; i <= 10; ++i) cfg.theta_values_deg.push_back(9.0 * i);
    for (int i = 0; i <= 10; ++i) cfg.weight_values.push_back(0.1 * i);
    cfg.base_curve = base;
    cfg.hardstop_x_m = hardstop_x_m;
    cfg.rover = rover;
    cfg.yaw.axis = PerturbAxis::kYawDeg;
    cfg.yaw.upper = 90.0;
    cfg.yaw.tolerance = 0.05;
    cfg.lateral.axis = PerturbAxis::kLateralM;
    cfg.lateral.upper = base.mouth_halfwidth_m;
    cfg.lateral.tolerance = 5e-4;
    cfg.score_lateral_scale_m = base.mouth_halfwidth_m;
    return cfg;
}

namespace {

GridCell eval_cell(const GridSearchConfig& cfg, double theta_deg,
                   double weight) {
    GridCell cell;
    cell.theta_deg = theta_deg;
    cell.weight = weight;
    try {
        GuideCurve curve = cfg.base_curve;
        curve.theta_deg = theta_deg;
        curve.weight = weight;
        const PortGeometry port = PortGeometry::from_curve(
            curve, cfg.hardstop_x_m, cfg.max_chord_error_m);
        const DockSim sim(port, cfg.rover, cfg.sim_params);

        CompensationConfig yaw_cfg = cfg.yaw;
        yaw_cfg.axis = PerturbAxis::kYawDeg;
        const CompensationResult ry = max_compensation(sim, yaw_cfg);
        cell.simulations += ry.simulations;
        if (!ry.aligned_ok) {
            cell.note = ry.diagnostic;
            return cell;
        }
        CompensationConfig lat_cfg = cfg.lateral;
        lat_cfg.axis = PerturbAxis::kLateralM;
        const CompensationResult rl = max_compensation(sim, lat_cfg);
        cell.simulations += rl.simulations;

        cell.max_yaw_deg = ry.max_magnitude;
        cell.max_lateral_m = rl.max_magnitude;
        const double ny = ry.max_magnitude / cfg.score_yaw_scale_deg;
        const double nl = rl.max_magnitude / cfg.score_lateral_scale_m;
        cell.score = std::sqrt(ny * ny + nl * nl);
        cell.valid = true;
    } catch (const std::exception& e) {
        cell.valid = false;
        cell.score = 0.0;
        cell.note = e.what();
    }
    return cell;
}

}  // namespace

GridSearchResult grid_search(const GridSearchConfig& cfg) {
    if (cfg.theta_values_deg.empty() || cfg.weight_values.empty())
        throw std::invalid_argument("grid_search: empty axis values");
    const int nt = static_cast<int>(cfg.theta_values_deg.size());
    const int nw = static_cast<int>(cfg.weight_values.size());
    GridSearchResult result;
    result.cells.resize(static_cast<std::size_t>(nt) * nw);

    const auto run = [&](int begin, int stride) {
        for (int i = begin; i < nt * nw; i += stride)
            result.cells[i] = eval_cell(cfg, cfg.theta_values_deg[i / nw],
                                        cfg.weight_values[i % nw]);
    };
    const int workers = std::max(1, cfg.workers);
    if (workers == 1) {
        run(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < workers; ++t) pool.emplace_back(run, t, workers);
        for (auto& t : pool) t.join();
    }

    result.ranking.resize(result.cells.size());
    for (std::size_t i = 0; i < result.cells.size(); ++i)
        result.ranking[i] = static_cast<int>(i);
    std::sort(result.ranking.begin(), result.ranking.end(),
              [&](int a, int b) {
                  const GridCell& ca = result.cells[a];
                  const GridCell& cb = result.cells[b];
                  if (ca.valid != cb.valid) return ca.valid;
                  if (ca.score != cb.score) return ca.score > cb.score;
                  if (ca.theta_deg != cb.theta_deg)
                      return ca.theta_deg < cb.theta_deg;
                  return ca.weight < cb.weight;
              });
    result.best_index =
        (result.ranking.empty() || !result.cells[result.ranking.front()].valid)
            ? -1
            : result.ranking.front();
    for (const GridCell& c : result.cells) result.total_simulations += c.simulations;
    return result;
}

void MonteCarloSpec::validate() const {
    if (n_samples < 1)
        throw ValidationError("MonteCarloSpec.n_samples must be >= 1");
    for (double sd : {sd_axial_m, sd_lateral_m, sd_yaw_deg})
        if (!(sd >= 0.0) || !std::isfinite(sd))
            throw ValidationError(
                "MonteCarloSpec standard deviations must be finite and >= 0");
}

bool MonteCarloSpec::same_distribution(const MonteCarloSpec& other) const {
    return n_samples == other.n_samples &&
           mean_axial_m == other.mean_axial_m &&
           mean_lateral_m == other.mean_lateral_m &&
           mean_yaw_deg == other.mean_yaw_deg &&
           sd_axial_m == other.sd_axial_m &&
           sd_lateral_m == other.sd_lateral_m &&
           sd_yaw_deg == other.sd_yaw_deg;
}

SuccessRegion monte_carlo_region(const DockSim& sim, const MonteCarloSpec& spec,
                                 const Rng& rng, int workers) {
    spec.validate();
    SuccessRegion region;
    region.spec = spec;
    region.seed = rng.seed();
    region.outcomes.assign(spec.n_samples, DockOutcome::kMissedPort);
    std::vector<Vec3> offsets(spec.n_samples);

    const auto run = [&](int lo, int hi) {
        for (int i = lo; i < hi; ++i) {
            Rng r = rng.derive("mc-sample", static_cast<std::uint64_t>(i));
            const double dx = r.gaussian(0.0, spec.sd_axial_m);
            const double dy = r.gaussian(0.0, spec.sd_lateral_m);
            const double dyaw = r.gaussian(0.0, spec.sd_yaw_deg);
            offsets[i] = {dx, dy, dyaw};
            const Pose2D start{spec.mean_axial_m + dx,
                               spec.mean_lateral_m + dy,
                               spec.mean_yaw_deg + dyaw};
            try {
                region.outcomes[i] = sim.simulate_entry(start).outcome;
            } catch (const ValidationError&) {
                region.outcomes[i] = DockOutcome::kMissedPort;
            }
        }
    };
    const int n_workers = std::max(1, workers);
    if (n_workers == 1) {
        run(0, spec.n_samples);
    } else {
        std::vector<std::thread> pool;
        const int chunk = (spec.n_samples + n_workers - 1) / n_workers;
        for (int t = 0; t < n_workers; ++t) {
            const int lo = t * chunk;
            const int hi = std::min(spec.n_samples, lo + chunk);
            if (lo < hi) pool.emplace_back(run, lo, hi);
        }
        for (auto& t : pool) t.join();
    }

    region.pass_cloud.axis_labels = {"axial_offset_m", "lateral_offset_m",
                                     "yaw_deg"};
    for (int i = 0; i < spec.n_samples; ++i)
        if (region.outcomes[i] == DockOutcome::kSuccess)
            region.pass_cloud.points.push_back(offsets[i]);
    region.n_passed = static_cast<int>(region.pass_cloud.points.size());

    if (region.n_passed >= 4) {
        region.hull = quickhull3(region.pass_cloud);
    } else {
        region.hull = Hull3{};
        region.hull.volume = 0.0;
        region.hull.degenerate = true;
    }
    return region;
}

IterationReport compare_iterations(const std::vector<SuccessRegion>& regions) {
    if (regions.size() < 2)
        throw std::invalid_argument(
            "compare_iterations: need at least two regions");
    for (std::size_t i = 1; i < regions.size(); ++i) {
        if (regions[i].seed != regions[0].seed)
            throw std::invalid_argument(
                "compare_iterations: regions were sampled with different "
                "seeds");
        if (!regions[i].spec.same_distribution(regions[0].spec))
            throw std::invalid_argument(
                "compare_iterations: regions use different start "
                "distributions");
    }
    IterationReport report;
    report.ratios_defined = regions[0].hull.volume > 0.0;
    for (const SuccessRegion& r : regions) {
        report.volumes.push_back(r.hull.volume);
        report.passed.push_back(r.n_passed);
        report.ratio_to_first.push_back(
            report.ratios_defined ? r.hull.volume / regions[0].hull.volume
                                  : 0.0);
    }
    for (std::size_t i = 1; i < report.volumes.size(); ++i)
        if (report.volumes[i] < report.volumes[i - 1])
            report.inversions.push_back(i);
    return report;
}

}  // namespace swapsim
