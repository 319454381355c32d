#pragma once
/// Discrete-event simulation of the hub's battery-exchange protocol, plus the
/// closed-form sizing helpers the simulation is cross-checked against.
///
/// The protocol services one rover at a time.  A rover drives from the work
/// site to the hub, queues for the single exchange bay, and then walks through
/// a fixed stage sequence: entry, lift, continuity check, index an empty
/// terminal under the bay, shift the depleted module out, index a charged
/// terminal, shift the fresh module in, lower, exit.  Swapped-out modules
/// recharge on the carousel until they are picked again.

#include <cstdint>
#include <string>
#include <vector>

#include "swapsim/fleet_spec.hpp"

namespace swapsim {

/// Number of rovers one generator can sustain.  The limiting draw is the
/// larger of the per-module recharge power and the rover's own average draw.
int fleet_size(const FleetSpec& spec);

/// One spare terminal beyond the rover count keeps an empty slot available
/// for the outgoing module at all times.
int required_terminals(int n_rovers);

/// Modules in circulation: one carried per rover plus one parked in every
/// terminal except the spare slot.
int required_modules(int n_rovers, int n_terminals);

/// Charge level at which a rover heads back: energy for the return drive plus
/// a fixed reserve fraction of module capacity.
double return_threshold_ah(const FleetSpec& spec, double work_distance_m,
                           double reserve_margin);

/// Stage timings for one exchange, in protocol order.  Seconds.
struct SwapDurations {
    double entry_s = 20.0;
    double lift_s = 15.0;
    double continuity_check_s = 3.0;
    double index_empty_s = 10.0;
    double shift_out_s = 15.0;
    double index_full_s = 10.0;
    double shift_in_s = 15.0;
    double lower_s = 5.0;
    double exit_s = 5.0;

    double total_s() const;
    void validate() const;
};

/// Fault-injection knobs.  All probabilities are per-attempt.
///
/// A failed continuity check lowers the rover, backs it out, and re-enters;
/// after `continuity_retry_cap` failed rechecks the rover is stranded in the
/// bay.  A jammed shift stage repeats in place and strands the rover once
/// `shift_jam_retry_cap` retries are exhausted.  An auxiliary-power dropout
/// after the fresh module seats costs `reboot_delay_s` before lowering and is
/// always recoverable.  A stranded rover blocks the bay for the rest of the
/// run.
struct FailureSpec {
    double continuity_fail_prob = 0.0;
    double shift_jam_prob = 0.0;
    double aux_power_fail_prob = 0.0;
    int continuity_retry_cap = 5;
    int shift_jam_retry_cap = 3;
    double reboot_delay_s = 30.0;

    void validate() const;
};

struct FleetSimConfig {
    FleetSpec fleet;
    int n_rovers = 2;
    int n_terminals = 3;
    int n_modules = 4;
    double sim_duration_s = 48.0 * 3600.0;
    /// One-way distance between the hub bay and the work site.
    double work_distance_m = 25.0;
    /// Fraction of module capacity kept untouched as a safety reserve.
    double reserve_margin = 0.1;
    SwapDurations durations;
    FailureSpec failures;
    std::uint64_t seed = 0;
    bool record_events = true;

    void validate() const;
};

/// One log line.  `kind` is one of:
///   "phase"          rover begins a stage; detail names it
///   "failure"        a fault fired; detail names it
///   "stranded"       rover gave up inside the bay
///   "swap_complete"  value carries bay-entry-to-exit seconds
///   "module"         module charge snapshot in Ah (value); detail says why
struct SwapEvent {
    double time_s = 0.0;
    std::string kind;
    int rover_id = -1;
    int terminal_id = -1;
    int module_id = -1;
    double value = 0.0;
    std::string detail;
};

struct RoverStats {
    int swaps_completed = 0;
    int failures_seen = 0;
    bool stranded = false;
    double field_time_s = 0.0;
    double travel_time_s = 0.0;
    double queue_time_s = 0.0;
    /// Total time spent inside the bay, retries included.
    double service_time_s = 0.0;
    /// Mean bay-entry-to-exit time over completed swaps (0 when none).
    double mean_service_s = 0.0;
};

struct FleetSimResult {
    double duration_s = 0.0;
    int total_swaps = 0;
    int total_failures = 0;
    std::vector<RoverStats> rovers;
    std::vector<double> final_module_charge_ah;
    std::vector<SwapEvent> events;

    /// Fraction of the run the rover spent working at the site.  Travel,
    /// queueing and the exchange itself all count as downtime.
    double uptime(int rover_id) const;
};

FleetSimResult run_swap_sim(const FleetSimConfig& config);

/// Rebuild per-module charge levels from an event log.  Matches the
/// simulation's own final inventory exactly: every materialisation of a
/// module's lazily-updated charge is logged, so the last "module" event per
/// module is authoritative.
std::vector<double> replay_module_charges(const std::vector<SwapEvent>& events,
                                          int n_modules);

}  // namespace swapsim
