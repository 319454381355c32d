#include "swapsim/fleet_sim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <queue>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "swapsim/errors.hpp"
#include "swapsim/rng.hpp"

namespace swapsim {

int fleet_size(const FleetSpec& spec) {
    spec.validate();
    const double budget_w = spec.p_gen_w - spec.p_hub_w;
    if (!(budget_w > 0.0))
        throw ValidationError(
            "fleet_size: generator output must exceed hub overhead");
    const double per_rover_w = std::max(spec.charge_power_w(), spec.p_rover_w);
    return static_cast<int>(std::floor(budget_w / per_rover_w));
}

int required_terminals(int n_rovers) {
    if (n_rovers < 1)
        throw ValidationError("required_terminals: n_rovers must be >= 1");
    return n_rovers + 1;
}

int required_modules(int n_rovers, int n_terminals) {
    if (n_rovers < 1)
        throw ValidationError("required_modules: n_rovers must be >= 1");
    if (n_terminals < 2)
        throw ValidationError("required_modules: n_terminals must be >= 2");
    return n_rovers + (n_terminals - 1);
}

double return_threshold_ah(const FleetSpec& spec, double work_distance_m,
                           double reserve_margin) {
    spec.validate();
    if (work_distance_m < 0.0)
        throw ValidationError("return_threshold: work_distance_m must be >= 0");
    if (reserve_margin < 0.0 || reserve_margin >= 1.0)
        throw ValidationError(
            "return_threshold: reserve_margin must be in [0, 1)");
    const double travel_s = work_distance_m / spec.v_rover_mps;
    const double amps = spec.p_rover_w / spec.v_b_v;
    return amps * travel_s / 3600.0 + reserve_margin * spec.q_b_ah;
}

double SwapDurations::total_s() const {
    return entry_s + lift_s + continuity_check_s + index_empty_s + shift_out_s +
           index_full_s + shift_in_s + lower_s + exit_s;
}

void SwapDurations::validate() const {
    for (double d : {entry_s, lift_s, continuity_check_s, index_empty_s,
                     shift_out_s, index_full_s, shift_in_s, lower_s, exit_s})
        if (!(d > 0.0))
            throw ValidationError("SwapDurations: every stage must be > 0 s");
}

void FailureSpec::validate() const {
    for (double p : {continuity_fail_prob, shift_jam_prob, aux_power_fail_prob})
        if (p < 0.0 || p > 1.0)
            throw ValidationError("FailureSpec: probabilities must be in "
                                  "[0, 1]");
    if (continuity_retry_cap < 0 || shift_jam_retry_cap < 0)
        throw ValidationError("FailureSpec: retry caps must be >= 0");
    if (reboot_delay_s < 0.0)
        throw ValidationError("FailureSpec.reboot_delay_s must be >= 0");
}

void FleetSimConfig::validate() const {
    fleet.validate();
    durations.validate();
    failures.validate();
    if (n_rovers < 1)
        throw ValidationError("FleetSimConfig.n_rovers must be >= 1");
    if (n_terminals < 2)
        throw ValidationError("FleetSimConfig.n_terminals must be >= 2");
    if (n_modules < n_rovers + 1)
        throw ValidationError(
            "FleetSimConfig.n_modules: need one module per rover plus a "
            "spare");
    if (n_terminals < n_modules - n_rovers + 1)
        throw ValidationError(
            "FleetSimConfig.n_terminals: not enough slots to park the hub "
            "modules and keep one free during an exchange");
    if (!(sim_duration_s > 0.0))
        throw ValidationError("FleetSimConfig.sim_duration_s must be > 0");
    if (work_distance_m < 0.0)
        throw ValidationError("FleetSimConfig.work_distance_m must be >= 0");
    const double threshold =
        return_threshold_ah(fleet, work_distance_m, reserve_margin);
    const double travel_ah = threshold - reserve_margin * fleet.q_b_ah;
    if (!(fleet.q_b_ah - travel_ah > threshold))
        throw ValidationError(
            "FleetSimConfig: the work site is unreachable with this reserve "
            "margin");
    const double budget_w = fleet.p_gen_w - fleet.p_hub_w;
    if (std::floor(budget_w / fleet.charge_power_w()) < 1.0)
        throw ValidationError(
            "FleetSimConfig: the generator cannot power even one module "
            "charger");
}

double FleetSimResult::uptime(int rover_id) const {
    if (rover_id < 0 || rover_id >= static_cast<int>(rovers.size()))
        throw std::out_of_range("FleetSimResult::uptime: bad rover id");
    return rovers[rover_id].field_time_s / duration_s;
}

namespace {

enum class Phase {
    kTravelOut,
    kField,
    kTravelBack,
    kQueued,
    kEntry,
    kLift,
    kContinuity,
    kRecoveryLower,
    kRecoveryExit,
    kIndexEmpty,
    kShiftOut,
    kIndexFull,
    kShiftIn,
    kReboot,
    kLower,
    kExit,
    kStranded,
};

const char* phase_name(Phase p) {
    switch (p) {
        case Phase::kTravelOut: return "travel_out";
        case Phase::kField: return "field";
        case Phase::kTravelBack: return "travel_back";
        case Phase::kQueued: return "queued";
        case Phase::kEntry: return "entry";
        case Phase::kLift: return "lift";
        case Phase::kContinuity: return "continuity_check";
        case Phase::kRecoveryLower: return "recovery_lower";
        case Phase::kRecoveryExit: return "recovery_exit";
        case Phase::kIndexEmpty: return "index_empty";
        case Phase::kShiftOut: return "shift_out";
        case Phase::kIndexFull: return "index_full";
        case Phase::kShiftIn: return "shift_in";
        case Phase::kReboot: return "reboot";
        case Phase::kLower: return "lower";
        case Phase::kExit: return "exit";
        case Phase::kStranded: return "stranded";
    }
    return "?";
}

bool draws_power(Phase p) {
    return p == Phase::kTravelOut || p == Phase::kField ||
           p == Phase::kTravelBack;
}

bool in_bay(Phase p) {
    switch (p) {
        case Phase::kEntry:
        case Phase::kLift:
        case Phase::kContinuity:
        case Phase::kRecoveryLower:
        case Phase::kRecoveryExit:
        case Phase::kIndexEmpty:
        case Phase::kShiftOut:
        case Phase::kIndexFull:
        case Phase::kShiftIn:
        case Phase::kReboot:
        case Phase::kLower:
        case Phase::kExit:
            return true;
        default:
            return false;
    }
}

struct ModuleState {
    double charge_ah = 0.0;  // anchor value; grows lazily while charging
    bool in_rover = false;
    int location = -1;  // rover id or terminal id
    bool charging = false;
    double charge_started_s = 0.0;
};

struct RoverState {
    Phase phase = Phase::kTravelOut;
    double phase_start_s = 0.0;
    int module_id = -1;
    double charge_ah = 0.0;
    int target_terminal = -1;
    int source_terminal = -1;
    int source_module = -1;
    int continuity_fails = 0;
    int jam_fails = 0;
    double entry_start_s = 0.0;
    RoverStats stats;
    std::vector<double> service_times;
};

struct Ev {
    double t = 0.0;
    long seq = 0;
    int type = 0;  // 0 = rover, 1 = charge done
    int id = 0;
};

struct EvLater {
    bool operator()(const Ev& a, const Ev& b) const {
        return std::tie(a.t, a.seq) > std::tie(b.t, b.seq);
    }
};

class ProtocolSim {
  public:
    explicit ProtocolSim(const FleetSimConfig& cfg)
        : cfg_(cfg),
          amps_(cfg.fleet.p_rover_w / cfg.fleet.v_b_v),
          travel_s_(cfg.work_distance_m / cfg.fleet.v_rover_mps),
          rate_ah_per_h_(cfg.fleet.q_b_ah / cfg.fleet.charge_time_h),
          threshold_ah_(return_threshold_ah(cfg.fleet, cfg.work_distance_m,
                                            cfg.reserve_margin)),
          charger_cap_(static_cast<int>(std::floor(
              (cfg.fleet.p_gen_w - cfg.fleet.p_hub_w) /
              cfg.fleet.charge_power_w()))),
          fail_rng_(Rng(cfg.seed).derive("protocol-failures")) {
        rovers_.resize(cfg.n_rovers);
        modules_.resize(cfg.n_modules);
        terminal_module_.assign(cfg.n_terminals, -1);
        for (int r = 0; r < cfg.n_rovers; ++r) {
            modules_[r] = {cfg.fleet.q_b_ah, true, r, false};
            rovers_[r].module_id = r;
            rovers_[r].charge_ah = cfg.fleet.q_b_ah;
            rovers_[r].phase = Phase::kTravelOut;
            rovers_[r].phase_start_s = 0.0;
        }
        for (int m = cfg.n_rovers; m < cfg.n_modules; ++m) {
            const int terminal = m - cfg.n_rovers;
            modules_[m] = {cfg.fleet.q_b_ah, false, terminal, false};
            terminal_module_[terminal] = m;
        }
        result_.duration_s = cfg.sim_duration_s;
        result_.rovers.resize(cfg.n_rovers);
    }

    FleetSimResult run() {
        for (int r = 0; r < cfg_.n_rovers; ++r) {
            log(0.0, "phase", r, -1, -1, 0.0, phase_name(Phase::kTravelOut));
            schedule_rover(r, travel_s_);
        }
        while (!pq_.empty() && pq_.top().t <= cfg_.sim_duration_s) {
            const Ev ev = pq_.top();
            pq_.pop();
            now_ = ev.t;
            check_invariants();
            if (ev.type == 0)
                on_rover(ev.id);
            else
                on_charge_done(ev.id);
        }
        finalize();
        return std::move(result_);
    }

  private:
    void log(double t, const char* kind, int rover, int terminal, int module,
             double value, const std::string& detail) {
        if (!cfg_.record_events) return;
        result_.events.push_back({t, kind, rover, terminal, module, value,
                                  detail});
    }

    void schedule_rover(int rover, double dt) {
        pq_.push({now_ + dt, seq_++, 0, rover});
    }

    void schedule_charge(int module, double dt) {
        pq_.push({now_ + dt, seq_++, 1, module});
    }

    /// Close out the current phase: bank its duration into the right stat
    /// bucket and apply battery draw if the rover was driving or working.
    void accrue(int rover) {
        RoverState& r = rovers_[rover];
        const double dt = now_ - r.phase_start_s;
        if (dt < -1e-9) throw std::logic_error("protocol sim: time ran backwards");
        if (dt <= 0.0) return;
        RoverStats& st = r.stats;
        if (r.phase == Phase::kField)
            st.field_time_s += dt;
        else if (r.phase == Phase::kTravelOut || r.phase == Phase::kTravelBack)
            st.travel_time_s += dt;
        else if (r.phase == Phase::kQueued)
            st.queue_time_s += dt;
        else if (in_bay(r.phase))
            st.service_time_s += dt;
        if (draws_power(r.phase)) {
            r.charge_ah -= amps_ * dt / 3600.0;
            if (r.module_id >= 0) modules_[r.module_id].charge_ah = r.charge_ah;
        }
    }

    void transition(int rover, Phase next) {
        accrue(rover);
        rovers_[rover].phase = next;
        rovers_[rover].phase_start_s = now_;
        log(now_, "phase", rover, -1, -1, 0.0, phase_name(next));
    }

    bool draw_failure(double p) { return p > 0.0 && fail_rng_.bernoulli(p); }

    int free_terminal() const {
        for (int t = 0; t < cfg_.n_terminals; ++t)
            if (terminal_module_[t] < 0) return t;
        return -1;
    }

    /// Fullest idle (fully charged, not mid-charge) terminal module; ties go
    /// to the lowest terminal index.
    std::pair<int, int> ready_module() const {
        int best_t = -1, best_m = -1;
        double best_charge = -1.0;
        for (int t = 0; t < cfg_.n_terminals; ++t) {
            const int m = terminal_module_[t];
            if (m < 0 || modules_[m].charging) continue;
            if (modules_[m].charge_ah < cfg_.fleet.q_b_ah - 1e-9) continue;
            if (modules_[m].charge_ah > best_charge) {
                best_charge = modules_[m].charge_ah;
                best_t = t;
                best_m = m;
            }
        }
        return {best_t, best_m};
    }

    void start_charging(int module) {
        ModuleState& m = modules_[module];
        if (m.charge_ah >= cfg_.fleet.q_b_ah - 1e-9) return;  // already full
        if (charging_count_ < charger_cap_) {
            m.charging = true;
            m.charge_started_s = now_;
            ++charging_count_;
            const double dt =
                (cfg_.fleet.q_b_ah - m.charge_ah) / rate_ah_per_h_ * 3600.0;
            schedule_charge(module, dt);
        } else {
            charge_waiting_.push_back(module);
        }
    }

    void on_charge_done(int module) {
        ModuleState& m = modules_[module];
        if (!m.charging) throw std::logic_error("charge event for idle module");
        m.charging = false;
        m.charge_ah = cfg_.fleet.q_b_ah;
        --charging_count_;
        log(now_, "module", -1, m.location, module, m.charge_ah,
            "charge_complete");
        if (!charge_waiting_.empty()) {
            // Highest charge first so modules return to service soonest;
            // ties go to the lowest module id.
            auto best = charge_waiting_.begin();
            for (auto it = charge_waiting_.begin(); it != charge_waiting_.end();
                 ++it) {
                if (modules_[*it].charge_ah > modules_[*best].charge_ah ||
                    (modules_[*it].charge_ah == modules_[*best].charge_ah &&
                     *it < *best))
                    best = it;
            }
            const int next = *best;
            charge_waiting_.erase(best);
            start_charging(next);
        }
        try_start_swap();
    }

    void try_start_swap() {
        if (bay_rover_ >= 0 || queue_.empty()) return;
        const int rover = queue_.front();
        if (ready_module().second < 0) return;  // wait for a charged module
        if (free_terminal() < 0)
            throw std::logic_error(
                "protocol sim: no free terminal at exchange start");
        queue_.pop_front();
        bay_rover_ = rover;
        RoverState& r = rovers_[rover];
        r.entry_start_s = now_;
        r.continuity_fails = 0;
        r.jam_fails = 0;
        transition(rover, Phase::kEntry);
        schedule_rover(rover, cfg_.durations.entry_s);
    }

    void strand(int rover, const std::string& why) {
        transition(rover, Phase::kStranded);
        rovers_[rover].stats.stranded = true;
        log(now_, "stranded", rover, -1, -1, 0.0, why);
        // The rover never leaves the bay; the queue stays blocked.
    }

    void note_failure(int rover, const char* what) {
        ++rovers_[rover].stats.failures_seen;
        ++result_.total_failures;
        log(now_, "failure", rover, -1, -1, 0.0, what);
    }

    void on_rover(int rover) {
        RoverState& r = rovers_[rover];
        const SwapDurations& d = cfg_.durations;
        switch (r.phase) {
            case Phase::kTravelOut: {
                transition(rover, Phase::kField);
                const double field_s =
                    (r.charge_ah - threshold_ah_) / amps_ * 3600.0;
                if (field_s <= 0.0) {
                    transition(rover, Phase::kTravelBack);
                    schedule_rover(rover, travel_s_);
                } else {
                    schedule_rover(rover, field_s);
                }
                break;
            }
            case Phase::kField:
                transition(rover, Phase::kTravelBack);
                schedule_rover(rover, travel_s_);
                break;
            case Phase::kTravelBack:
                transition(rover, Phase::kQueued);
                queue_.push_back(rover);
                try_start_swap();
                break;
            case Phase::kEntry:
                transition(rover, Phase::kLift);
                schedule_rover(rover, d.lift_s);
                break;
            case Phase::kLift:
                transition(rover, Phase::kContinuity);
                schedule_rover(rover, d.continuity_check_s);
                break;
            case Phase::kContinuity:
                if (draw_failure(cfg_.failures.continuity_fail_prob)) {
                    note_failure(rover, "continuity_check");
                    if (++r.continuity_fails >
                        cfg_.failures.continuity_retry_cap) {
                        strand(rover,
                               "continuity check failed beyond the retry cap");
                    } else {
                        transition(rover, Phase::kRecoveryLower);
                        schedule_rover(rover, d.lower_s);
                    }
                } else {
                    transition(rover, Phase::kIndexEmpty);
                    schedule_rover(rover, d.index_empty_s);
                }
                break;
            case Phase::kRecoveryLower:
                transition(rover, Phase::kRecoveryExit);
                schedule_rover(rover, d.exit_s);
                break;
            case Phase::kRecoveryExit:
                transition(rover, Phase::kEntry);
                schedule_rover(rover, d.entry_s);
                break;
            case Phase::kIndexEmpty: {
                r.target_terminal = free_terminal();
                if (r.target_terminal < 0)
                    throw std::logic_error(
                        "protocol sim: free terminal vanished mid-exchange");
                transition(rover, Phase::kShiftOut);
                schedule_rover(rover, d.shift_out_s);
                break;
            }
            case Phase::kShiftOut:
                if (draw_failure(cfg_.failures.shift_jam_prob)) {
                    note_failure(rover, "shift_out_jam");
                    if (++r.jam_fails > cfg_.failures.shift_jam_retry_cap) {
                        strand(rover, "shift stage jammed beyond the retry "
                                      "cap");
                    } else {
                        transition(rover, Phase::kShiftOut);
                        schedule_rover(rover, d.shift_out_s);
                    }
                } else {
                    const int m = r.module_id;
                    modules_[m].in_rover = false;
                    modules_[m].location = r.target_terminal;
                    modules_[m].charge_ah = r.charge_ah;
                    terminal_module_[r.target_terminal] = m;
                    r.module_id = -1;
                    log(now_, "module", rover, r.target_terminal, m,
                        modules_[m].charge_ah, "shift_out");
                    start_charging(m);
                    r.jam_fails = 0;
                    transition(rover, Phase::kIndexFull);
                    schedule_rover(rover, d.index_full_s);
                }
                break;
            case Phase::kIndexFull: {
                const auto [terminal, module] = ready_module();
                if (module < 0)
                    throw std::logic_error(
                        "protocol sim: charged module vanished mid-exchange");
                r.source_terminal = terminal;
                r.source_module = module;
                transition(rover, Phase::kShiftIn);
                schedule_rover(rover, d.shift_in_s);
                break;
            }
            case Phase::kShiftIn:
                if (draw_failure(cfg_.failures.shift_jam_prob)) {
                    note_failure(rover, "shift_in_jam");
                    if (++r.jam_fails > cfg_.failures.shift_jam_retry_cap) {
                        strand(rover, "shift stage jammed beyond the retry "
                                      "cap");
                    } else {
                        transition(rover, Phase::kShiftIn);
                        schedule_rover(rover, d.shift_in_s);
                    }
                } else {
                    const int m = r.source_module;
                    terminal_module_[r.source_terminal] = -1;
                    modules_[m].in_rover = true;
                    modules_[m].location = rover;
                    r.module_id = m;
                    r.charge_ah = modules_[m].charge_ah;
                    log(now_, "module", rover, r.source_terminal, m,
                        modules_[m].charge_ah, "shift_in");
                    if (draw_failure(cfg_.failures.aux_power_fail_prob)) {
                        note_failure(rover, "aux_power");
                        transition(rover, Phase::kReboot);
                        schedule_rover(rover, cfg_.failures.reboot_delay_s);
                    } else {
                        transition(rover, Phase::kLower);
                        schedule_rover(rover, d.lower_s);
                    }
                }
                break;
            case Phase::kReboot:
                transition(rover, Phase::kLower);
                schedule_rover(rover, d.lower_s);
                break;
            case Phase::kLower:
                transition(rover, Phase::kExit);
                schedule_rover(rover, d.exit_s);
                break;
            case Phase::kExit: {
                const double service = now_ - r.entry_start_s;
                r.service_times.push_back(service);
                ++r.stats.swaps_completed;
                ++result_.total_swaps;
                log(now_, "swap_complete", rover, -1, r.module_id, service, "");
                bay_rover_ = -1;
                transition(rover, Phase::kTravelOut);
                schedule_rover(rover, travel_s_);
                try_start_swap();
                break;
            }
            case Phase::kQueued:
            case Phase::kStranded:
                throw std::logic_error(
                    "protocol sim: unexpected timer for a waiting rover");
        }
    }

    void check_invariants() const {
        std::vector<int> seen(cfg_.n_modules, 0);
        int charging = 0;
        for (int m = 0; m < cfg_.n_modules; ++m) {
            const ModuleState& mod = modules_[m];
            if (mod.charge_ah < -1e-9 ||
                mod.charge_ah > cfg_.fleet.q_b_ah + 1e-9)
                throw std::logic_error(
                    "protocol sim: module charge out of range");
            if (mod.charging) ++charging;
            if (mod.in_rover) {
                if (rovers_[mod.location].module_id != m)
                    throw std::logic_error(
                        "protocol sim: rover/module link broken");
                ++seen[m];
            } else if (mod.location >= 0) {
                if (terminal_module_[mod.location] != m)
                    throw std::logic_error(
                        "protocol sim: terminal/module link broken");
                ++seen[m];
            }
        }
        for (int m = 0; m < cfg_.n_modules; ++m)
            if (seen[m] != 1)
                throw std::logic_error(
                    "protocol sim: module is not in exactly one place");
        if (charging != charging_count_ || charging > charger_cap_)
            throw std::logic_error("protocol sim: charger bookkeeping broken");
        if (bay_rover_ >= 0 && !in_bay(rovers_[bay_rover_].phase) &&
            rovers_[bay_rover_].phase != Phase::kStranded)
            throw std::logic_error("protocol sim: bay occupant is not in the "
                                   "bay");
    }

    void finalize() {
        now_ = cfg_.sim_duration_s;
        for (int r = 0; r < cfg_.n_rovers; ++r) {
            accrue(r);
            rovers_[r].phase_start_s = now_;
            RoverStats& st = rovers_[r].stats;
            if (!rovers_[r].service_times.empty()) {
                double sum = 0.0;
                for (double s : rovers_[r].service_times) sum += s;
                st.mean_service_s =
                    sum / static_cast<double>(rovers_[r].service_times.size());
            }
            result_.rovers[r] = st;
        }
        result_.final_module_charge_ah.resize(cfg_.n_modules);
        for (int m = 0; m < cfg_.n_modules; ++m) {
            ModuleState& mod = modules_[m];
            if (mod.charging) {
                // Completion lies beyond the horizon; materialise the charge
                // accumulated so far.
                const double dt = now_ - mod.charge_started_s;
                mod.charge_ah = std::min(
                    cfg_.fleet.q_b_ah,
                    mod.charge_ah + rate_ah_per_h_ * dt / 3600.0);
            }
            result_.final_module_charge_ah[m] = mod.charge_ah;
            log(now_, "module", -1, mod.in_rover ? -1 : mod.location, m,
                mod.charge_ah, "final_inventory");
        }
    }

    const FleetSimConfig& cfg_;
    double amps_;
    double travel_s_;
    double rate_ah_per_h_;
    double threshold_ah_;
    int charger_cap_;
    Rng fail_rng_;

    std::vector<RoverState> rovers_;
    std::vector<ModuleState> modules_;
    std::vector<int> terminal_module_;
    std::deque<int> queue_;
    std::vector<int> charge_waiting_;
    int bay_rover_ = -1;
    int charging_count_ = 0;

    std::priority_queue<Ev, std::vector<Ev>, EvLater> pq_;
    long seq_ = 0;
    double now_ = 0.0;
    FleetSimResult result_;
};

}  // namespace

FleetSimResult run_swap_sim(const FleetSimConfig& config) {
    config.validate();
    ProtocolSim sim(config);
    return sim.run();
}

std::vector<double> replay_module_charges(const std::vector<SwapEvent>& events,
                                          int n_modules) {
    if (n_modules < 1)
        throw ValidationError("replay_module_charges: n_modules must be >= 1");
    std::vector<double> charge(n_modules);
    std::vector<bool> seen(n_modules, false);
    for (const SwapEvent& ev : events) {
        if (ev.kind != "module") continue;
        if (ev.module_id < 0 || ev.module_id >= n_modules)
            throw ValidationError(
                "replay_module_charges: event names an unknown module");
        charge[ev.module_id] = ev.value;
        seen[ev.module_id] = true;
    }
    for (int m = 0; m < n_modules; ++m)
        if (!seen[m])
            throw ValidationError(
                "replay_module_charges: no charge record for module " +
                std::to_string(m));
    return charge;
}

}  // namespace swapsim
