#pragma once

/**
 * Electrical and logistical parameters of one hub-plus-rovers deployment.
 *
 * These are the inputs to the fleet-sizing rule and the swap-protocol
 * simulator.  Power figures are averages over an operating cycle, not peaks.
 */

#include <string>

#include "swapsim/errors.hpp"

namespace swapsim {

struct FleetSpec {
    double p_gen_w = 0.0;       ///< W, hub generator output
    double p_hub_w = 0.0;       ///< W, hub self-consumption (overhead)
    double q_b_ah = 0.0;        ///< Ah, capacity of one battery module
    double v_b_v = 0.0;         ///< V, nominal module voltage
    double charge_time_h = 0.0; ///< h, time to recharge one module from empty
    double p_rover_w = 0.0;     ///< W, average rover draw while operating
    double v_rover_mps = 0.0;   ///< m/s, average rover travel speed
    double v_hub_mps = 0.0;     ///< m/s, average hub relocation speed
    int n_terminals = 0;        ///< battery cache terminals in the hub
    double swap_time_s = 0.0;   ///< s, nominal end-to-end service time

    /// Throws ValidationError naming the first offending field.
    void validate() const {
        auto positive = [](double v, const char* name) {
            if (!(v > 0.0))
                throw ValidationError(std::string("FleetSpec.") + name +
                                      " must be > 0");
        };
        positive(p_gen_w, "p_gen_w");
        if (p_hub_w < 0.0)
            throw ValidationError("FleetSpec.p_hub_w must be >= 0");
        positive(q_b_ah, "q_b_ah");
        positive(v_b_v, "v_b_v");
        positive(charge_time_h, "charge_time_h");
        positive(p_rover_w, "p_rover_w");
        positive(v_rover_mps, "v_rover_mps");
        positive(v_hub_mps, "v_hub_mps");
        if (n_terminals < 2)
            throw ValidationError("FleetSpec.n_terminals must be >= 2");
        positive(swap_time_s, "swap_time_s");
    }

    /// W drawn from the hub while one module charges: Q_b * V_b / C.
    double charge_power_w() const { return q_b_ah * v_b_v / charge_time_h; }

    /// Wh stored in one full module.
    double module_energy_wh() const { return q_b_ah * v_b_v; }
};

}  // namespace swapsim
