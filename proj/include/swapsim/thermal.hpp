#pragma once

/**
 * Radiative cooldown of a lumped body:
 *
 *     dT/dt = emissivity * sigma * A * (T_amb^4 - T^4) / (m * c)
 *
 * Integrated with classical fixed-step RK4; the first crossing of the
 * body's limit temperature is located by linear interpolation between the
 * bracketing steps.  For a 0 K environment the ODE has the closed form
 *
 *     t = m * c / (3 * emissivity * sigma * A) * (1/T_lim^3 - 1/T_0^3)
 *
 * which serves as an independent cross-check on the integrator.
 */

#include <vector>

#include "swapsim/thermal_body.hpp"

namespace swapsim {

struct ThermalParams {
    double step_s = 1.0;         ///< RK4 step
    double max_time_s = 2.0e5;   ///< integration cap when no crossing occurs
};

struct CoolingCurve {
    std::vector<double> time_s;  ///< strictly increasing, starts at 0
    std::vector<double> temp_k;  ///< temperature at each sample
    bool crossed = false;        ///< limit reached within max_time_s
    double crossing_time_s = 0.0;///< valid when crossed
};

/// Instantaneous net radiated power, W (positive while the body cools).
double radiated_power_w(const ThermalBody& body, double temp_k);

/// Integrate the cooldown until the limit temperature or max_time_s.
CoolingCurve simulate_cooldown(const ThermalBody& body,
                               const ThermalParams& params = {});

/**
 * Closed-form limit-crossing time; requires t_ambient_k == 0 and
 * t_limit_k <= t_initial_k (throws std::domain_error otherwise).
 */
double cooldown_closed_form_s(const ThermalBody& body);

}  // namespace swapsim
