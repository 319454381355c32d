#include "swapsim/thermal.hpp"

#include <cmath>
#include <stdexcept>

#include "swapsim/units.hpp"

namespace swapsim {

double radiated_power_w(const ThermalBody& body, double temp_k) {
    const double t4 = temp_k * temp_k * temp_k * temp_k;
    const double a4 = body.t_ambient_k * body.t_ambient_k * body.t_ambient_k *
                      body.t_ambient_k;
    return body.emissivity * kStefanBoltzmann * body.area_m2 * (t4 - a4);
}

CoolingCurve simulate_cooldown(const ThermalBody& body,
                               const ThermalParams& params) {
    body.validate();
    if (!(params.step_s > 0.0))
        throw ValidationError("ThermalParams.step_s must be > 0");

    const auto dTdt = [&body](double t_k) {
        return -radiated_power_w(body, t_k) / body.heat_capacity();
    };

    CoolingCurve curve;
    curve.time_s.push_back(0.0);
    curve.temp_k.push_back(body.t_initial_k);

    const double start_side = body.t_initial_k - body.t_limit_k;
    if (start_side == 0.0) {
        curve.crossed = true;
        curve.crossing_time_s = 0.0;
        return curve;
    }

    double t = 0.0;
    double temp = body.t_initial_k;
    const double h = params.step_s;
    while (t < params.max_time_s) {
        const double k1 = dTdt(temp);
        const double k2 = dTdt(temp + 0.5 * h * k1);
        const double k3 = dTdt(temp + 0.5 * h * k2);
        const double k4 = dTdt(temp + h * k3);
        const double next = temp + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        const double next_t = t + h;
        curve.time_s.push_back(next_t);
        curve.temp_k.push_back(next);
        if ((next - body.t_limit_k) * start_side <= 0.0) {
            // Crossed between t and next_t; locate linearly.
            const double f = (temp - body.t_limit_k) / (temp - next);
            curve.crossed = true;
            curve.crossing_time_s = t + f * h;
            return curve;
        }
        t = next_t;
        temp = next;
    }
    return curve;  // crossed == false: limit not reached within max_time_s
}

double cooldown_closed_form_s(const ThermalBody& body) {
    body.validate();
    if (body.t_ambient_k != 0.0)
        throw std::domain_error(
            "cooldown_closed_form_s: valid only for a 0 K environment");
    if (body.t_limit_k > body.t_initial_k)
        throw std::domain_error(
            "cooldown_closed_form_s: limit above the initial temperature");
    const double k3 = 3.0 * body.emissivity * kStefanBoltzmann * body.area_m2;
    const double tl = body.t_limit_k, t0 = body.t_initial_k;
    return body.heat_capacity() / k3 *
           (1.0 / (tl * tl * tl) - 1.0 / (t0 * t0 * t0));
}

}  // namespace swapsim
