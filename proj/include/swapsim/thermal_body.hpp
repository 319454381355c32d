#pragma once

/**
 * Lumped-capacitance description of a body cooling by radiation.
 *
 * Temperatures are stored in kelvin.  Scenario files may specify them in
 * Celsius with an explicit unit tag; conversion happens at the I/O boundary
 * (see scenario.hpp), never inside the solver.
 */

#include <string>

#include "swapsim/errors.hpp"

namespace swapsim {

struct ThermalBody {
    std::string name;            ///< diagnostic label ("rover", "battery", ...)
    double mass_kg = 0.0;        ///< kg
    double specific_heat = 0.0;  ///< J / (kg K)
    double area_m2 = 0.0;        ///< m^2, radiating surface
    double emissivity = 1.0;     ///< dimensionless, in (0, 1]
    double t_initial_k = 0.0;    ///< K, temperature at t = 0
    double t_ambient_k = 0.0;    ///< K, radiative environment temperature
    double t_limit_k = 0.0;      ///< K, threshold whose crossing time we seek

    /// Throws ValidationError naming the first offending field.
    void validate() const {
        auto positive = [this](double v, const char* field) {
            if (!(v > 0.0))
                throw ValidationError("ThermalBody(" + name + ")." + field +
                                      " must be > 0");
        };
        positive(mass_kg, "mass_kg");
        positive(specific_heat, "specific_heat");
        positive(area_m2, "area_m2");
        if (!(emissivity > 0.0) || emissivity > 1.0)
            throw ValidationError("ThermalBody(" + name +
                                  ").emissivity must be in (0, 1]");
        positive(t_initial_k, "t_initial_k");
        if (t_ambient_k < 0.0)
            throw ValidationError("ThermalBody(" + name +
                                  ").t_ambient_k must be >= 0");
        if (!(t_limit_k > 0.0))
            throw ValidationError("ThermalBody(" + name +
                                  ").t_limit_k must be > 0");
    }

    /// Heat capacity m*c, J/K.
    double heat_capacity() const { return mass_kg * specific_heat; }
};

}  // namespace swapsim
