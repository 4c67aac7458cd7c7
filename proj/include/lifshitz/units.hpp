#pragma once

namespace lifshitz {

// Internal units: hbar = c = k_B = 1, frequencies in units of omega_p,
// lengths in c/omega_p, energy per area in hbar omega_p^3 / c^2.
struct UnitSystem {
    double hbar = 1.0;
    double c = 1.0;
    double k_B = 1.0;
    // SI value of the frequency unit (rad/s); 0 when only internal units are used
    double frequency_si = 0.0;

    static UnitSystem internal() { return {}; }
    static UnitSystem with_plasma_frequency(double omega_p_rad_per_s);

    double length_si() const;            // metres per internal length unit
    double energy_per_area_si() const;   // J/m^2 per internal unit
    double pressure_si() const;          // Pa per internal unit
    double temperature_si() const;       // K per internal temperature unit
};

namespace si {
inline constexpr double hbar = 1.054571817e-34;
inline constexpr double c = 299792458.0;
inline constexpr double k_B = 1.380649e-23;
}  // namespace si

}  // namespace lifshitz
