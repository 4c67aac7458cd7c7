#include "lifshitz/units.hpp"

#include "lifshitz/errors.hpp"

namespace lifshitz {

UnitSystem UnitSystem::with_plasma_frequency(double omega_p_rad_per_s)
{
    if (!(omega_p_rad_per_s > 0.0))
        throw Error(ErrorCode::DomainError, "plasma frequency must be positive");
    UnitSystem u;
    u.frequency_si = omega_p_rad_per_s;
    return u;
}

double UnitSystem::length_si() const
{
    return frequency_si > 0.0 ? si::c / frequency_si : 0.0;
}

double UnitSystem::energy_per_area_si() const
{
    const double w = frequency_si;
    return si::hbar * w * w * w / (si::c * si::c);
}

double UnitSystem::pressure_si() const
{
    const double w = frequency_si;
    return si::hbar * w * w * w * w / (si::c * si::c * si::c);
}

double UnitSystem::temperature_si() const
{
    return si::hbar * frequency_si / si::k_B;
}

}  // namespace lifshitz
