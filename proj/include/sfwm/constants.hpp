#ifndef SFWM_CONSTANTS_HPP
#define SFWM_CONSTANTS_HPP

#include <numbers>

namespace sfwm
{

// Speed of light in vacuum, m/s (exact).
inline constexpr double kSpeedOfLight = 299792458.0;

inline constexpr double kTwoPiC = 2.0 * std::numbers::pi * kSpeedOfLight;

// lambda in meters <-> omega in rad/s
inline constexpr double omega_from_wavelength(double lambda_m)
{
    return kTwoPiC / lambda_m;
}

inline constexpr double wavelength_from_omega(double omega)
{
    return kTwoPiC / omega;
}

} // namespace sfwm

#endif // SFWM_CONSTANTS_HPP
