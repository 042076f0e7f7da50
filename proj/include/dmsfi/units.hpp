#pragma once

// Atomic units are used everywhere inside the library. Conversions live here
// and are only applied when reading configuration or writing reports.

namespace dmsfi::units {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kE = 2.71828182845904523536;

inline constexpr double kHartreeEv = 27.211386245988;
inline constexpr double kFsAu = 41.341374575751;       // 1 fs in a.u. of time
inline constexpr double kAttosecondAu = kFsAu * 1e-3;
inline constexpr double kIntensityAu = 3.50944758e16;  // W/cm^2 for F0 = 1 a.u.
inline constexpr double kOmegaNm = 45.5634;            // omega[a.u.] * lambda[nm]

constexpr double ev_to_au(double ev) { return ev / kHartreeEv; }
constexpr double au_to_ev(double au) { return au * kHartreeEv; }
constexpr double fs_to_au(double fs) { return fs * kFsAu; }
constexpr double au_to_fs(double au) { return au / kFsAu; }
constexpr double wavelength_to_omega(double nm) { return kOmegaNm / nm; }
constexpr double omega_to_wavelength(double omega) { return kOmegaNm / omega; }

double intensity_to_field(double w_cm2);
double field_to_intensity(double field_au);

}  // namespace dmsfi::units
