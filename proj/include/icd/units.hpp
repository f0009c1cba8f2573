#pragma once

#include <string>
#include <string_view>

namespace icd {

inline constexpr double meters_per_angstrom = 1e-10;
inline constexpr double meters_per_nanometer = 1e-9;
inline constexpr double m2_per_megabarn = 1e-22;
inline constexpr double m3_per_angstrom3 = 1e-30;

enum class LengthUnit { Angstrom, Nanometer, Meter };

// Interchangeable descriptions of a transition: photon energy, angular
// frequency, ordinary frequency, or vacuum wavelength.
enum class SpectralUnit { ElectronVolt, RadPerSecond, Hertz, WavelengthAngstrom };

double convert_length(double value, LengthUnit from, LengthUnit to);
double convert_energy_frequency(double value, SpectralUnit from, SpectralUnit to);

LengthUnit length_unit_from_string(std::string_view tag);
SpectralUnit spectral_unit_from_string(std::string_view tag);
std::string to_string(LengthUnit u);
std::string to_string(SpectralUnit u);

// Decay rates (1/s) vs spectroscopic widths (eV).
double width_ev_from_rate(double gamma_per_s);
double rate_from_width_ev(double width_ev);

// Rate coefficients in the (eV, angstrom) I/O system vs SI:
// C6 [m^6/s] <-> [eV A^6], C2 [m^2/s] <-> [eV A^2].
double c6_si_from_ev_a6(double c6_ev_a6);
double c6_ev_a6_from_si(double c6_si);
double c2_si_from_ev_a2(double c2_ev_a2);
double c2_ev_a2_from_si(double c2_si);

} // namespace icd
