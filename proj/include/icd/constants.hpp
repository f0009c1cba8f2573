#pragma once

namespace icd {

// CODATA 2018, SI units. eps0 is derived from mu0 and c so that
// mu0 * eps0 * c^2 == 1 holds to machine precision.
struct PhysicalConstants {
    double c;        // speed of light, m/s (exact)
    double hbar_j;   // reduced Planck constant, J s
    double hbar_ev;  // reduced Planck constant, eV s
    double mu0;      // vacuum permeability, N/A^2
    double eps0;     // vacuum permittivity, F/m
};

inline constexpr PhysicalConstants phys{
    .c = 299792458.0,
    .hbar_j = 1.054571817e-34,
    .hbar_ev = 1.054571817e-34 / 1.602176634e-19,
    .mu0 = 1.25663706212e-6,
    .eps0 = 1.0 / (1.25663706212e-6 * 299792458.0 * 299792458.0),
};

} // namespace icd
