#include "icd/units.hpp"

#include <cmath>
#include <numbers>

#include "icd/constants.hpp"
#include "icd/errors.hpp"

namespace icd {

namespace {

double meters_per(LengthUnit u) {
    switch (u) {
        case LengthUnit::Angstrom: return meters_per_angstrom;
        case LengthUnit::Nanometer: return meters_per_nanometer;
        case LengthUnit::Meter: return 1.0;
    }
    throw ValidationError("unknown length unit");
}

constexpr double two_pi = 2.0 * std::numbers::pi;

// Canonical spectral value is the angular frequency in rad/s.
double to_rad_per_s(double v, SpectralUnit u) {
    if (!std::isfinite(v)) throw ValidationError("non-finite spectral value");
    switch (u) {
        case SpectralUnit::ElectronVolt: return v / phys.hbar_ev;
        case SpectralUnit::RadPerSecond: return v;
        case SpectralUnit::Hertz: return two_pi * v;
        case SpectralUnit::WavelengthAngstrom:
            if (v <= 0.0)
                throw ValidationError("wavelength must be positive");
            return two_pi * phys.c / (v * meters_per_angstrom);
    }
    throw ValidationError("unknown spectral unit");
}

double from_rad_per_s(double omega, SpectralUnit u) {
    switch (u) {
        case SpectralUnit::ElectronVolt: return omega * phys.hbar_ev;
        case SpectralUnit::RadPerSecond: return omega;
        case SpectralUnit::Hertz: return omega / two_pi;
        case SpectralUnit::WavelengthAngstrom:
            if (omega <= 0.0)
                throw ValidationError("wavelength undefined for omega <= 0");
            return two_pi * phys.c / omega / meters_per_angstrom;
    }
    throw ValidationError("unknown spectral unit");
}

} // namespace

double convert_length(double value, LengthUnit from, LengthUnit to) {
    if (!std::isfinite(value)) throw ValidationError("non-finite length value");
    if (from == to) return value;
    return value * meters_per(from) / meters_per(to);
}

double convert_energy_frequency(double value, SpectralUnit from, SpectralUnit to) {
    if (from == to) {
        if (!std::isfinite(value)) throw ValidationError("non-finite spectral value");
        return value;
    }
    return from_rad_per_s(to_rad_per_s(value, from), to);
}

LengthUnit length_unit_from_string(std::string_view tag) {
    if (tag == "A" || tag == "a" || tag == "angstrom" || tag == "ang")
        return LengthUnit::Angstrom;
    if (tag == "nm" || tag == "nanometer") return LengthUnit::Nanometer;
    if (tag == "m" || tag == "meter") return LengthUnit::Meter;
    throw ValidationError("unknown length unit tag '" + std::string(tag) + "'");
}

SpectralUnit spectral_unit_from_string(std::string_view tag) {
    if (tag == "eV" || tag == "ev") return SpectralUnit::ElectronVolt;
    if (tag == "rad/s" || tag == "rads" || tag == "rad_s")
        return SpectralUnit::RadPerSecond;
    if (tag == "Hz" || tag == "hz") return SpectralUnit::Hertz;
    if (tag == "A" || tag == "a" || tag == "wavelength-A" || tag == "lambdaA")
        return SpectralUnit::WavelengthAngstrom;
    throw ValidationError("unknown spectral unit tag '" + std::string(tag) + "'");
}

std::string to_string(LengthUnit u) {
    switch (u) {
        case LengthUnit::Angstrom: return "A";
        case LengthUnit::Nanometer: return "nm";
        case LengthUnit::Meter: return "m";
    }
    return "?";
}

std::string to_string(SpectralUnit u) {
    switch (u) {
        case SpectralUnit::ElectronVolt: return "eV";
        case SpectralUnit::RadPerSecond: return "rad/s";
        case SpectralUnit::Hertz: return "Hz";
        case SpectralUnit::WavelengthAngstrom: return "wavelength-A";
    }
    return "?";
}

double width_ev_from_rate(double gamma_per_s) { return phys.hbar_ev * gamma_per_s; }
double rate_from_width_ev(double width_ev) { return width_ev / phys.hbar_ev; }

namespace {
// width[eV] = hbar_ev * C6_si / rho_m^6 = (hbar_ev * C6_si * 1e60) / rho_A^6
constexpr double a6_per_m6 = 1e60;
constexpr double a2_per_m2 = 1e20;
} // namespace

double c6_si_from_ev_a6(double c6_ev_a6) {
    return c6_ev_a6 / phys.hbar_ev / a6_per_m6;
}
double c6_ev_a6_from_si(double c6_si) { return c6_si * phys.hbar_ev * a6_per_m6; }
double c2_si_from_ev_a2(double c2_ev_a2) {
    return c2_ev_a2 / phys.hbar_ev / a2_per_m2;
}
double c2_ev_a2_from_si(double c2_si) { return c2_si * phys.hbar_ev * a2_per_m2; }

} // namespace icd
