#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "icd/geometry.hpp"
#include "icd/greens.hpp"
#include "icd/rates.hpp"

namespace icd {

// Tabulated scan output. Row values are in I/O units (angstrom, eV, 1/s,
// dimensionless); column names say which. Metadata holds every parameter
// needed to regenerate the scan plus informational keys; all numbers are
// stored in shortest round-trip form so regeneration is bit-exact.
struct ScanResult {
    std::map<std::string, std::string> metadata;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    std::size_t column_index(std::string_view name) const;  // throws if absent
};

// Donor-acceptor distance scan with the mediator pinned at the midpoint.
// Emits the two-body curve, the closed-form rate (non-retarded or far-field
// kind; NaN for the full kind, which has no printed closed form), the
// trace-formula rate, and their ratio to the two-body rate, as widths in eV.
// omega is required for any kind other than NonRetarded (the non-retarded
// rate does not depend on it).
ScanResult scan_distance_midpoint(double rho_min_angstrom,
                                  double rho_max_angstrom, std::size_t n_points,
                                  double c6_ev_a6, double alpha_a3,
                                  TensorKind kind = TensorKind::NonRetarded,
                                  std::optional<double> omega_rad_s = {});

// Mediator swept along the donor-acceptor axis (coordinate t measured from
// the donor, in angstrom; t in (0, rho_AD) is between the atoms). Emits the
// collinear far-field closed form and the full-tensor trace rate, each
// normalized to its own two-body value. Grid points within the exclusion
// radius of either atom are flagged invalid, not errors.
ScanResult scan_mediator_1d(const Vec3& r_d_angstrom, const Vec3& r_a_angstrom,
                            double t_min_angstrom, double t_max_angstrom,
                            std::size_t n_points, double alpha_a3,
                            double omega_rad_s, double c2_ev_a2);

// Mediator swept over a plane containing the donor-acceptor axis
// (coordinates t along the axis, s perpendicular, angstrom; the in-plane
// perpendicular direction is chosen deterministically). Rates come from the
// trace formula with general mediator position, far-field or full tensors.
ScanResult scan_mediator_2d(const Vec3& r_d_angstrom, const Vec3& r_a_angstrom,
                            double t_min_angstrom, double t_max_angstrom,
                            std::size_t n_t, double s_min_angstrom,
                            double s_max_angstrom, std::size_t n_s,
                            double alpha_a3, double omega_rad_s,
                            double c2_ev_a2,
                            TensorKind kind = TensorKind::FarField);

// Re-run a scan from its own metadata. Produces identical rows.
ScanResult regenerate(const ScanResult& scan);

// Two-column width-vs-distance dataset (angstrom, eV).
struct WidthDataset {
    std::vector<double> rho_angstrom;
    std::vector<double> width_ev;
    std::string source_label;

    void validate() const;  // rho strictly increasing, widths > 0
};

struct FitResult {
    RateCoefficients coefficients;  // SI; source = Fitted, c2 not determined
    double c6_ev_a6 = 0.0;
    double rms_residual_ev = 0.0;
    std::size_t n_used = 0;
    double rho_min_fit = 0.0;  // angstrom
};

// Least-squares fit of width = C6/rho^6 through the origin (linear in
// rho^-6) on the rows with rho >= rho_min_fit. Needs at least two such rows.
FitResult fit_c6(const WidthDataset& data, double rho_min_fit_angstrom);

// Figure presets: fixed parameter sets used by the CLI.
ScanResult figure3_scan();        // distance scan, C6 = 3.6 eV A^6, alpha = 0.205 A^3
ScanResult figure4_upper_scan();  // 1d mediator scan, rho_AD = 3 lambda, alpha = (lambda/4)^3
ScanResult figure4_lower_scan();  // 2d mediator map, same parameters

} // namespace icd
