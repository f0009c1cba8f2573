#pragma once

#include <optional>

#include "icd/geometry.hpp"
#include "icd/greens.hpp"

namespace icd {

// Emitting species. gamma_d is the free-space decay rate (1/s), omega_d the
// transition angular frequency (rad/s).
struct DonorSpec {
    double gamma_d = 0.0;
    double omega_d = 0.0;
};

// Absorbing species. sigma_a is the photoionization cross section at the
// donor transition energy (m^2).
struct AcceptorSpec {
    double sigma_a = 0.0;
};

struct SystemSpec {
    DonorSpec donor;
    AcceptorSpec acceptor;
    Position r_donor;
    Position r_acceptor;
    std::optional<MediatorSpec> mediator;
};

enum class CoefficientSource { ComputedFromAtoms, Fitted, UserSupplied };

// Two-body rate prefactors: Gamma = C6/rho^6 (non-retarded) and
// Gamma = C2/rho^2 (far field). SI: C6 in m^6/s, C2 in m^2/s.
struct RateCoefficients {
    double c6 = 0.0;
    double c2 = 0.0;
    CoefficientSource source = CoefficientSource::UserSupplied;
};

// C6 = gamma_D sigma_A 3 c^4 / (4 omega_D^4), C2 = gamma_D sigma_A / 4.
RateCoefficients compute_coefficients(const DonorSpec& donor,
                                      const AcceptorSpec& acceptor);

// Inverses of the C6/C2 definitions, used to rebuild a donor-acceptor
// product when only a coefficient is known.
double gamma_sigma_from_c6(double c6_si, double omega);
double gamma_sigma_from_c2(double c2_si);
double c2_si_from_c6_si(double c6_si, double omega);

// Total rate plus its contributions ordered by power of the mediator
// polarizability (alpha^0 direct, alpha^1 cross, alpha^2 scattered), all in
// 1/s. u_nr and u_r are the dimensionless mediator coupling strengths
//   u_nr = alpha rho_AD^3 / (rho_DM^3 rho_MA^3),
//   u_r  = alpha (omega/c)^2 rho_AD / (rho_AM rho_DM);
// the perturbative treatment needs the applicable u below one. A field is
// NaN when its inputs are not available to the operation that produced it.
struct RateBreakdown {
    double total = 0.0;
    double direct_term = 0.0;
    double cross_term = 0.0;
    double scattered_term = 0.0;
    double u_nr = 0.0;
    double u_r = 0.0;
    bool perturbative_ok = true;      // applicable u < 1
    bool perturbative_strict = true;  // applicable u < 0.5
};

// Trace formula Gamma = 2 pi^2 gamma_D sigma_A Tr[G(r_A,r_D) . G*(r_D,r_A)]
// evaluated with the requested background tensors, the mediator folded in via
// the first-order Born term when present and include_mediator is set.
RateBreakdown rate_trace(const SystemSpec& system, TensorKind kind,
                         bool include_mediator = true);

// Closed-form non-retarded rate for a general triangle:
//   Gamma = C6 [ 1/rho_AD^6
//              + (3 alpha^2/2)(1 + cos^2 th_AD)/(rho_DM^6 rho_MA^6)
//              - alpha (1 + 3 cos th_DM cos th_MA cos th_AD)
//                / (rho_AD^3 rho_DM^3 rho_MA^3) ].
RateBreakdown rate_nr_general(const TriangleGeometry& geom, double c6_si,
                              double alpha_m3);

// Collinear non-retarded rate. For a mediator between donor and acceptor
// this is (C6/rho_AD^6)(1 + 2 u_nr + 3 u_nr^2); for a mediator outside it
// evaluates the general form at the degenerate angles. Sides must satisfy
// the collinearity constraint to 1e-9 relative.
RateBreakdown rate_nr_collinear(double rho_ad, double rho_dm, double rho_ma,
                                double c6_si, double alpha_m3,
                                bool mediator_between);

// Collinear far-field rate:
//   Gamma = (C2/rho_AD^2) [ 1 + u_r^2 + 2 u_r X ],
// X = cos(2 omega rho_AM/c) for a mediator beyond the acceptor (theta_ad = 0;
// beyond the donor the phase carries rho_DM instead), X = 1 for a mediator
// between (theta_ad = pi). theta_ad must be 0 or pi.
RateBreakdown rate_r_collinear(double rho_ad, double rho_am, double rho_dm,
                               double c2_si, double alpha_m3, double omega,
                               double theta_ad);

} // namespace icd
