#include "icd/rates.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "icd/constants.hpp"

namespace icd {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double nan = std::numeric_limits<double>::quiet_NaN();

double cube(double v) { return v * v * v; }
double sixth(double v) { return cube(v) * cube(v); }

void validate_donor(const DonorSpec& d) {
    if (!(d.gamma_d > 0.0) || !std::isfinite(d.gamma_d))
        throw ValidationError("donor gamma_d must be positive and finite");
    if (!(d.omega_d > 0.0) || !std::isfinite(d.omega_d))
        throw ValidationError("donor omega_d must be positive and finite");
}

void validate_acceptor(const AcceptorSpec& a) {
    if (!(a.sigma_a >= 0.0) || !std::isfinite(a.sigma_a))
        throw ValidationError("acceptor sigma_a must be >= 0 and finite");
}

void validate_alpha(double alpha) {
    if (!(alpha >= 0.0) || !std::isfinite(alpha))
        throw ValidationError("alpha must be >= 0 and finite");
}

// The perturbative flags follow the coupling strength relevant to the tensor
// kind; the full tensor is bounded by whichever regime is worse.
void set_flags(RateBreakdown& b, TensorKind kind) {
    double u = 0.0;
    switch (kind) {
        case TensorKind::NonRetarded: u = b.u_nr; break;
        case TensorKind::FarField: u = b.u_r; break;
        case TensorKind::Full:
            u = std::max(std::isnan(b.u_nr) ? 0.0 : b.u_nr,
                         std::isnan(b.u_r) ? 0.0 : b.u_r);
            break;
    }
    if (std::isnan(u)) u = 0.0;
    b.perturbative_ok = u < 1.0;
    b.perturbative_strict = u < 0.5;
}

double u_nr_of(const TriangleGeometry& g, double alpha) {
    return alpha * cube(g.rho_ad) / (cube(g.rho_dm) * cube(g.rho_ma));
}

double u_r_of(const TriangleGeometry& g, double alpha, double omega) {
    const double k = omega / phys.c;
    return alpha * k * k * g.rho_ad / (g.rho_ma * g.rho_dm);
}

} // namespace

RateCoefficients compute_coefficients(const DonorSpec& donor,
                                      const AcceptorSpec& acceptor) {
    validate_donor(donor);
    validate_acceptor(acceptor);
    const double gs = donor.gamma_d * acceptor.sigma_a;
    const double c4 = phys.c * phys.c * phys.c * phys.c;
    const double w4 = donor.omega_d * donor.omega_d * donor.omega_d * donor.omega_d;
    RateCoefficients rc;
    rc.c6 = gs * 3.0 * c4 / (4.0 * w4);
    rc.c2 = gs / 4.0;
    rc.source = CoefficientSource::ComputedFromAtoms;
    return rc;
}

double gamma_sigma_from_c6(double c6_si, double omega) {
    const double c4 = phys.c * phys.c * phys.c * phys.c;
    const double w4 = omega * omega * omega * omega;
    return 4.0 * w4 * c6_si / (3.0 * c4);
}

double gamma_sigma_from_c2(double c2_si) { return 4.0 * c2_si; }

double c2_si_from_c6_si(double c6_si, double omega) {
    return gamma_sigma_from_c6(c6_si, omega) / 4.0;
}

RateBreakdown rate_trace(const SystemSpec& system, TensorKind kind,
                         bool include_mediator) {
    validate_donor(system.donor);
    validate_acceptor(system.acceptor);
    const double omega = system.donor.omega_d;
    const double pref = 2.0 * pi * pi * system.donor.gamma_d * system.acceptor.sigma_a;

    const ComplexTensor3 g0_ad = g0(kind, system.r_acceptor, system.r_donor, omega);
    const ComplexTensor3 g0_da = g0(kind, system.r_donor, system.r_acceptor, omega);

    RateBreakdown b;
    b.u_nr = nan;
    b.u_r = nan;
    b.direct_term = pref * std::real(trace_conj_product(g0_ad, g0_da));

    const bool mediated = include_mediator && system.mediator.has_value();
    if (mediated) {
        const MediatorSpec& med = *system.mediator;
        validate_alpha(med.alpha_volume);
        const TriangleGeometry geom =
            derive_geometry(system.r_donor, system.r_acceptor, med.position);
        b.u_nr = u_nr_of(geom, med.alpha_volume);
        b.u_r = u_r_of(geom, med.alpha_volume, omega);

        if (med.alpha_volume > 0.0) {
            const double k = omega / phys.c;
            const double coupling = 4.0 * pi * med.alpha_volume * k * k;
            const ComplexTensor3 gs_ad =
                coupling * (g0(kind, system.r_acceptor, med.position, omega) *
                            g0(kind, med.position, system.r_donor, omega));
            const ComplexTensor3 gs_da =
                coupling * (g0(kind, system.r_donor, med.position, omega) *
                            g0(kind, med.position, system.r_acceptor, omega));
            b.cross_term = pref * std::real(trace_conj_product(g0_ad, gs_da) +
                                            trace_conj_product(gs_ad, g0_da));
            b.scattered_term = pref * std::real(trace_conj_product(gs_ad, gs_da));
        }
    }

    b.total = b.direct_term + b.cross_term + b.scattered_term;
    set_flags(b, kind);
    return b;
}

RateBreakdown rate_nr_general(const TriangleGeometry& geom, double c6_si,
                              double alpha_m3) {
    validate_alpha(alpha_m3);
    if (!(c6_si >= 0.0) || !std::isfinite(c6_si))
        throw ValidationError("c6 must be >= 0 and finite");
    if (!(geom.rho_ad > 0.0) || !(geom.rho_dm > 0.0) || !(geom.rho_ma > 0.0))
        throw DegenerateGeometryError("rate_nr_general: non-positive side length");

    const double cos_ad = std::cos(geom.theta_ad);
    const double cos_dm = std::cos(geom.theta_dm);
    const double cos_ma = std::cos(geom.theta_ma);

    RateBreakdown b;
    b.direct_term = c6_si / sixth(geom.rho_ad);
    b.cross_term = -c6_si * alpha_m3 * (1.0 + 3.0 * cos_dm * cos_ma * cos_ad) /
                   (cube(geom.rho_ad) * cube(geom.rho_dm) * cube(geom.rho_ma));
    b.scattered_term = c6_si * 1.5 * alpha_m3 * alpha_m3 * (1.0 + cos_ad * cos_ad) /
                       (sixth(geom.rho_dm) * sixth(geom.rho_ma));
    b.total = b.direct_term + b.cross_term + b.scattered_term;
    b.u_nr = u_nr_of(geom, alpha_m3);
    b.u_r = nan;  // omega not known here
    set_flags(b, TensorKind::NonRetarded);
    return b;
}

RateBreakdown rate_nr_collinear(double rho_ad, double rho_dm, double rho_ma,
                                double c6_si, double alpha_m3,
                                bool mediator_between) {
    validate_alpha(alpha_m3);
    if (!(rho_ad > 0.0) || !(rho_dm > 0.0) || !(rho_ma > 0.0))
        throw DegenerateGeometryError("rate_nr_collinear: non-positive side length");
    const double defect = mediator_between
                              ? std::abs(rho_dm + rho_ma - rho_ad)
                              : std::abs(std::abs(rho_dm - rho_ma) - rho_ad);
    if (defect > 1e-9 * rho_ad)
        throw ValidationError("rate_nr_collinear: side lengths are not collinear");

    if (mediator_between) {
        // (C6/rho_AD^6)(1 + 2u + 3u^2); at the midpoint this is the
        // (1, 128 alpha, 12288 alpha^2) coefficient set.
        RateBreakdown b;
        const double u = alpha_m3 * cube(rho_ad) / (cube(rho_dm) * cube(rho_ma));
        b.direct_term = c6_si / sixth(rho_ad);
        b.cross_term = b.direct_term * 2.0 * u;
        b.scattered_term = b.direct_term * 3.0 * u * u;
        b.total = b.direct_term + b.cross_term + b.scattered_term;
        b.u_nr = u;
        b.u_r = nan;
        set_flags(b, TensorKind::NonRetarded);
        return b;
    }

    // Mediator outside: theta_ad = 0, angle at the atom nearer the mediator
    // is pi, at the far atom 0.
    TriangleGeometry geom;
    geom.rho_ad = rho_ad;
    geom.rho_dm = rho_dm;
    geom.rho_ma = rho_ma;
    geom.theta_ad = 0.0;
    const bool beyond_acceptor = rho_dm > rho_ma;
    geom.theta_dm = beyond_acceptor ? pi : 0.0;  // angle at the acceptor
    geom.theta_ma = beyond_acceptor ? 0.0 : pi;  // angle at the donor
    geom.collinear = true;
    geom.mediator_between = false;
    return rate_nr_general(geom, c6_si, alpha_m3);
}

RateBreakdown rate_r_collinear(double rho_ad, double rho_am, double rho_dm,
                               double c2_si, double alpha_m3, double omega,
                               double theta_ad) {
    validate_alpha(alpha_m3);
    if (!(c2_si >= 0.0) || !std::isfinite(c2_si))
        throw ValidationError("c2 must be >= 0 and finite");
    if (!(omega > 0.0) || !std::isfinite(omega))
        throw ValidationError("omega must be positive and finite");
    if (!(rho_ad > 0.0) || !(rho_am > 0.0) || !(rho_dm > 0.0))
        throw DegenerateGeometryError("rate_r_collinear: non-positive side length");

    const bool between = std::abs(theta_ad - pi) < 1e-9;
    if (!between && std::abs(theta_ad) > 1e-9)
        throw ValidationError("rate_r_collinear: theta_ad must be 0 or pi");
    const double defect = between
                              ? std::abs(rho_am + rho_dm - rho_ad)
                              : std::abs(std::abs(rho_am - rho_dm) - rho_ad);
    if (defect > 1e-9 * rho_ad)
        throw ValidationError("rate_r_collinear: side lengths inconsistent with theta_ad");

    const double k = omega / phys.c;
    const double u = alpha_m3 * k * k * rho_ad / (rho_am * rho_dm);
    // Phase accumulated by the mediated path relative to the direct one;
    // zero between the atoms, 2 k rho to the nearer atom outside.
    const double x = between ? 1.0 : std::cos(k * (rho_am + rho_dm - rho_ad));

    RateBreakdown b;
    b.direct_term = c2_si / (rho_ad * rho_ad);
    b.cross_term = b.direct_term * 2.0 * u * x;
    b.scattered_term = b.direct_term * u * u;
    b.total = b.direct_term + b.cross_term + b.scattered_term;
    b.u_r = u;
    b.u_nr = alpha_m3 * cube(rho_ad) / (cube(rho_dm) * cube(rho_am));
    set_flags(b, TensorKind::FarField);
    return b;
}

} // namespace icd
