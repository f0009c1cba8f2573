#include "icd/greens.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "icd/constants.hpp"

namespace icd {

namespace {

using cplx = std::complex<double>;
constexpr double pi = std::numbers::pi;
constexpr double coincidence_eps = 1e-15;  // m

double checked_separation(const Position& r, const Position& r_prime,
                          double omega) {
    if (!r.finite() || !r_prime.finite())
        throw ValidationError("greens: non-finite position");
    if (!(omega > 0.0) || !std::isfinite(omega))
        throw ValidationError("greens: omega must be positive and finite");
    const double rho = (r - r_prime).norm();
    if (rho < coincidence_eps)
        throw DegenerateGeometryError("greens: coincident source and field points");
    return rho;
}

} // namespace

TensorKind tensor_kind_from_string(std::string_view tag) {
    if (tag == "full") return TensorKind::Full;
    if (tag == "nonretarded" || tag == "nr") return TensorKind::NonRetarded;
    if (tag == "farfield" || tag == "ff") return TensorKind::FarField;
    throw ValidationError("unknown tensor kind '" + std::string(tag) + "'");
}

std::string to_string(TensorKind kind) {
    switch (kind) {
        case TensorKind::Full: return "full";
        case TensorKind::NonRetarded: return "nonretarded";
        case TensorKind::FarField: return "farfield";
    }
    return "?";
}

ComplexTensor3 g0_full(const Position& r, const Position& r_prime, double omega) {
    const double rho = checked_separation(r, r_prime, omega);
    const Vec3 e = (r - r_prime) / rho;
    const double x = omega / phys.c * rho;  // k rho
    const cplx i_over_x{0.0, 1.0 / x};
    const cplx coef_id = 1.0 + i_over_x - 1.0 / (x * x);
    const cplx coef_ee = -1.0 - 3.0 * i_over_x + 3.0 / (x * x);
    const cplx scale = std::exp(cplx(0.0, x)) / (4.0 * pi * rho);
    return scale * (coef_id * ComplexTensor3::identity() +
                    coef_ee * ComplexTensor3::outer(e, e));
}

ComplexTensor3 g0_nonretarded(const Position& r, const Position& r_prime,
                              double omega) {
    const double rho = checked_separation(r, r_prime, omega);
    const Vec3 e = (r - r_prime) / rho;
    const double pref =
        -phys.c * phys.c / (4.0 * pi * omega * omega * rho * rho * rho);
    return pref * (ComplexTensor3::identity() -
                   3.0 * ComplexTensor3::outer(e, e));
}

ComplexTensor3 g0_farfield(const Position& r, const Position& r_prime,
                           double omega) {
    const double rho = checked_separation(r, r_prime, omega);
    const Vec3 e = (r - r_prime) / rho;
    const double x = omega / phys.c * rho;
    const cplx scale = std::exp(cplx(0.0, x)) / (4.0 * pi * rho);
    return scale * (ComplexTensor3::identity() - ComplexTensor3::outer(e, e));
}

ComplexTensor3 g0(TensorKind kind, const Position& r, const Position& r_prime,
                  double omega) {
    switch (kind) {
        case TensorKind::Full: return g0_full(r, r_prime, omega);
        case TensorKind::NonRetarded: return g0_nonretarded(r, r_prime, omega);
        case TensorKind::FarField: return g0_farfield(r, r_prime, omega);
    }
    throw ValidationError("unknown tensor kind");
}

ComplexTensor3 g1_with_mediator(const Position& r, const Position& r_prime,
                                double omega, const MediatorSpec& mediator,
                                TensorKind background) {
    if (!(mediator.alpha_volume >= 0.0) || !std::isfinite(mediator.alpha_volume))
        throw ValidationError("g1_with_mediator: alpha must be >= 0 and finite");
    checked_separation(r, mediator.position, omega);
    checked_separation(mediator.position, r_prime, omega);
    const ComplexTensor3 direct = g0(background, r, r_prime, omega);
    if (mediator.alpha_volume == 0.0) return direct;

    const double k = omega / phys.c;
    const double coupling = 4.0 * pi * mediator.alpha_volume * k * k;
    return direct + coupling * (g0(background, r, mediator.position, omega) *
                                g0(background, mediator.position, r_prime, omega));
}

} // namespace icd
