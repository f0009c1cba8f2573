#pragma once

#include <string>
#include <string_view>

#include "icd/geometry.hpp"
#include "icd/tensor.hpp"

namespace icd {

enum class TensorKind { Full, NonRetarded, FarField };

TensorKind tensor_kind_from_string(std::string_view tag);
std::string to_string(TensorKind kind);

// Point scatterer. alpha_volume is the polarizability volume alpha/(4 pi eps0)
// in m^3; real, isotropic, frequency-independent.
struct MediatorSpec {
    Position position;
    double alpha_volume = 0.0;
};

// Free-space dyadic Green's tensor of the Helmholtz equation, valid at all
// distances. With k = omega/c, rho = |r - r'|, e = (r - r')/rho:
//   G = e^{ik rho}/(4 pi rho) [ (1 + i/(k rho) - 1/(k rho)^2) I
//                             + (-1 - 3i/(k rho) + 3/(k rho)^2) e(x)e ].
ComplexTensor3 g0_full(const Position& r, const Position& r_prime, double omega);

// Static limit k rho -> 0:  -c^2/(4 pi omega^2 rho^3) (I - 3 e(x)e). Real.
ComplexTensor3 g0_nonretarded(const Position& r, const Position& r_prime,
                              double omega);

// Far-field limit k rho -> inf:  e^{ik rho}/(4 pi rho) (I - e(x)e).
ComplexTensor3 g0_farfield(const Position& r, const Position& r_prime,
                           double omega);

// Dispatch on kind.
ComplexTensor3 g0(TensorKind kind, const Position& r, const Position& r_prime,
                  double omega);

// First-order Born correction for a single point mediator:
//   G1(r, r') = G0(r, r') + 4 pi alpha k^2 G0(r, r_M) . G0(r_M, r'),
// where the 4 pi comes from mu0 omega^2 alpha = 4 pi alpha_vol omega^2/c^2
// once the polarizability is expressed as a volume.
ComplexTensor3 g1_with_mediator(const Position& r, const Position& r_prime,
                                double omega, const MediatorSpec& mediator,
                                TensorKind background = TensorKind::Full);

} // namespace icd
