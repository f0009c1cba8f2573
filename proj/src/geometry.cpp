#include "icd/geometry.hpp"

#include <algorithm>
#include <numbers>

namespace icd {

namespace {

// Interior angle at vertex v of the triangle (v, p, q). atan2 of the cross
// and dot products is the law-of-cosines angle evaluated in a form that
// stays accurate near 0 and pi, where acos loses half the digits.
double interior_angle(const Position& v, const Position& p, const Position& q) {
    const Vec3 a = p - v;
    const Vec3 b = q - v;
    return std::atan2(a.cross(b).norm(), a.dot(b));
}

} // namespace

TriangleGeometry derive_geometry(const Position& r_d, const Position& r_a,
                                 const Position& r_m,
                                 const GeometryTolerances& tol) {
    if (!r_d.finite() || !r_a.finite() || !r_m.finite())
        throw ValidationError("derive_geometry: non-finite position");

    TriangleGeometry g;
    g.rho_ad = (r_a - r_d).norm();
    g.rho_dm = (r_d - r_m).norm();
    g.rho_ma = (r_m - r_a).norm();

    if (g.rho_ad < tol.dist_eps || g.rho_dm < tol.dist_eps ||
        g.rho_ma < tol.dist_eps)
        throw DegenerateGeometryError("derive_geometry: coincident atom positions");

    // Interior angle at the vertex opposite each side.
    g.theta_ad = interior_angle(r_m, r_d, r_a);
    g.theta_dm = interior_angle(r_a, r_d, r_m);
    g.theta_ma = interior_angle(r_d, r_a, r_m);

    const double theta_max = std::max({g.theta_ad, g.theta_dm, g.theta_ma});
    const double theta_min = std::min({g.theta_ad, g.theta_dm, g.theta_ma});
    g.collinear = theta_max > std::numbers::pi - tol.angle_tol ||
                  theta_min < tol.angle_tol;
    g.mediator_between = g.theta_ad > std::numbers::pi - tol.angle_tol;
    return g;
}

} // namespace icd
