#pragma once

#include <cmath>

#include "icd/errors.hpp"

namespace icd {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3 operator-() const { return {-x, -y, -z}; }

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm2() const { return x * x + y * y + z * z; }
    double norm() const { return std::sqrt(norm2()); }
    Vec3 normalized() const { return *this / norm(); }
    bool finite() const {
        return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
    }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

// Atom position, Cartesian, meters.
using Position = Vec3;

struct GeometryTolerances {
    double angle_tol = 1e-8;  // rad, collinearity detection
    double dist_eps = 1e-15;  // m, coincidence threshold
};

// Side lengths and interior angles of the donor/acceptor/mediator triangle.
// theta_xy is the interior angle at the vertex opposite side xy: theta_ad
// sits at the mediator, theta_dm at the acceptor, theta_ma at the donor.
// For a mediator strictly between donor and acceptor, theta_ad = pi and
// theta_dm = theta_ma = 0.
struct TriangleGeometry {
    double rho_ad = 0.0;    // m
    double rho_dm = 0.0;    // m
    double rho_ma = 0.0;    // m
    double theta_ad = 0.0;  // rad
    double theta_dm = 0.0;  // rad
    double theta_ma = 0.0;  // rad
    bool collinear = false;
    bool mediator_between = false;
};

// Sides by Euclidean distance; interior angles from atan2 of the cross and
// dot products, which matches the law of cosines but stays accurate near 0
// and pi. Throws DegenerateGeometryError on coincident points.
TriangleGeometry derive_geometry(const Position& r_d, const Position& r_a,
                                 const Position& r_m,
                                 const GeometryTolerances& tol = {});

} // namespace icd
