#pragma once

#include <cmath>
#include <complex>
#include <random>

#include "icd/constants.hpp"
#include "icd/geometry.hpp"
#include "icd/greens.hpp"
#include "icd/tensor.hpp"

namespace testutil {

inline double rel_gap(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    if (scale == 0.0) return 0.0;
    return std::abs(a - b) / scale;
}

inline double rel_gap_tensor(const icd::ComplexTensor3& a,
                             const icd::ComplexTensor3& b) {
    return (a - b).frobenius_norm() /
           std::max(a.frobenius_norm(), b.frobenius_norm());
}

struct Rotation {
    double m[3][3];

    icd::Vec3 apply(const icd::Vec3& v) const {
        return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
                m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
                m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
    }
};

// Uniform random rotation from a normalized quaternion.
inline Rotation random_rotation(std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    double q[4];
    double n2 = 0.0;
    do {
        n2 = 0.0;
        for (double& c : q) {
            c = gauss(rng);
            n2 += c * c;
        }
    } while (n2 < 1e-12);
    const double n = std::sqrt(n2);
    const double w = q[0] / n, x = q[1] / n, y = q[2] / n, z = q[3] / n;
    Rotation r;
    r.m[0][0] = 1 - 2 * (y * y + z * z);
    r.m[0][1] = 2 * (x * y - z * w);
    r.m[0][2] = 2 * (x * z + y * w);
    r.m[1][0] = 2 * (x * y + z * w);
    r.m[1][1] = 1 - 2 * (x * x + z * z);
    r.m[1][2] = 2 * (y * z - x * w);
    r.m[2][0] = 2 * (x * z - y * w);
    r.m[2][1] = 2 * (y * z + x * w);
    r.m[2][2] = 1 - 2 * (x * x + y * y);
    return r;
}

inline icd::Vec3 random_in_box(std::mt19937_64& rng, double half) {
    std::uniform_real_distribution<double> u(-half, half);
    return {u(rng), u(rng), u(rng)};
}

struct SampledGeometry {
    icd::Position r_d, r_a, r_m;
    double alpha_m3 = 0.0;
};

// Random non-degenerate three-atom arrangement (angstrom scale) with the
// non-retarded coupling strength u_NR below the cap.
inline SampledGeometry sample_geometry(std::mt19937_64& rng, double u_cap) {
    std::uniform_real_distribution<double> alpha_a3(0.05, 2.0);
    const double A = 1e-10;
    for (;;) {
        SampledGeometry s;
        s.r_d = random_in_box(rng, 10 * A);
        s.r_a = random_in_box(rng, 10 * A);
        s.r_m = random_in_box(rng, 10 * A);
        s.alpha_m3 = alpha_a3(rng) * 1e-30;
        const double min_sep = 0.5 * A;
        if ((s.r_a - s.r_d).norm() < min_sep || (s.r_m - s.r_d).norm() < min_sep ||
            (s.r_m - s.r_a).norm() < min_sep)
            continue;
        const auto g = icd::derive_geometry(s.r_d, s.r_a, s.r_m);
        const double u = s.alpha_m3 * std::pow(g.rho_ad, 3) /
                         (std::pow(g.rho_dm, 3) * std::pow(g.rho_ma, 3));
        if (u < u_cap) return s;
    }
}

// R G R^T, entrywise.
inline icd::ComplexTensor3 rotate_tensor(const Rotation& r,
                                         const icd::ComplexTensor3& g) {
    icd::ComplexTensor3 out;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            std::complex<double> s = 0.0;
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) s += r.m[i][a] * g(a, b) * r.m[j][b];
            out(i, j) = s;
        }
    return out;
}

// Central finite differences of the full tensor: normalized residual of
// curl curl G - k^2 G = 0, columnwise, away from the source.
inline double helmholtz_residual(const icd::Vec3& r, const icd::Vec3& rp,
                                 double omega, double h) {
    using icd::ComplexTensor3;
    const auto field = [&](const icd::Vec3& p) { return icd::g0_full(p, rp, omega); };
    const icd::Vec3 axes[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};

    ComplexTensor3 second[3][3];  // second[a][b](i,j) = d_a d_b G(i,j)
    const auto g_center = field(r);
    for (int a = 0; a < 3; ++a) {
        const auto plus = field(r + h * axes[a]);
        const auto minus = field(r - h * axes[a]);
        second[a][a] = (plus - g_center - g_center + minus) * (1.0 / (h * h));
    }
    for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b) {
            const auto pp = field(r + h * axes[a] + h * axes[b]);
            const auto pm = field(r + h * axes[a] - h * axes[b]);
            const auto mp = field(r - h * axes[a] + h * axes[b]);
            const auto mm = field(r - h * axes[a] - h * axes[b]);
            second[a][b] = (pp - pm - mp + mm) * (1.0 / (4.0 * h * h));
            second[b][a] = second[a][b];
        }

    const double k = omega / icd::phys.c;
    ComplexTensor3 residual;
    for (int a = 0; a < 3; ++a)
        for (int j = 0; j < 3; ++j) {
            std::complex<double> grad_div = 0.0, laplacian = 0.0;
            for (int b = 0; b < 3; ++b) {
                grad_div += second[a][b](b, j);
                laplacian += second[b][b](a, j);
            }
            residual(a, j) = grad_div - laplacian - k * k * g_center(a, j);
        }
    return residual.frobenius_norm() / (k * k * g_center.frobenius_norm());
}

} // namespace testutil
