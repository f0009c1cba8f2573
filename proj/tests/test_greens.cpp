#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "icd/constants.hpp"
#include "icd/greens.hpp"

#include "test_helpers.hpp"

using namespace icd;
using testutil::rel_gap;
using testutil::rel_gap_tensor;
using cplx = std::complex<double>;

namespace {
constexpr double pi = std::numbers::pi;

// omega chosen so that k rho lands where we want it for rho ~ 1 m.
double omega_for_k(double k) { return k * phys.c; }
} // namespace

TEST_CASE("g0_nonretarded: z-axis separation and traceless dyadic") {
    const double rho = 2.5e-10;
    const double omega = 3.9e16;
    const auto g = g0_nonretarded({0, 0, rho}, {0, 0, 0}, omega);
    const double pref = phys.c * phys.c / (4.0 * pi * omega * omega * rho * rho * rho);
    CHECK(rel_gap(g(0, 0).real(), -pref) < 1e-14);
    CHECK(rel_gap(g(1, 1).real(), -pref) < 1e-14);
    CHECK(rel_gap(g(2, 2).real(), 2.0 * pref) < 1e-14);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            CHECK(g(i, j).imag() == 0.0);  // purely real
            if (i != j) CHECK(std::abs(g(i, j)) < 1e-16 * pref);
        }
    CHECK(std::abs(g.trace()) < 1e-15 * pref);
}

TEST_CASE("g0_nonretarded: rotation covariance") {
    std::mt19937_64 rng(21);
    const double omega = 3.9e16;
    for (int trial = 0; trial < 50; ++trial) {
        const Vec3 r = testutil::random_in_box(rng, 5e-10);
        const Vec3 rp = testutil::random_in_box(rng, 5e-10);
        if ((r - rp).norm() < 1e-11) continue;
        const auto rot = testutil::random_rotation(rng);
        const auto g = g0_nonretarded(r, rp, omega);
        const auto g_rot = g0_nonretarded(rot.apply(r), rot.apply(rp), omega);
        CHECK(rel_gap_tensor(g_rot, testutil::rotate_tensor(rot, g)) < 1e-12);
    }
}

TEST_CASE("g0_farfield: z-axis transverse projector") {
    const double omega = 3.9e16;
    const double k = omega / phys.c;
    const double rho = 2.0e-6;
    const auto g = g0_farfield({0, 0, rho}, {0, 0, 0}, omega);
    const cplx expected = std::exp(cplx(0.0, k * rho)) / (4.0 * pi * rho);
    CHECK(std::abs(g(0, 0) - expected) < 1e-15 * std::abs(expected));
    CHECK(std::abs(g(1, 1) - expected) < 1e-15 * std::abs(expected));
    CHECK(std::abs(g(2, 2)) == 0.0);

    // |entries| fall off exactly as 1/rho
    const auto g2 = g0_farfield({0, 0, 2.0 * rho}, {0, 0, 0}, omega);
    CHECK(rel_gap(std::abs(g2(0, 0)), 0.5 * std::abs(g(0, 0))) < 1e-13);

    // phase advances by 2 pi over one wavelength
    const double lambda = 2.0 * pi / k;
    const auto g3 = g0_farfield({0, 0, rho + lambda}, {0, 0, 0}, omega);
    const double dphase = std::arg(g3(0, 0) / g(0, 0));
    CHECK(std::abs(dphase) < 1e-8);  // mod 2 pi
}

TEST_CASE("g0_full: recovers the static limit at k rho = 1e-6") {
    const double rho = 1.0;
    const double omega = omega_for_k(1e-6);
    const auto full = g0_full({0.3, -0.2, rho}, {0.3, -0.2, 0.0}, omega);
    const auto nr = g0_nonretarded({0.3, -0.2, rho}, {0.3, -0.2, 0.0}, omega);
    CHECK(rel_gap_tensor(full, nr) < 1e-5);
}

TEST_CASE("g0_full: recovers the far-field limit at k rho = 1e6") {
    const double rho = 1.0;
    const double omega = omega_for_k(1e6);
    const auto full = g0_full({0, 0, rho}, {0, 0, 0}, omega);
    const auto ff = g0_farfield({0, 0, rho}, {0, 0, 0}, omega);
    CHECK(rel_gap_tensor(full, ff) < 1e-5);
}

TEST_CASE("g0_full: limit consistency bounds over k rho") {
    std::mt19937_64 rng(23);
    const Vec3 r{0.4, 0.7, 0.3};
    const Vec3 rp{-0.1, 0.2, -0.5};
    const double rho = (r - rp).norm();
    for (double x = 1e-4; x <= 1.01e-2; x *= 3.0) {
        const double omega = omega_for_k(x / rho);
        const auto full = g0_full(r, rp, omega);
        const auto nr = g0_nonretarded(r, rp, omega);
        CHECK((full - nr).frobenius_norm() / nr.frobenius_norm() < 2.0 * x);
    }
    for (double x = 1e3; x <= 1.01e5; x *= 4.0) {
        const double omega = omega_for_k(x / rho);
        const auto full = g0_full(r, rp, omega);
        const auto ff = g0_farfield(r, rp, omega);
        CHECK((full - ff).frobenius_norm() / ff.frobenius_norm() < 2.0 / x);
    }
}

TEST_CASE("greens: reciprocity G(r, r') = G(r', r)^T") {
    std::mt19937_64 rng(24);
    for (int trial = 0; trial < 50; ++trial) {
        const Vec3 r = testutil::random_in_box(rng, 2.0);
        const Vec3 rp = testutil::random_in_box(rng, 2.0);
        if ((r - rp).norm() < 0.05) continue;
        const double omega = omega_for_k(1.3);
        for (TensorKind kind :
             {TensorKind::Full, TensorKind::NonRetarded, TensorKind::FarField}) {
            const auto a = g0(kind, r, rp, omega);
            const auto b = g0(kind, rp, r, omega).transpose();
            CHECK(rel_gap_tensor(a, b) < 1e-15);
        }
        MediatorSpec med{testutil::random_in_box(rng, 2.0), 1e-3};
        if ((med.position - r).norm() < 0.05 || (med.position - rp).norm() < 0.05)
            continue;
        const auto a = g1_with_mediator(r, rp, omega, med, TensorKind::Full);
        const auto b =
            g1_with_mediator(rp, r, omega, med, TensorKind::Full).transpose();
        CHECK(rel_gap_tensor(a, b) < 1e-14);
    }
}

TEST_CASE("g1_with_mediator: alpha = 0 reduces to the background") {
    const double omega = 3.9e16;
    const Vec3 r{0, 0, 8e-10}, rp{0, 0, 0};
    const MediatorSpec med{{0, 3e-10, 4e-10}, 0.0};
    for (TensorKind kind :
         {TensorKind::Full, TensorKind::NonRetarded, TensorKind::FarField}) {
        const auto g_plain = g0(kind, r, rp, omega);
        const auto g_med = g1_with_mediator(r, rp, omega, med, kind);
        CHECK((g_plain - g_med).max_abs() == 0.0);
    }
}

TEST_CASE("g1_with_mediator: collinear non-retarded scattering term") {
    // On the z axis the scattered part is alpha/(4 pi k^2 rho1^3 rho2^3) diag(1,1,4).
    const double omega = 3.9e16;
    const double k = omega / phys.c;
    const double alpha = 0.205e-30;
    const Vec3 r{0, 0, 10e-10}, rm{0, 0, 4e-10}, rp{0, 0, 0};
    const MediatorSpec med{rm, alpha};
    const auto scattered = g1_with_mediator(r, rp, omega, med, TensorKind::NonRetarded) -
                           g0_nonretarded(r, rp, omega);
    const double rho1 = 6e-10, rho2 = 4e-10;
    const double pref = alpha / (4.0 * pi * k * k * std::pow(rho1, 3) * std::pow(rho2, 3));
    CHECK(rel_gap(scattered(0, 0).real(), pref) < 1e-12);
    CHECK(rel_gap(scattered(1, 1).real(), pref) < 1e-12);
    CHECK(rel_gap(scattered(2, 2).real(), 4.0 * pref) < 1e-12);
    CHECK(std::abs(scattered(0, 1)) < 1e-15 * pref);
}

TEST_CASE("greens: validation and singularity errors") {
    const Vec3 p{0, 0, 1e-10}, q{0, 0, 0};
    CHECK_THROWS_AS(g0_full(p, p, 1e16), DegenerateGeometryError);
    CHECK_THROWS_AS(g0_nonretarded(p, p, 1e16), DegenerateGeometryError);
    CHECK_THROWS_AS(g0_farfield(p, p, 1e16), DegenerateGeometryError);
    CHECK_THROWS_AS(g0_full(p, q, 0.0), ValidationError);
    CHECK_THROWS_AS(g0_full(p, q, -3.0), ValidationError);
    CHECK_THROWS_AS(g1_with_mediator(p, q, 1e16, MediatorSpec{{0, 0, 5e-11}, -1.0}),
                    ValidationError);
    CHECK_THROWS_AS(g1_with_mediator(p, q, 1e16, MediatorSpec{p, 1e-30}),
                    DegenerateGeometryError);
}

TEST_CASE("g0_full: finite-difference Helmholtz residual") {
    const double omega = omega_for_k(1.0);  // k = 1 1/m, rho ~ 1 m
    const Vec3 rp{0, 0, 0};
    const Vec3 samples[] = {
        {1.1, 0.3, 0.2}, {0.4, 0.9, 1.3}, {2.0, -0.7, 0.4}, {-0.9, 1.4, -1.1},
    };
    for (const Vec3& r : samples)
        CHECK(testutil::helmholtz_residual(r, rp, omega, 3e-4) < 1e-4);
}
