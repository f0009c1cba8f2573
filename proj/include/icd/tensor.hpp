#pragma once

#include <array>
#include <cmath>
#include <complex>

#include "icd/geometry.hpp"

namespace icd {

// 3x3 complex dyadic, row-major. Green's tensor values carry units of 1/m.
struct ComplexTensor3 {
    using cplx = std::complex<double>;

    std::array<cplx, 9> m{};

    cplx& operator()(int i, int j) { return m[3 * i + j]; }
    const cplx& operator()(int i, int j) const { return m[3 * i + j]; }

    static ComplexTensor3 zero() { return {}; }

    static ComplexTensor3 identity() {
        ComplexTensor3 t;
        t(0, 0) = t(1, 1) = t(2, 2) = 1.0;
        return t;
    }

    // a (x) b, real dyadic promoted to complex entries.
    static ComplexTensor3 outer(const Vec3& a, const Vec3& b) {
        ComplexTensor3 t;
        const double av[3] = {a.x, a.y, a.z};
        const double bv[3] = {b.x, b.y, b.z};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) t(i, j) = av[i] * bv[j];
        return t;
    }

    ComplexTensor3 operator+(const ComplexTensor3& o) const {
        ComplexTensor3 t;
        for (int i = 0; i < 9; ++i) t.m[i] = m[i] + o.m[i];
        return t;
    }

    ComplexTensor3 operator-(const ComplexTensor3& o) const {
        ComplexTensor3 t;
        for (int i = 0; i < 9; ++i) t.m[i] = m[i] - o.m[i];
        return t;
    }

    // Matrix product.
    ComplexTensor3 operator*(const ComplexTensor3& o) const {
        ComplexTensor3 t;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                cplx s = 0.0;
                for (int k = 0; k < 3; ++k) s += (*this)(i, k) * o(k, j);
                t(i, j) = s;
            }
        return t;
    }

    ComplexTensor3 operator*(cplx s) const {
        ComplexTensor3 t;
        for (int i = 0; i < 9; ++i) t.m[i] = m[i] * s;
        return t;
    }
    ComplexTensor3 operator*(double s) const { return *this * cplx(s); }

    ComplexTensor3 transpose() const {
        ComplexTensor3 t;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) t(i, j) = (*this)(j, i);
        return t;
    }

    ComplexTensor3 conjugate() const {
        ComplexTensor3 t;
        for (int i = 0; i < 9; ++i) t.m[i] = std::conj(m[i]);
        return t;
    }

    ComplexTensor3 adjoint() const { return transpose().conjugate(); }

    cplx trace() const { return m[0] + m[4] + m[8]; }

    double frobenius_norm() const {
        double s = 0.0;
        for (const auto& v : m) s += std::norm(v);
        return std::sqrt(s);
    }

    double max_abs() const {
        double s = 0.0;
        for (const auto& v : m) s = std::max(s, std::abs(v));
        return s;
    }

    bool finite() const {
        for (const auto& v : m)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
        return true;
    }
};

inline ComplexTensor3 operator*(std::complex<double> s, const ComplexTensor3& t) {
    return t * s;
}
inline ComplexTensor3 operator*(double s, const ComplexTensor3& t) { return t * s; }

// Trace contraction of the rate formula: sum_ij a(i,j) * conj(b(j,i)),
// i.e. Tr[a . conj(b)].
inline std::complex<double> trace_conj_product(const ComplexTensor3& a,
                                               const ComplexTensor3& b) {
    std::complex<double> s = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) s += a(i, j) * std::conj(b(j, i));
    return s;
}

} // namespace icd
