#pragma once

#include <cmath>
#include <complex>
#include <utility>

namespace tumor_dde {

struct vec2 {
    double x = 0.0;
    double y = 0.0;

    friend vec2 operator+(vec2 a, vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend vec2 operator-(vec2 a, vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend vec2 operator*(double s, vec2 a) { return {s * a.x, s * a.y}; }
    double norm_inf() const { return std::max(std::abs(x), std::abs(y)); }
};

// Row-major 2x2 real matrix; columns are (a11,a21) and (a12,a22).
struct mat2 {
    double a11 = 0.0, a12 = 0.0;
    double a21 = 0.0, a22 = 0.0;

    double trace() const { return a11 + a22; }
    double det() const { return a11 * a22 - a12 * a21; }

    friend mat2 operator+(const mat2& a, const mat2& b) {
        return {a.a11 + b.a11, a.a12 + b.a12, a.a21 + b.a21, a.a22 + b.a22};
    }
    friend vec2 operator*(const mat2& m, vec2 v) {
        return {m.a11 * v.x + m.a12 * v.y, m.a21 * v.x + m.a22 * v.y};
    }

    // Eigenvalues of the 2x2, complex pair when the discriminant is negative.
    std::pair<std::complex<double>, std::complex<double>> eigenvalues() const {
        const double tr = trace();
        const double disc = tr * tr / 4.0 - det();
        if (disc >= 0.0) {
            const double s = std::sqrt(disc);
            return {std::complex<double>(tr / 2.0 - s, 0.0),
                    std::complex<double>(tr / 2.0 + s, 0.0)};
        }
        const double s = std::sqrt(-disc);
        return {std::complex<double>(tr / 2.0, -s), std::complex<double>(tr / 2.0, s)};
    }
};

// det of the matrix made from the first column of a and the second column of b.
inline double det_col12(const mat2& a, const mat2& b) {
    return a.a11 * b.a22 - b.a12 * a.a21;
}

// Mixed-column determinant sum det(a^1|b^2) + det(b^1|a^2).
inline double mixed_det(const mat2& a, const mat2& b) {
    return det_col12(a, b) + det_col12(b, a);
}

// Solves m v = rhs for a well-conditioned 2x2 by Cramer's rule.
inline vec2 solve2(const mat2& m, vec2 rhs) {
    const double d = m.det();
    return {(rhs.x * m.a22 - m.a12 * rhs.y) / d, (m.a11 * rhs.y - rhs.x * m.a21) / d};
}

}  // namespace tumor_dde
