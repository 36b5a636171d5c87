#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mobext {

// Default tolerance for projective equality and residual checks.
inline constexpr double kEps = 1e-9;
// Looser tolerance for classification boundaries (trace = 2, discriminant = 0);
// the classified quantities are higher-degree polynomials in the inputs.
inline constexpr double kEpsClass = 1e-7;

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed values: zero matrix, zero vector, repeated points, proportional cycles.
struct invalid_input : error {
    using error::error;
};

// Triples whose endpoint orientations do not match.
struct orientation_error : error {
    using error::error;
};

// Well-formed input outside an operation's mathematical domain
// (wrong interval ordering, degenerate configurations, undefined angles).
struct domain_error : error {
    using error::error;
};

// Row-major 2x2 real matrix.
struct Mat2 {
    double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

    constexpr Mat2() = default;
    constexpr Mat2(double a_, double b_, double c_, double d_) : a(a_), b(b_), c(c_), d(d_) {}

    static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

    constexpr double det() const { return a * d - b * c; }
    constexpr double trace() const { return a + d; }

    double norm() const { return std::sqrt(a * a + b * b + c * c + d * d); }

    constexpr Mat2 transpose() const { return {a, c, b, d}; }
    constexpr Mat2 adjugate() const { return {d, -b, -c, a}; }

    Mat2 inverse() const {
        const double dt = det();
        if (dt == 0.0) throw invalid_input("Mat2::inverse: singular matrix");
        return {d / dt, -b / dt, -c / dt, a / dt};
    }

    constexpr Mat2 operator*(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d,
                c * o.a + d * o.c, c * o.b + d * o.d};
    }
    constexpr Mat2 operator*(double s) const { return {a * s, b * s, c * s, d * s}; }
    constexpr Mat2 operator+(const Mat2& o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }
    constexpr Mat2 operator-(const Mat2& o) const { return {a - o.a, b - o.b, c - o.c, d - o.d}; }
    constexpr Mat2 operator-() const { return {-a, -b, -c, -d}; }
};

inline constexpr Mat2 operator*(double s, const Mat2& m) { return m * s; }

inline double max_abs(const Mat2& m) {
    return std::max(std::max(std::abs(m.a), std::abs(m.b)),
                    std::max(std::abs(m.c), std::abs(m.d)));
}

using Mat4 = std::array<std::array<double, 4>, 4>;
using Vec4 = std::array<double, 4>;

inline Vec4 apply4(const Mat4& m, const Vec4& v) {
    Vec4 out{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) out[i] += m[i][j] * v[j];
    return out;
}

}  // namespace mobext
