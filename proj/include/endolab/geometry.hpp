#pragma once

// Flat-torus geometry and small fixed-size linear algebra used everywhere:
// points of T^2 = R^2/Z^2, integer lattice vectors, real and integer 2x2
// matrices, and the symmetric rank-3 tensor holding second derivatives.

#include <array>
#include <cmath>
#include <cstdint>
#include <string>

#include "endolab/errors.hpp"

namespace endolab {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }

    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
    double norm_sq() const { return x * x + y * y; }
    Vec2 normalized() const;
    Vec2 perp() const { return {-y, x}; }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

struct Mat2 {
    // row-major: a b / c d
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0;

    Mat2() = default;
    Mat2(double a_, double b_, double c_, double d_) : a(a_), b(b_), c(c_), d(d_) {}

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

    Vec2 operator*(const Vec2& v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
    Mat2 operator*(const Mat2& m) const {
        return {a * m.a + b * m.c, a * m.b + b * m.d,
                c * m.a + d * m.c, c * m.b + d * m.d};
    }
    Mat2 operator+(const Mat2& m) const { return {a + m.a, b + m.b, c + m.c, d + m.d}; }
    Mat2 operator*(double s) const { return {a * s, b * s, c * s, d * s}; }

    double det() const { return a * d - b * c; }
    double trace() const { return a + d; }
    Mat2 transpose() const { return {a, c, b, d}; }
    Mat2 inverse() const;
    Vec2 solve(const Vec2& rhs) const;  // this^{-1} * rhs

    double max_abs() const;
    double frobenius() const { return std::sqrt(a * a + b * b + c * c + d * d); }
    // singular values, closed form
    double sigma_max() const;
    double sigma_min() const;
    double op_norm() const { return sigma_max(); }
};

// Second derivative of a map R^2 -> R^2: T[i] applied to (u,w) gives the
// i-th component of D2[u,w]. Stored per output as (uxx, uxy, uyy).
struct SymTensor2 {
    std::array<std::array<double, 3>, 2> t{{{0, 0, 0}, {0, 0, 0}}};

    static SymTensor2 zero() { return {}; }
    double& comp(int i, int j, int k) { return t[i][j + k]; }       // j<=k in {0,1}
    double comp(int i, int j, int k) const { return t[i][j + k]; }

    Vec2 apply(const Vec2& u, const Vec2& w) const {
        Vec2 r;
        r.x = t[0][0] * u.x * w.x + t[0][1] * (u.x * w.y + u.y * w.x) + t[0][2] * u.y * w.y;
        r.y = t[1][0] * u.x * w.x + t[1][1] * (u.x * w.y + u.y * w.x) + t[1][2] * u.y * w.y;
        return r;
    }
    double max_abs() const;
    SymTensor2 operator+(const SymTensor2& o) const;
    SymTensor2 operator*(double s) const;
};

struct TorusPoint {
    double x = 0.0;  // in [0,1)
    double y = 0.0;  // in [0,1)

    Vec2 lift() const { return {x, y}; }
};

// componentwise fractional part; rejects non-finite input
TorusPoint wrap(double x, double y);
TorusPoint wrap(const Vec2& v);

// distance on the flat torus: min over the 9 nearest lattice translates
double torus_distance(const TorusPoint& p, const TorusPoint& q);

// signed representative of t mod 1 in [-0.5, 0.5)
double wrap_symmetric(double t);

struct LatticeVector {
    std::int64_t a = 0;
    std::int64_t b = 0;

    bool operator==(const LatticeVector& o) const { return a == o.a && b == o.b; }
    LatticeVector operator+(const LatticeVector& o) const { return {a + o.a, b + o.b}; }
    LatticeVector operator-(const LatticeVector& o) const { return {a - o.a, b - o.b}; }
    Vec2 to_vec() const { return {double(a), double(b)}; }
};

struct IntMatrix2 {
    std::int64_t e11 = 0, e12 = 0, e21 = 0, e22 = 0;

    static IntMatrix2 identity() { return {1, 0, 0, 1}; }
    static IntMatrix2 diagonal(std::int64_t t1, std::int64_t t2) { return {t1, 0, 0, t2}; }

    std::int64_t det() const { return e11 * e22 - e12 * e21; }
    std::int64_t degree() const { return std::llabs(det()); }

    IntMatrix2 operator*(const IntMatrix2& m) const {
        return {e11 * m.e11 + e12 * m.e21, e11 * m.e12 + e12 * m.e22,
                e21 * m.e11 + e22 * m.e21, e21 * m.e12 + e22 * m.e22};
    }
    LatticeVector operator*(const LatticeVector& v) const {
        return {e11 * v.a + e12 * v.b, e21 * v.a + e22 * v.b};
    }
    // adjugate: adj * M = det(M) * Id
    IntMatrix2 adjugate() const { return {e22, -e12, -e21, e11}; }
    Mat2 to_mat() const { return {double(e11), double(e12), double(e21), double(e22)}; }
    bool operator==(const IntMatrix2& o) const {
        return e11 == o.e11 && e12 == o.e12 && e21 == o.e21 && e22 == o.e22;
    }
    std::string str() const;
};

}  // namespace endolab
