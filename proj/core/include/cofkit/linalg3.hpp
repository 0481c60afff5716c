#pragma once

#include <array>
#include <cmath>

#include "cofkit/tolerances.hpp"

namespace cofkit {

struct Vec3 {
    std::array<double, 3> v{};

    constexpr Vec3() = default;
    constexpr Vec3(double x, double y, double z) : v{x, y, z} {}

    constexpr double& operator[](int i) { return v[i]; }
    constexpr double operator[](int i) const { return v[i]; }

    bool operator==(const Vec3&) const = default;
};

// Row-major 3x3.
struct Mat3 {
    std::array<double, 9> m{};

    constexpr Mat3() = default;
    constexpr Mat3(double a00, double a01, double a02,
                   double a10, double a11, double a12,
                   double a20, double a21, double a22)
        : m{a00, a01, a02, a10, a11, a12, a20, a21, a22} {}

    constexpr double& operator()(int i, int j) { return m[3 * i + j]; }
    constexpr double operator()(int i, int j) const { return m[3 * i + j]; }

    static constexpr Mat3 identity() { return Mat3(1, 0, 0, 0, 1, 0, 0, 0, 1); }
    static constexpr Mat3 zero() { return Mat3(); }
    static constexpr Mat3 diag(double a, double b, double c) { return Mat3(a, 0, 0, 0, b, 0, 0, 0, c); }
    static Mat3 from_columns(const Vec3& c0, const Vec3& c1, const Vec3& c2);

    Vec3 row(int i) const { return {m[3 * i], m[3 * i + 1], m[3 * i + 2]}; }
    Vec3 col(int j) const { return {m[j], m[3 + j], m[6 + j]}; }

    bool operator==(const Mat3&) const = default;
};

// Vec3 arithmetic

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator-(const Vec3& a) { return {-a[0], -a[1], -a[2]}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline Vec3 operator*(const Vec3& a, double s) { return s * a; }
inline Vec3 operator/(const Vec3& a, double s) { return {a[0] / s, a[1] / s, a[2] / s}; }
inline Vec3& operator+=(Vec3& a, const Vec3& b) { return a = a + b; }
inline Vec3& operator-=(Vec3& a, const Vec3& b) { return a = a - b; }

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline double norm2(const Vec3& a) { return dot(a, a); }
inline Vec3 normalized(const Vec3& a) { return a / norm(a); }

// Mat3 arithmetic

Mat3 operator+(const Mat3& a, const Mat3& b);
Mat3 operator-(const Mat3& a, const Mat3& b);
Mat3 operator-(const Mat3& a);
Mat3 operator*(double s, const Mat3& a);
inline Mat3 operator*(const Mat3& a, double s) { return s * a; }
Mat3 operator*(const Mat3& a, const Mat3& b);
Vec3 operator*(const Mat3& a, const Vec3& x);
inline Mat3& operator+=(Mat3& a, const Mat3& b) { return a = a + b; }
inline Mat3& operator-=(Mat3& a, const Mat3& b) { return a = a - b; }

Mat3 outer(const Vec3& a, const Vec3& b);
Mat3 transpose(const Mat3& a);
double det(const Mat3& a);
double trace(const Mat3& a);
double frobenius(const Mat3& a);
double frobenius_dot(const Mat3& a, const Mat3& b);
Mat3 inverse(const Mat3& a);
Mat3 sym(const Mat3& a);
// Rotation that sends v to Qv, conjugation Q A Qᵀ.
Mat3 conjugate(const Mat3& q, const Mat3& a);
Mat3 skew(const Vec3& u);

double max_abs_diff(const Mat3& a, const Mat3& b);

// Symmetric eigendecomposition, ascending eigenvalues. vectors[i] pairs with values[i].
struct SymEig3 {
    std::array<double, 3> values{};
    std::array<Vec3, 3> vectors{};

    Mat3 reconstruct() const;
};

SymEig3 eig_sym3(const Mat3& m, const Tolerances& tol = {});

// Singular values of F, ascending, from FᵀF.
std::array<double, 3> singular_values(const Mat3& f, const Tolerances& tol = {});

// Symmetric positive-definite square root.
Mat3 sqrt_spd(const Mat3& m, const Tolerances& tol = {});

// Rotation factor of the polar decomposition F = R U, det F > 0.
Mat3 polar_rotation(const Mat3& f, const Tolerances& tol = {});

Mat3 rotation_axis_angle(const Vec3& axis, double angle);

// Rotation angle in [0, π] and unit axis. For angle π the axis sign follows
// the sign convention of eig_sym3.
struct AxisAngle {
    Vec3 axis;
    double angle = 0.0;
};
AxisAngle axis_angle_of(const Mat3& r);

Mat3 cofactor_matrix(const Mat3& m);

bool is_symmetric(const Mat3& m, double rel_tol);
bool is_rotation(const Mat3& r, double tol);
bool is_positive_definite(const Mat3& m);

// First component with magnitude above eps is made positive.
Vec3 sign_normalized(const Vec3& v, double eps = 1e-12);
bool first_nonzero_negative(const Vec3& v, double eps = 1e-12);

}  // namespace cofkit
