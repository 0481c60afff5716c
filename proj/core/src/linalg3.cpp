#include "cofkit/linalg3.hpp"

#include <algorithm>
#include <limits>

#include "cofkit/error.hpp"

namespace cofkit {

Mat3 Mat3::from_columns(const Vec3& c0, const Vec3& c1, const Vec3& c2) {
    return Mat3(c0[0], c1[0], c2[0],
                c0[1], c1[1], c2[1],
                c0[2], c1[2], c2[2]);
}

Mat3 operator+(const Mat3& a, const Mat3& b) {
    Mat3 r;
    for (int k = 0; k < 9; ++k) r.m[k] = a.m[k] + b.m[k];
    return r;
}

Mat3 operator-(const Mat3& a, const Mat3& b) {
    Mat3 r;
    for (int k = 0; k < 9; ++k) r.m[k] = a.m[k] - b.m[k];
    return r;
}

Mat3 operator-(const Mat3& a) {
    Mat3 r;
    for (int k = 0; k < 9; ++k) r.m[k] = -a.m[k];
    return r;
}

Mat3 operator*(double s, const Mat3& a) {
    Mat3 r;
    for (int k = 0; k < 9; ++k) r.m[k] = s * a.m[k];
    return r;
}

Mat3 operator*(const Mat3& a, const Mat3& b) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j) + a(i, 2) * b(2, j);
    return r;
}

Vec3 operator*(const Mat3& a, const Vec3& x) {
    return {a(0, 0) * x[0] + a(0, 1) * x[1] + a(0, 2) * x[2],
            a(1, 0) * x[0] + a(1, 1) * x[1] + a(1, 2) * x[2],
            a(2, 0) * x[0] + a(2, 1) * x[1] + a(2, 2) * x[2]};
}

Mat3 outer(const Vec3& a, const Vec3& b) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r(i, j) = a[i] * b[j];
    return r;
}

Mat3 transpose(const Mat3& a) {
    return Mat3(a(0, 0), a(1, 0), a(2, 0),
                a(0, 1), a(1, 1), a(2, 1),
                a(0, 2), a(1, 2), a(2, 2));
}

double det(const Mat3& a) {
    return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1))
         - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0))
         + a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
}

double trace(const Mat3& a) { return a(0, 0) + a(1, 1) + a(2, 2); }

double frobenius_dot(const Mat3& a, const Mat3& b) {
    double s = 0.0;
    for (int k = 0; k < 9; ++k) s += a.m[k] * b.m[k];
    return s;
}

double frobenius(const Mat3& a) { return std::sqrt(frobenius_dot(a, a)); }

Mat3 cofactor_matrix(const Mat3& a) {
    Mat3 c;
    c(0, 0) = a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1);
    c(0, 1) = a(1, 2) * a(2, 0) - a(1, 0) * a(2, 2);
    c(0, 2) = a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0);
    c(1, 0) = a(0, 2) * a(2, 1) - a(0, 1) * a(2, 2);
    c(1, 1) = a(0, 0) * a(2, 2) - a(0, 2) * a(2, 0);
    c(1, 2) = a(0, 1) * a(2, 0) - a(0, 0) * a(2, 1);
    c(2, 0) = a(0, 1) * a(1, 2) - a(0, 2) * a(1, 1);
    c(2, 1) = a(0, 2) * a(1, 0) - a(0, 0) * a(1, 2);
    c(2, 2) = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    return c;
}

Mat3 inverse(const Mat3& a) {
    const double d = det(a);
    if (d == 0.0 || !std::isfinite(d)) throw Error(ErrorCode::SingularGradient, "matrix is singular");
    return (1.0 / d) * transpose(cofactor_matrix(a));
}

Mat3 sym(const Mat3& a) { return 0.5 * (a + transpose(a)); }

Mat3 conjugate(const Mat3& q, const Mat3& a) { return q * a * transpose(q); }

Mat3 skew(const Vec3& u) {
    return Mat3(0, -u[2], u[1],
                u[2], 0, -u[0],
                -u[1], u[0], 0);
}

double max_abs_diff(const Mat3& a, const Mat3& b) {
    double r = 0.0;
    for (int k = 0; k < 9; ++k) r = std::max(r, std::abs(a.m[k] - b.m[k]));
    return r;
}

bool is_symmetric(const Mat3& m, double rel_tol) {
    const double scale = std::max(frobenius(m), 1.0);
    return frobenius(m - transpose(m)) <= rel_tol * scale;
}

bool is_rotation(const Mat3& r, double tol) {
    return frobenius(transpose(r) * r - Mat3::identity()) <= tol && std::abs(det(r) - 1.0) <= tol;
}

bool is_positive_definite(const Mat3& m) {
    // Sylvester on the symmetric part
    const Mat3 s = sym(m);
    const double m1 = s(0, 0);
    const double m2 = s(0, 0) * s(1, 1) - s(0, 1) * s(1, 0);
    return m1 > 0.0 && m2 > 0.0 && det(s) > 0.0;
}

bool first_nonzero_negative(const Vec3& v, double eps) {
    for (int i = 0; i < 3; ++i)
        if (std::abs(v[i]) > eps) return v[i] < 0.0;
    return false;
}

Vec3 sign_normalized(const Vec3& v, double eps) { return first_nonzero_negative(v, eps) ? -v : v; }

Mat3 SymEig3::reconstruct() const {
    Mat3 r;
    for (int i = 0; i < 3; ++i) r += values[i] * outer(vectors[i], vectors[i]);
    return r;
}

namespace {

// largest-magnitude component positive; near-ties go to the lower index
Vec3 eig_sign(const Vec3& v) {
    double big = std::max({std::abs(v[0]), std::abs(v[1]), std::abs(v[2])});
    for (int i = 0; i < 3; ++i)
        if (std::abs(v[i]) >= big - 1e-12) return v[i] < 0.0 ? -v : v;
    return v;
}

}  // namespace

SymEig3 eig_sym3(const Mat3& m, const Tolerances& tol) {
    if (!is_symmetric(m, tol.symmetry)) throw Error(ErrorCode::NonSymmetric, "eig_sym3 needs a symmetric matrix");

    Mat3 a = sym(m);
    Mat3 v = Mat3::identity();
    const double scale = frobenius(a);

    bool converged = false;
    for (int sweep = 0; sweep < tol.jacobi_max_sweeps; ++sweep) {
        const double off = std::sqrt(a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2));
        if (off <= tol.jacobi_offdiag * scale || off == 0.0) {
            converged = true;
            break;
        }
        for (int p = 0; p < 2; ++p) {
            for (int q = p + 1; q < 3; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                // A <- Jᵀ A J with J the (p,q) Givens rotation
                for (int k = 0; k < 3; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < 3; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                a(p, q) = a(q, p) = 0.0;
                for (int k = 0; k < 3; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    if (!converged) {
        const double off = std::sqrt(a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2));
        if (off > tol.jacobi_offdiag * scale) throw Error(ErrorCode::NonConvergence, "Jacobi sweep cap reached");
    }

    std::array<int, 3> idx{0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](int i, int j) { return a(i, i) < a(j, j); });
    SymEig3 out;
    for (int k = 0; k < 3; ++k) {
        out.values[k] = a(idx[k], idx[k]);
        out.vectors[k] = eig_sign(normalized(v.col(idx[k])));
    }
    return out;
}

std::array<double, 3> singular_values(const Mat3& f, const Tolerances& tol) {
    const SymEig3 e = eig_sym3(transpose(f) * f, tol);
    return {std::sqrt(std::max(e.values[0], 0.0)), std::sqrt(std::max(e.values[1], 0.0)),
            std::sqrt(std::max(e.values[2], 0.0))};
}

Mat3 sqrt_spd(const Mat3& m, const Tolerances& tol) {
    const SymEig3 e = eig_sym3(m, tol);
    Mat3 r;
    for (int i = 0; i < 3; ++i) {
        if (e.values[i] <= 0.0) throw Error(ErrorCode::NotPositiveDefinite, "square root of a non-positive matrix");
        r += std::sqrt(e.values[i]) * outer(e.vectors[i], e.vectors[i]);
    }
    return r;
}

Mat3 polar_rotation(const Mat3& f, const Tolerances& tol) {
    if (det(f) <= 0.0) throw Error(ErrorCode::SingularGradient, "polar decomposition needs det F > 0");
    return f * inverse(sqrt_spd(transpose(f) * f, tol));
}

Mat3 rotation_axis_angle(const Vec3& axis, double angle) {
    const double n = norm(axis);
    if (!(n > 0.0)) throw Error(ErrorCode::ZeroAxis, "rotation axis is zero");
    const Vec3 u = axis / n;
    const Mat3 k = skew(u);
    // Rodrigues, written as cos·1 + sin·K + (1−cos)·u⊗u
    const double c = std::cos(angle), s = std::sin(angle);
    return c * Mat3::identity() + s * k + (1.0 - c) * outer(u, u);
}

AxisAngle axis_angle_of(const Mat3& r) {
    const double c = std::clamp(0.5 * (trace(r) - 1.0), -1.0, 1.0);
    AxisAngle out;
    out.angle = std::acos(c);
    const Vec3 w{r(2, 1) - r(1, 2), r(0, 2) - r(2, 0), r(1, 0) - r(0, 1)};
    const double wn = norm(w);
    if (out.angle < 1e-12) {
        out.axis = {0, 0, 1};
        out.angle = 0.0;
    } else if (wn > 1e-6) {
        out.axis = w / wn;
    } else {
        // near π: axis spans the +1 eigenspace of the symmetric part
        const SymEig3 e = eig_sym3(sym(r));
        out.axis = e.vectors[2];
    }
    return out;
}

}  // namespace cofkit
