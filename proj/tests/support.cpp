#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace oracle {

using namespace cofkit;

std::array<long double, 3> sym_eigenvalues(const Mat3& m) {
    const long double a00 = m(0, 0), a11 = m(1, 1), a22 = m(2, 2);
    const long double a01 = m(0, 1), a02 = m(0, 2), a12 = m(1, 2);
    const long double p1 = a01 * a01 + a02 * a02 + a12 * a12;
    const long double q = (a00 + a11 + a22) / 3.0L;
    const long double p2 = (a00 - q) * (a00 - q) + (a11 - q) * (a11 - q) + (a22 - q) * (a22 - q) + 2.0L * p1;
    std::array<long double, 3> ev{};
    if (p2 == 0.0L) return {q, q, q};
    const long double p = std::sqrt(p2 / 6.0L);
    const long double b00 = (a00 - q) / p, b11 = (a11 - q) / p, b22 = (a22 - q) / p;
    const long double b01 = a01 / p, b02 = a02 / p, b12 = a12 / p;
    const long double detb =
        b00 * (b11 * b22 - b12 * b12) - b01 * (b01 * b22 - b12 * b02) + b02 * (b01 * b12 - b11 * b02);
    const long double r = std::clamp(detb / 2.0L, -1.0L, 1.0L);
    const long double phi = std::acos(r) / 3.0L;
    const long double pi = 3.141592653589793238462643383279502884L;
    ev[2] = q + 2.0L * p * std::cos(phi);
    ev[0] = q + 2.0L * p * std::cos(phi + 2.0L * pi / 3.0L);
    ev[1] = 3.0L * q - ev[0] - ev[2];
    std::sort(ev.begin(), ev.end());
    return ev;
}

Vec3 sym_eigenvector(const Mat3& m, long double rho) {
    const Mat3 s = m - static_cast<double>(rho) * Mat3::identity();
    const std::array<Vec3, 3> rows{s.row(0), s.row(1), s.row(2)};
    Vec3 best{0, 0, 0};
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            const Vec3 x = cross(rows[i], rows[j]);
            if (norm(x) > norm(best)) best = x;
        }
    return normalized(best);
}

std::vector<Mat3> brute_force_rotations() {
    std::vector<Mat3> out;
    std::array<int, 9> e{};
    const int total = 19683;  // 3^9
    for (int code = 0; code < total; ++code) {
        int c = code;
        for (int k = 0; k < 9; ++k) {
            e[k] = c % 3 - 1;
            c /= 3;
        }
        Mat3 q;
        for (int k = 0; k < 9; ++k) q.m[k] = e[k];
        if (max_abs_diff(transpose(q) * q, Mat3::identity()) == 0.0 && det(q) > 0.0) out.push_back(q);
    }
    return out;
}

std::vector<RankOne> ball_james(const Mat3& f) {
    const Mat3 c = transpose(f) * f;
    const auto lam = sym_eigenvalues(c);
    const long double l1 = lam[0], l3 = lam[2];
    if (!(l3 - l1 > 1e-14L)) return {};
    const Vec3 e1 = sym_eigenvector(c, l1);
    const Vec3 e3 = sym_eigenvector(c, l3);
    const long double span = l3 - l1;
    const double ca1 = static_cast<double>(std::sqrt(std::max(0.0L, l3 * (1.0L - l1) / span)));
    const double ca3 = static_cast<double>(std::sqrt(std::max(0.0L, l1 * (l3 - 1.0L) / span)));
    const double scale = static_cast<double>((std::sqrt(l3) - std::sqrt(l1)) / std::sqrt(span));
    const double cn1 = static_cast<double>(std::sqrt(std::max(0.0L, 1.0L - l1)));
    const double cn3 = static_cast<double>(std::sqrt(std::max(0.0L, l3 - 1.0L)));
    std::vector<RankOne> out;
    for (int kappa : {1, -1}) {
        Vec3 a = ca1 * e1 + kappa * ca3 * e3;
        Vec3 n = scale * (-cn1 * e1 + kappa * cn3 * e3);
        const double rho = norm(n);
        out.push_back({rho * a, n / rho});
    }
    return out;
}

std::vector<Twin> twins(const Mat3& u, const Mat3& v) {
    std::vector<Twin> out;
    for (const auto& s : ball_james(v * inverse(u))) {
        const Vec3 un = u * s.n;
        out.push_back({norm(un) * s.a, un / norm(un)});
    }
    return out;
}

Mat3 cofactor(const Mat3& m) {
    Mat3 c;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            c(i, j) = m((i + 1) % 3, (j + 1) % 3) * m((i + 2) % 3, (j + 2) % 3) -
                      m((i + 1) % 3, (j + 2) % 3) * m((i + 2) % 3, (j + 1) % 3);
    return c;
}

namespace {

// Damped Newton on a smooth objective with analytic gradient; Hessian by
// central differences of the gradient.
Vec3 newton(const std::function<double(const Vec3&)>& f, const std::function<Vec3(const Vec3&)>& g, Vec3 x) {
    for (int it = 0; it < 200; ++it) {
        const Vec3 gx = g(x);
        if (norm(gx) < 1e-15) break;
        Mat3 h;
        const double step = 1e-6;
        for (int k = 0; k < 3; ++k) {
            Vec3 dx{0, 0, 0};
            dx[k] = step;
            const Vec3 col = (g(x + dx) - g(x - dx)) / (2.0 * step);
            for (int i = 0; i < 3; ++i) h(i, k) = col[i];
        }
        h = sym(h);
        Vec3 dir;
        const double dh = det(h);
        const bool pd = h(0, 0) > 0 && h(0, 0) * h(1, 1) - h(0, 1) * h(1, 0) > 0 && dh > 0;
        dir = pd ? -1.0 * (inverse(h) * gx) : -1.0 * gx;
        double t = 1.0;
        const double fx = f(x);
        while (t > 1e-12 && f(x + t * dir) > fx + 1e-4 * t * dot(gx, dir)) t *= 0.5;
        if (t <= 1e-12) break;
        const Vec3 nx = x + t * dir;
        if (norm(nx - x) < 1e-16 * (1.0 + norm(x))) {
            x = nx;
            break;
        }
        x = nx;
    }
    return x;
}

double gap_of(const Mat3& m) {
    const auto ev = sym_eigenvalues(m);
    return static_cast<double>(ev[2] - ev[0]);
}

}  // namespace

Minimum minimize_c(const Mat3& u, const Vec3& m_in, std::mt19937_64& rng, int starts) {
    const Vec3 m = normalized(m_in);
    const Mat3 one = Mat3::identity();
    auto cmat = [&](const Vec3& c) {
        const Mat3 f = u + outer(c, m);
        return transpose(f) * f - one;
    };
    auto obj = [&](const Vec3& c) {
        const Mat3 x = cmat(c);
        return frobenius_dot(x, x);
    };
    auto grad = [&](const Vec3& c) {
        const Mat3 x = cmat(c);
        return 4.0 * (u * (x * m) + dot(m, x * m) * c);
    };
    std::normal_distribution<double> nd(0.0, 0.5);
    Minimum best;
    best.objective = INFINITY;
    for (int s = 0; s < starts; ++s) {
        const Vec3 x = newton(obj, grad, Vec3{nd(rng), nd(rng), nd(rng)});
        const double v = obj(x);
        if (v < best.objective) {
            best.objective = v;
            best.x = x;
        }
    }
    best.matrix = cmat(best.x);
    best.gap = gap_of(best.matrix);
    return best;
}

Minimum minimize_e(const Mat3& u, const Vec3& b, std::mt19937_64& rng, int starts) {
    const Mat3 one = Mat3::identity();
    const double b2 = norm2(b);
    auto emat = [&](const Vec3& o) {
        const Mat3 f = u + outer(b, o);
        return transpose(f) * f - one;
    };
    auto obj = [&](const Vec3& o) {
        const Mat3 x = emat(o);
        return frobenius_dot(x, x);
    };
    auto grad = [&](const Vec3& o) {
        const Mat3 x = emat(o);
        return 4.0 * (x * (u * b) + b2 * (x * o));
    };
    std::normal_distribution<double> nd(0.0, 0.5 / std::max(1e-3, std::sqrt(b2)));
    Minimum best;
    best.objective = INFINITY;
    for (int s = 0; s < starts; ++s) {
        const Vec3 x = newton(obj, grad, Vec3{nd(rng), nd(rng), nd(rng)});
        const double v = obj(x);
        if (v < best.objective) {
            best.objective = v;
            best.x = x;
        }
    }
    best.matrix = emat(best.x);
    best.gap = gap_of(best.matrix);
    return best;
}

double second_singular_value(const Mat3& d) {
    // one-sided Jacobi on the columns, long double; singular values are the
    // final column norms and stay accurate down to eps·σ₁ (squaring into DᵀD
    // would lose the double zero of a rank-one matrix)
    long double a[3][3];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) a[i][j] = d(i, j);
    for (int sweep = 0; sweep < 60; ++sweep) {
        bool rotated = false;
        for (int p = 0; p < 2; ++p)
            for (int q = p + 1; q < 3; ++q) {
                long double alpha = 0, beta = 0, gamma = 0;
                for (int i = 0; i < 3; ++i) {
                    alpha += a[i][p] * a[i][p];
                    beta += a[i][q] * a[i][q];
                    gamma += a[i][p] * a[i][q];
                }
                if (gamma == 0 || std::fabs(gamma) <= 1e-30L * std::sqrt(alpha * beta)) continue;
                rotated = true;
                const long double zeta = (beta - alpha) / (2 * gamma);
                const long double t = (zeta >= 0 ? 1 : -1) / (std::fabs(zeta) + std::sqrt(1 + zeta * zeta));
                const long double c = 1 / std::sqrt(1 + t * t), s = c * t;
                for (int i = 0; i < 3; ++i) {
                    const long double x = a[i][p], y = a[i][q];
                    a[i][p] = c * x - s * y;
                    a[i][q] = s * x + c * y;
                }
            }
        if (!rotated) break;
    }
    double sv[3];
    for (int j = 0; j < 3; ++j) {
        long double n = 0;
        for (int i = 0; i < 3; ++i) n += a[i][j] * a[i][j];
        sv[j] = static_cast<double>(std::sqrt(n));
    }
    std::sort(sv, sv + 3);
    return sv[1];
}

std::optional<MonoclinicParams> cc_params(TwinKind kind, double lambda, double d, bool col_b) {
    if ((lambda - 1.0) * (d - 1.0) >= 0.0) return std::nullopt;
    double c = 0.0;
    if (kind == TwinKind::TypeII) c = lambda - (1.0 - d * d) / (1.0 + lambda);
    else c = (lambda * lambda * (2.0 - 1.0 / (d * d)) + lambda) / (1.0 + lambda);
    const double a = 1.0 + lambda - c;
    const double b2 = a * c - lambda;
    if (!(a > 0.0 && c > 0.0 && d > 0.0 && b2 > 0.0)) return std::nullopt;
    const double b = std::sqrt(b2);
    return col_b ? MonoclinicParams{c, b, a, d} : MonoclinicParams{a, b, c, d};
}

MonoclinicParams compound_params(double lambda, double d, double a) {
    const double c = 1.0 + lambda - a;
    return {a, std::sqrt((a - 1.0) * (c - 1.0)), c, d};
}

MonoclinicParams random_params(std::mt19937_64& rng, double spread) {
    std::uniform_real_distribution<double> u(-spread, spread);
    std::uniform_real_distribution<double> ub(0.005, spread);
    for (;;) {
        MonoclinicParams p{1.0 + u(rng), ub(rng), 1.0 + u(rng), 1.0 + u(rng)};
        if (std::abs(p.a - p.c) < 5e-3 || std::abs(p.d - 1.0) < 5e-3) continue;
        if (p.a * p.c - p.b * p.b <= 0.0) continue;
        return p;
    }
}

Vec3 random_unit(std::mt19937_64& rng) {
    std::normal_distribution<double> nd(0.0, 1.0);
    for (;;) {
        const Vec3 v{nd(rng), nd(rng), nd(rng)};
        if (norm(v) > 1e-3) return normalized(v);
    }
}

Mat3 random_rotation(std::mt19937_64& rng) {
    std::normal_distribution<double> nd(0.0, 1.0);
    double q[4];
    double n = 0.0;
    for (double& x : q) {
        x = nd(rng);
        n += x * x;
    }
    n = std::sqrt(n);
    const double w = q[0] / n, x = q[1] / n, y = q[2] / n, z = q[3] / n;
    return Mat3(1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w),
                2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w),
                2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y));
}

Mat3 random_spd(std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    const Mat3 r = random_rotation(rng);
    const Mat3 dg(u(rng), 0, 0, 0, u(rng), 0, 0, 0, u(rng));
    return sym(r * dg * transpose(r));
}

std::vector<std::string> physical_star_branches() {
    return {"II-half-l3eqd-minus", "II-half-l1eqd-minus", "II-full-l3eqd-minus", "II-full-l1eqd-minus",
            "I-half-l3eqd-plus",   "I-half-l1eqd-plus",   "I-full-l3eqd-plus",   "I-full-l1eqd-plus"};
}

MonoclinicParams star_params(const std::string& branch, double t) {
    const StarBranch& br = star_branch(branch);
    const double x = br.lo + t * (br.hi - br.lo);
    const double lambda = star_branch_lambda(br, x);
    const auto p = cc_params(br.kind, lambda, x);
    if (!p) throw std::runtime_error("no synthetic parameters on " + branch);
    return *p;
}

}  // namespace oracle
