#include "cofkit/twinning.hpp"

#include <algorithm>

#include "cofkit/error.hpp"

namespace cofkit {

const char* to_string(TwinKind k) {
    switch (k) {
        case TwinKind::TypeI: return "typeI";
        case TwinKind::TypeII: return "typeII";
        case TwinKind::Compound: return "compound";
    }
    return "?";
}

const char* to_string(PairClass c) {
    switch (c) {
        case PairClass::TypeI_II: return "typeI/II";
        case PairClass::Compound: return "compound";
        case PairClass::Incompatible: return "incompatible";
    }
    return "?";
}

Mat3 twofold_rotation(const Vec3& e) { return 2.0 * outer(e, e) - Mat3::identity(); }

double twin_residual(const Mat3& u, const Mat3& v, const TwinSolution& s) {
    return frobenius(s.rotation * v - u - outer(s.b, s.m)) / frobenius(u);
}

namespace {

void check_stretch(const Mat3& u, const Tolerances& tol) {
    if (!is_symmetric(u, tol.symmetry)) throw Error(ErrorCode::NonSymmetric, "stretch tensor must be symmetric");
    if (!is_positive_definite(u)) throw Error(ErrorCode::NotPositiveDefinite, "stretch tensor must be positive definite");
}

double axis_residual(const Mat3& u, const Mat3& v, const Vec3& e, double unorm) {
    const Mat3 q = twofold_rotation(e);
    return frobenius(q * u * q - v) / unorm;
}

// Levenberg–Marquardt on the 9 entries of Q U Q − V, renormalizing e.
Vec3 refine_axis(const Mat3& u, const Mat3& v, Vec3 e) {
    e = normalized(e);
    auto resid = [&](const Vec3& x) {
        const Mat3 q = twofold_rotation(x);
        return q * u * q - v;
    };
    Mat3 r = resid(e);
    double cost = frobenius_dot(r, r);
    double damping = 1e-6;
    for (int it = 0; it < 60 && cost > 0.0; ++it) {
        const Mat3 q = twofold_rotation(e);
        std::array<Mat3, 3> jac;
        for (int k = 0; k < 3; ++k) {
            Vec3 ek;
            ek[k] = 1.0;
            const Mat3 dq = 2.0 * (outer(ek, e) + outer(e, ek));
            jac[k] = dq * u * q + q * u * dq;
        }
        double jtj[3][3], jtr[3];
        for (int a = 0; a < 3; ++a) {
            jtr[a] = frobenius_dot(jac[a], r);
            for (int b = 0; b < 3; ++b) jtj[a][b] = frobenius_dot(jac[a], jac[b]);
        }
        bool improved = false;
        for (int attempt = 0; attempt < 12; ++attempt) {
            Mat3 h(jtj[0][0], jtj[0][1], jtj[0][2], jtj[1][0], jtj[1][1], jtj[1][2], jtj[2][0], jtj[2][1], jtj[2][2]);
            const double scale = std::max({h(0, 0), h(1, 1), h(2, 2), 1e-300});
            for (int a = 0; a < 3; ++a) h(a, a) += damping * scale;
            if (det(h) == 0.0) {
                damping *= 10.0;
                continue;
            }
            const Vec3 step = inverse(h) * Vec3(-jtr[0], -jtr[1], -jtr[2]);
            const Vec3 trial = normalized(e + step);
            const Mat3 rt = resid(trial);
            const double ct = frobenius_dot(rt, rt);
            if (ct < cost) {
                const double moved = norm(trial - e);
                e = trial;
                r = rt;
                cost = ct;
                damping = std::max(damping * 0.1, 1e-15);
                improved = true;
                if (moved < 1e-16) return e;
                break;
            }
            damping *= 10.0;
        }
        if (!improved) break;
    }
    return e;
}

std::vector<Vec3> seed_axes() {
    std::vector<Vec3> s = {
        {1, 0, 0}, {0, 1, 0}, {0, 0, 1},
        {1, 0, 1}, {1, 0, -1}, {1, 1, 0}, {1, -1, 0}, {0, 1, 1}, {0, -1, 1},
        {1, 1, 1}, {1, 1, -1}, {1, -1, 1}, {-1, 1, 1},
    };
    for (Vec3& x : s) x = normalized(x);
    return s;
}

// Candidate axes from a hemisphere grid, the lowest residuals first, spread
// apart so that separate minima each get a candidate.
std::vector<Vec3> scan_candidates(const Mat3& u, const Mat3& v, double unorm, const AxisSearchOptions& opt) {
    struct Sample {
        Vec3 e;
        double r;
    };
    std::vector<Sample> samples;
    const double step = opt.grid_degrees * M_PI / 180.0;
    const int n_theta = static_cast<int>(std::ceil((M_PI / 2.0) / step));
    for (int k = 0; k <= n_theta; ++k) {
        const double theta = std::min(k * step, M_PI / 2.0);
        const int n_phi = std::max(1, static_cast<int>(std::round(2.0 * M_PI * std::sin(theta) / step)));
        for (int l = 0; l < n_phi; ++l) {
            const double phi = 2.0 * M_PI * l / n_phi;
            const Vec3 e(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta));
            samples.push_back({e, axis_residual(u, v, e, unorm)});
        }
    }
    std::sort(samples.begin(), samples.end(), [](const Sample& x, const Sample& y) { return x.r < y.r; });

    std::vector<Vec3> picked;
    const double min_sep = 3.0 * step;
    for (const Sample& s : samples) {
        if (static_cast<int>(picked.size()) >= opt.refine_candidates) break;
        bool far = true;
        for (const Vec3& p : picked)
            if (norm(cross(p, s.e)) < std::sin(min_sep)) far = false;
        if (far) picked.push_back(s.e);
    }
    return picked;
}

}  // namespace

std::vector<TwoFoldAxis> twofold_axes(const Mat3& u, const Mat3& v, const Tolerances& tol, const AxisSearchOptions& opt) {
    check_stretch(u, tol);
    check_stretch(v, tol);
    const double unorm = frobenius(u);
    if (frobenius(u - v) <= tol.conjugation * unorm)
        throw Error(ErrorCode::IdenticalVariants, "U and V coincide");

    std::vector<Vec3> candidates = seed_axes();
    if (opt.sphere_scan) {
        const auto extra = scan_candidates(u, v, unorm, opt);
        candidates.insert(candidates.end(), extra.begin(), extra.end());
    }

    std::vector<TwoFoldAxis> found;
    for (const Vec3& c : candidates) {
        // a rational seed that is already exact needs no refinement
        Vec3 e = c;
        if (axis_residual(u, v, e, unorm) > tol.axis_residual) e = refine_axis(u, v, c);
        const double r = axis_residual(u, v, e, unorm);
        if (r > tol.axis_residual) continue;
        e = sign_normalized(e);
        bool dup = false;
        for (const auto& f : found)
            if (std::asin(std::min(1.0, norm(cross(f.e, e)))) <= tol.axis_merge) dup = true;
        if (!dup) found.push_back({e, r});
    }
    std::sort(found.begin(), found.end(), [](const TwoFoldAxis& x, const TwoFoldAxis& y) {
        for (int k = 0; k < 3; ++k) {
            if (std::abs(x.e[k] - y.e[k]) > 1e-12) return x.e[k] < y.e[k];
        }
        return false;
    });
    return found;
}

namespace {

TwinSolution finish_solution(const Mat3& u, const Mat3& v, Vec3 b, Vec3 m, TwinKind kind, const Vec3& e,
                             const Tolerances& tol) {
    const double s = norm(m);
    m = m / s;
    b = b * s;
    if (first_nonzero_negative(m)) {
        m = -m;
        b = -b;
    }
    TwinSolution sol;
    sol.b = b;
    sol.m = m;
    sol.kind = kind;
    sol.formula = kind;
    sol.axis = e;
    sol.rotation = (u + outer(b, m)) * inverse(v);
    if (!is_rotation(sol.rotation, 1e-9))
        throw Error(ErrorCode::DegenerateAxis, "twinning rotation is not proper for this axis");
    if (twin_residual(u, v, sol) > tol.twin_residual)
        throw Error(ErrorCode::DegenerateAxis, "twinning residual too large");
    return sol;
}

}  // namespace

TwinPair twin_solutions(const Mat3& u, const Vec3& axis, const Tolerances& tol) {
    check_stretch(u, tol);
    if (!(norm(axis) > 0.0)) throw Error(ErrorCode::ZeroAxis, "two-fold axis is zero");
    const Vec3 e = sign_normalized(normalized(axis));
    const Mat3 q = twofold_rotation(e);
    const Mat3 v = q * u * q;

    const Mat3 uinv = inverse(u);
    const Vec3 ue = u * e;
    const Vec3 uie = uinv * e;
    const Vec3 b1 = 2.0 * (uie / norm2(uie) - ue);
    const Vec3 m2 = 2.0 * (e - u * ue / norm2(ue));
    const double unorm = frobenius(u);
    if (norm(b1) <= tol.twin_residual * unorm || norm(m2) <= tol.twin_residual)
        throw Error(ErrorCode::DegenerateAxis, "U e is parallel to e, the axis generates no twin");

    TwinPair out;
    out.type_i = finish_solution(u, v, b1, e, TwinKind::TypeI, e, tol);
    out.type_ii = finish_solution(u, v, ue, m2, TwinKind::TypeII, e, tol);

    // compound: the type II normal is itself a second two-fold axis
    const Vec3 e2 = out.type_ii.m;
    if (frobenius(twofold_rotation(e2) * u * twofold_rotation(e2) - v) <= tol.axis_residual * unorm) {
        out.type_i.kind = TwinKind::Compound;
        out.type_ii.kind = TwinKind::Compound;
    }
    return out;
}

PairClass classify_pair(const Mat3& u, const Mat3& v, const Tolerances& tol, const AxisSearchOptions& opt) {
    std::vector<TwoFoldAxis> axes;
    try {
        axes = twofold_axes(u, v, tol, opt);
    } catch (const Error& err) {
        if (err.code() == ErrorCode::IdenticalVariants) return PairClass::Incompatible;
        throw;
    }
    if (axes.size() >= 2) return PairClass::Compound;
    if (axes.size() == 1) return PairClass::TypeI_II;
    return PairClass::Incompatible;
}

}  // namespace cofkit
