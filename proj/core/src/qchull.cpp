#include "cofkit/qchull.hpp"

#include <algorithm>
#include <cmath>

#include "cofkit/cofactor.hpp"
#include "cofkit/error.hpp"
#include "cofkit/habit.hpp"

namespace cofkit {

// ---------------------------------------------------------------- compound

std::vector<IdentityConnection> compound_identity_connections(const MonoclinicParams& p, int i, int j,
                                                              const Tolerances& tol) {
    p.validate();
    const VariantSet vs = monoclinic_variants(p);
    if (i < 1 || j < 1 || i > vs.size() || j > vs.size()) throw Error(ErrorCode::InvalidInput, "variant label out of range");
    const Mat3 ui = vs.at(i), uj = vs.at(j);
    if (frobenius(ui - uj) <= tol.conjugation * frobenius(ui)) throw Error(ErrorCode::IdenticalVariants, "Ui = Uj");

    const SymEig3 eig = eig_sym3(ui, tol);
    if (std::abs(eig.values[1] - 1.0) > tol.habit_sigma2)
        throw Error(ErrorCode::CC1Violated, "middle eigenvalue of Ui differs from 1");
    const double d = p.d;
    if (std::abs(d - 1.0) <= tol.generic)
        throw Error(ErrorCode::DegenerateD,
                    "d = 1: the rank-one connections to the identity can have dimension two");

    // shared eigenvector with eigenvalue d: a coordinate axis for these variants
    Vec3 s;
    bool found = false;
    for (int k = 0; k < 3 && !found; ++k) {
        Vec3 e;
        e[k] = 1.0;
        if (norm(ui * e - d * e) <= tol.generic && norm(uj * e - d * e) <= tol.generic) {
            s = e;
            found = true;
        }
    }
    if (!found) throw Error(ErrorCode::InvalidInput, "pair does not share the d eigenvector (not a compound pair)");

    // in-plane directions where |Ui v| = |Uj v|: 45° from the eigenvectors of
    // the traceless restriction of Ui² − Uj²
    int ks = 0;
    while (s[ks] == 0.0) ++ks;
    Vec3 t1, t2;
    t1[(ks + 1) % 3] = 1.0;
    t2[(ks + 2) % 3] = 1.0;
    const Mat3 diff = ui * ui - uj * uj;
    const double p00 = dot(t1, diff * t1), p01 = dot(t1, diff * t2), p11 = dot(t2, diff * t2);
    const double ang = 0.5 * std::atan2(2.0 * p01, p00 - p11);
    const Vec3 e1 = std::cos(ang) * t1 + std::sin(ang) * t2;
    const Vec3 e2 = -std::sin(ang) * t1 + std::cos(ang) * t2;
    const Vec3 vp = (e1 + e2) / std::sqrt(2.0);
    const Vec3 vm = (e1 - e2) / std::sqrt(2.0);

    const double dd = det(ui);
    const double k = d * d / (dd * dd - d * d * d * d);
    const double rp = std::sqrt(std::max(0.0, k * (norm2(ui * vp) - 1.0)));
    const double rm = std::sqrt(std::max(0.0, k * (norm2(ui * vm) - 1.0)));
    const double n3 = std::sqrt(std::max(0.0, k * (1.0 - d * d)));
    if (!(n3 > 0.0)) throw Error(ErrorCode::NoSolution, "no normal component along the shared axis");

    std::vector<IdentityConnection> out;
    for (int sp : {1, -1})
        for (int sm : {1, -1}) {
            IdentityConnection c;
            c.n = sp * rp * vp + sm * rm * vm + n3 * s;
            c.a = (dd - d * d) * c.n - ((1.0 - d * d) / n3) * s;
            const Mat3 f = Mat3::identity() + outer(c.a, c.n);
            const Mat3 cf = transpose(f) * f;
            const double ri = frobenius(cf - ui * ui), rj = frobenius(cf - uj * uj);
            c.well = ri <= rj ? i : j;
            const Mat3& w = ri <= rj ? ui : uj;
            c.rotation = f * inverse(w);
            c.residual = std::min(ri, rj);
            if (c.residual > tol.habit_residual * 1e2)
                throw Error(ErrorCode::NoSolution, "compound connection does not reproduce a pure variant");
            out.push_back(c);
        }
    std::sort(out.begin(), out.end(), [](const IdentityConnection& x, const IdentityConnection& y) {
        if (x.well != y.well) return x.well < y.well;
        for (int q = 0; q < 3; ++q)
            if (std::abs(x.n[q] - y.n[q]) > 1e-12) return x.n[q] < y.n[q];
        return false;
    });
    return out;
}

// ---------------------------------------------------------------- membership

namespace {

// min over θ of max(hA(θ), hB(θ)) where h = p + q cos 2θ + r sin 2θ
struct Sinusoid {
    double p, q, r;
    double at(double t) const { return p + q * std::cos(t) + r * std::sin(t); }
};

double min_of_max(const Sinusoid& ha, const Sinusoid& hb) {
    std::vector<double> cand;
    cand.push_back(std::atan2(ha.r, ha.q) + M_PI);
    cand.push_back(std::atan2(hb.r, hb.q) + M_PI);
    const double dp = ha.p - hb.p, dq = ha.q - hb.q, dr = ha.r - hb.r;
    const double rr = std::hypot(dq, dr);
    if (rr > 0.0 && std::abs(dp) <= rr) {
        const double phi = std::atan2(dr, dq);
        const double c = std::acos(std::clamp(-dp / rr, -1.0, 1.0));
        cand.push_back(phi + c);
        cand.push_back(phi - c);
    }
    double best = std::numeric_limits<double>::infinity();
    for (double t : cand) best = std::min(best, std::max(ha.at(t), hb.at(t)));
    return best;
}

struct SharedAxis {
    Vec3 v;
    double value;
};

SharedAxis shared_axis(const Mat3& a, const Mat3& b, const Tolerances& tol) {
    const double scale = std::max(frobenius(a), frobenius(b));
    for (const Mat3* m : {&a, &b}) {
        const SymEig3 e = eig_sym3(*m, tol);
        for (int k = 0; k < 3; ++k) {
            const Vec3& v = e.vectors[k];
            const double l = e.values[k];
            if (norm(a * v - l * v) <= tol.membership * scale && norm(b * v - l * v) <= tol.membership * scale)
                return {v, l};
        }
    }
    throw Error(ErrorCode::WellsIncompatible, "wells share no eigenvector");
}

void plane_basis(const Vec3& v, Vec3& w1, Vec3& w2) {
    Vec3 t(1, 0, 0);
    if (std::abs(v[0]) > 0.6) t = Vec3(0, 1, 0);
    w1 = normalized(t - dot(t, v) * v);
    w2 = cross(v, w1);
}

Sinusoid plane_form(const Mat3& x, const Vec3& w1, const Vec3& w2) {
    const double g00 = dot(w1, x * w1), g11 = dot(w2, x * w2), g01 = dot(w1, x * w2);
    return {0.5 * (g00 + g11), 0.5 * (g00 - g11), g01};
}

MembershipResult basic_conditions(const Mat3& f, const Mat3& a, const Mat3& b, const Tolerances& tol) {
    if (!is_symmetric(a, tol.symmetry) || !is_symmetric(b, tol.symmetry))
        throw Error(ErrorCode::NonSymmetric, "wells must be symmetric");
    const double da = det(a), db = det(b);
    if (std::abs(da - db) > tol.membership * std::abs(da))
        throw Error(ErrorCode::WellsIncompatible, "wells have different determinants");
    const SharedAxis sa = shared_axis(a, b, tol);
    MembershipResult r;
    r.shared_axis = sa.v;
    r.shared_value = sa.value;
    r.det_dev = std::abs(det(f) - da) / std::abs(da);
    const Mat3 cf = transpose(f) * f;
    r.axis_dev = norm(cf * sa.v - sa.value * sa.value * sa.v);
    return r;
}

}  // namespace

MembershipResult two_well_membership_detail(const Mat3& f, const Mat3& a, const Mat3& b, const Tolerances& tol) {
    MembershipResult r = basic_conditions(f, a, b, tol);
    Vec3 w1, w2;
    plane_basis(r.shared_axis, w1, w2);
    const Mat3 cf = transpose(f) * f;
    const Sinusoid sf = plane_form(cf, w1, w2);
    const Sinusoid sa = plane_form(a * a, w1, w2);
    const Sinusoid sb = plane_form(b * b, w1, w2);
    r.margin = min_of_max({sa.p - sf.p, sa.q - sf.q, sa.r - sf.r}, {sb.p - sf.p, sb.q - sf.q, sb.r - sf.r});
    const double scale = std::max(frobenius(a * a), frobenius(b * b));
    r.member = r.det_dev <= tol.membership && r.axis_dev <= tol.membership * scale && r.margin >= -tol.membership * scale;
    return r;
}

bool two_well_membership(const Mat3& f, const Mat3& a, const Mat3& b, const Tolerances& tol) {
    return two_well_membership_detail(f, a, b, tol).member;
}

bool two_well_membership_sampled(const Mat3& f, const Mat3& a, const Mat3& b, int samples, const Tolerances& tol) {
    const MembershipResult r = basic_conditions(f, a, b, tol);
    const double scale = std::max(frobenius(a * a), frobenius(b * b));
    if (r.det_dev > tol.membership || r.axis_dev > tol.membership * scale) return false;
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < samples; ++k) {
        const double z = 1.0 - 2.0 * (k + 0.5) / samples;
        const double rad = std::sqrt(1.0 - z * z);
        const Vec3 e(rad * std::cos(golden * k), rad * std::sin(golden * k), z);
        const double lhs = norm2(f * e);
        const double rhs = std::max(norm2(a * e), norm2(b * e));
        if (lhs > rhs + tol.membership * scale) return false;
    }
    return true;
}

// ---------------------------------------------------------------- type I/II

Mat3 HullRegion::m_matrix(double alpha, double beta, double gamma) const {
    return alpha * outer(u1, u1) + outer(u2, u2) + gamma * outer(u3, u3) + beta * (outer(u1, u3) + outer(u3, u1));
}

Mat3 HullRegion::shifted(double alpha, double beta, double gamma) const {
    return transpose(l_inv) * m_matrix(alpha, beta, gamma) * l_inv - Mat3::identity();
}

double HullRegion::f1(double alpha, double beta, double gamma) const { return det(shifted(alpha, beta, gamma)); }

double HullRegion::phi(double alpha, double beta, double gamma) const {
    const auto ev = eig_sym3(sym(shifted(alpha, beta, gamma))).values;
    return ev[0] * ev[2];
}

double HullRegion::beta_max(double gamma) const {
    return std::sqrt(std::max(0.0, (1.0 + delta * delta) * gamma - 1.0));
}

HullRegion hull_region(const Mat3& u, const TwinSolution& twin) {
    const Mat3 ui = inverse(u);
    const Vec3 uim = ui * twin.m;
    HullRegion h;
    h.u1 = uim / norm(uim);
    h.u3 = twin.b / norm(twin.b);
    h.u2 = cross(h.u1, h.u3);
    h.delta = 0.5 * norm(twin.b) * norm(uim);
    h.l = ui * (Mat3::identity() - h.delta * outer(h.u3, h.u1));
    h.l_inv = inverse(h.l);
    return h;
}

TwinHullMembership twin_hull_membership(const Mat3& f, const Mat3& u, const TwinSolution& twin, const Tolerances& tol) {
    const HullRegion h = hull_region(u, twin);
    const Mat3 m = transpose(h.l) * transpose(f) * f * h.l;
    TwinHullMembership r;
    r.alpha = dot(h.u1, m * h.u1);
    r.gamma = dot(h.u3, m * h.u3);
    r.beta = dot(h.u1, m * h.u3);
    r.structure_dev = std::max({std::abs(dot(h.u2, m * h.u2) - 1.0), std::abs(dot(h.u1, m * h.u2)),
                                std::abs(dot(h.u3, m * h.u2))});
    r.constraint_dev = std::abs(r.alpha * r.gamma - r.beta * r.beta - 1.0);
    const double eps = tol.membership;
    r.member = r.structure_dev <= eps && r.constraint_dev <= eps && r.alpha > 0.0 &&
               r.alpha <= 1.0 + h.delta * h.delta + eps && r.gamma > 0.0 && r.gamma <= 1.0 + eps;
    return r;
}

std::vector<ScanRow> hull_scan(const HullRegion& region, int n_beta, int n_gamma) {
    std::vector<ScanRow> rows;
    rows.reserve(static_cast<size_t>(n_beta) * n_gamma);
    const double g0 = region.gamma_min();
    for (int k = 0; k < n_gamma; ++k) {
        const double gamma = n_gamma == 1 ? 1.0 : g0 + (1.0 - g0) * k / (n_gamma - 1);
        const double bm = region.beta_max(gamma);
        for (int l = 0; l < n_beta; ++l) {
            const double beta = n_beta == 1 ? 0.0 : -bm + 2.0 * bm * l / (n_beta - 1);
            const double alpha = (1.0 + beta * beta) / gamma;
            rows.push_back({beta, gamma, region.f1(alpha, beta, gamma), region.phi(alpha, beta, gamma)});
        }
    }
    return rows;
}

double conjugate_c0(const Mat3& u, const TwinSolution& conjugate) {
    const Mat3 f = u + 0.5 * outer(conjugate.b, conjugate.m);
    return 4.0 * det(transpose(f) * f - Mat3::identity());
}

F1Fit fit_f1(const std::vector<ScanRow>& scan, const HullRegion& region, double c0) {
    F1Fit fit;
    const double dl2 = region.delta * region.delta;
    fit.closed_form = c0 * (1.0 + dl2) / (4.0 * dl2);
    double num = 0.0, den = 0.0;
    fit.min_interior_abs = std::numeric_limits<double>::infinity();
    double row_gamma = std::numeric_limits<double>::quiet_NaN();
    double row_lo = 0.0, row_hi = 0.0;
    auto close_row = [&]() {
        if (!std::isnan(row_gamma)) fit.max_beta_spread = std::max(fit.max_beta_spread, row_hi - row_lo);
    };
    for (const ScanRow& r : scan) {
        const double w = 1.0 - r.gamma;
        num += r.f1 * w;
        den += w * w;
        fit.max_model_dev = std::max(fit.max_model_dev, std::abs(r.f1 - fit.closed_form * w));
        if (w > 1e-9) fit.min_interior_abs = std::min(fit.min_interior_abs, std::abs(r.f1));
        if (r.gamma != row_gamma) {
            close_row();
            row_gamma = r.gamma;
            row_lo = row_hi = r.f1;
        } else {
            row_lo = std::min(row_lo, r.f1);
            row_hi = std::max(row_hi, r.f1);
        }
    }
    close_row();
    fit.fitted = den > 0.0 ? num / den : 0.0;
    return fit;
}

IdentityFamily typeI_II_identity_family(const Mat3& u, const TwinSolution& twin, const TwinSolution& conjugate,
                                        const std::vector<double>& mu_grid, const Tolerances& tol,
                                        int scan_resolution) {
    const CofactorReport cc = check_cc(u, twin, tol);
    if (cc.cc1_dev > tol.cc_gate || cc.cc2_value > tol.cc_gate || !cc.cc3_ok)
        throw Error(ErrorCode::HypothesisViolated, "twin does not satisfy the cofactor conditions");
    const CofactorReport ccc = check_cc(u, conjugate, tol);
    if (ccc.cc2_value <= tol.cc_gate)
        throw Error(ErrorCode::HypothesisViolated, "conjugate twin satisfies CC2 as well");

    IdentityFamily fam;
    for (double mu : mu_grid) {
        const HabitResult hr = laminate_habit_solutions(u, twin, mu, tol);
        const Mat3 f = laminate_gradient(u, twin, mu);
        for (const auto& s : hr.solutions) {
            IdentityConnection c;
            c.a = s.a;
            c.n = s.n;
            c.mu = mu;
            c.rotation = s.rotation;
            c.residual = frobenius(s.rotation * f - Mat3::identity() - outer(s.a, s.n));
            bool dup = false;
            for (const auto& prev : fam.connections)
                if (prev.mu == mu && frobenius(outer(prev.a, prev.n) - outer(c.a, c.n)) <= tol.merge) dup = true;
            if (dup) {
                ++fam.merged;
                continue;
            }
            fam.connections.push_back(c);
        }
        if (hr.solutions.size() < 2) ++fam.merged;
    }

    fam.region = hull_region(u, twin);
    const auto scan = hull_scan(fam.region, scan_resolution, scan_resolution);
    fam.fit = fit_f1(scan, fam.region, conjugate_c0(u, conjugate));
    fam.exhaustive = fam.fit.min_interior_abs > 0.0 && std::abs(fam.fit.closed_form) > 0.0;
    return fam;
}

}  // namespace cofkit
