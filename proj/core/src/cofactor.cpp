#include "cofkit/cofactor.hpp"

#include <algorithm>
#include <cmath>

#include "cofkit/error.hpp"

namespace cofkit {

namespace {

double max_gap(const std::array<double, 3>& ev) { return ev[2] - ev[0]; }

}  // namespace

std::array<double, 3> triple_junction_closed_eigenvalues(const Mat3& x) {
    const double t = trace(x);
    const double t2 = trace(x * x);
    const double disc = std::sqrt(std::max(0.0, 2.0 * t2 - t * t));
    std::array<double, 3> ev{0.5 * (t - disc), 0.0, 0.5 * (t + disc)};
    std::sort(ev.begin(), ev.end());
    return ev;
}

TripleJunctionMatrix c_star(const Mat3& u, const Vec3& m_in, const Tolerances& tol) {
    if (!is_positive_definite(u)) throw Error(ErrorCode::NotPositiveDefinite, "U must be positive definite");
    const Vec3 m = normalized(m_in);
    const Mat3 u2 = u * u;
    const Vec3 um = u * m;
    const Vec3 u2m = u2 * m;

    TripleJunctionMatrix out;
    out.matrix = u2 - Mat3::identity() + (1.0 + norm2(um)) * outer(m, m) - (outer(u2m, m) + outer(m, u2m));
    out.matrix = sym(out.matrix);
    out.eigenvalues = eig_sym3(out.matrix, tol).values;
    out.gap = max_gap(out.eigenvalues);
    const Vec3 w = inverse(u) * m;
    out.minimizers = {w / norm(w) - um, -w / norm(w) - um};
    out.objective = frobenius_dot(out.matrix, out.matrix);

    const auto lam = eig_sym3(u, tol).values;
    const double guard = 2.0 * lam[0] * lam[0] - lam[2] * lam[2];
    if (!(guard > 0.0)) out.warnings.push_back("lemma hypothesis 2*lambda1^2 - lambda3^2 > 0 violated");
    if (!(out.objective < std::min(guard * guard, 1.0)))
        out.warnings.push_back("lemma hypothesis min ||C||^2 < min((2*lambda1^2-lambda3^2)^2, 1) violated");
    return out;
}

TripleJunctionMatrix e_star(const Mat3& u, const Vec3& b, const Tolerances& tol) {
    if (!is_positive_definite(u)) throw Error(ErrorCode::NotPositiveDefinite, "U must be positive definite");
    const double bn = norm(b);
    if (!(bn > 0.0)) throw Error(ErrorCode::ZeroShear, "shear vector b is zero");
    const Vec3 ub = u * b;
    const Vec3 uib = inverse(u) * b;
    const Vec3 w1 = uib / norm(uib);

    TripleJunctionMatrix out;
    out.matrix = u * u - Mat3::identity() - (1.0 / (bn * bn)) * outer(ub, ub) + outer(w1, w1);
    out.matrix = sym(out.matrix);
    out.eigenvalues = eig_sym3(out.matrix, tol).values;
    out.gap = max_gap(out.eigenvalues);
    out.minimizers = {w1 / bn - ub / (bn * bn), -w1 / bn - ub / (bn * bn)};
    out.objective = frobenius_dot(out.matrix, out.matrix);
    if (!(out.objective < 1.0)) out.warnings.push_back("lemma hypothesis min ||E||^2 < 1 violated");
    return out;
}

CofactorReport check_cc(const Mat3& u, const TwinSolution& twin, const Tolerances& tol,
                        const std::optional<ElasticConstants>& elastic) {
    CofactorReport r;
    r.kind = twin.kind;
    r.formula = twin.formula;

    const SymEig3 eu = eig_sym3(u, tol);
    r.cc1_dev = std::abs(eu.values[1] - 1.0);

    const Mat3 u2 = u * u;
    const Mat3 k = cofactor_matrix(u2 - Mat3::identity());
    r.cc2_value = std::abs(dot(twin.b, u * (k * twin.m)));
    r.cc3_value = trace(u2) - det(u2) - 0.25 * norm2(twin.b) * norm2(twin.m) - 2.0;
    r.cc3_ok = r.cc3_value >= 0.0;

    const Vec3 e = normalized(twin.axis);
    TripleJunctionMatrix tj;
    if (twin.formula == TwinKind::TypeI) {
        r.equivalent_dev = std::abs(norm(inverse(u) * e) - 1.0);
        tj = e_star(u, twin.b, tol);
    } else {
        r.equivalent_dev = std::abs(norm(u * e) - 1.0);
        tj = c_star(u, twin.m, tol);
    }
    r.new_metric = tj.gap;
    r.warnings = tj.warnings;

    if (elastic) {
        r.tresca_stress = 0.25 * elastic->shear_modulus * tj.gap;
        r.tresca_ok = *r.tresca_stress <= elastic->yield_stress;
    }
    return r;
}

SupercompatResult supercompat_metric(const Mat3& u, const Mat3& v, const Tolerances& tol, const AxisSearchOptions& opt) {
    std::vector<TwoFoldAxis> axes;
    try {
        axes = twofold_axes(u, v, tol, opt);
    } catch (const Error& err) {
        if (err.code() == ErrorCode::IdenticalVariants)
            throw Error(ErrorCode::NoTwoFoldAxis, "identical variants have no two-fold axis");
        throw;
    }
    if (axes.empty()) throw Error(ErrorCode::NoTwoFoldAxis, "pair is not twin-related");

    SupercompatResult out;
    for (const auto& ax : axes) {
        const TwinPair tp = twin_solutions(u, ax.e, tol);
        AxisMetric am;
        am.axis = ax.e;
        am.type_i = e_star(u, tp.type_i.b, tol).gap;
        am.type_ii = c_star(u, tp.type_ii.m, tol).gap;
        out.per_axis.push_back(am);
    }
    return out;
}

CompoundTripleJunctionReport compound_triple_junction(const MonoclinicParams& p, CompoundOrbit orbit) {
    const double a = p.a, b = p.b, c = p.c;
    const double detu = a * c * p.d - b * b * p.d;
    const double det2 = detu * detu;
    CompoundTripleJunctionReport r;
    r.d_dev = std::abs(p.d - 1.0);
    if (orbit == CompoundOrbit::Pair12) {
        r.branches = {
            {"a^2+b^2=1", true, a * a + b * b - 1.0},
            {"c^2+b^2=1", true, c * c + b * b - 1.0},
            {"a^2+b^2=detU^2", false, a * a + b * b - det2},
            {"c^2+b^2=detU^2", false, c * c + b * b - det2},
        };
    } else {
        const double plus = (a + b) * (a + b) + (b + c) * (b + c);
        const double minus = (a - b) * (a - b) + (b - c) * (b - c);
        r.branches = {
            {"(a+b)^2+(b+c)^2=2", true, plus - 2.0},
            {"(a-b)^2+(b-c)^2=2", true, minus - 2.0},
            {"(a+b)^2+(b+c)^2=2detU^2", false, plus - 2.0 * det2},
            {"(a-b)^2+(b-c)^2=2detU^2", false, minus - 2.0 * det2},
        };
    }
    return r;
}

}  // namespace cofkit
