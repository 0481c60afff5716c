#include "cofkit/startwin.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <random>

#include "cofkit/error.hpp"
#include "cofkit/habit.hpp"

namespace cofkit {

const char* to_string(StarVariant v) { return v == StarVariant::Half ? "half" : "full"; }

const char* to_string(StarCase c) {
    switch (c) {
        case StarCase::Lambda1EqD: return "l1eqd";
        case StarCase::Lambda3EqD: return "l3eqd";
        case StarCase::DEqualsOne: return "d1";
    }
    return "?";
}

const char* to_string(StarClass c) {
    switch (c) {
        case StarClass::None: return "none";
        case StarClass::HalfStar: return "half-star";
        case StarClass::Star: return "star";
    }
    return "?";
}

// ---------------------------------------------------------------- relations

namespace {

// Terms summing to the relation, so that the scale is their |·| sum.
std::vector<double> relation_terms(double l, double d, TwinKind kind, StarVariant variant, StarCase scase) {
    if (scase == StarCase::DEqualsOne && variant == StarVariant::Half) {
        const double l1 = l, l3 = d;
        return {5.0 * l1 * l1 * l3 * l3, -l1 * l1, -8.0 * l1 * l3, 5.0, -l3 * l3};
    }
    if (scase == StarCase::DEqualsOne) d = 1.0;
    const double k = variant == StarVariant::Half ? 4.0 : 1.0;
    const double tail = -(d - l) * (d - l) * (1.0 - d * d);
    if (kind == TwinKind::TypeI)
        return {2.0 * k * d * d * l * l, -k * l * l, -k * d * d, tail};
    return {k * d * d * d * d, k * d * d * l * l, -2.0 * k * d * d, tail};
}

}  // namespace

double star_relation_residual(double lambda, double d, TwinKind kind, StarVariant variant, StarCase scase) {
    double s = 0.0;
    for (double t : relation_terms(lambda, d, kind, variant, scase)) s += t;
    return s;
}

double star_relation_scale(double lambda, double d, TwinKind kind, StarVariant variant, StarCase scase) {
    double s = 0.0;
    for (double t : relation_terms(lambda, d, kind, variant, scase)) s += std::abs(t);
    return s;
}

// ---------------------------------------------------------------- branches

const std::vector<StarBranch>& star_branches() {
    static const std::vector<StarBranch> list = [] {
        const double inf = std::numeric_limits<double>::infinity();
        const double s2 = std::sqrt(2.0), s3 = std::sqrt(3.0), s5 = std::sqrt(5.0), s6 = std::sqrt(6.0);
        using K = TwinKind;
        using V = StarVariant;
        using C = StarCase;
        std::vector<StarBranch> b = {
            {"II-half-l3eqd-minus", K::TypeII, V::Half, C::Lambda3EqD, -1, 1.0, std::sqrt(1.0 + s2 / s3)},
            {"II-half-l3eqd-plus", K::TypeII, V::Half, C::Lambda3EqD, 1, std::sqrt(9.0 / 5.0), std::sqrt(1.0 + s2 / s3)},
            {"II-half-l1eqd-minus", K::TypeII, V::Half, C::Lambda1EqD, -1, std::sqrt(1.0 - s2 / s3), 1.0},
            {"II-half-d1-plus", K::TypeII, V::Half, C::DEqualsOne, 1, 1.0, inf},
            {"II-half-d1-minus", K::TypeII, V::Half, C::DEqualsOne, -1, 1.0, inf},
            {"II-full-l3eqd-minus", K::TypeII, V::Full, C::Lambda3EqD, -1, 1.0, std::sqrt(1.0 + 1.0 / s3)},
            {"II-full-l3eqd-plus", K::TypeII, V::Full, C::Lambda3EqD, 1, std::sqrt(1.5), std::sqrt(1.0 + 1.0 / s3)},
            {"II-full-l1eqd-minus", K::TypeII, V::Full, C::Lambda1EqD, -1, std::sqrt(1.0 - 1.0 / s3), 1.0},
            {"I-half-l3eqd-plus", K::TypeI, V::Half, C::Lambda3EqD, 1, 1.0, std::sqrt(3.0 + s6)},
            {"I-half-l3eqd-minus", K::TypeI, V::Half, C::Lambda3EqD, -1, s5, std::sqrt(3.0 + s6)},
            {"I-half-l1eqd-plus", K::TypeI, V::Half, C::Lambda1EqD, 1, std::sqrt(3.0 - s6), 1.0},
            {"I-half-l1eqd-minus", K::TypeI, V::Half, C::Lambda1EqD, -1, std::sqrt(3.0 - s6), s5 / 3.0},
            {"I-half-d1-plus", K::TypeI, V::Half, C::DEqualsOne, 1, 1.0, inf},
            {"I-half-d1-minus", K::TypeI, V::Half, C::DEqualsOne, -1, 1.0, inf},
            {"I-full-l3eqd-plus", K::TypeI, V::Full, C::Lambda3EqD, 1, 1.0, std::sqrt((3.0 + s3) / 2.0)},
            {"I-full-l3eqd-minus", K::TypeI, V::Full, C::Lambda3EqD, -1, s2, std::sqrt((3.0 + s3) / 2.0)},
            {"I-full-l1eqd-plus", K::TypeI, V::Full, C::Lambda1EqD, 1, std::sqrt((3.0 - s3) / 2.0), 1.0},
            {"I-full-l1eqd-minus", K::TypeI, V::Full, C::Lambda1EqD, -1, std::sqrt((3.0 - s3) / 2.0), std::sqrt(2.0 / 3.0)},
        };
        return b;
    }();
    return list;
}

const StarBranch& star_branch(const std::string& name) {
    for (const auto& b : star_branches())
        if (b.name == name) return b;
    throw Error(ErrorCode::InvalidInput, "unknown star branch '" + name + "'");
}

double star_branch_lambda(const StarBranch& br, double x) {
    if (!(x > br.lo && x < br.hi))
        throw Error(ErrorCode::DomainViolation, "x outside the domain of branch " + br.name);
    const double s = br.sign;
    if (br.scase == StarCase::DEqualsOne) {
        const double l3 = x;
        return (4.0 * l3 + s * std::sqrt(5.0) * (l3 * l3 - 1.0)) / (5.0 * l3 * l3 - 1.0);
    }
    const double d = x, d2 = d * d, d3 = d2 * d, d4 = d2 * d2;
    const double r2 = std::sqrt(2.0);
    if (br.kind == TwinKind::TypeII && br.variant == StarVariant::Half)
        return (d - d3 + s * 2.0 * r2 * d * std::sqrt(6.0 * d2 - 1.0 - 3.0 * d4)) / (1.0 - 5.0 * d2);
    if (br.kind == TwinKind::TypeII)
        return (d - d3 + s * d * std::sqrt(6.0 * d2 - 2.0 - 3.0 * d4)) / (1.0 - 2.0 * d2);
    if (br.variant == StarVariant::Half)
        return (d3 - d + s * 2.0 * r2 * d * std::sqrt(6.0 * d2 - 3.0 - d4)) / (9.0 * d2 - 5.0);
    return (d3 - d + s * d * std::sqrt(6.0 * d2 - 3.0 - 2.0 * d4)) / (3.0 * d2 - 2.0);
}

namespace {

CurveSample sample_branch(const StarBranch& br, double x) {
    CurveSample s;
    s.branch = br.name;
    s.x = x;
    s.lambda = star_branch_lambda(br, x);
    s.residual = star_relation_residual(s.lambda, x, br.kind, br.variant, br.scase);
    s.relative_residual = std::abs(s.residual) / star_relation_scale(s.lambda, x, br.kind, br.variant, br.scase);
    return s;
}

bool inside(const StarBranch& br, double x) { return x > br.lo && x < br.hi; }

}  // namespace

std::vector<CurveSample> star_branch_curve(const StarBranch& br, const std::vector<double>& grid, double min_lambda) {
    std::vector<CurveSample> out;
    for (double x : grid) {
        CurveSample s = sample_branch(br, x);
        if (s.lambda > min_lambda) out.push_back(s);
    }
    return out;
}

std::vector<CurveSample> star_parameter_curves(TwinKind kind, StarVariant variant, const std::vector<double>& d_grid,
                                               double min_lambda) {
    std::vector<const StarBranch*> branches;
    for (const auto& b : star_branches())
        if (b.kind == kind && b.variant == variant && b.scase != StarCase::DEqualsOne) branches.push_back(&b);
    for (double d : d_grid) {
        bool any = false;
        for (const auto* b : branches) any = any || inside(*b, d);
        if (!any) throw Error(ErrorCode::DomainViolation, "d outside every branch domain");
    }
    std::vector<CurveSample> out;
    for (const auto* b : branches)
        for (double d : d_grid) {
            if (!inside(*b, d)) continue;
            CurveSample s = sample_branch(*b, d);
            if (s.lambda > min_lambda) out.push_back(s);
        }
    return out;
}

std::vector<std::string> figure_curve_names() { return {"det-one", "cc-both", "ortho-cc-II", "ortho-cc-I"}; }

std::vector<CurveSample> figure_curve(const std::string& name, const std::vector<double>& d_grid) {
    std::vector<CurveSample> out;
    for (double d : d_grid) {
        CurveSample s;
        s.branch = name;
        s.x = d;
        const double d2 = d * d;
        double l = 0.0, r = 0.0, scale = 1.0;
        if (name == "det-one") {
            l = 1.0 / d;
            r = l * d - 1.0;
        } else if (name == "cc-both") {
            if (!(d2 > 0.5 && d2 < 2.0)) throw Error(ErrorCode::DomainViolation, "cc-both needs d in (1/sqrt2, sqrt2)");
            l = d * std::sqrt((2.0 - d2) / (2.0 * d2 - 1.0));
            r = l * l * (2.0 * d2 - 1.0) - d2 * (2.0 - d2);
            scale = std::abs(l * l * (2.0 * d2 - 1.0)) + std::abs(d2 * (2.0 - d2));
        } else if (name == "ortho-cc-II") {
            if (!(d2 < 1.5)) throw Error(ErrorCode::DomainViolation, "ortho-cc-II needs d < sqrt(3/2)");
            l = std::sqrt(3.0 - 2.0 * d2);
            r = l * l + 2.0 * d2 - 3.0;
            scale = l * l + 2.0 * d2 + 3.0;
        } else if (name == "ortho-cc-I") {
            if (!(d2 > 2.0 / 3.0)) throw Error(ErrorCode::DomainViolation, "ortho-cc-I needs d > sqrt(2/3)");
            l = d / std::sqrt(3.0 * d2 - 2.0);
            r = l * l * (3.0 * d2 - 2.0) - d2;
            scale = std::abs(l * l * (3.0 * d2 - 2.0)) + d2;
        } else {
            throw Error(ErrorCode::InvalidInput, "unknown curve '" + name + "'");
        }
        s.lambda = l;
        s.residual = r;
        s.relative_residual = std::abs(r) / std::max(scale, 1.0);
        out.push_back(s);
    }
    return out;
}

double star_curve_distance(double lambda, double d, TwinKind kind, StarVariant variant) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& br : star_branches()) {
        if (br.kind != kind || br.variant != variant || br.scase == StarCase::DEqualsOne) continue;
        auto dist2 = [&](double x) {
            const double l = star_branch_lambda(br, x);
            return (l - lambda) * (l - lambda) + (x - d) * (x - d);
        };
        const int n = 4000;
        const double h = (br.hi - br.lo) / n;
        int kbest = 0;
        double fbest = std::numeric_limits<double>::infinity();
        for (int k = 0; k < n; ++k) {
            const double f = dist2(br.lo + (k + 0.5) * h);
            if (f < fbest) {
                fbest = f;
                kbest = k;
            }
        }
        // golden section around the best sample
        double lo = br.lo + std::max(kbest - 0.5, 1e-9) * h;
        double hi = br.lo + std::min(kbest + 1.5, n - 1e-9) * h;
        const double g = 0.5 * (std::sqrt(5.0) - 1.0);
        double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
        double f1 = dist2(x1), f2 = dist2(x2);
        for (int it = 0; it < 100 && hi - lo > 1e-15; ++it) {
            if (f1 < f2) {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - g * (hi - lo);
                f1 = dist2(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + g * (hi - lo);
                f2 = dist2(x2);
            }
        }
        best = std::min({best, fbest, f1, f2});
    }
    return std::sqrt(best);
}

EigenPair star_eigen_pair(const MonoclinicParams& p) {
    const double mid = 0.5 * (p.a + p.c);
    const double rad = std::sqrt(0.25 * (p.a - p.c) * (p.a - p.c) + p.b * p.b);
    const double lo = mid - rad, hi = mid + rad;
    return {std::abs(hi - 1.0) >= std::abs(lo - 1.0) ? hi : lo, p.d};
}

// ---------------------------------------------------------------- classify

namespace {

double triple(const Vec3& a, const Vec3& b, const Vec3& c) {
    return dot(a, cross(b, c)) / (norm(a) * norm(b) * norm(c));
}

StarCandidate finish_group(double mu, std::vector<StarWitness> ws, const Vec3& fixed, double indep) {
    StarCandidate g;
    g.mu = mu;
    for (auto& w : ws) {
        bool dup = false;
        for (const auto& x : g.witnesses)
            if (norm(x.image - w.image) <= indep * norm(fixed)) dup = true;
        if (!dup) g.witnesses.push_back(w);
    }
    for (size_t k = 0; k < g.witnesses.size(); ++k)
        for (size_t l = k + 1; l < g.witnesses.size(); ++l)
            g.triple_products.push_back(triple(fixed, g.witnesses[k].image, g.witnesses[l].image));
    if (g.witnesses.size() >= 3)
        g.triple_products.push_back(triple(g.witnesses[0].image, g.witnesses[1].image, g.witnesses[2].image));
    g.independent = !g.triple_products.empty();
    for (double t : g.triple_products)
        if (!(std::abs(t) > indep)) g.independent = false;
    return g;
}

}  // namespace

StarReport star_classify(const MonoclinicParams& p, int i, int j, TwinKind kind, const Tolerances& tol, bool force) {
    if (kind == TwinKind::Compound) throw Error(ErrorCode::InvalidInput, "star twins are type I or type II");
    p.validate();
    const VariantSet vs = monoclinic_variants(p);
    if (i < 1 || j < 1 || i > vs.size() || j > vs.size())
        throw Error(ErrorCode::InvalidInput, "variant label out of range");

    StarReport r;
    r.kind = kind;
    r.i = i;
    r.j = j;
    r.forced = force;
    r.u = vs.at(i);
    r.v = vs.at(j);
    r.mu_star = std::numeric_limits<double>::quiet_NaN();
    const EigenPair ep = star_eigen_pair(p);
    r.lambda = ep.lambda;
    r.d = ep.d;
    r.full_curve_distance = star_curve_distance(r.lambda, r.d, kind, StarVariant::Full);
    r.half_curve_distance = star_curve_distance(r.lambda, r.d, kind, StarVariant::Half);

    const auto axes = twofold_axes(r.u, r.v, tol);
    if (axes.size() != 1)
        throw Error(ErrorCode::NotACofactorTwin, "pair does not generate a unique type I/II twin");
    const TwinPair tp = twin_solutions(r.u, axes[0].e, tol);
    const TwinSolution& tw = kind == TwinKind::TypeI ? tp.type_i : tp.type_ii;
    r.cc = check_cc(r.u, tw, tol);
    const bool gate = r.cc.cc1_dev <= tol.cc_gate && r.cc.cc2_value <= tol.cc_gate && r.cc.cc3_ok;
    if (!gate) {
        if (!force) throw Error(ErrorCode::NotACofactorTwin, "cofactor conditions fail the gate");
        r.warnings.push_back("cofactor gate failed; geometry evaluated by force");
    }

    Tolerances ht = tol;
    ht.habit_sigma2 = std::max(ht.habit_sigma2, r.cc.cc1_dev * (1.0 + 1e-9) + 1e-15);
    const HabitResult hr = habit_solutions(r.u, ht);
    if (hr.trivial || hr.solutions.empty()) throw Error(ErrorCode::NotACofactorTwin, "no austenite interface for U");

    if (kind == TwinKind::TypeII) {
        // the interface whose normal is the twin normal
        const HabitSolution* s = &hr.solutions[0];
        for (const auto& h : hr.solutions)
            if (norm(cross(h.n, tw.m)) < norm(cross(s->n, tw.m))) s = &h;
        Vec3 a = s->a;
        if (dot(s->n, tw.m) < 0.0) a = -a;
        r.fixed = tw.m;
        r.w_u = a;
        r.w_v = a + s->rotation * tw.b;
    } else {
        // the interface whose shear direction is R b
        const HabitSolution* s = &hr.solutions[0];
        auto skew_of = [&](const HabitSolution& h) {
            const Vec3 rb = h.rotation * tw.b;
            return norm(cross(rb, h.a)) / (norm(rb) * norm(h.a));
        };
        for (const auto& h : hr.solutions)
            if (skew_of(h) < skew_of(*s)) s = &h;
        const double kappa = dot(s->rotation * tw.b, s->a) / norm2(s->a);
        r.fixed = s->a;
        r.w_u = s->n;
        r.w_v = s->n + kappa * tw.m;
    }

    // Q w(μ) = χ w(μ) is linear in μ: one least-squares μ per (Q, χ)
    const Vec3 pv = r.w_u - r.w_v;
    const Vec3 qv = r.w_v;
    const auto& group = cubic_symmetry_group();
    std::vector<StarWitness> hits;
    std::vector<StarWitness> near;
    const double fixed_n = norm(r.fixed);
    for (int qi = 1; qi < 24; ++qi) {
        const Mat3& q = group[qi];
        for (int chi : {1, -1}) {
            const Mat3 amat = q - static_cast<double>(chi) * Mat3::identity();
            const Vec3 ap = amat * pv, aq = amat * qv;
            if (norm2(ap) <= 1e-28 * std::max(norm2(pv), 1e-300)) {
                if (norm(aq) <= tol.witness) r.warnings.push_back("a symmetry fixes the whole family w(mu)");
                continue;
            }
            StarWitness w;
            w.q_index = qi;
            w.q = q;
            w.chi = chi;
            w.mu = -dot(ap, aq) / norm2(ap);
            w.residual = norm(aq + w.mu * ap);
            w.image = static_cast<double>(chi) * (q * r.fixed);
            if (w.mu < -1e-12 || w.mu > 1.0 + 1e-12) continue;
            w.mu = std::clamp(w.mu, 0.0, 1.0);
            // a witness that maps the fixed vector onto its own line adds no new gradient
            if (norm(cross(w.image, r.fixed)) <= tol.independence * fixed_n * fixed_n) continue;
            near.push_back(w);
            if (w.residual <= tol.witness * std::max(1.0, norm(r.common(w.mu)))) hits.push_back(w);
        }
    }
    std::sort(near.begin(), near.end(), [](const StarWitness& x, const StarWitness& y) {
        if (x.residual != y.residual) return x.residual < y.residual;
        return x.q_index * 2 + x.chi < y.q_index * 2 + y.chi;
    });
    if (near.size() > 6) near.resize(6);
    r.near_witnesses = near;

    std::sort(hits.begin(), hits.end(), [](const StarWitness& x, const StarWitness& y) {
        if (x.mu != y.mu) return x.mu < y.mu;
        return x.q_index * 2 + x.chi < y.q_index * 2 + y.chi;
    });
    for (size_t k = 0; k < hits.size();) {
        size_t l = k;
        std::vector<StarWitness> grp;
        while (l < hits.size() && hits[l].mu - hits[k].mu <= 1e-9) grp.push_back(hits[l++]);
        double mu = 0.0;
        for (const auto& w : grp) mu += w.mu;
        r.candidates.push_back(finish_group(mu / grp.size(), grp, r.fixed, tol.independence));
        k = l;
    }

    const StarCandidate* best = nullptr;
    StarClass best_class = StarClass::None;
    for (const auto& g : r.candidates) {
        StarClass c = StarClass::None;
        if (g.independent && g.witnesses.size() >= 3) c = StarClass::Star;
        else if (g.independent && g.witnesses.size() == 2) c = StarClass::HalfStar;
        if (c != StarClass::None && static_cast<int>(c) > static_cast<int>(best_class)) {
            best_class = c;
            best = &g;
        }
    }
    r.classification = best_class;
    if (best) {
        r.mu_star = best->mu;
        r.witnesses = best->witnesses;
        r.triple_products = best->triple_products;
        if (best->witnesses.size() > 3) r.warnings.push_back("more than three star witnesses");
    }
    return r;
}

// ---------------------------------------------------------------- laminates

namespace {

// Upper bound for the second singular value, exact when the third one is 0.
// ‖cof D‖² = σ₁²σ₂² + σ₁²σ₃² + σ₂²σ₃² keeps full relative precision where
// eigenvalues of DᵀD would not.
double rank_one_defect(const Mat3& dm) {
    const auto sv = singular_values(dm);
    if (!(sv[2] > 0.0)) return 0.0;
    return frobenius(cofactor_matrix(dm)) / sv[2];
}

double min_singular_3(const Mat3& f1, const Mat3& f2, const Mat3& f3) {
    const Mat3* fs[3] = {&f1, &f2, &f3};
    Mat3 g;
    for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) g(k, l) = frobenius_dot(*fs[k], *fs[l]);
    return std::sqrt(std::max(0.0, eig_sym3(g).values[0]));
}

}  // namespace

LaminateFan star_laminates(const StarReport& report, const Tolerances& tol, bool force) {
    std::vector<StarWitness> ws = report.witnesses;
    double mu = report.mu_star;
    if (report.classification == StarClass::None) {
        if (!force) throw Error(ErrorCode::InvalidInput, "report carries no star witnesses");
        ws.clear();
        for (const auto& w : report.near_witnesses) {
            bool dup = false;
            for (const auto& x : ws)
                if (norm(x.image - w.image) <= tol.independence * norm(report.fixed)) dup = true;
            if (!dup) ws.push_back(w);
            if (ws.size() == 3) break;
        }
        if (ws.empty()) throw Error(ErrorCode::RankOneViolation, "no candidate witnesses");
        mu = ws.front().mu;
    }

    LaminateFan fan;
    fan.kind = report.kind;
    fan.mu = mu;
    fan.common = report.common(mu);
    const Mat3 f0 = report.kind == TwinKind::TypeII ? Mat3::identity() + outer(fan.common, report.fixed)
                                                    : Mat3::identity() + outer(report.fixed, fan.common);
    fan.vectors.push_back(report.fixed);
    fan.gradients.push_back(f0);
    for (const auto& w : ws) {
        fan.vectors.push_back(static_cast<double>(w.chi) * (w.q * report.fixed));
        fan.gradients.push_back(w.q * f0 * transpose(w.q));
    }

    const size_t n = fan.gradients.size();
    for (size_t k = 0; k < n; ++k)
        for (size_t l = k + 1; l < n; ++l)
            fan.max_rank_one_defect =
                std::max(fan.max_rank_one_defect, rank_one_defect(fan.gradients[k] - fan.gradients[l]));
    fan.min_independence = std::numeric_limits<double>::infinity();
    for (size_t k = 0; k < n; ++k)
        for (size_t l = k + 1; l < n; ++l)
            for (size_t m = l + 1; m < n; ++m)
                fan.min_independence = std::min(
                    fan.min_independence, min_singular_3(fan.gradients[k], fan.gradients[l], fan.gradients[m]));
    if (n < 3) fan.min_independence = 0.0;
    if (fan.vectors.size() >= 3) fan.normals_triple_product = triple(fan.vectors[0], fan.vectors[1], fan.vectors[2]);

    if (fan.max_rank_one_defect > tol.rank_one)
        throw Error(ErrorCode::RankOneViolation, "gradient differences are not rank one; witnesses inconsistent");
    return fan;
}

// ---------------------------------------------------------------- projection

const char* to_string(ManifoldTarget t) {
    switch (t) {
        case ManifoldTarget::CC_TypeII: return "CC_typeII";
        case ManifoldTarget::CC_TypeI: return "CC_typeI";
        case ManifoldTarget::CC_Any: return "CC";
        case ManifoldTarget::Star_TypeII: return "Star_typeII";
        case ManifoldTarget::HalfStar_TypeII: return "HalfStar_typeII";
        case ManifoldTarget::Star_TypeI: return "Star_typeI";
        case ManifoldTarget::HalfStar_TypeI: return "HalfStar_typeI";
    }
    return "?";
}

ManifoldTarget manifold_target_from_string(const std::string& s) {
    for (auto t : {ManifoldTarget::CC_TypeII, ManifoldTarget::CC_TypeI, ManifoldTarget::CC_Any,
                   ManifoldTarget::Star_TypeII, ManifoldTarget::HalfStar_TypeII, ManifoldTarget::Star_TypeI,
                   ManifoldTarget::HalfStar_TypeI}) {
        std::string name = to_string(t);
        std::string lower = name, in = s;
        std::transform(lower.begin(), lower.end(), lower.begin(), ::tolower);
        std::transform(in.begin(), in.end(), in.begin(), ::tolower);
        if (in == lower) return t;
    }
    throw Error(ErrorCode::InvalidInput, "unknown manifold target '" + s + "'");
}

namespace {

enum class Con { L2Block, L2D, CCIIA, CCIIB, CCIA, CCIB, StarFullII, StarHalfII, StarFullI, StarHalfI };

const char* con_name(Con c) {
    switch (c) {
        case Con::L2Block: return "l2-block";
        case Con::L2D: return "d=1";
        case Con::CCIIA: return "|Ue|=1 (1,0,1)";
        case Con::CCIIB: return "|Ue|=1 (0,1,1)";
        case Con::CCIA: return "|U^-1e|=1 (1,0,1)";
        case Con::CCIB: return "|U^-1e|=1 (0,1,1)";
        case Con::StarFullII: return "star II";
        case Con::StarHalfII: return "half-star II";
        case Con::StarFullI: return "star I";
        case Con::StarHalfI: return "half-star I";
    }
    return "?";
}

template <class T>
T eval_con(Con c, const std::array<T, 4>& x) {
    const T a = x[0], b = x[1], cc = x[2], d = x[3];
    auto star = [&](double k, bool type_i) {
        // λ = a + c − 1 once 1 is a block eigenvalue
        const T l = a + cc - 1.0;
        const T tail = -(d - l) * (d - l) * (1.0 - d * d);
        if (type_i) return 2.0 * k * d * d * l * l - k * l * l - k * d * d + tail;
        return k * d * d * d * d + k * d * d * l * l - 2.0 * k * d * d + tail;
    };
    switch (c) {
        case Con::L2Block: return (a - 1.0) * (cc - 1.0) - b * b;
        case Con::L2D: return d - 1.0;
        case Con::CCIIA: return a * a + b * b + d * d - 2.0;
        case Con::CCIIB: return b * b + cc * cc + d * d - 2.0;
        case Con::CCIA: {
            const T del = a * cc - b * b;
            return (cc * cc + b * b) / (del * del) + 1.0 / (d * d) - 2.0;
        }
        case Con::CCIB: {
            const T del = a * cc - b * b;
            return (a * a + b * b) / (del * del) + 1.0 / (d * d) - 2.0;
        }
        case Con::StarFullII: return star(1.0, false);
        case Con::StarHalfII: return star(4.0, false);
        case Con::StarFullI: return star(1.0, true);
        case Con::StarHalfI: return star(4.0, true);
    }
    return T(0.0);
}

using X4 = std::array<double, 4>;

// complex-step gradient, exact to rounding
X4 con_grad(Con c, const X4& x) {
    X4 g{};
    const double h = 1e-30;
    for (int k = 0; k < 4; ++k) {
        std::array<std::complex<double>, 4> xc;
        for (int l = 0; l < 4; ++l) xc[l] = x[l];
        xc[k] += std::complex<double>(0.0, h);
        g[k] = eval_con(c, xc).imag() / h;
    }
    return g;
}

std::array<X4, 4> con_hess(Con c, const X4& x) {
    std::array<X4, 4> h{};
    const double step = 1e-5;
    for (int l = 0; l < 4; ++l) {
        X4 xp = x, xm = x;
        xp[l] += step;
        xm[l] -= step;
        const X4 gp = con_grad(c, xp), gm = con_grad(c, xm);
        for (int k = 0; k < 4; ++k) h[k][l] = (gp[k] - gm[k]) / (2.0 * step);
    }
    for (int k = 0; k < 4; ++k)
        for (int l = k + 1; l < 4; ++l) h[k][l] = h[l][k] = 0.5 * (h[k][l] + h[l][k]);
    return h;
}

// Dense Gaussian elimination with partial pivoting, n ≤ 8.
bool solve_dense(std::vector<double> a, std::vector<double>& b, int n) {
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
        if (a[piv * n + col] == 0.0) return false;
        if (piv != col) {
            for (int k = 0; k < n; ++k) std::swap(a[piv * n + k], a[col * n + k]);
            std::swap(b[piv], b[col]);
        }
        for (int r = col + 1; r < n; ++r) {
            const double f = a[r * n + col] / a[col * n + col];
            for (int k = col; k < n; ++k) a[r * n + k] -= f * a[col * n + k];
            b[r] -= f * b[col];
        }
    }
    for (int r = n - 1; r >= 0; --r) {
        double s = b[r];
        for (int k = r + 1; k < n; ++k) s -= a[r * n + k] * b[k];
        b[r] = s / a[r * n + r];
    }
    return true;
}

// weights of the Frobenius distance on (a, b, c, d): b appears twice
constexpr X4 kWeight = {1.0, 2.0, 1.0, 1.0};

double weighted_dist2(const X4& x, const X4& x0) {
    double s = 0.0;
    for (int k = 0; k < 4; ++k) s += kWeight[k] * (x[k] - x0[k]) * (x[k] - x0[k]);
    return s;
}

double max_violation(const std::vector<Con>& cons, const X4& x) {
    double v = 0.0;
    for (Con c : cons) v = std::max(v, std::abs(eval_con(c, x)));
    return v;
}

// Penalty stage: Levenberg–Marquardt on [√W(x − x0); √P g(x)].
X4 penalty_solve(const std::vector<Con>& cons, const X4& x0, X4 x, int max_iter, int& iters) {
    const double sp = std::sqrt(1e6);
    const int m = 4 + static_cast<int>(cons.size());
    auto residual = [&](const X4& y) {
        std::vector<double> r(m);
        for (int k = 0; k < 4; ++k) r[k] = std::sqrt(kWeight[k]) * (y[k] - x0[k]);
        for (size_t i = 0; i < cons.size(); ++i) r[4 + i] = sp * eval_con(cons[i], y);
        return r;
    };
    auto cost_of = [](const std::vector<double>& r) {
        double s = 0.0;
        for (double v : r) s += v * v;
        return s;
    };
    std::vector<double> r = residual(x);
    double cost = cost_of(r);
    double damping = 1e-3;
    for (int it = 0; it < max_iter; ++it) {
        ++iters;
        std::vector<double> jac(m * 4, 0.0);
        for (int k = 0; k < 4; ++k) jac[k * 4 + k] = std::sqrt(kWeight[k]);
        for (size_t i = 0; i < cons.size(); ++i) {
            const X4 g = con_grad(cons[i], x);
            for (int k = 0; k < 4; ++k) jac[(4 + i) * 4 + k] = sp * g[k];
        }
        std::vector<double> jtj(16, 0.0), jtr(4, 0.0);
        for (int row = 0; row < m; ++row)
            for (int k = 0; k < 4; ++k) {
                jtr[k] += jac[row * 4 + k] * r[row];
                for (int l = 0; l < 4; ++l) jtj[k * 4 + l] += jac[row * 4 + k] * jac[row * 4 + l];
            }
        bool improved = false;
        for (int attempt = 0; attempt < 20; ++attempt) {
            std::vector<double> h = jtj;
            for (int k = 0; k < 4; ++k) h[k * 4 + k] *= 1.0 + damping;
            std::vector<double> step = {-jtr[0], -jtr[1], -jtr[2], -jtr[3]};
            if (!solve_dense(h, step, 4)) {
                damping *= 10.0;
                continue;
            }
            X4 trial;
            for (int k = 0; k < 4; ++k) trial[k] = x[k] + step[k];
            const std::vector<double> rt = residual(trial);
            const double ct = cost_of(rt);
            if (ct < cost) {
                double moved = 0.0;
                for (int k = 0; k < 4; ++k) moved = std::max(moved, std::abs(step[k]));
                x = trial;
                r = rt;
                cost = ct;
                damping = std::max(damping * 0.1, 1e-12);
                improved = true;
                if (moved < 1e-15) return x;
                break;
            }
            damping *= 10.0;
        }
        if (!improved) break;
    }
    return x;
}

// Newton on the KKT system of min ½(x−x0)ᵀW(x−x0) s.t. g(x) = 0.
bool kkt_polish(const std::vector<Con>& cons, const X4& x0, X4& x, const Tolerances& tol, int& iters) {
    const int k = static_cast<int>(cons.size());
    const int n = 4 + k;
    // multipliers from the least-squares fit of ∇L = 0
    std::vector<double> nu(k, 0.0);
    {
        std::vector<X4> jac(k);
        for (int i = 0; i < k; ++i) jac[i] = con_grad(cons[i], x);
        std::vector<double> jjt(k * k, 0.0), rhs(k, 0.0);
        for (int i = 0; i < k; ++i) {
            for (int l = 0; l < k; ++l)
                for (int q = 0; q < 4; ++q) jjt[i * k + l] += jac[i][q] * jac[l][q];
            for (int q = 0; q < 4; ++q) rhs[i] -= jac[i][q] * kWeight[q] * (x[q] - x0[q]);
        }
        if (solve_dense(jjt, rhs, k)) nu = rhs;
    }
    for (int it = 0; it < 50; ++it) {
        ++iters;
        std::vector<X4> jac(k);
        std::vector<double> g(k);
        for (int i = 0; i < k; ++i) {
            jac[i] = con_grad(cons[i], x);
            g[i] = eval_con(cons[i], x);
        }
        std::vector<double> a(n * n, 0.0), rhs(n, 0.0);
        for (int q = 0; q < 4; ++q) {
            a[q * n + q] = kWeight[q];
            rhs[q] = -kWeight[q] * (x[q] - x0[q]);
        }
        for (int i = 0; i < k; ++i) {
            const auto h = con_hess(cons[i], x);
            for (int q = 0; q < 4; ++q) {
                for (int l = 0; l < 4; ++l) a[q * n + l] += nu[i] * h[q][l];
                a[q * n + 4 + i] = jac[i][q];
                a[(4 + i) * n + q] = jac[i][q];
                rhs[q] -= nu[i] * jac[i][q];
            }
            rhs[4 + i] = -g[i];
        }
        if (!solve_dense(a, rhs, n)) return false;
        double moved = 0.0;
        for (int q = 0; q < 4; ++q) {
            x[q] += rhs[q];
            moved = std::max(moved, std::abs(rhs[q]));
        }
        for (int i = 0; i < k; ++i) nu[i] += rhs[4 + i];
        if (!std::isfinite(moved)) return false;
        if (moved <= 1e-15 && max_violation(cons, x) <= tol.projection) return true;
        if (moved <= 1e-13 && it > 2 && max_violation(cons, x) <= tol.projection) return true;
    }
    return max_violation(cons, x) <= tol.projection;
}

struct ConstraintSet {
    std::vector<Con> cons;
    std::string name() const {
        std::string s;
        for (Con c : cons) s += (s.empty() ? "" : " + ") + std::string(con_name(c));
        return s;
    }
};

std::vector<ConstraintSet> constraint_sets(ManifoldTarget t) {
    auto cc_sets = [](Con ca, Con cb) {
        return std::vector<ConstraintSet>{{{Con::L2Block, ca}}, {{Con::L2Block, cb}}, {{Con::L2D, ca}}, {{Con::L2D, cb}}};
    };
    auto star_sets = [](Con ca, Con cb, Con rel) {
        return std::vector<ConstraintSet>{{{Con::L2Block, ca, rel}}, {{Con::L2Block, cb, rel}}};
    };
    switch (t) {
        case ManifoldTarget::CC_TypeII: return cc_sets(Con::CCIIA, Con::CCIIB);
        case ManifoldTarget::CC_TypeI: return cc_sets(Con::CCIA, Con::CCIB);
        case ManifoldTarget::CC_Any: {
            auto s = cc_sets(Con::CCIIA, Con::CCIIB);
            auto s1 = cc_sets(Con::CCIA, Con::CCIB);
            s.insert(s.end(), s1.begin(), s1.end());
            return s;
        }
        case ManifoldTarget::Star_TypeII: return star_sets(Con::CCIIA, Con::CCIIB, Con::StarFullII);
        case ManifoldTarget::HalfStar_TypeII: return star_sets(Con::CCIIA, Con::CCIIB, Con::StarHalfII);
        case ManifoldTarget::Star_TypeI: return star_sets(Con::CCIA, Con::CCIB, Con::StarFullI);
        case ManifoldTarget::HalfStar_TypeI: return star_sets(Con::CCIA, Con::CCIB, Con::StarHalfI);
    }
    return {};
}

// the projected point must still have 1 as its middle eigenvalue
bool admissible(const X4& x) {
    const MonoclinicParams p{x[0], x[1], x[2], x[3]};
    const Mat3 u = p.u1();
    if (!is_positive_definite(u)) return false;
    return std::abs(eig_sym3(u).values[1] - 1.0) <= 1e-8;
}

}  // namespace

ProjectionResult project_to_manifold(const MonoclinicParams& measured, ManifoldTarget target, const Tolerances& tol,
                                     const ProjectionOptions& opt) {
    measured.validate();
    const X4 x0 = {measured.a, measured.b, measured.c, measured.d};

    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> gauss(0.0, opt.spread);
    std::vector<X4> starts = {x0};
    for (int s = 1; s < opt.starts; ++s) {
        X4 x = x0;
        for (int k = 0; k < 4; ++k) x[k] += gauss(rng);
        starts.push_back(x);
    }

    ProjectionResult best;
    best.target = target;
    best.distance = std::numeric_limits<double>::infinity();
    int total_iters = 0;
    // closest candidate that nearly meets its constraints but fails the polish
    double unconverged = std::numeric_limits<double>::infinity();
    for (const auto& set : constraint_sets(target)) {
        for (const auto& s : starts) {
            int iters = 0;
            X4 x = penalty_solve(set.cons, x0, s, tol.projection_max_iter, iters);
            const bool polished = kkt_polish(set.cons, x0, x, tol, iters);
            total_iters += iters;
            if (!polished) {
                if (max_violation(set.cons, x) <= 1e-6 && admissible(x))
                    unconverged = std::min(unconverged, std::sqrt(weighted_dist2(x, x0)));
                continue;
            }
            if (!admissible(x)) continue;
            const double dist = std::sqrt(weighted_dist2(x, x0));
            if (dist < best.distance) {
                best.distance = dist;
                best.params = {x[0], x[1], x[2], x[3]};
                best.branch = set.name();
                best.constraint_residual = max_violation(set.cons, x);
            }
        }
    }
    best.iterations = total_iters;
    if (!std::isfinite(best.distance))
        throw Error(ErrorCode::NonConvergence, std::string("projection onto ") + to_string(target) + " did not converge");
    if (unconverged < best.distance * (1.0 - 1e-6))
        throw Error(ErrorCode::NonConvergence, std::string("projection onto ") + to_string(target) +
                                                   ": a closer candidate failed to meet the constraint tolerance");
    best.matrix = best.params.u1();
    return best;
}

ProjectionResult project_to_manifold(const Mat3& measured, ManifoldTarget target, const Tolerances& tol,
                                     const ProjectionOptions& opt) {
    const double scale = frobenius(measured);
    if (std::abs(measured(0, 2)) > tol.symmetry * scale || std::abs(measured(1, 2)) > tol.symmetry * scale ||
        std::abs(measured(2, 0)) > tol.symmetry * scale || std::abs(measured(2, 1)) > tol.symmetry * scale ||
        !is_symmetric(measured, tol.symmetry))
        throw Error(ErrorCode::InvalidInput, "projection needs the zero pattern [[a,b,0],[b,c,0],[0,0,d]]");
    return project_to_manifold(MonoclinicParams{measured(0, 0), measured(0, 1), measured(1, 1), measured(2, 2)}, target,
                               tol, opt);
}

}  // namespace cofkit
