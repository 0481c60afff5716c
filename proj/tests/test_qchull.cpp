#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace cofkit;

namespace {

const MonoclinicParams kZn{1.0015, 0.0073, 1.0591, 0.9363};

TwinPair pair_twins(const MonoclinicParams& p, int j) {
    const VariantSet vs = monoclinic_variants(p);
    const auto axes = twofold_axes(vs.at(1), vs.at(j));
    return twin_solutions(vs.at(1), axes.at(0).e);
}

// a⊗n equal up to the joint sign flip, which leaves the product unchanged
double best_match(const IdentityConnection& c, const std::vector<oracle::RankOne>& ref) {
    double best = 1e300;
    for (const auto& r : ref) best = std::min(best, max_abs_diff(outer(c.a, c.n), outer(r.a, r.n)));
    return best;
}

}  // namespace

TEST(CompoundHull, FourConnectionsWithLemmaValues) {
    const double lam = 1.08, d = 0.95;
    const MonoclinicParams p = oracle::compound_params(lam, d, 1.02);
    const VariantSet vs = monoclinic_variants(p);
    const double dd = static_cast<double>(oracle::sym_eigenvalues(vs.at(1))[0] * oracle::sym_eigenvalues(vs.at(1))[1] *
                                          oracle::sym_eigenvalues(vs.at(1))[2]);
    EXPECT_NEAR(dd, lam * d, 1e-14);
    for (int j : {2, 3, 4}) {
        const auto cs = compound_identity_connections(p, 1, j);
        ASSERT_EQ(cs.size(), 4u) << j;
        const Vec3 v = oracle::sym_eigenvector(vs.at(1), d);
        EXPECT_LT(norm(vs.at(j) * v - d * v), 1e-12);
        int from_i = 0, from_j = 0;
        for (const auto& c : cs) {
            EXPECT_TRUE(std::isnan(c.mu));
            EXPECT_NEAR(norm(c.a) * norm(c.n), std::abs(dd - d * d) / d, 1e-10);
            const double n3 = dot(c.n, v) / norm(c.n);
            EXPECT_NEAR(n3 * n3, d * d * (1 - d * d) / (dd * dd - d * d * d * d), 1e-10);
            const Mat3 f = Mat3::identity() + outer(c.a, c.n);
            const Mat3 well = c.well == 1 ? vs.at(1) : vs.at(j);
            ASSERT_TRUE(c.well == 1 || c.well == j);
            (c.well == 1 ? from_i : from_j)++;
            EXPECT_LT(max_abs_diff(transpose(f) * f, well * well), 1e-12);
            // the same interface as the austenite/pure-variant habit plane
            EXPECT_LT(best_match(c, oracle::ball_james(well)), 1e-10);
            EXPECT_TRUE(two_well_membership(f, vs.at(1), vs.at(j)));
        }
        EXPECT_EQ(from_i, 2);
        EXPECT_EQ(from_j, 2);
    }
}

TEST(CompoundHull, Preconditions) {
    EXPECT_EQ(oracle::code_of([] { compound_identity_connections(kZn, 1, 2); }), ErrorCode::CC1Violated);
    const MonoclinicParams deg = oracle::compound_params(1.08, 1.0, 1.02);
    EXPECT_EQ(oracle::code_of([&] { compound_identity_connections(deg, 1, 2); }), ErrorCode::DegenerateD);
    const MonoclinicParams p = oracle::compound_params(1.08, 0.95, 1.02);
    EXPECT_EQ(oracle::code_of([&] { compound_identity_connections(p, 1, 1); }), ErrorCode::IdenticalVariants);
    EXPECT_EQ(oracle::code_of([&] { compound_identity_connections(p, 1, 5); }), ErrorCode::InvalidInput);
}

TEST(TwoWell, AnalyticAgreesWithSampling) {
    const MonoclinicParams p = oracle::compound_params(1.08, 0.95, 1.02);
    const VariantSet vs = monoclinic_variants(p);
    const Mat3& a = vs.at(1);
    const Mat3& b = vs.at(2);
    const Vec3 v = oracle::sym_eigenvector(a, 0.95);
    const Vec3 x = normalized(cross(v, Vec3{0.3, 0.1, 0.9}));
    const Vec3 y = cross(v, x);
    const double det_a = det(a);
    std::mt19937_64 rng(5);
    int members = 0, outsiders = 0;
    for (int k = 0; k < 60; ++k) {
        // FᵀF keeps v with eigenvalue d² and det F = det A; the in-plane part varies
        std::uniform_real_distribution<double> s(0.98, 1.1), th(0.0, 3.14159);
        const double s1 = s(rng), s2 = det_a / (0.95 * s1);
        const double t = th(rng);
        const Vec3 p1 = std::cos(t) * x + std::sin(t) * y, p2 = -std::sin(t) * x + std::cos(t) * y;
        const Mat3 g = s1 * outer(p1, p1) + s2 * outer(p2, p2) + 0.95 * outer(v, v);
        const Mat3 f = oracle::random_rotation(rng) * g;
        const MembershipResult r = two_well_membership_detail(f, a, b);
        EXPECT_LT(r.det_dev, 1e-14);
        EXPECT_LT(r.axis_dev, 1e-12);
        if (std::abs(r.margin) < 1e-3) continue;
        EXPECT_EQ(r.member, two_well_membership_sampled(f, a, b)) << r.margin;
        (r.member ? members : outsiders)++;
    }
    EXPECT_GT(members, 0);
    EXPECT_GT(outsiders, 0);
    // the wells and their laminates are members; a dilated well is not
    EXPECT_TRUE(two_well_membership(a, a, b));
    EXPECT_TRUE(two_well_membership(oracle::random_rotation(rng) * b, a, b));
    EXPECT_FALSE(two_well_membership(1.1 * a, a, b));
}

TEST(TwoWell, Errors) {
    const Mat3 a = Mat3::diag(0.95, 1.0, 1.05);
    EXPECT_EQ(oracle::code_of([&] { two_well_membership(a, a, Mat3::diag(0.95, 1.0, 1.06)); }),
              ErrorCode::WellsIncompatible);
    Mat3 ns = a;
    ns(0, 1) = 0.01;
    EXPECT_EQ(oracle::code_of([&] { two_well_membership(a, ns, a); }), ErrorCode::NonSymmetric);
    // same spectrum, no common eigenvector
    const Mat3 r = rotation_axis_angle({1, 1, 1}, 0.7);
    const Mat3 b = sym(r * Mat3::diag(0.95, 1.0, 1.05) * transpose(r));
    EXPECT_EQ(oracle::code_of([&] { two_well_membership(a, a, b); }), ErrorCode::WellsIncompatible);
}

TEST(TwinHull, LaminatesAreMembers) {
    const auto p = oracle::cc_params(TwinKind::TypeII, 1.07, 0.93);
    ASSERT_TRUE(p);
    const TwinPair tp = pair_twins(*p, 11);
    const Mat3 u = p->u1();
    for (int k = 0; k <= 10; ++k) {
        const double mu = k / 10.0;
        const Mat3 f = u + mu * outer(tp.type_ii.b, tp.type_ii.m);
        const TwinHullMembership m = twin_hull_membership(f, u, tp.type_ii);
        EXPECT_TRUE(m.member) << mu;
        EXPECT_NEAR(m.gamma, 1.0, 1e-10);
        EXPECT_LT(m.constraint_dev, 1e-10);
    }
    EXPECT_FALSE(twin_hull_membership(1.05 * u, u, tp.type_ii).member);
}

TEST(TwinHull, IdentityFamilyOfCofactorTwin) {
    const auto p = oracle::cc_params(TwinKind::TypeII, 1.07, 0.93);
    ASSERT_TRUE(p);
    const TwinPair tp = pair_twins(*p, 11);
    const Mat3 u = p->u1();
    std::vector<double> grid;
    for (int k = 0; k <= 10; ++k) grid.push_back(k / 10.0);
    const IdentityFamily fam = typeI_II_identity_family(u, tp.type_ii, tp.type_i, grid);
    EXPECT_TRUE(fam.exhaustive);
    EXPECT_EQ(fam.connections.size() + fam.merged, 2 * grid.size());
    EXPECT_NEAR(fam.fit.fitted, fam.fit.closed_form, 1e-6 * std::abs(fam.fit.closed_form));
    EXPECT_LT(fam.fit.max_beta_spread, 1e-10);
    for (const auto& c : fam.connections) {
        const Mat3 f = Mat3::identity() + outer(c.a, c.n);
        EXPECT_TRUE(twin_hull_membership(f, u, tp.type_ii).member);
        EXPECT_LT(c.residual, 1e-10);
        // FᵀF equals the laminate metric at its fraction
        const Mat3 lam = u + c.mu * outer(tp.type_ii.b, tp.type_ii.m);
        EXPECT_LT(max_abs_diff(transpose(f) * f, transpose(lam) * lam), 1e-10);
    }
}

TEST(TwinHull, FamilyNeedsCofactorTwin) {
    const TwinPair tp = pair_twins(kZn, 5);
    EXPECT_EQ(oracle::code_of([&] { typeI_II_identity_family(kZn.u1(), tp.type_ii, tp.type_i, {0.5}); }),
              ErrorCode::HypothesisViolated);
}

TEST(TwinHull, ScanClosedFormDescribesF1) {
    const auto p = oracle::cc_params(TwinKind::TypeI, 1.1, 0.94);
    ASSERT_TRUE(p);
    const TwinPair tp = pair_twins(*p, 11);
    const HullRegion reg = hull_region(p->u1(), tp.type_i);
    EXPECT_GT(reg.delta, 0.0);
    const auto scan = hull_scan(reg, 21, 21);
    ASSERT_EQ(scan.size(), 21u * 21u);
    const F1Fit fit = fit_f1(scan, reg, conjugate_c0(p->u1(), tp.type_ii));
    EXPECT_LT(fit.max_model_dev, 1e-9);
    EXPECT_GT(fit.min_interior_abs, 0.0);
    for (const auto& row : scan) EXPECT_NEAR(reg.f1(((1 + row.beta * row.beta) / row.gamma), row.beta, row.gamma), row.f1, 1e-14);
}
