#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace cofkit;

namespace {

const MonoclinicParams kZn{1.0015, 0.0073, 1.0591, 0.9363};

}  // namespace

TEST(StarRelations, BranchesSolveTheirRelation) {
    for (const auto& br : star_branches()) {
        const double hi = std::isfinite(br.hi) ? br.hi : br.lo + 2.0;
        for (int k = 1; k < 20; ++k) {
            const double x = br.lo + (hi - br.lo) * k / 20.0;
            const double lam = star_branch_lambda(br, x);
            const double r = star_relation_residual(lam, x, br.kind, br.variant, br.scase);
            const double s = star_relation_scale(lam, x, br.kind, br.variant, br.scase);
            EXPECT_LE(std::abs(r) / s, 1e-12) << br.name << " x=" << x;
        }
    }
}

TEST(StarRelations, CaseOfEqualEigenvalueDoesNotMatter) {
    for (TwinKind k : {TwinKind::TypeI, TwinKind::TypeII})
        for (StarVariant v : {StarVariant::Half, StarVariant::Full})
            EXPECT_EQ(star_relation_residual(1.07, 0.93, k, v, StarCase::Lambda1EqD),
                      star_relation_residual(1.07, 0.93, k, v, StarCase::Lambda3EqD));
}

TEST(StarRelations, HalfRelationAtDOneClosedForm) {
    // λ₁ = (4λ₃ ± √5(λ₃² − 1)) / (5λ₃² − 1)
    for (double l3 : {1.02, 1.1, 1.4}) {
        const double plus = (4 * l3 + std::sqrt(5.0) * (l3 * l3 - 1)) / (5 * l3 * l3 - 1);
        const double minus = (4 * l3 - std::sqrt(5.0) * (l3 * l3 - 1)) / (5 * l3 * l3 - 1);
        EXPECT_NEAR(star_branch_lambda(star_branch("II-half-d1-plus"), l3), plus, 1e-15);
        EXPECT_NEAR(star_branch_lambda(star_branch("II-half-d1-minus"), l3), minus, 1e-15);
        for (double l1 : {plus, minus})
            EXPECT_NEAR(star_relation_residual(l1, l3, TwinKind::TypeI, StarVariant::Half, StarCase::DEqualsOne), 0.0,
                        1e-14);
    }
}

TEST(StarRelations, DomainAndNameErrors) {
    const StarBranch& br = star_branch("II-full-l1eqd-minus");
    EXPECT_EQ(oracle::code_of([&] { star_branch_lambda(br, br.lo - 0.01); }), ErrorCode::DomainViolation);
    EXPECT_EQ(oracle::code_of([&] { star_branch_lambda(br, 1.0); }), ErrorCode::DomainViolation);
    EXPECT_EQ(oracle::code_of([] { star_branch("no-such-branch"); }), ErrorCode::InvalidInput);
    EXPECT_EQ(oracle::code_of([] { star_parameter_curves(TwinKind::TypeII, StarVariant::Full, {0.3}); }),
              ErrorCode::DomainViolation);
}

TEST(StarRelations, ParameterCurvesSkipDEqualsOne) {
    const auto s = star_parameter_curves(TwinKind::TypeII, StarVariant::Full, {0.92, 0.95, 1.1});
    ASSERT_FALSE(s.empty());
    for (const auto& c : s) {
        EXPECT_EQ(c.branch.find("-d1-"), std::string::npos);
        EXPECT_LE(c.relative_residual, 1e-10);
        EXPECT_GT(c.lambda, 0.5);
    }
    EXPECT_TRUE(star_parameter_curves(TwinKind::TypeII, StarVariant::Full, {}).empty());
}

TEST(StarRelations, DetOneCurve) {
    const auto s = figure_curve("det-one", {0.9, 0.95, 1.05});
    ASSERT_EQ(s.size(), 3u);
    for (const auto& c : s) EXPECT_NEAR(c.lambda, 1.0 / c.x, 1e-15);
    EXPECT_EQ(figure_curve_names().size(), 4u);
}

TEST(StarRelations, CurveDistance) {
    const StarBranch& br = star_branch("II-full-l1eqd-minus");
    const double lam = star_branch_lambda(br, 0.93);
    EXPECT_LT(star_curve_distance(lam, 0.93, TwinKind::TypeII, StarVariant::Full), 1e-9);
    EXPECT_NEAR(star_curve_distance(lam + 0.01, 0.93, TwinKind::TypeII, StarVariant::Full), 0.01, 0.005);
}

TEST(StarClassify, SyntheticStarsAndHalfStars) {
    for (const auto& name : oracle::physical_star_branches()) {
        const StarBranch& br = star_branch(name);
        const MonoclinicParams p = oracle::star_params(name, 0.4);
        const EigenPair ep = star_eigen_pair(p);
        for (int j : {11, 12}) {
            const StarReport r = star_classify(p, 1, j, br.kind);
            if (br.variant == StarVariant::Full) {
                EXPECT_EQ(r.classification, StarClass::Star) << name;
                EXPECT_EQ(r.witnesses.size(), 3u);
                EXPECT_NEAR(r.mu_star, std::min(ep.lambda, ep.d) / (ep.lambda + ep.d), 1e-9) << name;
            } else {
                EXPECT_EQ(r.classification, StarClass::HalfStar) << name;
                EXPECT_EQ(r.witnesses.size(), 2u);
                EXPECT_NEAR(r.mu_star, 0.5, 1e-9);
            }
            for (const auto& w : r.witnesses) {
                // Q w(μ*) = χ w(μ*)
                const Vec3 c = r.common(r.mu_star);
                EXPECT_LT(norm(w.q * c - w.chi * c), 1e-8 * std::max(1.0, norm(c)));
            }
        }
    }
}

TEST(StarClassify, FanIsRankOneConnected) {
    for (const auto& name : oracle::physical_star_branches()) {
        const StarBranch& br = star_branch(name);
        const StarReport r = star_classify(oracle::star_params(name, 0.4), 1, 11, br.kind);
        const LaminateFan fan = star_laminates(r);
        ASSERT_EQ(fan.gradients.size(), r.witnesses.size() + 1);
        for (std::size_t i = 0; i < fan.gradients.size(); ++i) {
            // each laminate meets the austenite: F − 1 rank one
            EXPECT_LT(oracle::second_singular_value(fan.gradients[i] - Mat3::identity()), 1e-14);
            for (std::size_t k = i + 1; k < fan.gradients.size(); ++k)
                EXPECT_LT(oracle::second_singular_value(fan.gradients[i] - fan.gradients[k]), 1e-8) << name;
        }
        EXPECT_GT(fan.min_independence, 1e-6);
    }
}

TEST(StarClassify, CofactorButNotStar) {
    const auto p = oracle::cc_params(TwinKind::TypeII, 1.07, 0.93);
    ASSERT_TRUE(p);
    const StarReport r = star_classify(*p, 1, 11, TwinKind::TypeII);
    EXPECT_EQ(r.classification, StarClass::None);
    EXPECT_TRUE(std::isnan(r.mu_star));
    EXPECT_EQ(oracle::code_of([&] { star_laminates(r); }), ErrorCode::InvalidInput);
    EXPECT_EQ(oracle::code_of([&] { star_laminates(r, {}, true); }), ErrorCode::RankOneViolation);
}

TEST(StarClassify, GateAndForce) {
    EXPECT_EQ(oracle::code_of([] { star_classify(kZn, 1, 5, TwinKind::TypeII); }), ErrorCode::NotACofactorTwin);
    EXPECT_EQ(oracle::code_of([] { star_classify(kZn, 1, 2, TwinKind::TypeII, {}, true); }), ErrorCode::NotACofactorTwin);
    const StarReport r = star_classify(kZn, 1, 5, TwinKind::TypeII, {}, true);
    EXPECT_TRUE(r.forced);
    EXPECT_EQ(r.classification, StarClass::None);
    EXPECT_NEAR(r.full_curve_distance, 6.5665e-4, 1e-7);
    EXPECT_FALSE(r.near_witnesses.empty());
}

TEST(Projection, OnManifoldInputStays) {
    const MonoclinicParams p = *preset("ZnAuCu-cc-target").params;
    const ProjectionResult r = project_to_manifold(p, ManifoldTarget::CC_TypeII);
    EXPECT_LT(r.distance, 1e-12);
    const auto q = oracle::star_params("II-full-l1eqd-minus", 0.5);
    EXPECT_LT(project_to_manifold(q, ManifoldTarget::Star_TypeII).distance, 1e-12);
}

TEST(Projection, ResultLiesOnTheManifold) {
    const ProjectionResult r = project_to_manifold(kZn, ManifoldTarget::CC_TypeII);
    EXPECT_EQ(r.assumed_norm, "frobenius");
    const Mat3 u = r.params.u1();
    EXPECT_NEAR(static_cast<double>(oracle::sym_eigenvalues(u)[1]), 1.0, 1e-12);
    // the (1,5) type II twin of the projected stretch satisfies CC2
    const VariantSet vs = monoclinic_variants(r.params);
    const auto tw = oracle::twins(vs.at(1), vs.at(5));
    const Mat3 k = oracle::cofactor(u * u - Mat3::identity());
    double cc2 = 1e300;
    for (const auto& t : tw) cc2 = std::min(cc2, std::abs(dot(t.b, u * (k * t.m))));
    EXPECT_LT(cc2, 1e-12);
    EXPECT_NEAR(r.distance, frobenius(u - kZn.u1()), 1e-15);
}

TEST(Projection, SeedDeterminism) {
    ProjectionOptions o;
    o.seed = 42;
    const auto a = project_to_manifold(kZn, ManifoldTarget::Star_TypeII, {}, o);
    const auto b = project_to_manifold(kZn, ManifoldTarget::Star_TypeII, {}, o);
    EXPECT_EQ(a.params, b.params);
    EXPECT_EQ(a.iterations, b.iterations);
}

TEST(Projection, TargetsAndPattern) {
    EXPECT_EQ(manifold_target_from_string("star_typeii"), ManifoldTarget::Star_TypeII);
    EXPECT_EQ(manifold_target_from_string("CC"), ManifoldTarget::CC_Any);
    EXPECT_EQ(oracle::code_of([] { manifold_target_from_string("nowhere"); }), ErrorCode::InvalidInput);
    Mat3 m = kZn.u1();
    m(0, 2) = m(2, 0) = 0.01;
    EXPECT_EQ(oracle::code_of([&] { project_to_manifold(m, ManifoldTarget::CC_Any); }), ErrorCode::InvalidInput);
}
