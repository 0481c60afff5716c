#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cofkit/cofactor.hpp"
#include "cofkit/lattice.hpp"
#include "cofkit/linalg3.hpp"
#include "cofkit/tolerances.hpp"
#include "cofkit/twinning.hpp"

namespace cofkit {

enum class StarVariant { Half, Full };
enum class StarCase { Lambda1EqD, Lambda3EqD, DEqualsOne };
enum class StarClass { None, HalfStar, Star };

const char* to_string(StarVariant v);
const char* to_string(StarCase c);
const char* to_string(StarClass c);

// Signed residual of the eigenvalue relation for a star (Full) or half-star
// twin. λ is the eigenvalue of U other than 1 and d. The relation does not
// depend on which of λ₁, λ₃ equals d, so Lambda1EqD and Lambda3EqD agree.
// For DEqualsOne the arguments are (λ₁, λ₃) instead of (λ, d); the half
// relation is λ₁²(5λ₃²−1) − 8λ₁λ₃ + 5 − λ₃² for both kinds, the full one is
// the general relation at d = 1.
double star_relation_residual(double lambda, double d, TwinKind kind, StarVariant variant, StarCase scase);

// Sum of the magnitudes of the relation's terms. residual/scale is the
// relative residual, the meaningful quantity near a pole of λ(d) where the
// terms grow like λ².
double star_relation_scale(double lambda, double d, TwinKind kind, StarVariant variant, StarCase scase);

// One explicit branch λ(x). x is d, except for DEqualsOne branches where x
// is λ₃ and the value is λ₁.
struct StarBranch {
    std::string name;
    TwinKind kind = TwinKind::TypeII;
    StarVariant variant = StarVariant::Full;
    StarCase scase = StarCase::Lambda1EqD;
    int sign = 1;     // the ± in front of the square root
    double lo = 0.0;  // open domain (lo, hi)
    double hi = 0.0;
};

const std::vector<StarBranch>& star_branches();
const StarBranch& star_branch(const std::string& name);  // InvalidInput when unknown

// Throws DomainViolation outside (lo, hi).
double star_branch_lambda(const StarBranch& br, double x);

struct CurveSample {
    std::string branch;
    double x = 0.0;       // d (or λ₃ on DEqualsOne branches)
    double lambda = 0.0;  // λ (or λ₁)
    double residual = 0.0;
    double relative_residual = 0.0;
};

// Every branch of the given kind/variant with d ≠ 1, evaluated at the grid
// points inside its domain. A grid point inside no branch domain raises
// DomainViolation. Samples with λ ≤ min_lambda are dropped.
std::vector<CurveSample> star_parameter_curves(TwinKind kind, StarVariant variant, const std::vector<double>& d_grid,
                                               double min_lambda = 0.5);

// A single named branch; every grid point must lie in its domain.
std::vector<CurveSample> star_branch_curve(const StarBranch& br, const std::vector<double>& grid,
                                           double min_lambda = 0.5);

// Extra curves of the λ–d figure: "det-one" (λ = 1/d), "cc-both",
// "ortho-cc-II", "ortho-cc-I".
std::vector<std::string> figure_curve_names();
std::vector<CurveSample> figure_curve(const std::string& name, const std::vector<double>& d_grid);

// Smallest Euclidean distance in the (λ, d) plane from the point to any
// branch of the given kind/variant with d ≠ 1.
double star_curve_distance(double lambda, double d, TwinKind kind, StarVariant variant);

// λ and d of a monoclinic U₁: d and the block eigenvalue farther from 1.
struct EigenPair {
    double lambda = 1.0;
    double d = 1.0;
};
EigenPair star_eigen_pair(const MonoclinicParams& p);

struct StarWitness {
    int q_index = 0;  // index into cubic_symmetry_group()
    Mat3 q;
    int chi = 1;
    double mu = 0.0;
    double residual = 0.0;  // ‖Q w − χ w‖
    Vec3 image;             // χ Q m (type II) or χ Q a (type I)
};

struct StarCandidate {
    double mu = 0.0;
    std::vector<StarWitness> witnesses;
    std::vector<double> triple_products;  // det[f, imgᵢ, imgⱼ] per witness pair, then det of the three images
    bool independent = false;
};

struct StarReport {
    StarClass classification = StarClass::None;
    TwinKind kind = TwinKind::TypeII;
    int i = 0, j = 0;
    double mu_star = 0.0;  // NaN when no witness group exists
    std::vector<StarWitness> witnesses;
    std::vector<double> triple_products;
    std::vector<StarCandidate> candidates;    // every μ group, ascending μ
    std::vector<StarWitness> near_witnesses;  // best (Q, χ) fits regardless of residual
    CofactorReport cc;
    bool forced = false;
    double lambda = 1.0, d = 1.0;
    double full_curve_distance = 0.0;
    double half_curve_distance = 0.0;

    // Geometry carried into star_laminates. fixed is m (type II) or a
    // (type I); the family is w(μ) = μ w_u + (1−μ) w_v.
    Mat3 u, v;
    Vec3 fixed;
    Vec3 w_u, w_v;
    std::vector<std::string> warnings;

    Vec3 common(double mu) const { return mu * w_u + (1.0 - mu) * w_v; }
};

// pair (i, j) is 1-based into the monoclinic variant set of p.
StarReport star_classify(const MonoclinicParams& p, int i, int j, TwinKind kind, const Tolerances& tol = {},
                         bool force = false);

struct LaminateFan {
    TwinKind kind = TwinKind::TypeII;
    double mu = 0.0;
    Vec3 common;                 // a* (type II) or n* (type I)
    std::vector<Vec3> vectors;   // m, χᵢQᵢm (or a, χᵢQᵢa)
    std::vector<Mat3> gradients; // F₀ and Fᵢ = Qᵢ F₀ Qᵢᵀ
    double max_rank_one_defect = 0.0;        // worst second singular value of Fᵢ − Fⱼ
    double min_independence = 0.0;           // worst smallest singular value over triples
    double normals_triple_product = 0.0;     // det of the first three vectors
};

// Throws RankOneViolation when a pairwise difference is not rank one. With
// force and no witnesses, the best near witnesses are used.
LaminateFan star_laminates(const StarReport& report, const Tolerances& tol = {}, bool force = false);

enum class ManifoldTarget { CC_TypeII, CC_TypeI, CC_Any, Star_TypeII, HalfStar_TypeII, Star_TypeI, HalfStar_TypeI };
const char* to_string(ManifoldTarget t);
ManifoldTarget manifold_target_from_string(const std::string& s);  // InvalidInput

struct ProjectionOptions {
    std::uint64_t seed = 0;
    int starts = 8;
    double spread = 1e-2;  // std-dev of the multi-start perturbations
};

struct ProjectionResult {
    ManifoldTarget target = ManifoldTarget::CC_TypeII;
    MonoclinicParams params;
    Mat3 matrix;
    double distance = 0.0;  // Frobenius distance to the measured matrix
    std::string branch;     // constraint set that attained it
    double constraint_residual = 0.0;
    int iterations = 0;
    std::string assumed_norm = "frobenius";
};

ProjectionResult project_to_manifold(const MonoclinicParams& measured, ManifoldTarget target,
                                     const Tolerances& tol = {}, const ProjectionOptions& opt = {});

// Matrix form; U must have the zero pattern of U₁ (InvalidInput otherwise).
ProjectionResult project_to_manifold(const Mat3& measured, ManifoldTarget target, const Tolerances& tol = {},
                                     const ProjectionOptions& opt = {});

}  // namespace cofkit
