#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "cofkit/lattice.hpp"
#include "cofkit/linalg3.hpp"
#include "cofkit/tolerances.hpp"
#include "cofkit/twinning.hpp"

namespace cofkit {

// Optional material constants turning the eigenvalue gap into a stress.
struct ElasticConstants {
    double shear_modulus = 0.0;  // G
    double yield_stress = 0.0;   // σ_C
};

struct CofactorReport {
    TwinKind kind = TwinKind::TypeI;
    TwinKind formula = TwinKind::TypeI;
    double cc1_dev = 0.0;         // |λ₂(U) − 1|
    double cc2_value = 0.0;       // |b · U cof(U² − 1) m|, m unit
    double cc3_value = 0.0;       // tr U² − det U² − ¼|b|²|m|² − 2
    bool cc3_ok = false;
    double equivalent_dev = 0.0;  // ||U⁻¹ê| − 1| (type I) or ||Uê| − 1| (type II)
    double new_metric = 0.0;      // max eigenvalue gap of E* (type I) or C* (type II)
    std::optional<double> tresca_stress;  // (G/4)·gap
    std::optional<bool> tresca_ok;
    std::vector<std::string> warnings;
};

// C* = C(ĉ±) for C(c) = (U + c⊗m)ᵀ(U + c⊗m) − 1, or E* = E(ô±) for
// E(o) = (U + b⊗o)ᵀ(U + b⊗o) − 1.
struct TripleJunctionMatrix {
    Mat3 matrix;
    std::array<double, 3> eigenvalues{};  // ascending
    double gap = 0.0;                     // largest pairwise eigenvalue difference
    std::array<Vec3, 2> minimizers;       // ĉ± or ô±
    double objective = 0.0;               // ‖matrix‖²
    std::vector<std::string> warnings;    // violated lemma hypotheses
};

TripleJunctionMatrix c_star(const Mat3& u, const Vec3& m, const Tolerances& tol = {});
TripleJunctionMatrix e_star(const Mat3& u, const Vec3& b, const Tolerances& tol = {});

// Closed-form eigenvalues ½(tr ± √(2 tr(X²) − tr²)) and 0, ascending.
std::array<double, 3> triple_junction_closed_eigenvalues(const Mat3& x);

CofactorReport check_cc(const Mat3& u, const TwinSolution& twin, const Tolerances& tol = {},
                        const std::optional<ElasticConstants>& elastic = std::nullopt);

struct AxisMetric {
    Vec3 axis;
    double type_i = 0.0;   // gap of E* for the type I solution from this axis
    double type_ii = 0.0;  // gap of C* for the type II solution
};

struct SupercompatResult {
    std::vector<AxisMetric> per_axis;  // one entry for type I/II pairs, two for compound

    double type_i() const { return per_axis.at(0).type_i; }
    double type_ii() const { return per_axis.at(0).type_ii; }
};

// Find ê, build both twins, build E*/C*, report the gaps.
SupercompatResult supercompat_metric(const Mat3& u, const Mat3& v, const Tolerances& tol = {},
                                     const AxisSearchOptions& opt = {});

enum class CompoundOrbit { Pair12, Pair13 };

struct TripleJunctionBranch {
    std::string name;        // the relation, e.g. "a^2+b^2=1"
    bool c_star_zero = false;  // which of C*, E* vanishes on this branch
    double residual = 0.0;
};

struct CompoundTripleJunctionReport {
    double d_dev = 0.0;  // |d − 1|
    std::vector<TripleJunctionBranch> branches;
};

CompoundTripleJunctionReport compound_triple_junction(const MonoclinicParams& p, CompoundOrbit orbit);

}  // namespace cofkit
