#pragma once

#include <limits>
#include <vector>

#include "cofkit/lattice.hpp"
#include "cofkit/linalg3.hpp"
#include "cofkit/tolerances.hpp"
#include "cofkit/twinning.hpp"

namespace cofkit {

// F = 1 + a⊗n in a two-well hull. mu is NaN for compound connections; well
// is the 1-based label of the pure variant the connection reproduces (0 for
// laminates).
struct IdentityConnection {
    Vec3 a;
    Vec3 n;
    double mu = std::numeric_limits<double>::quiet_NaN();
    int well = 0;
    Mat3 rotation;
    double residual = 0.0;
};

// Exactly four connections for a compound pair with λ₂ = 1 and d ≠ 1,
// sorted by well then n. Errors: CC1Violated, DegenerateD, IdenticalVariants.
std::vector<IdentityConnection> compound_identity_connections(const MonoclinicParams& p, int i, int j,
                                                              const Tolerances& tol = {});

struct MembershipResult {
    bool member = false;
    double det_dev = 0.0;     // |det F − det A| / det A
    double axis_dev = 0.0;    // ‖FᵀF v − λ² v‖
    double margin = 0.0;      // min over unit e of max(|Ae|², |Be|²) − |Fe|²
    Vec3 shared_axis;
    double shared_value = 0.0;
};

// Hull of SO(3)A ∪ SO(3)B for wells with equal determinant sharing an
// eigenvector. The pointwise |Fe| ≤ max(|Ae|, |Be|) condition reduces to the
// plane orthogonal to the shared axis, where each side is a sinusoid in 2θ
// and the minimum of the max is found in closed form.
MembershipResult two_well_membership_detail(const Mat3& f, const Mat3& a, const Mat3& b, const Tolerances& tol = {});
bool two_well_membership(const Mat3& f, const Mat3& a, const Mat3& b, const Tolerances& tol = {});

// Same conditions with the |Fe| test sampled on a Fibonacci sphere.
bool two_well_membership_sampled(const Mat3& f, const Mat3& a, const Mat3& b, int samples = 10000,
                                 const Tolerances& tol = {});

// Frame and region of the hull of SO(3)U ∪ SO(3)V for a twin (U, b, m).
struct HullRegion {
    double delta = 0.0;
    Vec3 u1, u2, u3;
    Mat3 l, l_inv;

    Mat3 m_matrix(double alpha, double beta, double gamma) const;
    // L⁻ᵀ M L⁻¹ − 1
    Mat3 shifted(double alpha, double beta, double gamma) const;
    double f1(double alpha, double beta, double gamma) const;
    // product of the largest and smallest eigenvalue of shifted(...)
    double phi(double alpha, double beta, double gamma) const;
    double gamma_min() const { return 1.0 / (1.0 + delta * delta); }
    double beta_max(double gamma) const;
};

HullRegion hull_region(const Mat3& u, const TwinSolution& twin);

// FᵀF = L⁻ᵀ M L⁻¹ with αγ − β² = 1, 0 < α ≤ 1+δ², 0 < γ ≤ 1.
struct TwinHullMembership {
    bool member = false;
    double alpha = 0.0, beta = 0.0, gamma = 0.0;
    double structure_dev = 0.0;  // size of the components of LᵀFᵀFL outside the M pattern
    double constraint_dev = 0.0; // |αγ − β² − 1|
};
TwinHullMembership twin_hull_membership(const Mat3& f, const Mat3& u, const TwinSolution& twin,
                                        const Tolerances& tol = {});

struct ScanRow {
    double beta = 0.0, gamma = 0.0, f1 = 0.0, phi = 0.0;
};

// n_gamma rows over [1/(1+δ²), 1], each with n_beta points over |β| ≤ β_max(γ),
// α = (1+β²)/γ.
std::vector<ScanRow> hull_scan(const HullRegion& region, int n_beta = 201, int n_gamma = 201);

struct F1Fit {
    double closed_form = 0.0;       // c₀(1+δ²)/(4δ²) with c₀ from the conjugate twin
    double fitted = 0.0;            // least-squares C in f₁ ≈ C(1−γ)
    double max_model_dev = 0.0;     // max |f₁ − closed_form·(1−γ)|
    double max_beta_spread = 0.0;   // max over γ rows of the spread of f₁ in β
    double min_interior_abs = 0.0;  // min |f₁| over rows with γ < 1
};

// c₀ = 4 det((U + ½b̂⊗m̂)ᵀ(U + ½b̂⊗m̂) − 1) for the conjugate twin (b̂, m̂).
double conjugate_c0(const Mat3& u, const TwinSolution& conjugate);

F1Fit fit_f1(const std::vector<ScanRow>& scan, const HullRegion& region, double c0);

struct IdentityFamily {
    std::vector<IdentityConnection> connections;
    int merged = 0;  // coincident pairs removed
    HullRegion region;
    F1Fit fit;
    bool exhaustive = false;  // f₁ vanishes only on γ = 1 over the scan
};

// twin must pass the CC gate and conjugate must fail CC2 beyond it
// (HypothesisViolated otherwise).
IdentityFamily typeI_II_identity_family(const Mat3& u, const TwinSolution& twin, const TwinSolution& conjugate,
                                        const std::vector<double>& mu_grid, const Tolerances& tol = {},
                                        int scan_resolution = 41);

}  // namespace cofkit
