#pragma once

#include <string>

namespace cofkit {

// Every threshold used by the library. Modules take a Tolerances argument
// and read these names; nothing downstream hard-codes a literal.
struct Tolerances {
    double symmetry = 1e-12;          // ‖M − Mᵀ‖ accepted by eig_sym3, relative to ‖M‖
    double jacobi_offdiag = 1e-14;    // relative off-diagonal stop for Jacobi
    int jacobi_max_sweeps = 50;
    double generic = 1e-8;            // |a−c|, |b|, |d−1| generic-parameter test
    double conjugation = 1e-12;       // variant equality under conjugation
    double axis_residual = 1e-10;     // accepted two-fold axis residual, relative to ‖U‖
    double axis_merge = 1e-8;         // angular distance for merging axes
    double twin_residual = 1e-10;     // twinning-equation residual, relative to ‖U‖
    double habit_sigma2 = 1e-6;       // |σ₂ − 1| accepted by habit_solutions
    double habit_residual = 1e-10;
    double polar_drift = 1e-12;
    double cc_gate = 1e-6;            // star_classify / identity-family CC gate
    double witness = 1e-8;            // ‖Qw − χw‖ for star witnesses
    double independence = 1e-8;       // triple products / distinct normals
    double rank_one = 1e-8;           // second singular value of a rank-one difference
    double fan_independence = 1e-6;   // smallest singular value of three stacked gradients
    double membership = 1e-8;         // two-well hull checks
    double merge = 1e-10;             // coincident identity connections
    double zero_eigen = 1e-10;        // the zero eigenvalue of C*, E*
    double projection = 1e-13;        // constraint residual after Newton polish
    int projection_max_iter = 200;

    // Overrides from "key=value,key=value" or a single number. A bare number
    // sets the two acceptance gates (habit_sigma2 and cc_gate).
    void apply_overrides(const std::string& spec);

    // Defaults, then COFKIT_TOL from the environment when set.
    static Tolerances from_env();
};

}  // namespace cofkit
