#pragma once

#include <vector>

#include "cofkit/linalg3.hpp"
#include "cofkit/tolerances.hpp"
#include "cofkit/twinning.hpp"

namespace cofkit {

// R F = 1 + a⊗n with R proper and n unit.
struct HabitSolution {
    Mat3 rotation;
    Vec3 a;
    Vec3 n;
    double mu = 0.0;
};

struct HabitResult {
    std::vector<HabitSolution> solutions;
    bool trivial = false;     // F is a rotation: a = 0
    bool degenerate = false;  // σ₁ = σ₂ = 1 or σ₂ = σ₃ = 1
    double sigma2_deviation = 0.0;
    double residual = 0.0;    // worst ‖R F̃ − 1 − a⊗n‖ over the returned solutions
};

Mat3 laminate_gradient(const Mat3& u, const TwinSolution& twin, double mu);

double middle_eigenvalue_deviation(const Mat3& f, const Tolerances& tol = {});

// Within tol.habit_sigma2 the middle singular value is projected to 1 and the
// construction uses F̃ = F C^{-1/2} C̃^{1/2}; the residual refers to F̃.
HabitResult habit_solutions(const Mat3& f, const Tolerances& tol = {});

// habit_solutions of the laminate U + μ b⊗m, with μ recorded on each solution.
HabitResult laminate_habit_solutions(const Mat3& u, const TwinSolution& twin, double mu, const Tolerances& tol = {});

}  // namespace cofkit
