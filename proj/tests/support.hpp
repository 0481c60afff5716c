#pragma once

// Independent oracles and generators shared by the test binaries. Nothing
// here calls the library routine it is used to check.

#include <array>
#include <optional>
#include <random>
#include <vector>

#include "cofkit/cofkit.hpp"

namespace oracle {

using cofkit::Mat3;
using cofkit::MonoclinicParams;
using cofkit::TwinKind;
using cofkit::Vec3;

// Eigenvalues of a symmetric 3×3 matrix from the trigonometric solution of
// the characteristic cubic, in long double. Ascending.
std::array<long double, 3> sym_eigenvalues(const Mat3& m);

// Eigenvector for an isolated eigenvalue, from the largest cross product of
// rows of (M − ρ1).
Vec3 sym_eigenvector(const Mat3& m, long double rho);

// Signed permutation matrices with det +1, enumerated from all {−1,0,1}
// matrices.
std::vector<Mat3> brute_force_rotations();

// Ball–James: solutions of Q F − 1 = a ⊗ n for C = FᵀF with λ₁ ≤ 1 = λ₂ ≤ λ₃.
struct RankOne {
    Vec3 a;
    Vec3 n;
};
std::vector<RankOne> ball_james(const Mat3& f);

// Twin solutions Q V = U + b ⊗ m built from ball_james(V U⁻¹).
struct Twin {
    Vec3 b;
    Vec3 m;
};
std::vector<Twin> twins(const Mat3& u, const Mat3& v);

Mat3 cofactor(const Mat3& m);

// min over c of |(U + c⊗m)ᵀ(U + c⊗m) − 1|² by damped Newton from several
// random starts; also min over o of |(U + b⊗o)ᵀ(U + b⊗o) − 1|².
struct Minimum {
    double objective = 0.0;
    Vec3 x;
    Mat3 matrix;
    double gap = 0.0;  // largest minus smallest eigenvalue of matrix
};
Minimum minimize_c(const Mat3& u, const Vec3& m, std::mt19937_64& rng, int starts = 12);
Minimum minimize_e(const Mat3& u, const Vec3& b, std::mt19937_64& rng, int starts = 12);

// Rank-one test: second singular value of D by one-sided Jacobi.
double second_singular_value(const Mat3& d);

// Synthetic parameters with λ₂ = 1 whose (1,11)/(1,12) twin satisfies the
// cofactor conditions as the given kind (col_b: the (1,5)/(1,6) twin).
// Eigenvalues of the block are 1 and lambda.
std::optional<MonoclinicParams> cc_params(TwinKind kind, double lambda, double d, bool col_b = false);

// Compound CC1 parameters: block eigenvalues 1 and lambda, a in (1, lambda).
MonoclinicParams compound_params(double lambda, double d, double a);

// Code of the cofkit::Error thrown by f, or nullopt.
template <class F>
std::optional<cofkit::ErrorCode> code_of(F&& f) {
    try {
        f();
    } catch (const cofkit::Error& e) {
        return e.code();
    }
    return std::nullopt;
}

// Random generic monoclinic parameters near the identity.
MonoclinicParams random_params(std::mt19937_64& rng, double spread = 0.08);

Mat3 random_rotation(std::mt19937_64& rng);
Vec3 random_unit(std::mt19937_64& rng);
Mat3 random_spd(std::mt19937_64& rng, double lo, double hi);

// Branch names of the star relations that produce physical synthetic stars.
std::vector<std::string> physical_star_branches();

// Parameters on a star branch at fraction t of its domain.
MonoclinicParams star_params(const std::string& branch, double t);

}  // namespace oracle
