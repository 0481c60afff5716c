#pragma once

#include <utility>
#include <vector>

#include "cofkit/linalg3.hpp"
#include "cofkit/tolerances.hpp"

namespace cofkit {

struct TwoFoldAxis {
    Vec3 e;                 // unit, first nonzero component positive
    double residual = 0.0;  // ‖V − Q U Q‖ / ‖U‖ with Q = 2e⊗e − 1
};

enum class TwinKind { TypeI, TypeII, Compound };
const char* to_string(TwinKind k);

// Solution of R̂V = U + b⊗m between U and V = Q U Q.
struct TwinSolution {
    Mat3 rotation;
    Vec3 b;
    Vec3 m;  // unit
    TwinKind kind = TwinKind::TypeI;
    // Formula that produced it: TypeI means m = ê, TypeII means b = Uê
    // (up to scaling). For compound pairs kind is Compound and formula
    // records which of the two constructions was used.
    TwinKind formula = TwinKind::TypeI;
    Vec3 axis;  // generating ê
};

struct TwinPair {
    TwinSolution type_i;
    TwinSolution type_ii;
};

struct AxisSearchOptions {
    bool sphere_scan = true;
    double grid_degrees = 2.0;
    int refine_candidates = 48;
};

std::vector<TwoFoldAxis> twofold_axes(const Mat3& u, const Mat3& v, const Tolerances& tol = {},
                                      const AxisSearchOptions& opt = {});

// V is (2ê⊗ê − 1) U (2ê⊗ê − 1).
TwinPair twin_solutions(const Mat3& u, const Vec3& e, const Tolerances& tol = {});

enum class PairClass { TypeI_II, Compound, Incompatible };
const char* to_string(PairClass c);

PairClass classify_pair(const Mat3& u, const Mat3& v, const Tolerances& tol = {},
                        const AxisSearchOptions& opt = {});

// 2ê⊗ê − 1 for unit ê
Mat3 twofold_rotation(const Vec3& e);

// ‖R̂V − U − b⊗m‖ / ‖U‖ of a solution against its pair.
double twin_residual(const Mat3& u, const Mat3& v, const TwinSolution& s);

}  // namespace cofkit
