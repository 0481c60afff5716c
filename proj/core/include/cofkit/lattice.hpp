#pragma once

#include <array>
#include <string>
#include <vector>

#include "cofkit/linalg3.hpp"
#include "cofkit/tolerances.hpp"

namespace cofkit {

// U₁ = [[a,b,0],[b,c,0],[0,0,d]]
struct MonoclinicParams {
    double a = 1.0, b = 0.0, c = 1.0, d = 1.0;

    void validate() const;  // throws NotPositiveDefinite
    Mat3 u1() const { return Mat3(a, b, 0, b, c, 0, 0, 0, d); }
    bool operator==(const MonoclinicParams&) const = default;
};

// Ũ₁ = [[a,b,0],[b,a,0],[0,0,d]]
struct OrthorhombicParams {
    double a = 1.0, b = 0.0, d = 1.0;

    void validate() const;
    MonoclinicParams as_monoclinic() const { return {a, b, a, d}; }
    bool operator==(const OrthorhombicParams&) const = default;
};

enum class CrystalSystem { Monoclinic, Orthorhombic };
const char* to_string(CrystalSystem s);

struct VariantSet {
    CrystalSystem system = CrystalSystem::Monoclinic;
    std::vector<Mat3> variants;

    // 1-based, matching the paper's U₁ … U₁₂ labels
    const Mat3& at(int label) const { return variants.at(label - 1); }
    int size() const { return static_cast<int>(variants.size()); }
};

VariantSet monoclinic_variants(const MonoclinicParams& p);
VariantSet orthorhombic_variants(const OrthorhombicParams& p);

// The 24 signed permutation matrices with det +1, identity first.
const std::array<Mat3, 24>& cubic_symmetry_group();

// 1-based label of the variant equal to m within tol, or 0.
int find_variant(const VariantSet& vs, const Mat3& m, double tol);

// perm[i-1] = label of Q Uᵢ Qᵀ (0 if not in the set).
std::vector<int> conjugation_permutation(const VariantSet& vs, const Mat3& q, double tol);

enum class TwinColumn {
    A,                 // monoclinic type I/II, orbit of (1,12)
    B,                 // monoclinic type I/II, orbit of (3,10)
    CUpper,            // compound, orbit of (1,2)
    CLower,            // compound, orbit of (1,3)
    CNonConventional,  // compound, orbit of (1,4) (shaded rows)
    TypeI_II,          // orthorhombic
    Compound,          // orthorhombic
};
const char* to_string(TwinColumn c);
bool is_compound_column(TwinColumn c);

struct TableRotation {
    std::array<int, 3> axis{};  // integer direction as printed
    int quarter_turns = 2;      // 2 → π, 1 → π/2, -1 → −π/2

    double angle() const;
    Mat3 matrix() const;
    std::string label() const;  // e.g. "pi,(1,0,-1)"
};

struct TwinSystemEntry {
    int row = 0;  // 0-based row of the printed table
    TableRotation rotation;
    int i = 0, j = 0;  // 1-based labels, Uⱼ = R Uᵢ Rᵀ
    TwinColumn column = TwinColumn::A;
    bool non_conventional = false;
};

struct TwinTable {
    CrystalSystem system = CrystalSystem::Monoclinic;
    std::vector<TableRotation> rows;
    std::vector<TwinSystemEntry> entries;
    std::vector<std::string> warnings;

    std::vector<TwinSystemEntry> cell(int row, TwinColumn column) const;
};

TwinTable twin_table(const VariantSet& vs, const Tolerances& tol = {});

// Column of the pair (i,j) in the printed tables, independent of the
// parameter values. Returns false for pairs that are not twin-related.
bool twin_column(CrystalSystem system, int i, int j, TwinColumn& column);

// Label the monoclinic variant set as generic or list the degeneracies.
std::vector<std::string> degeneracy_warnings(const MonoclinicParams& p, const Tolerances& tol = {});

}  // namespace cofkit
