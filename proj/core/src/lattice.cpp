#include "cofkit/lattice.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "cofkit/error.hpp"

namespace cofkit {

namespace {

bool finite_all(std::initializer_list<double> xs) {
    return std::all_of(xs.begin(), xs.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

void MonoclinicParams::validate() const {
    if (!finite_all({a, b, c, d})) throw Error(ErrorCode::InvalidInput, "parameters must be finite");
    if (!(a > 0.0 && c > 0.0 && d > 0.0 && b >= 0.0 && a * c - b * b > 0.0)) {
        std::ostringstream msg;
        msg << "monoclinic U1 needs a>0, c>0, d>0, b>=0, ac-b^2>0 (got a=" << a << ", b=" << b << ", c=" << c
            << ", d=" << d << ")";
        throw Error(ErrorCode::NotPositiveDefinite, msg.str());
    }
}

void OrthorhombicParams::validate() const {
    if (!finite_all({a, b, d})) throw Error(ErrorCode::InvalidInput, "parameters must be finite");
    if (!(a > 0.0 && d > 0.0 && a > std::abs(b))) {
        std::ostringstream msg;
        msg << "orthorhombic U1 needs a>|b|, d>0 (got a=" << a << ", b=" << b << ", d=" << d << ")";
        throw Error(ErrorCode::NotPositiveDefinite, msg.str());
    }
}

const char* to_string(CrystalSystem s) {
    return s == CrystalSystem::Monoclinic ? "monoclinic" : "orthorhombic";
}

VariantSet monoclinic_variants(const MonoclinicParams& p) {
    p.validate();
    const double a = p.a, b = p.b, c = p.c, d = p.d;
    VariantSet vs;
    vs.system = CrystalSystem::Monoclinic;
    vs.variants = {
        Mat3(a, b, 0, b, c, 0, 0, 0, d),   Mat3(a, -b, 0, -b, c, 0, 0, 0, d),
        Mat3(c, b, 0, b, a, 0, 0, 0, d),   Mat3(c, -b, 0, -b, a, 0, 0, 0, d),
        Mat3(a, 0, b, 0, d, 0, b, 0, c),   Mat3(a, 0, -b, 0, d, 0, -b, 0, c),
        Mat3(c, 0, b, 0, d, 0, b, 0, a),   Mat3(c, 0, -b, 0, d, 0, -b, 0, a),
        Mat3(d, 0, 0, 0, a, b, 0, b, c),   Mat3(d, 0, 0, 0, a, -b, 0, -b, c),
        Mat3(d, 0, 0, 0, c, b, 0, b, a),   Mat3(d, 0, 0, 0, c, -b, 0, -b, a),
    };
    return vs;
}

VariantSet orthorhombic_variants(const OrthorhombicParams& p) {
    p.validate();
    const double a = p.a, b = p.b, d = p.d;
    VariantSet vs;
    vs.system = CrystalSystem::Orthorhombic;
    vs.variants = {
        Mat3(a, b, 0, b, a, 0, 0, 0, d), Mat3(a, -b, 0, -b, a, 0, 0, 0, d),
        Mat3(a, 0, b, 0, d, 0, b, 0, a), Mat3(a, 0, -b, 0, d, 0, -b, 0, a),
        Mat3(d, 0, 0, 0, a, b, 0, b, a), Mat3(d, 0, 0, 0, a, -b, 0, -b, a),
    };
    return vs;
}

const std::array<Mat3, 24>& cubic_symmetry_group() {
    static const std::array<Mat3, 24> group = [] {
        std::array<Mat3, 24> g;
        std::array<int, 3> perm{0, 1, 2};
        std::vector<Mat3> all;
        do {
            for (int s = 0; s < 8; ++s) {
                Mat3 q;
                for (int r = 0; r < 3; ++r) q(r, perm[r]) = (s >> r) & 1 ? -1.0 : 1.0;
                if (det(q) > 0.0) all.push_back(q);
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
        // identity comes first from the (0,1,2), no-sign-flip iteration
        std::copy(all.begin(), all.end(), g.begin());
        return g;
    }();
    return group;
}

int find_variant(const VariantSet& vs, const Mat3& m, double tol) {
    for (int k = 0; k < vs.size(); ++k)
        if (max_abs_diff(vs.variants[k], m) <= tol) return k + 1;
    return 0;
}

std::vector<int> conjugation_permutation(const VariantSet& vs, const Mat3& q, double tol) {
    std::vector<int> perm(vs.size());
    for (int k = 0; k < vs.size(); ++k) perm[k] = find_variant(vs, conjugate(q, vs.variants[k]), tol);
    return perm;
}

const char* to_string(TwinColumn c) {
    switch (c) {
        case TwinColumn::A: return "A";
        case TwinColumn::B: return "B";
        case TwinColumn::CUpper: return "C-upper";
        case TwinColumn::CLower: return "C-lower";
        case TwinColumn::CNonConventional: return "C-nonconventional";
        case TwinColumn::TypeI_II: return "typeI/II";
        case TwinColumn::Compound: return "compound";
    }
    return "?";
}

bool is_compound_column(TwinColumn c) {
    return c == TwinColumn::CUpper || c == TwinColumn::CLower || c == TwinColumn::CNonConventional ||
           c == TwinColumn::Compound;
}

double TableRotation::angle() const { return quarter_turns * M_PI / 2.0; }

Mat3 TableRotation::matrix() const {
    const Vec3 ax(axis[0], axis[1], axis[2]);
    Mat3 r = rotation_axis_angle(ax, angle());
    // entries of a cubic symmetry are exactly 0 or ±1
    for (double& x : r.m) x = std::round(x);
    return r;
}

std::string TableRotation::label() const {
    std::ostringstream out;
    switch (quarter_turns) {
        case 2: out << "pi"; break;
        case 1: out << "pi/2"; break;
        case -1: out << "-pi/2"; break;
        default: out << quarter_turns << "*pi/2";
    }
    out << ",(" << axis[0] << "," << axis[1] << "," << axis[2] << ")";
    return out.str();
}

namespace {

struct PrintedRow {
    TableRotation rotation;
    std::vector<std::pair<int, int>> pairs;  // printed order, all columns left to right
};

const std::vector<PrintedRow>& monoclinic_layout() {
    static const std::vector<PrintedRow> rows = {
        {{{1, 0, 0}, 2}, {{1, 2}, {5, 6}}},
        {{{1, 0, 0}, 2}, {{3, 4}, {7, 8}}},
        {{{0, 1, 0}, 2}, {{1, 2}, {11, 12}}},
        {{{0, 1, 0}, 2}, {{3, 4}, {9, 10}}},
        {{{0, 0, 1}, 2}, {{5, 6}, {9, 10}}},
        {{{0, 0, 1}, 2}, {{11, 12}, {7, 8}}},
        {{{1, 0, 1}, 2}, {{1, 12}, {2, 11}, {3, 10}, {4, 9}, {5, 7}, {6, 8}}},
        {{{1, 0, -1}, 2}, {{1, 11}, {2, 12}, {3, 9}, {4, 10}, {5, 7}, {6, 8}}},
        {{{1, 1, 0}, 2}, {{5, 10}, {6, 9}, {8, 11}, {7, 12}, {1, 3}, {2, 4}}},
        {{{1, -1, 0}, 2}, {{5, 9}, {6, 10}, {7, 11}, {8, 12}, {1, 3}, {2, 4}}},
        {{{0, 1, 1}, 2}, {{3, 8}, {4, 7}, {1, 6}, {2, 5}, {9, 11}, {10, 12}}},
        {{{0, -1, 1}, 2}, {{3, 7}, {4, 8}, {1, 5}, {2, 6}, {9, 11}, {10, 12}}},
        {{{0, 1, 0}, 1}, {{1, 12}, {2, 11}, {3, 10}, {4, 9}, {5, 8}, {6, 7}}},
        {{{0, 1, 0}, -1}, {{1, 11}, {2, 12}, {3, 9}, {4, 10}, {5, 8}, {6, 7}}},
        {{{0, 0, 1}, 1}, {{5, 9}, {6, 10}, {7, 11}, {8, 12}, {1, 4}, {2, 3}}},
        {{{0, 0, 1}, -1}, {{5, 10}, {6, 9}, {8, 11}, {7, 12}, {1, 4}, {2, 3}}},
        {{{1, 0, 0}, 1}, {{3, 7}, {4, 8}, {1, 5}, {2, 6}, {10, 11}, {9, 12}}},
        {{{1, 0, 0}, -1}, {{3, 8}, {4, 7}, {1, 6}, {2, 5}, {10, 11}, {9, 12}}},
    };
    return rows;
}

const std::vector<PrintedRow>& orthorhombic_layout() {
    static const std::vector<PrintedRow> rows = {
        {{{1, 0, 0}, 2}, {{1, 2}, {3, 4}}},
        {{{0, 1, 0}, 2}, {{1, 2}, {5, 6}}},
        {{{0, 0, 1}, 2}, {{3, 4}, {5, 6}}},
        {{{1, 0, 1}, 2}, {{1, 6}, {2, 5}}},
        {{{1, 0, -1}, 2}, {{1, 5}, {2, 6}}},
        {{{1, 1, 0}, 2}, {{3, 6}, {4, 5}}},
        {{{1, -1, 0}, 2}, {{3, 5}, {4, 6}}},
        {{{0, 1, 1}, 2}, {{1, 4}, {2, 3}}},
        {{{0, -1, 1}, 2}, {{1, 3}, {2, 4}}},
    };
    return rows;
}

// Orbits of unordered variant pairs under P24 conjugation, computed on a
// generic reference parameter set so that labels depend only on indices.
struct PairOrbits {
    int n = 0;
    std::vector<int> orbit;  // indexed by (i-1)*n + (j-1)

    int of(int i, int j) const {
        if (i > j) std::swap(i, j);
        return orbit[(i - 1) * n + (j - 1)];
    }
};

PairOrbits compute_orbits(const VariantSet& vs) {
    PairOrbits po;
    po.n = vs.size();
    const int n = po.n;
    std::vector<int> parent(n * n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    auto key = [n](int i, int j) {
        if (i > j) std::swap(i, j);
        return (i - 1) * n + (j - 1);
    };
    for (const Mat3& q : cubic_symmetry_group()) {
        const std::vector<int> perm = conjugation_permutation(vs, q, 1e-12);
        for (int i = 1; i <= n; ++i)
            for (int j = i + 1; j <= n; ++j) {
                const int a = find(key(i, j));
                const int b = find(key(perm[i - 1], perm[j - 1]));
                if (a != b) parent[a] = b;
            }
    }
    po.orbit.resize(n * n);
    for (int k = 0; k < n * n; ++k) po.orbit[k] = find(k);
    return po;
}

const PairOrbits& reference_orbits(CrystalSystem system) {
    static const PairOrbits mono = compute_orbits(monoclinic_variants({1.07, 0.031, 0.96, 1.013}));
    static const PairOrbits ortho = compute_orbits(orthorhombic_variants({1.05, 0.03, 0.97}));
    return system == CrystalSystem::Monoclinic ? mono : ortho;
}

}  // namespace

bool twin_column(CrystalSystem system, int i, int j, TwinColumn& column) {
    const PairOrbits& po = reference_orbits(system);
    if (i == j || i < 1 || j < 1 || i > po.n || j > po.n) return false;
    const int o = po.of(i, j);
    if (system == CrystalSystem::Monoclinic) {
        if (o == po.of(1, 12)) column = TwinColumn::A;
        else if (o == po.of(3, 10)) column = TwinColumn::B;
        else if (o == po.of(1, 2)) column = TwinColumn::CUpper;
        else if (o == po.of(1, 3)) column = TwinColumn::CLower;
        else if (o == po.of(1, 4)) column = TwinColumn::CNonConventional;
        else return false;
        return true;
    }
    if (o == po.of(1, 6)) column = TwinColumn::TypeI_II;
    else if (o == po.of(1, 2)) column = TwinColumn::Compound;
    else return false;
    return true;
}

std::vector<std::string> degeneracy_warnings(const MonoclinicParams& p, const Tolerances& tol) {
    std::vector<std::string> w;
    if (std::abs(p.a - p.c) <= tol.generic) w.push_back("degenerate parameters: a = c (orthorhombic special case)");
    if (std::abs(p.b) <= tol.generic) w.push_back("degenerate parameters: b = 0");
    if (std::abs(p.d - 1.0) <= tol.generic) w.push_back("degenerate parameters: d = 1");
    if (w.size() == 3 && std::abs(p.a - 1.0) <= tol.generic)
        w.push_back("degenerate parameters: identity transformation");
    return w;
}

std::vector<TwinSystemEntry> TwinTable::cell(int row, TwinColumn column) const {
    std::vector<TwinSystemEntry> out;
    for (const auto& e : entries)
        if (e.row == row && e.column == column) out.push_back(e);
    return out;
}

TwinTable twin_table(const VariantSet& vs, const Tolerances& tol) {
    TwinTable table;
    table.system = vs.system;
    const auto& layout = vs.system == CrystalSystem::Monoclinic ? monoclinic_layout() : orthorhombic_layout();
    for (const auto& r : layout) table.rows.push_back(r.rotation);

    // genericity from the entries of U1
    const Mat3& u1 = vs.at(1);
    if (vs.system == CrystalSystem::Monoclinic) {
        table.warnings = degeneracy_warnings({u1(0, 0), std::abs(u1(0, 1)), u1(1, 1), u1(2, 2)}, tol);
    } else {
        if (std::abs(u1(0, 1)) <= tol.generic) table.warnings.push_back("degenerate parameters: b = 0");
        if (std::abs(u1(2, 2) - 1.0) <= tol.generic) table.warnings.push_back("degenerate parameters: d = 1");
    }

    double scale = 1.0;
    for (const Mat3& u : vs.variants) scale = std::max(scale, frobenius(u));
    const double eq_tol = tol.conjugation * scale;

    auto same_rotation = [](const TableRotation& x, const TableRotation& y) {
        return x.axis == y.axis && x.quarter_turns == y.quarter_turns;
    };
    auto printed_rank = [&](int row, int i, int j) -> int {
        const auto& ps = layout[row].pairs;
        for (std::size_t k = 0; k < ps.size(); ++k)
            if (ps[k].first == i && ps[k].second == j) return static_cast<int>(k);
        return -1;
    };

    int unlisted = 0;
    for (std::size_t row = 0; row < layout.size(); ++row) {
        // earlier rows with the same rotation already collected these pairs
        bool seen = false;
        for (std::size_t prev = 0; prev < row; ++prev)
            if (same_rotation(layout[prev].rotation, layout[row].rotation)) seen = true;
        if (seen) continue;

        const Mat3 r = layout[row].rotation.matrix();
        for (int i = 1; i <= vs.size(); ++i) {
            for (int j = i + 1; j <= vs.size(); ++j) {
                const Mat3& ui = vs.at(i);
                const Mat3& uj = vs.at(j);
                if (max_abs_diff(ui, uj) <= eq_tol) continue;
                if (max_abs_diff(uj, conjugate(r, ui)) > eq_tol) continue;
                TwinColumn col;
                if (!twin_column(vs.system, i, j, col)) {
                    ++unlisted;
                    continue;
                }
                int target = static_cast<int>(row);
                for (std::size_t other = row; other < layout.size(); ++other)
                    if (same_rotation(layout[other].rotation, layout[row].rotation) &&
                        printed_rank(static_cast<int>(other), i, j) >= 0) {
                        target = static_cast<int>(other);
                        break;
                    }
                TwinSystemEntry e;
                e.row = target;
                e.rotation = layout[target].rotation;
                e.i = i;
                e.j = j;
                e.column = col;
                e.non_conventional = col == TwinColumn::CNonConventional;
                table.entries.push_back(e);
            }
        }
    }
    if (unlisted > 0)
        table.warnings.push_back(std::to_string(unlisted) + " symmetry-related pair(s) outside the twin table (degenerate parameters)");

    std::stable_sort(table.entries.begin(), table.entries.end(), [&](const TwinSystemEntry& x, const TwinSystemEntry& y) {
        if (x.row != y.row) return x.row < y.row;
        if (x.column != y.column) return x.column < y.column;
        const int rx = printed_rank(x.row, x.i, x.j), ry = printed_rank(y.row, y.i, y.j);
        if ((rx >= 0) != (ry >= 0)) return rx >= 0;
        if (rx != ry) return rx < ry;
        return std::make_pair(x.i, x.j) < std::make_pair(y.i, y.j);
    });
    return table;
}

}  // namespace cofkit
