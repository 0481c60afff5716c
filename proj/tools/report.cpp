#include "report.hpp"

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace cofkit::report {

namespace {

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

nlohmann::ordered_json num(double x) {
    if (!std::isfinite(x)) return nullptr;
    return round12(x);
}

nlohmann::ordered_json vec_json(const Vec3& v) { return {num(v[0]), num(v[1]), num(v[2])}; }

nlohmann::ordered_json mat_json(const Mat3& m) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (int r = 0; r < 3; ++r) rows.push_back({num(m(r, 0)), num(m(r, 1)), num(m(r, 2))});
    return rows;
}

nlohmann::ordered_json cc_json(const CofactorReport& c) {
    nlohmann::ordered_json j;
    j["kind"] = to_string(c.kind);
    j["cc1_dev"] = num(c.cc1_dev);
    j["cc2"] = num(c.cc2_value);
    j["cc3"] = num(c.cc3_value);
    j["cc3_ok"] = c.cc3_ok;
    j["equivalent_dev"] = num(c.equivalent_dev);
    j["new_metric"] = num(c.new_metric);
    if (c.tresca_stress) j["tresca_stress"] = num(*c.tresca_stress);
    if (c.tresca_ok) j["tresca_ok"] = *c.tresca_ok;
    j["warnings"] = c.warnings;
    return j;
}

// Representative pair of an orbit: lexicographically smallest (i, j).
std::map<TwinColumn, std::pair<int, int>> representatives(const TwinTable& t) {
    std::map<TwinColumn, std::pair<int, int>> rep;
    for (const auto& e : t.entries) {
        const std::pair<int, int> key = std::minmax(e.i, e.j);
        auto it = rep.find(e.column);
        if (it == rep.end() || key < it->second) rep[e.column] = key;
    }
    return rep;
}

bool is_representative(const std::map<TwinColumn, std::pair<int, int>>& rep, TwinColumn c, int i, int j) {
    auto it = rep.find(c);
    return it != rep.end() && it->second == std::make_pair(i, j);
}

void analyze_stars(AnalysisReport& r, const MonoclinicParams& p, int i, int j, const Tolerances& tol, bool force) {
    const EigenPair ep = star_eigen_pair(p);
    for (TwinKind kind : {TwinKind::TypeI, TwinKind::TypeII}) {
        StarEntry s;
        s.i = i;
        s.j = j;
        s.kind = kind;
        s.full_curve_distance = star_curve_distance(ep.lambda, ep.d, kind, StarVariant::Full);
        s.half_curve_distance = star_curve_distance(ep.lambda, ep.d, kind, StarVariant::Half);
        s.mu_star = std::numeric_limits<double>::quiet_NaN();
        try {
            const StarReport rep = star_classify(p, i, j, kind, tol, force);
            s.status = rep.forced ? "forced" : "ok";
            s.classification = rep.classification;
            s.mu_star = rep.mu_star;
            s.witnesses = static_cast<int>(rep.witnesses.size());
            for (const auto& w : rep.witnesses) s.witness_list.emplace_back(w.q_index, w.chi);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NotACofactorTwin) throw;
            s.status = e.what();
        }
        r.stars.push_back(std::move(s));
    }
}

void analyze_hull(AnalysisReport& r, const MonoclinicParams& p, const PairMetrics* pm, int i, int j,
                  bool compound, const Tolerances& tol) {
    HullFinding h;
    h.i = i;
    h.j = j;
    h.kind = compound ? "compound" : "typeI/II";
    try {
        if (compound) {
            const auto conn = compound_identity_connections(p, i, j, tol);
            h.connections = static_cast<int>(conn.size());
            h.exhaustive = true;
            h.status = "ok";
        } else {
            // the CC twin of the pair is the one with the smaller cc2
            const Mat3 u = r.variants.at(i);
            const TwinPair tp = twin_solutions(u, pm->axis, tol);
            const bool ii = pm->type_ii.cc2_value <= pm->type_i.cc2_value;
            const TwinSolution& twin = ii ? tp.type_ii : tp.type_i;
            const TwinSolution& conj = ii ? tp.type_i : tp.type_ii;
            std::vector<double> grid;
            for (int k = 0; k <= 10; ++k) grid.push_back(k / 10.0);
            const auto fam = typeI_II_identity_family(u, twin, conj, grid, tol);
            h.connections = static_cast<int>(fam.connections.size());
            h.exhaustive = fam.exhaustive;
            h.status = std::string("ok (") + to_string(twin.kind) + ")";
        }
    } catch (const Error& e) {
        switch (e.code()) {
        case ErrorCode::CC1Violated:
        case ErrorCode::DegenerateD:
        case ErrorCode::HypothesisViolated:
        case ErrorCode::NoSolution:
            h.status = e.what();
            break;
        default:
            throw;
        }
    }
    r.hull.push_back(std::move(h));
}

}  // namespace

double round12(double x) {
    if (!std::isfinite(x) || x == 0.0) return x;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    std::istringstream is(buf);
    is.imbue(std::locale::classic());
    double y = 0.0;
    is >> y;
    return y;
}

AnalysisReport analyze(const InputSpec& input, const std::string& source, const Tolerances& tol,
                       const AnalysisOptions& opt) {
    AnalysisReport r;
    r.source = source;
    r.input = input;
    const MonoclinicParams p = input.monoclinic();
    p.validate();
    const bool mono = input.system == CrystalSystem::Monoclinic;
    r.variants = mono ? monoclinic_variants(p) : orthorhombic_variants(input.ortho);

    std::vector<Mat3> distinct;
    for (const auto& v : r.variants.variants) {
        bool seen = false;
        for (const auto& w : distinct) seen = seen || max_abs_diff(v, w) <= tol.conjugation;
        if (!seen) distinct.push_back(v);
    }
    r.distinct_variants = static_cast<int>(distinct.size());
    const SymEig3 eg = eig_sym3(p.u1(), tol);
    r.eigenvalues = eg.values;

    r.table = twin_table(r.variants, tol);
    r.warnings = r.table.warnings;

    const auto rep = representatives(r.table);
    std::set<std::pair<int, int>> seen;
    Summary& s = r.summary;
    s.lambda2_dev = std::abs(eg.values[1] - 1.0);
    const double inf = std::numeric_limits<double>::infinity();
    s.cc2_type_i = s.cc2_type_ii = s.equiv_type_i = s.equiv_type_ii = s.new_type_i = s.new_type_ii = inf;

    for (const auto& e : r.table.entries) {
        const std::pair<int, int> key = std::minmax(e.i, e.j);
        if (!seen.insert(key).second) continue;
        const Mat3& u = r.variants.at(key.first);
        const Mat3& v = r.variants.at(key.second);
        if (is_compound_column(e.column)) {
            CompoundMetrics c;
            c.i = key.first;
            c.j = key.second;
            c.row = e.row;
            c.column = e.column;
            c.d_dev = std::abs(p.d - 1.0);
            c.d_is_middle = std::abs(eg.values[1] - p.d) <= tol.generic;
            r.compounds.push_back(c);
            continue;
        }
        const auto axes = twofold_axes(u, v, tol);
        if (axes.empty()) {
            r.warnings.push_back(fmt("pair (%d,%d): no two-fold axis found", key.first, key.second));
            continue;
        }
        if (axes.size() > 1)
            r.warnings.push_back(fmt("pair (%d,%d): %zu two-fold axes, using the first", key.first, key.second,
                                     axes.size()));
        PairMetrics pm;
        pm.i = key.first;
        pm.j = key.second;
        pm.row = e.row;
        pm.column = e.column;
        pm.axis = axes[0].e;
        pm.axis_residual = axes[0].residual;
        const TwinPair tp = twin_solutions(u, pm.axis, tol);
        pm.type_i = check_cc(u, tp.type_i, tol, opt.elastic);
        pm.type_ii = check_cc(u, tp.type_ii, tol, opt.elastic);
        s.has_type_i_ii = true;
        s.cc2_type_i = std::min(s.cc2_type_i, pm.type_i.cc2_value);
        s.cc2_type_ii = std::min(s.cc2_type_ii, pm.type_ii.cc2_value);
        s.equiv_type_i = std::min(s.equiv_type_i, pm.type_i.equivalent_dev);
        s.equiv_type_ii = std::min(s.equiv_type_ii, pm.type_ii.equivalent_dev);
        s.new_type_i = std::min(s.new_type_i, pm.type_i.new_metric);
        s.new_type_ii = std::min(s.new_type_ii, pm.type_ii.new_metric);
        r.pairs.push_back(pm);
    }
    if (!s.has_type_i_ii) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        s.cc2_type_i = s.cc2_type_ii = s.equiv_type_i = s.equiv_type_ii = s.new_type_i = s.new_type_ii = nan;
    }

    if (mono && r.distinct_variants == 12) {
        r.compound_junctions.push_back(compound_triple_junction(p, CompoundOrbit::Pair12));
        r.compound_junctions.push_back(compound_triple_junction(p, CompoundOrbit::Pair13));
    }

    for (const auto& pm : r.pairs) {
        if (!is_representative(rep, pm.column, pm.i, pm.j)) continue;
        if (mono) analyze_stars(r, p, pm.i, pm.j, tol, opt.force);
        analyze_hull(r, p, &pm, pm.i, pm.j, false, tol);
    }
    if (mono) {
        for (const auto& c : r.compounds) {
            if (!is_representative(rep, c.column, c.i, c.j)) continue;
            analyze_hull(r, p, nullptr, c.i, c.j, true, tol);
        }
    }
    return r;
}

nlohmann::ordered_json to_json(const AnalysisReport& r) {
    nlohmann::ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = "analyze";
    const MonoclinicParams p = r.input.monoclinic();
    j["input"] = {{"source", r.source},
                  {"name", r.input.name},
                  {"system", to_string(r.input.system)},
                  {"a", num(p.a)},
                  {"b", num(p.b)},
                  {"c", num(p.c)},
                  {"d", num(p.d)},
                  {"U", mat_json(p.u1())}};
    j["variants"] = {{"count", r.variants.size()},
                     {"distinct", r.distinct_variants},
                     {"eigenvalues", {num(r.eigenvalues[0]), num(r.eigenvalues[1]), num(r.eigenvalues[2])}}};

    auto table = nlohmann::ordered_json::array();
    for (const auto& e : r.table.entries)
        table.push_back({{"row", e.row},
                         {"rotation", e.rotation.label()},
                         {"i", e.i},
                         {"j", e.j},
                         {"column", to_string(e.column)},
                         {"non_conventional", e.non_conventional}});
    j["twin_table"] = table;

    auto pairs = nlohmann::ordered_json::array();
    for (const auto& pm : r.pairs)
        pairs.push_back({{"i", pm.i},
                         {"j", pm.j},
                         {"column", to_string(pm.column)},
                         {"axis", vec_json(pm.axis)},
                         {"type_i", cc_json(pm.type_i)},
                         {"type_ii", cc_json(pm.type_ii)}});
    j["cofactor"] = pairs;

    auto comp = nlohmann::ordered_json::array();
    for (const auto& c : r.compounds)
        comp.push_back({{"i", c.i}, {"j", c.j}, {"column", to_string(c.column)}, {"d_dev", num(c.d_dev)}});
    j["compound"] = comp;

    auto tj = nlohmann::ordered_json::array();
    const char* orbit_names[] = {"(1,2)", "(1,3)"};
    for (std::size_t k = 0; k < r.compound_junctions.size(); ++k) {
        auto br = nlohmann::ordered_json::array();
        for (const auto& b : r.compound_junctions[k].branches)
            br.push_back({{"relation", b.name}, {"c_star_zero", b.c_star_zero}, {"residual", num(b.residual)}});
        tj.push_back({{"orbit", orbit_names[k]}, {"d_dev", num(r.compound_junctions[k].d_dev)}, {"branches", br}});
    }
    j["compound_triple_junction"] = tj;

    const Summary& s = r.summary;
    j["summary"] = {{"lambda2_dev", num(s.lambda2_dev)}, {"cc2_typeI", num(s.cc2_type_i)},
                    {"cc2_typeII", num(s.cc2_type_ii)},  {"equiv_typeI", num(s.equiv_type_i)},
                    {"equiv_typeII", num(s.equiv_type_ii)}, {"new_typeI", num(s.new_type_i)},
                    {"new_typeII", num(s.new_type_ii)}};

    auto stars = nlohmann::ordered_json::array();
    for (const auto& st : r.stars) {
        auto w = nlohmann::ordered_json::array();
        for (const auto& [q, chi] : st.witness_list) w.push_back({{"q_index", q}, {"chi", chi}});
        stars.push_back({{"i", st.i},
                         {"j", st.j},
                         {"kind", to_string(st.kind)},
                         {"status", st.status},
                         {"classification", to_string(st.classification)},
                         {"mu_star", num(st.mu_star)},
                         {"witnesses", w},
                         {"full_curve_distance", num(st.full_curve_distance)},
                         {"half_curve_distance", num(st.half_curve_distance)}});
    }
    j["stars"] = stars;

    auto hull = nlohmann::ordered_json::array();
    for (const auto& h : r.hull)
        hull.push_back({{"kind", h.kind},
                        {"i", h.i},
                        {"j", h.j},
                        {"status", h.status},
                        {"connections", h.connections},
                        {"exhaustive", h.exhaustive}});
    j["qc_hull"] = hull;
    j["warnings"] = r.warnings;
    return j;
}

nlohmann::ordered_json to_json(const ProjectionResult& r, const InputSpec& input) {
    nlohmann::ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = "project";
    const MonoclinicParams p = input.monoclinic();
    j["input"] = {{"name", input.name}, {"a", num(p.a)}, {"b", num(p.b)}, {"c", num(p.c)}, {"d", num(p.d)}};
    j["target"] = to_string(r.target);
    j["distance"] = num(r.distance);
    j["norm"] = r.assumed_norm;
    j["branch"] = r.branch;
    j["params"] = {{"a", num(r.params.a)}, {"b", num(r.params.b)}, {"c", num(r.params.c)}, {"d", num(r.params.d)}};
    j["U"] = mat_json(r.matrix);
    j["constraint_residual"] = num(r.constraint_residual);
    j["iterations"] = r.iterations;
    return j;
}

std::string to_text(const AnalysisReport& r) {
    std::ostringstream os;
    const MonoclinicParams p = r.input.monoclinic();
    os << "input: " << (r.input.name.empty() ? r.source : r.input.name) << " (" << to_string(r.input.system) << ")\n";
    os << fmt("  U1 = [[%.10g, %.10g, 0], [%.10g, %.10g, 0], [0, 0, %.10g]]\n", p.a, p.b, p.b, p.c, p.d);
    os << fmt("  eigenvalues %.10g %.10g %.10g\n", r.eigenvalues[0], r.eigenvalues[1], r.eigenvalues[2]);
    os << fmt("variants: %d (%d distinct)\n", r.variants.size(), r.distinct_variants);

    os << "\ntwin table:\n";
    if (r.table.entries.empty()) os << "  (empty)\n";
    int last_row = -1;
    for (const auto& e : r.table.entries) {
        if (e.row != last_row) {
            os << (last_row >= 0 ? "\n" : "") << fmt("  %-16s", r.table.rows.at(e.row).label().c_str());
            last_row = e.row;
        }
        os << fmt(" %s:(%d,%d)%s", to_string(e.column), e.i, e.j, e.non_conventional ? "*" : "");
    }
    if (last_row >= 0) os << "\n";

    if (!r.pairs.empty()) {
        os << "\ncofactor conditions (type I/II pairs):\n";
        os << fmt("  %-8s %-3s %-12s %-12s %-12s %-12s %-12s %-12s\n", "pair", "col", "cc2 I", "cc2 II", "equiv I",
                  "equiv II", "new I", "new II");
        for (const auto& pm : r.pairs)
            os << fmt("  (%2d,%2d) %-3s %-12.4e %-12.4e %-12.4e %-12.4e %-12.4e %-12.4e\n", pm.i, pm.j,
                      to_string(pm.column), pm.type_i.cc2_value, pm.type_ii.cc2_value, pm.type_i.equivalent_dev,
                      pm.type_ii.equivalent_dev, pm.type_i.new_metric, pm.type_ii.new_metric);
    }
    if (!r.compound_junctions.empty()) {
        os << "\ncompound triple junctions:\n";
        const char* orbit_names[] = {"(1,2)", "(1,3)"};
        for (std::size_t k = 0; k < r.compound_junctions.size(); ++k)
            for (const auto& b : r.compound_junctions[k].branches)
                os << fmt("  %s %-24s %s residual %.4e\n", orbit_names[k], b.name.c_str(),
                          b.c_star_zero ? "C*" : "E*", b.residual);
    }

    const Summary& s = r.summary;
    os << "\nsummary (lowest over twin systems):\n";
    os << fmt("  |lambda2-1|        %.4e\n", s.lambda2_dev);
    if (s.has_type_i_ii) {
        os << fmt("  cc2      I %.4e  II %.4e\n", s.cc2_type_i, s.cc2_type_ii);
        os << fmt("  equiv    I %.4e  II %.4e\n", s.equiv_type_i, s.equiv_type_ii);
        os << fmt("  new      I %.4e  II %.4e\n", s.new_type_i, s.new_type_ii);
    }

    if (!r.stars.empty()) {
        os << "\nstar classification:\n";
        for (const auto& st : r.stars) {
            os << fmt("  (%d,%d) %-7s %-9s", st.i, st.j, to_string(st.kind), to_string(st.classification));
            if (std::isfinite(st.mu_star)) os << fmt(" mu*=%.6f witnesses=%d", st.mu_star, st.witnesses);
            os << fmt(" dist(full)=%.4e dist(half)=%.4e", st.full_curve_distance, st.half_curve_distance);
            if (st.status != "ok") os << "  [" << st.status << "]";
            os << "\n";
        }
    }
    if (!r.hull.empty()) {
        os << "\nquasiconvex hull:\n";
        for (const auto& h : r.hull) {
            os << fmt("  (%d,%d) %-9s", h.i, h.j, h.kind.c_str());
            if (h.status.rfind("ok", 0) == 0)
                os << fmt(" %d identity connections%s", h.connections, h.exhaustive ? "" : " (not exhaustive)");
            else
                os << " " << h.status;
            os << "\n";
        }
    }
    if (!r.warnings.empty()) {
        os << "\nwarnings:\n";
        for (const auto& w : r.warnings) os << "  " << w << "\n";
    }
    return os.str();
}

std::string to_text(const ProjectionResult& r) {
    std::ostringstream os;
    os << "target: " << to_string(r.target) << "\n";
    os << fmt("distance: %.6e (%s)\n", r.distance, r.assumed_norm.c_str());
    os << "constraint set: " << r.branch << "\n";
    os << fmt("params: a=%.12g b=%.12g c=%.12g d=%.12g\n", r.params.a, r.params.b, r.params.c, r.params.d);
    os << "U =\n";
    for (int i = 0; i < 3; ++i)
        os << fmt("  [% .12f % .12f % .12f]\n", r.matrix(i, 0), r.matrix(i, 1), r.matrix(i, 2));
    os << fmt("constraint residual: %.3e, iterations: %d\n", r.constraint_residual, r.iterations);
    return os.str();
}

std::string curves_csv(const std::vector<CurveSample>& samples, bool d_equals_one) {
    std::string out = d_equals_one ? "branch,lambda3,lambda1,residual\n" : "branch,d,lambda,residual\n";
    for (const auto& s : samples)
        out += fmt("%s,%.12g,%.12g,%.6e\n", s.branch.c_str(), s.x, s.lambda, s.relative_residual);
    return out;
}

}  // namespace cofkit::report
