#include "cofkit/materials.hpp"

#include <sstream>

#include "cofkit/error.hpp"

namespace cofkit {

namespace {

std::map<std::string, double> zn_reference() {
    return {
        {"lambda2_dev", 6.1e-4},   {"cc2_typeI", 4.1e-5},  {"cc2_typeII", 3.8e-5},
        {"equiv_typeI", 8.1e-3},   {"equiv_typeII", 4.2e-4}, {"new_typeI", 1.7e-2},
        {"new_typeII", 2.1e-3},    {"star_lambda3", 1.0609}, {"star_distance", 1.1e-3},
        {"cc_distance", 0.9e-3},
    };
}

std::vector<MaterialPreset> build_presets() {
    std::vector<MaterialPreset> v;
    {
        MaterialPreset p;
        p.name = "ZnAuCu";
        p.params = MonoclinicParams{1.0015, 0.0073, 1.0591, 0.9363};
        p.provenance = "measured U1 of Zn45Au30Cu25, printed to four decimals";
        p.reference = zn_reference();
        v.push_back(p);
    }
    {
        MaterialPreset p;
        p.name = "ZnAuCu-star-target";
        p.params = MonoclinicParams{1.0010, 0.0078, 1.0594, 0.9368};
        p.provenance = "printed nearby stretch admitting a type II star twin, four decimals";
        p.reference = {{"distance_to_measured", 1.1e-3}};
        v.push_back(p);
    }
    {
        // Frozen output of project_to_manifold(ZnAuCu, CC_typeII, seed 0);
        // the paper states only the distance.
        MaterialPreset p;
        p.name = "ZnAuCu-cc-target";
        p.params = MonoclinicParams{1.0009136277981632, 0.0073741375479659766, 1.0595186625074784, 0.93667808018218712};
        p.provenance = "closest type II cofactor-condition stretch to ZnAuCu, computed by projection and frozen";
        p.reference = {{"distance_to_measured", 0.9e-3}};
        v.push_back(p);
    }
    {
        MaterialPreset p;
        p.name = "TiNbAl-reference";
        p.provenance = "Ti74Nb23Al3 metric values only; no stretch matrix is printed";
        p.computable = false;
        p.reference = {
            {"lambda2_dev", 3.7e-6}, {"cc2_typeI", 4.4e-5}, {"cc2_typeII", 3.8e-5}, {"equiv_typeI", 9.9e-3},
            {"equiv_typeII", 8.3e-3}, {"new_typeI", 2.7e-2}, {"new_typeII", 2.3e-2},
        };
        v.push_back(p);
    }
    return v;
}

const std::vector<MaterialPreset>& all_presets() {
    static const std::vector<MaterialPreset> v = build_presets();
    return v;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// strtod honours the C locale; the input format always uses '.'
double parse_number(const std::string& key, const std::string& text) {
    std::istringstream is(text);
    is.imbue(std::locale::classic());
    double x = 0.0;
    is >> x;
    if (is.fail() || !(is >> std::ws).eof())
        throw Error(ErrorCode::InvalidInput, "value of '" + key + "' is not a number: '" + text + "'");
    return x;
}

std::string fmt17(double x) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os.precision(17);
    os << x;
    return os.str();
}

}  // namespace

Mat3 MaterialPreset::matrix() const {
    if (!params) throw Error(ErrorCode::InvalidInput, "preset " + name + " carries no stretch matrix");
    return params->u1();
}

const MaterialPreset& preset(const std::string& name) {
    for (const auto& p : all_presets())
        if (p.name == name) return p;
    throw Error(ErrorCode::UnknownMaterial, "no preset named '" + name + "'");
}

std::vector<std::string> preset_names() {
    std::vector<std::string> n;
    for (const auto& p : all_presets()) n.push_back(p.name);
    return n;
}

MonoclinicParams InputSpec::monoclinic() const {
    if (matrix) return {(*matrix)(0, 0), (*matrix)(0, 1), (*matrix)(1, 1), (*matrix)(2, 2)};
    if (system == CrystalSystem::Orthorhombic) return ortho.as_monoclinic();
    return mono;
}

InputSpec parse_input(const std::string& text) {
    InputSpec spec;
    bool seen_c = false;
    std::istringstream lines(text);
    std::string line;
    std::vector<std::pair<std::string, std::string>> kv;
    while (std::getline(lines, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.rfind("U=", 0) == 0 || line.rfind("U =", 0) == 0) {
            kv.emplace_back("U", trim(line.substr(line.find('=') + 1)));
            continue;
        }
        std::istringstream parts(line);
        std::string tok;
        while (std::getline(parts, tok, ',')) {
            tok = trim(tok);
            if (tok.empty()) continue;
            const auto eq = tok.find('=');
            if (eq == std::string::npos) throw Error(ErrorCode::InvalidInput, "expected key=value, got '" + tok + "'");
            kv.emplace_back(trim(tok.substr(0, eq)), trim(tok.substr(eq + 1)));
        }
    }
    for (const auto& [key, val] : kv) {
        if (key == "a") {
            spec.mono.a = spec.ortho.a = parse_number(key, val);
        } else if (key == "b") {
            spec.mono.b = spec.ortho.b = parse_number(key, val);
        } else if (key == "c") {
            spec.mono.c = parse_number(key, val);
            seen_c = true;
        } else if (key == "d") {
            spec.mono.d = spec.ortho.d = parse_number(key, val);
        } else if (key == "system") {
            if (val == "monoclinic") spec.system = CrystalSystem::Monoclinic;
            else if (val == "orthorhombic") spec.system = CrystalSystem::Orthorhombic;
            else throw Error(ErrorCode::InvalidInput, "unknown system '" + val + "'");
        } else if (key == "name") {
            spec.name = val;
        } else if (key == "U") {
            std::string s = val;
            for (char& ch : s)
                if (ch == ',' || ch == ';' || ch == '[' || ch == ']') ch = ' ';
            std::istringstream is(s);
            is.imbue(std::locale::classic());
            Mat3 m;
            for (int k = 0; k < 9; ++k)
                if (!(is >> m.m[k])) throw Error(ErrorCode::InvalidInput, "U needs nine numbers");
            if (!(is >> std::ws).eof()) throw Error(ErrorCode::InvalidInput, "U needs exactly nine numbers");
            if (m(0, 2) != 0.0 || m(1, 2) != 0.0 || m(2, 0) != 0.0 || m(2, 1) != 0.0 || m(0, 1) != m(1, 0))
                throw Error(ErrorCode::InvalidInput, "U must have the pattern [[a,b,0],[b,c,0],[0,0,d]]");
            spec.matrix = m;
        } else {
            throw Error(ErrorCode::InvalidInput, "unknown key '" + key + "'");
        }
    }
    if (spec.system == CrystalSystem::Orthorhombic && seen_c && spec.mono.c != spec.mono.a)
        throw Error(ErrorCode::InvalidInput, "orthorhombic input takes a, b, d only");
    if (spec.system == CrystalSystem::Orthorhombic) spec.ortho.validate();
    else spec.monoclinic().validate();
    return spec;
}

std::string format_input(const InputSpec& spec) {
    std::ostringstream os;
    if (!spec.name.empty()) os << "name=" << spec.name << "\n";
    if (spec.system == CrystalSystem::Orthorhombic) {
        os << "system=orthorhombic\n";
        os << "a=" << fmt17(spec.ortho.a) << "\nb=" << fmt17(spec.ortho.b) << "\nd=" << fmt17(spec.ortho.d) << "\n";
    } else {
        os << "system=monoclinic\n";
        os << "a=" << fmt17(spec.mono.a) << "\nb=" << fmt17(spec.mono.b) << "\nc=" << fmt17(spec.mono.c)
           << "\nd=" << fmt17(spec.mono.d) << "\n";
    }
    if (spec.matrix) {
        os << "U=";
        for (int k = 0; k < 9; ++k) os << (k ? " " : "") << fmt17(spec.matrix->m[k]);
        os << "\n";
    }
    return os.str();
}

InputSpec preset_input(const MaterialPreset& p) {
    if (!p.computable || !p.params) throw Error(ErrorCode::InvalidInput, "preset " + p.name + " is reference-only");
    InputSpec s;
    s.name = p.name;
    s.system = p.system;
    s.mono = *p.params;
    return s;
}

}  // namespace cofkit
