#include "cofkit/tolerances.hpp"

#include <cstdlib>
#include <map>
#include <sstream>

#include "cofkit/error.hpp"

namespace cofkit {

namespace {

double parse_number(const std::string& text) {
    std::istringstream in(text);
    in.imbue(std::locale::classic());
    double v = 0.0;
    in >> v;
    if (in.fail() || !in.eof()) throw Error(ErrorCode::InvalidInput, "bad tolerance value '" + text + "'");
    if (!(v > 0.0)) throw Error(ErrorCode::InvalidInput, "tolerances must be positive");
    return v;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

}  // namespace

void Tolerances::apply_overrides(const std::string& spec) {
    const std::string body = trim(spec);
    if (body.empty()) return;
    if (body.find('=') == std::string::npos) {
        const double v = parse_number(body);
        habit_sigma2 = v;
        cc_gate = v;
        return;
    }

    const std::map<std::string, double*> fields = {
        {"symmetry", &symmetry},           {"jacobi_offdiag", &jacobi_offdiag},
        {"generic", &generic},             {"conjugation", &conjugation},
        {"axis_residual", &axis_residual}, {"axis_merge", &axis_merge},
        {"twin_residual", &twin_residual}, {"habit_sigma2", &habit_sigma2},
        {"habit_residual", &habit_residual}, {"polar_drift", &polar_drift},
        {"cc_gate", &cc_gate},             {"witness", &witness},
        {"independence", &independence},   {"rank_one", &rank_one},
        {"fan_independence", &fan_independence}, {"membership", &membership},
        {"merge", &merge},                 {"zero_eigen", &zero_eigen},
        {"projection", &projection},
    };

    std::istringstream in(body);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw Error(ErrorCode::InvalidInput, "expected key=value in '" + item + "'");
        const std::string key = trim(item.substr(0, eq));
        const std::string val = trim(item.substr(eq + 1));
        if (key == "jacobi_max_sweeps") {
            jacobi_max_sweeps = static_cast<int>(parse_number(val));
        } else if (key == "projection_max_iter") {
            projection_max_iter = static_cast<int>(parse_number(val));
        } else {
            auto it = fields.find(key);
            if (it == fields.end()) throw Error(ErrorCode::InvalidInput, "unknown tolerance '" + key + "'");
            *it->second = parse_number(val);
        }
    }
}

Tolerances Tolerances::from_env() {
    Tolerances t;
    if (const char* env = std::getenv("COFKIT_TOL")) t.apply_overrides(env);
    return t;
}

}  // namespace cofkit
