#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "report.hpp"

using namespace cofkit;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNonConvergence = 3;

struct InputOptions {
    std::string preset_name;
    std::string params;
    std::string file;

    void attach(CLI::App* cmd) {
        cmd->add_option("--preset", preset_name, "material preset (" + join_names() + ")");
        cmd->add_option("--params", params, "inline parameters, e.g. a=1.0015,b=0.0073,c=1.0591,d=0.9363");
        cmd->add_option("file", file, "input file with key=value lines");
    }

    static std::string join_names() {
        std::string s;
        for (const auto& n : preset_names()) s += (s.empty() ? "" : ", ") + n;
        return s;
    }

    std::pair<InputSpec, std::string> resolve() const {
        const int given = !preset_name.empty() + !params.empty() + !file.empty();
        if (given != 1) throw Error(ErrorCode::InvalidInput, "give exactly one of --preset, --params or an input file");
        if (!preset_name.empty()) return {preset_input(preset(preset_name)), "preset:" + preset_name};
        if (!params.empty()) return {parse_input(params), "params"};
        std::ifstream in(file);
        if (!in) throw Error(ErrorCode::InvalidInput, "cannot read '" + file + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        return {parse_input(ss.str()), file};
    }
};

std::vector<double> range_grid(double from, double to, double step) {
    if (!(step > 0.0)) throw Error(ErrorCode::InvalidInput, "--step must be positive");
    std::vector<double> g;
    if (from > to) return g;
    const auto n = static_cast<long>(std::floor((to - from) / step + 1e-9));
    for (long k = 0; k <= n; ++k) g.push_back(from + static_cast<double>(k) * step);
    return g;
}

TwinKind parse_kind(const std::string& s) {
    if (s == "I" || s == "typeI" || s == "1") return TwinKind::TypeI;
    if (s == "II" || s == "typeII" || s == "2") return TwinKind::TypeII;
    throw Error(ErrorCode::InvalidInput, "--kind must be I or II");
}

StarVariant parse_variant(const std::string& s) {
    if (s == "full" || s == "star") return StarVariant::Full;
    if (s == "half" || s == "half-star") return StarVariant::Half;
    throw Error(ErrorCode::InvalidInput, "--variant must be full or half");
}

void print_json(const nlohmann::ordered_json& j) { std::cout << j.dump(2) << "\n"; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cofkit: twins, cofactor conditions and star twins for cubic-to-monoclinic transformations"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string tol_spec;
    std::uint64_t seed = 0;
    bool json = false;
    bool csv = false;
    bool force = false;
    bool list = false;
    app.add_option("--tol", tol_spec, "tolerance overrides: a number, or key=value,...")->capture_default_str();
    app.add_option("--seed", seed, "seed for stochastic sub-procedures")->capture_default_str();

    // analyze
    InputOptions analyze_in;
    std::optional<double> shear_modulus, yield_stress;
    auto* analyze = app.add_subcommand("analyze", "full report for one set of lattice parameters");
    analyze_in.attach(analyze);
    analyze->add_flag("--json", json, "machine-readable report");
    analyze->add_flag("--force", force, "classify stars even when the cofactor gate fails");
    analyze->add_option("--shear-modulus", shear_modulus, "G, turns the new metric into a Tresca stress");
    analyze->add_option("--yield-stress", yield_stress, "critical stress for the Tresca check");

    // twin-table
    InputOptions table_in;
    auto* table_cmd = app.add_subcommand("twin-table", "twin systems of the variant set");
    table_in.attach(table_cmd);
    table_cmd->add_flag("--json", json, "machine-readable output");

    // curves
    std::string kind_s = "II", variant_s = "full", branch_s, curve_s;
    double from = 0.9, to = 1.0, step = 0.01;
    auto* curves = app.add_subcommand("curves", "lambda(d) curves of star and half-star twins as CSV");
    curves->add_option("--kind", kind_s, "I or II")->capture_default_str();
    curves->add_option("--variant", variant_s, "full or half")->capture_default_str();
    curves->add_option("--from", from)->capture_default_str();
    curves->add_option("--to", to)->capture_default_str();
    curves->add_option("--step", step)->capture_default_str();
    curves->add_option("--branch", branch_s, "single named branch");
    curves->add_option("--curve", curve_s, "figure curve: det-one, cc-both, ortho-cc-II, ortho-cc-I");
    curves->add_flag("--csv", csv, "CSV output (the default)");
    curves->add_flag("--list", list, "list branch names and domains");

    // project
    InputOptions project_in;
    std::string target_s = "Star_typeII";
    int starts = 8;
    auto* project = app.add_subcommand("project", "closest stretch on a cofactor or star manifold");
    project_in.attach(project);
    project->add_option("--target", target_s, "CC, CC_typeI, CC_typeII, Star_typeI, Star_typeII, "
                                              "HalfStar_typeI, HalfStar_typeII")
        ->capture_default_str();
    project->add_option("--starts", starts, "multi-start count")->capture_default_str();
    project->add_flag("--json", json, "machine-readable output");

    // sweep
    InputOptions sweep_in;
    int samples = 100;
    double spread = 1e-3;
    auto* sweep = app.add_subcommand("sweep", "random perturbations of the input, metrics as CSV");
    sweep_in.attach(sweep);
    sweep->add_option("--samples", samples)->capture_default_str();
    sweep->add_option("--spread", spread, "std-dev of the perturbation of a, b, c, d")->capture_default_str();
    sweep->add_flag("--csv", csv, "CSV output (the default)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        Tolerances tol = Tolerances::from_env();
        tol.apply_overrides(tol_spec);

        if (analyze->parsed()) {
            const auto [spec, source] = analyze_in.resolve();
            report::AnalysisOptions opt;
            opt.force = force;
            if (shear_modulus || yield_stress) {
                if (!shear_modulus || !yield_stress)
                    throw Error(ErrorCode::InvalidInput, "--shear-modulus and --yield-stress go together");
                opt.elastic = ElasticConstants{*shear_modulus, *yield_stress};
            }
            const auto r = report::analyze(spec, source, tol, opt);
            if (json) print_json(report::to_json(r));
            else std::cout << report::to_text(r);
        } else if (table_cmd->parsed()) {
            const auto [spec, source] = table_in.resolve();
            const MonoclinicParams p = spec.monoclinic();
            p.validate();
            const VariantSet vs = spec.system == CrystalSystem::Monoclinic ? monoclinic_variants(p)
                                                                          : orthorhombic_variants(spec.ortho);
            const TwinTable t = twin_table(vs, tol);
            if (json) {
                nlohmann::ordered_json j;
                j["schema_version"] = report::kSchemaVersion;
                j["command"] = "twin-table";
                j["system"] = to_string(t.system);
                auto rows = nlohmann::ordered_json::array();
                for (std::size_t r = 0; r < t.rows.size(); ++r) {
                    auto cells = nlohmann::ordered_json::array();
                    for (const auto& e : t.entries)
                        if (e.row == static_cast<int>(r))
                            cells.push_back({{"i", e.i}, {"j", e.j}, {"column", to_string(e.column)},
                                             {"non_conventional", e.non_conventional}});
                    rows.push_back({{"rotation", t.rows[r].label()}, {"pairs", cells}});
                }
                j["rows"] = rows;
                j["warnings"] = t.warnings;
                print_json(j);
            } else {
                std::cout << "rotation,i,j,column,non_conventional\n";
                for (const auto& e : t.entries)
                    std::cout << "\"" << t.rows.at(e.row).label() << "\"," << e.i << "," << e.j << ","
                              << to_string(e.column) << "," << (e.non_conventional ? 1 : 0) << "\n";
                for (const auto& w : t.warnings) std::cerr << "warning: " << w << "\n";
            }
        } else if (curves->parsed()) {
            if (list) {
                std::cout << "branch,kind,variant,case,lo,hi\n";
                for (const auto& b : star_branches())
                    std::printf("%s,%s,%s,%s,%.12g,%.12g\n", b.name.c_str(), to_string(b.kind),
                                to_string(b.variant), to_string(b.scase), b.lo, b.hi);
                return 0;
            }
            const auto grid = range_grid(from, to, step);
            if (!curve_s.empty()) {
                std::cout << report::curves_csv(figure_curve(curve_s, grid));
            } else if (!branch_s.empty()) {
                const StarBranch& b = star_branch(branch_s);
                std::cout << report::curves_csv(star_branch_curve(b, grid), b.scase == StarCase::DEqualsOne);
            } else {
                std::cout << report::curves_csv(
                    star_parameter_curves(parse_kind(kind_s), parse_variant(variant_s), grid));
            }
        } else if (project->parsed()) {
            const auto [spec, source] = project_in.resolve();
            ProjectionOptions po;
            po.seed = seed;
            po.starts = starts;
            const ManifoldTarget target = manifold_target_from_string(target_s);
            const ProjectionResult r = spec.matrix ? project_to_manifold(*spec.matrix, target, tol, po)
                                                   : project_to_manifold(spec.monoclinic(), target, tol, po);
            if (json) print_json(report::to_json(r, spec));
            else std::cout << report::to_text(r);
        } else if (sweep->parsed()) {
            const auto [spec, source] = sweep_in.resolve();
            if (samples < 0) throw Error(ErrorCode::InvalidInput, "--samples must be non-negative");
            const MonoclinicParams base = spec.monoclinic();
            std::mt19937_64 rng(seed);
            std::normal_distribution<double> noise(0.0, spread);
            std::printf("sample,a,b,c,d,lambda2_dev,cc2_typeI,cc2_typeII,equiv_typeI,equiv_typeII,new_typeI,new_typeII\n");
            for (int k = 0; k < samples; ++k) {
                InputSpec s;
                s.mono = {base.a + noise(rng), base.b + noise(rng), base.c + noise(rng), base.d + noise(rng)};
                try {
                    const auto r = report::analyze(s, "sweep", tol);
                    const auto& m = r.summary;
                    std::printf("%d,%.12g,%.12g,%.12g,%.12g,%.6e,%.6e,%.6e,%.6e,%.6e,%.6e,%.6e\n", k, s.mono.a,
                                s.mono.b, s.mono.c, s.mono.d, m.lambda2_dev, m.cc2_type_i, m.cc2_type_ii,
                                m.equiv_type_i, m.equiv_type_ii, m.new_type_i, m.new_type_ii);
                } catch (const Error& e) {
                    if (e.code() == ErrorCode::NonConvergence) throw;
                    std::fprintf(stderr, "sample %d skipped: %s\n", k, e.what());
                }
            }
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == ErrorCode::NonConvergence ? kExitNonConvergence : kExitValidation;
    }
    return 0;
}
