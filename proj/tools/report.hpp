#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cofkit/cofkit.hpp"

namespace cofkit::report {

inline constexpr int kSchemaVersion = 1;

struct PairMetrics {
    int i = 0, j = 0;
    int row = 0;
    TwinColumn column = TwinColumn::A;
    Vec3 axis;
    double axis_residual = 0.0;
    CofactorReport type_i;
    CofactorReport type_ii;
};

struct CompoundMetrics {
    int i = 0, j = 0;
    int row = 0;
    TwinColumn column = TwinColumn::CUpper;
    double d_dev = 0.0;
    bool d_is_middle = false;
};

struct StarEntry {
    int i = 0, j = 0;
    TwinKind kind = TwinKind::TypeII;
    std::string status;  // "ok" or the reason no classification was made
    StarClass classification = StarClass::None;
    double mu_star = 0.0;
    int witnesses = 0;
    double full_curve_distance = 0.0;
    double half_curve_distance = 0.0;
    std::vector<std::pair<int, int>> witness_list;  // (index into P24, χ)
};

struct HullFinding {
    std::string kind;  // "compound" or "typeI/II"
    int i = 0, j = 0;
    std::string status;
    int connections = 0;
    bool exhaustive = false;
};

// Lowest values over the twin systems, as in the comparison table.
struct Summary {
    double lambda2_dev = 0.0;
    double cc2_type_i = 0.0, cc2_type_ii = 0.0;
    double equiv_type_i = 0.0, equiv_type_ii = 0.0;
    double new_type_i = 0.0, new_type_ii = 0.0;
    bool has_type_i_ii = false;
};

struct AnalysisOptions {
    bool force = false;
    std::optional<ElasticConstants> elastic;
};

struct AnalysisReport {
    std::string source;
    InputSpec input;
    VariantSet variants;
    int distinct_variants = 0;
    std::array<double, 3> eigenvalues{};
    TwinTable table;
    std::vector<PairMetrics> pairs;
    std::vector<CompoundMetrics> compounds;
    std::vector<CompoundTripleJunctionReport> compound_junctions;  // (1,2) and (1,3) orbits, monoclinic only
    std::vector<StarEntry> stars;
    std::vector<HullFinding> hull;
    Summary summary;
    std::vector<std::string> warnings;
};

AnalysisReport analyze(const InputSpec& input, const std::string& source, const Tolerances& tol,
                       const AnalysisOptions& opt = {});

// Doubles rounded to 12 significant digits; NaN and infinities become null.
double round12(double x);
nlohmann::ordered_json to_json(const AnalysisReport& r);
nlohmann::ordered_json to_json(const ProjectionResult& r, const InputSpec& input);
std::string to_text(const AnalysisReport& r);
std::string to_text(const ProjectionResult& r);

// CSV rows "branch,d,lambda,residual" ('.' separator, LF endings).
std::string curves_csv(const std::vector<CurveSample>& samples, bool d_equals_one = false);

}  // namespace cofkit::report
