#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cofkit/lattice.hpp"
#include "cofkit/linalg3.hpp"

namespace cofkit {

struct MaterialPreset {
    std::string name;
    CrystalSystem system = CrystalSystem::Monoclinic;
    std::optional<MonoclinicParams> params;  // absent for reference-only presets
    std::string provenance;
    bool computable = true;
    std::map<std::string, double> reference;  // metric name → printed value

    Mat3 matrix() const;  // InvalidInput when not computable
};

// ZnAuCu, ZnAuCu-star-target, ZnAuCu-cc-target, TiNbAl-reference.
const MaterialPreset& preset(const std::string& name);  // UnknownMaterial
std::vector<std::string> preset_names();

// Flat key=value input: a, b, c, d, system=monoclinic|orthorhombic, name,
// and an optional full-matrix override "U=u11 u12 u13 u21 ... u33" (which
// must carry the monoclinic zero pattern). Lines or commas separate pairs;
// '#' starts a comment.
struct InputSpec {
    std::string name;
    CrystalSystem system = CrystalSystem::Monoclinic;
    MonoclinicParams mono;
    OrthorhombicParams ortho;
    std::optional<Mat3> matrix;

    // The monoclinic parameters the pipeline runs on (orthorhombic input as
    // a = c).
    MonoclinicParams monoclinic() const;
};

InputSpec parse_input(const std::string& text);  // InvalidInput
std::string format_input(const InputSpec& spec);  // %.17g, round-trips bit-exactly
InputSpec preset_input(const MaterialPreset& p);   // InvalidInput when not computable

}  // namespace cofkit
