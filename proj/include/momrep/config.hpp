#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "momrep/condensate.hpp"
#include "momrep/core.hpp"
#include "momrep/crystal.hpp"

namespace momrep::config {

enum class RunMode { fluid, crystal, condensate, wigner, validate };

RunMode mode_from_string(const std::string& name);
std::string to_string(RunMode mode);

/// Output options; CLI flags override the config block.
struct OutputOptions {
    std::string format = "csv"; // csv | json
    std::string path;           // empty: derived from the mode
    int precision = 17;         // significant digits in exports
};

/// Requested momentum grid: per-axis extent (full length) and spacing; the
/// node count is the nearest symmetric odd grid.
struct GridBlock {
    int dim = 3;
    double spacing = 0.0;
    double extent = 0.0;
    GridDomain domain = GridDomain::decaying;

    int half_points() const;
    MomentumGrid momentum_grid() const;
};

/// Phase-space run controls: kernel order and the resolution of the position
/// block (its extent is the lattice period when a lattice is present, the
/// system volume otherwise).
struct WignerBlock {
    int order = 1;
    int position_half_points = 32;
};

/// Fully validated run request. `document` preserves the parsed configuration
/// for provenance embedding; `digest` is a 64-bit FNV-1a hash of the raw text.
struct RunConfig {
    RunMode mode = RunMode::validate;
    PhysicalParams params;
    std::optional<crystal::ReciprocalLattice> lattice;
    crystal::FourierPotential potential;
    std::optional<condensate::CondensateSpec> condensate_spec;
    std::optional<GridBlock> grid;
    WignerBlock wigner;
    OutputOptions output;
    nlohmann::ordered_json document;
    std::string digest;
};

/// 64-bit FNV-1a hash, rendered as 16 hex digits.
std::string fnv1a_digest(const std::string& text);

/// Parses and validates a JSON configuration. Exactly the blocks a mode needs
/// are accepted; unknown keys are rejected with the key name and its line.
/// Throws ParseError on malformed text (with line/column), ValidationError on
/// semantic violations.
RunConfig parse_config(const std::string& text);

/// parse_config plus file loading; the file name is prepended to diagnostics.
RunConfig load_config(const std::string& path);

} // namespace momrep::config
