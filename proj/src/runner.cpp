#include "momrep/runner.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "momrep/condensate.hpp"
#include "momrep/crystal.hpp"
#include "momrep/errors.hpp"
#include "momrep/fluid.hpp"
#include "momrep/validate.hpp"
#include "momrep/wigner.hpp"

namespace momrep::cli {

namespace {

constexpr double kPi = std::numbers::pi;

using config::RunConfig;
using config::RunMode;
using nlohmann::ordered_json;

std::string mode_default_path(RunMode mode, const std::string& format) {
    return "momrep_" + config::to_string(mode) + "." + format;
}

/// Common provenance header lines of a CSV export.
std::string csv_preamble(const RunConfig& cfg, const char* what) {
    std::string out;
    out += std::string("# momrep ") + config::to_string(cfg.mode) + " " + what + "\n";
    out += "# config digest: " + cfg.digest + "\n";
    if (cfg.document.contains("params")) {
        out += "# params: " + cfg.document["params"].dump() + "\n";
    }
    return out;
}

ordered_json json_provenance(const RunConfig& cfg) {
    ordered_json out;
    out["mode"] = config::to_string(cfg.mode);
    out["digest"] = cfg.digest;
    if (cfg.document.contains("params")) out["params"] = cfg.document["params"];
    return out;
}

/// Momentum vector of a flat grid node, unused axes at 0.
Vec3 node_momentum(const UniformGrid& grid, std::size_t flat) {
    int idx[kMaxAxes] = {};
    grid.unflatten(flat, idx);
    return grid.point3(idx);
}

void append_point_row(std::string& csv, const Vec3& p, const std::vector<double>& cols,
                      int precision) {
    csv += format_double(p.x(), precision);
    csv += ',';
    csv += format_double(p.y(), precision);
    csv += ',';
    csv += format_double(p.z(), precision);
    for (double c : cols) {
        csv += ',';
        csv += format_double(c, precision);
    }
    csv += '\n';
}

ordered_json json_vec3(const Vec3& v) { return ordered_json::array({v.x(), v.y(), v.z()}); }

struct Exporter {
    const RunConfig& cfg;
    std::string format;
    std::string path;
    RunResult result;

    void deliver(const std::string& content) {
        write_atomic(path, content);
        result.files_written.push_back(path);
    }
};

RunResult run_fluid(const RunConfig& cfg, Exporter& out) {
    const MomentumGrid grid = cfg.grid->momentum_grid();
    const int dim = cfg.grid->dim;
    const int precision = cfg.output.precision;
    std::vector<double> rho(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        rho[i] = fluid::rho1_momentum_fluid_dim(node_momentum(grid, i), cfg.params, dim);
    }
    if (out.format == "csv") {
        std::string csv = csv_preamble(cfg, "momentum distribution");
        csv += "px,py,pz,rho\n";
        for (std::size_t i = 0; i < grid.size(); ++i) {
            append_point_row(csv, node_momentum(grid, i), {rho[i]}, precision);
        }
        out.deliver(csv);
    } else {
        ordered_json doc = json_provenance(cfg);
        doc["grid"] = grid.describe();
        ordered_json rows = ordered_json::array();
        for (std::size_t i = 0; i < grid.size(); ++i) {
            rows.push_back(ordered_json{{"p", json_vec3(node_momentum(grid, i))},
                                        {"rho", rho[i]}});
        }
        doc["distribution"] = rows;
        out.deliver(doc.dump(2) + "\n");
    }
    return out.result;
}

RunResult run_crystal(const RunConfig& cfg, Exporter& out) {
    const crystal::ReciprocalLattice& lattice = *cfg.lattice;
    if (cfg.grid->dim != lattice.dim) {
        throw ValidationError("crystal run: grid.dim must equal lattice.dim");
    }
    const MomentumGrid grid = cfg.grid->momentum_grid();
    const int precision = cfg.output.precision;
    const double a_norm = crystal::normalization_constant_crystal(lattice, cfg.potential,
                                                                  cfg.params, grid);
    std::vector<double> rho(grid.size());
    std::vector<double> eps0(grid.size());
    std::vector<double> psi0_sq(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Vec3 p = node_momentum(grid, i);
        const crystal::BandSolution band =
            crystal::ground_band(p, lattice, cfg.potential, cfg.params);
        eps0[i] = band.eps0;
        psi0_sq[i] = band.psi0 * band.psi0;
        rho[i] = crystal::rho1_momentum_crystal(p, lattice, cfg.potential, cfg.params, a_norm);
    }
    if (out.format == "csv") {
        std::string csv = csv_preamble(cfg, "momentum distribution with band data");
        csv += "# A_norm: " + format_double(a_norm, precision) + "\n";
        csv += "px,py,pz,rho,eps0,psi0_sq\n";
        for (std::size_t i = 0; i < grid.size(); ++i) {
            append_point_row(csv, node_momentum(grid, i), {rho[i], eps0[i], psi0_sq[i]},
                             precision);
        }
        out.deliver(csv);
    } else {
        ordered_json doc = json_provenance(cfg);
        doc["grid"] = grid.describe();
        doc["A_norm"] = a_norm;
        ordered_json rows = ordered_json::array();
        for (std::size_t i = 0; i < grid.size(); ++i) {
            rows.push_back(ordered_json{{"p", json_vec3(node_momentum(grid, i))},
                                        {"rho", rho[i]},
                                        {"eps0", eps0[i]},
                                        {"psi0_sq", psi0_sq[i]}});
        }
        doc["distribution"] = rows;
        out.deliver(doc.dump(2) + "\n");
    }
    return out.result;
}

RunResult run_condensate(const RunConfig& cfg, Exporter& out, double broaden_sigma) {
    const condensate::CondensateSpec& spec = *cfg.condensate_spec;
    const DeltaPeakMeasure measure =
        (spec.lattice || spec.has_structure())
            ? condensate::condensate_crystal_distribution(spec, cfg.params)
            : condensate::condensate_fluid_distribution(spec);
    const Vec3 momentum = condensate::total_momentum(measure);
    const int precision = cfg.output.precision;
    if (out.format == "csv") {
        std::string csv = csv_preamble(cfg, "exact peak table (weights, not densities)");
        csv += "px,py,pz,weight\n";
        for (const DeltaPeak& peak : measure.peaks()) {
            append_point_row(csv, peak.location, {peak.weight}, precision);
        }
        out.deliver(csv);
    } else {
        ordered_json doc = json_provenance(cfg);
        ordered_json rows = ordered_json::array();
        for (const DeltaPeak& peak : measure.peaks()) {
            rows.push_back(ordered_json{{"weight", peak.weight},
                                        {"p", json_vec3(peak.location)}});
        }
        doc["peaks"] = rows;
        doc["total_momentum"] = json_vec3(momentum);
        doc["n_condensate"] = spec.n_condensate;
        out.deliver(doc.dump(2) + "\n");
    }
    if (broaden_sigma > 0.0) {
        for (const DeltaPeak& peak : measure.peaks()) {
            if (peak.location.y() != 0.0 || peak.location.z() != 0.0) {
                throw ValidationError(
                    "broaden: the visualization raster supports peaks on the x axis only");
            }
        }
        double reach = 0.0;
        for (const DeltaPeak& peak : measure.peaks()) {
            reach = std::max(reach, std::abs(peak.location.x()));
        }
        reach += 6.0 * broaden_sigma;
        const double spacing = broaden_sigma / 4.0;
        const int half = static_cast<int>(std::ceil(reach / spacing));
        const double norm = 1.0 / (broaden_sigma * std::sqrt(2.0 * kPi));
        std::string csv = "# momrep condensate gaussian-broadened VISUALIZATION ONLY\n";
        csv += "# peaks convolved with sigma = " + format_double(broaden_sigma, precision) +
               "; not a data export\n";
        csv += "# config digest: " + cfg.digest + "\n";
        csv += "px,py,pz,rho\n";
        for (int i = -half; i <= half; ++i) {
            const double x = i * spacing;
            double value = 0.0;
            for (const DeltaPeak& peak : measure.peaks()) {
                const double d = x - peak.location.x();
                value += peak.weight * norm *
                         std::exp(-d * d / (2.0 * broaden_sigma * broaden_sigma));
            }
            append_point_row(csv, Vec3(x, 0.0, 0.0), {value}, precision);
        }
        const std::string vis_path = out.path + ".broadened.csv";
        write_atomic(vis_path, csv);
        out.result.files_written.push_back(vis_path);
    }
    return out.result;
}

RunResult run_wigner(const RunConfig& cfg, Exporter& out) {
    const int s = cfg.wigner.order;
    const int dim = cfg.grid->dim;
    const int php = cfg.wigner.position_half_points;
    if (s == 2 && out.format == "csv") {
        throw ValidationError(
            "wigner run: order-2 phase-space exports need format json (two-particle grids "
            "do not fit the px,py,pz schema)");
    }
    // Momentum grid: the configured block, one axis set per particle.
    std::vector<GridAxis> maxes(static_cast<std::size_t>(dim * s),
                                GridAxis{cfg.grid->spacing, cfg.grid->half_points()});
    const MomentumGrid mgrid(maxes, cfg.grid->domain);

    double a_norm = 0.0;
    std::unique_ptr<wigner::VsProvider> provider;
    std::vector<GridAxis> xaxes;
    GridDomain xdomain;
    double emin = 0.0;
    double emax = 0.0;
    if (cfg.lattice) {
        if (dim != 1 || cfg.lattice->dim != 1) {
            throw ValidationError("wigner run: lattice case supports one dimension");
        }
        const double period = cfg.lattice->cell_volume();
        xaxes.assign(1, GridAxis{period / (2.0 * php), php});
        xdomain = GridDomain::periodic;
        const MomentumGrid norm_grid(std::vector<GridAxis>(1, maxes[0]), cfg.grid->domain);
        a_norm = crystal::normalization_constant_crystal(*cfg.lattice, cfg.potential, cfg.params,
                                                         norm_grid, crystal::BandMode::full) *
                 period;
        provider = std::make_unique<wigner::CrystalVs>(*cfg.lattice, cfg.potential, cfg.params);
        const double pmax = cfg.grid->extent / 2.0 +
                            cfg.params.hbar * cfg.lattice->basis[0].norm() *
                                cfg.lattice->cutoff[0];
        emax = pmax * pmax / (2.0 * cfg.params.mass) + 2.0 * cfg.potential.max_abs();
        emin = -2.0 * cfg.potential.max_abs();
    } else {
        const double side = std::pow(cfg.params.volume, 1.0 / dim);
        xaxes.assign(static_cast<std::size_t>(dim * s), GridAxis{side / (2.0 * php), php});
        xdomain = GridDomain::box;
        const double thermal = 2.0 * kPi * cfg.params.hbar * cfg.params.hbar /
                               (cfg.params.mass * cfg.params.tau);
        a_norm = cfg.params.density * std::pow(thermal, dim / 2.0);
        provider = std::make_unique<wigner::IdealGasVs>(cfg.params);
        const double pmax = cfg.grid->extent / 2.0;
        emax = static_cast<double>(s) * pmax * pmax / (2.0 * cfg.params.mass);
    }
    const PositionGrid xgrid(xaxes, xdomain);
    const contour::WeightConstants weights(a_norm, cfg.params, dim);
    const contour::ContourSpec spec = contour::ContourSpec::around_spectrum(emin, emax);
    const wigner::WignerField field =
        wigner::wigner_field(s, xgrid, mgrid, *provider, weights, spec, cfg.params);
    const GriddedDistribution marg_x = wigner::marginal_position(field, cfg.params);
    const GriddedDistribution marg_m = wigner::marginal_momentum(field, cfg.params);

    if (out.format == "csv") {
        // One-particle case: export the momentum marginal in the point schema;
        // the full field is a JSON-only payload.
        std::string csv = csv_preamble(cfg, "momentum marginal of the phase-space kernel");
        csv += "px,py,pz,rho\n";
        for (std::size_t i = 0; i < mgrid.size(); ++i) {
            append_point_row(csv, node_momentum(mgrid, i), {marg_m[i]},
                             cfg.output.precision);
        }
        out.deliver(csv);
    } else {
        ordered_json doc = json_provenance(cfg);
        doc["order"] = s;
        doc["position_grid"] = xgrid.describe();
        doc["momentum_grid"] = mgrid.describe();
        doc["max_abs_imaginary"] = field.max_abs_imag;
        doc["values_layout"] = "row-major [position_flat][momentum_flat]";
        doc["values"] = field.values;
        doc["marginal_position"] = marg_x.values();
        doc["marginal_momentum"] = marg_m.values();
        out.deliver(doc.dump(2) + "\n");
    }
    return out.result;
}

RunResult run_validate(const RunConfig& cfg, Exporter& out) {
    const std::vector<validate::SuiteResult> suites = validate::run_all_suites();
    ordered_json doc = json_provenance(cfg);
    doc.update(validate::report_json(suites));
    out.deliver(doc.dump(2) + "\n");
    out.result.exit_code = validate::all_pass(suites) ? 0 : 4;
    return out.result;
}

} // namespace

std::string format_double(double value, int precision) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", precision, value);
    return std::string(buf);
}

void write_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream stream(tmp, std::ios::binary | std::ios::trunc);
        if (!stream) throw Error("cannot open \"" + tmp + "\" for writing");
        stream << content;
        stream.flush();
        if (!stream) throw Error("short write to \"" + tmp + "\"");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        throw Error("cannot move \"" + tmp + "\" into place at \"" + path + "\"");
    }
}

RunResult run(const config::RunConfig& cfg, const RunOverrides& overrides) {
    Exporter out{cfg, cfg.output.format, cfg.output.path, {}};
    if (!overrides.format.empty()) out.format = overrides.format;
    if (out.format != "csv" && out.format != "json") {
        throw ValidationError("format must be csv or json, got \"" + out.format + "\"");
    }
    if (cfg.mode == RunMode::validate && out.format != "json") {
        throw ValidationError("validate reports are json; pass --format json or omit it");
    }
    if (!overrides.out_path.empty()) out.path = overrides.out_path;
    if (out.path.empty()) out.path = mode_default_path(cfg.mode, out.format);
    if (overrides.broaden_sigma < 0.0) {
        throw ValidationError("broaden sigma must be positive");
    }
    if (overrides.broaden_sigma > 0.0 && cfg.mode != RunMode::condensate) {
        throw ValidationError("broaden applies to condensate peak exports only");
    }
    switch (cfg.mode) {
    case RunMode::fluid: return run_fluid(cfg, out);
    case RunMode::crystal: return run_crystal(cfg, out);
    case RunMode::condensate: return run_condensate(cfg, out, overrides.broaden_sigma);
    case RunMode::wigner: return run_wigner(cfg, out);
    case RunMode::validate: return run_validate(cfg, out);
    }
    throw Error("unhandled mode");
}

} // namespace momrep::cli
