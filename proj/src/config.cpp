#include "momrep/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "momrep/errors.hpp"

namespace momrep::config {

using nlohmann::ordered_json;

RunMode mode_from_string(const std::string& name) {
    if (name == "fluid") return RunMode::fluid;
    if (name == "crystal") return RunMode::crystal;
    if (name == "condensate") return RunMode::condensate;
    if (name == "wigner") return RunMode::wigner;
    if (name == "validate") return RunMode::validate;
    throw ValidationError("config: unknown mode \"" + name +
                          "\"; expected fluid, crystal, condensate, wigner, or validate");
}

std::string to_string(RunMode mode) {
    switch (mode) {
    case RunMode::fluid: return "fluid";
    case RunMode::crystal: return "crystal";
    case RunMode::condensate: return "condensate";
    case RunMode::wigner: return "wigner";
    case RunMode::validate: return "validate";
    }
    return "?";
}

int GridBlock::half_points() const {
    return static_cast<int>(std::nearbyint(extent / (2.0 * spacing)));
}

MomentumGrid GridBlock::momentum_grid() const {
    return MomentumGrid(std::vector<GridAxis>(static_cast<std::size_t>(dim),
                                              GridAxis{spacing, half_points()}),
                        domain);
}

std::string fnv1a_digest(const std::string& text) {
    std::uint64_t hash = 14695981039346656037ull;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return std::string(buf);
}

namespace {

/// Best-effort line lookup of a quoted key in the raw text, for diagnostics.
struct Cursor {
    const std::string& text;

    std::string locate(const std::string& key) const {
        const std::string needle = "\"" + key + "\"";
        const std::size_t pos = text.find(needle);
        if (pos == std::string::npos) return "";
        const auto line = 1 + std::count(text.begin(),
                                         text.begin() + static_cast<std::ptrdiff_t>(pos), '\n');
        return " (line " + std::to_string(line) + ")";
    }
};

[[noreturn]] void fail(const std::string& message) { throw ValidationError("config: " + message); }

void reject_unknown(const ordered_json& obj, std::initializer_list<const char*> allowed,
                    const std::string& block, const Cursor& cursor) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* key : allowed) {
            if (item.key() == key) {
                known = true;
                break;
            }
        }
        if (!known) {
            fail("unknown key \"" + item.key() + "\" in " + block + cursor.locate(item.key()));
        }
    }
}

const ordered_json* find(const ordered_json& obj, const char* key) {
    const auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

double get_number(const ordered_json& obj, const char* key, const std::string& block,
                  const Cursor& cursor) {
    const ordered_json* v = find(obj, key);
    if (!v) fail(block + " is missing the required key \"" + std::string(key) + "\"");
    if (!v->is_number()) fail(block + "." + key + " must be a number" + cursor.locate(key));
    return v->get<double>();
}

double get_number_or(const ordered_json& obj, const char* key, double fallback,
                     const std::string& block, const Cursor& cursor) {
    const ordered_json* v = find(obj, key);
    if (!v) return fallback;
    if (!v->is_number()) fail(block + "." + key + " must be a number" + cursor.locate(key));
    return v->get<double>();
}

std::int64_t get_integer(const ordered_json& obj, const char* key, const std::string& block,
                         const Cursor& cursor) {
    const ordered_json* v = find(obj, key);
    if (!v) fail(block + " is missing the required key \"" + std::string(key) + "\"");
    if (!v->is_number_integer()) {
        fail(block + "." + key + " must be an integer" + cursor.locate(key));
    }
    return v->get<std::int64_t>();
}

std::string get_string_or(const ordered_json& obj, const char* key, const std::string& fallback,
                          const std::string& block, const Cursor& cursor) {
    const ordered_json* v = find(obj, key);
    if (!v) return fallback;
    if (!v->is_string()) fail(block + "." + key + " must be a string" + cursor.locate(key));
    return v->get<std::string>();
}

Vec3 get_vec3(const ordered_json& value, const std::string& what, const Cursor&) {
    if (!value.is_array() || value.size() != 3) fail(what + " must be an array of 3 numbers");
    Vec3 out;
    for (int i = 0; i < 3; ++i) {
        if (!value[static_cast<std::size_t>(i)].is_number()) {
            fail(what + " must be an array of 3 numbers");
        }
        out(i) = value[static_cast<std::size_t>(i)].get<double>();
    }
    return out;
}

crystal::Triple get_triple(const ordered_json& value, const std::string& what) {
    if (!value.is_array() || value.size() != 3) fail(what + " must be an array of 3 integers");
    crystal::Triple out{};
    for (std::size_t i = 0; i < 3; ++i) {
        if (!value[i].is_number_integer()) fail(what + " must be an array of 3 integers");
        out[i] = value[i].get<int>();
    }
    return out;
}

PhysicalParams parse_params(const ordered_json& block, RunMode mode, const Cursor& cursor) {
    reject_unknown(block, {"hbar", "mass", "tau", "theta", "density", "N", "V", "statistics"},
                   "params", cursor);
    const double tau = get_number(block, "tau", "params", cursor);
    const std::int64_t n = get_integer(block, "N", "params", cursor);
    const double volume = get_number(block, "V", "params", cursor);
    const double hbar = get_number_or(block, "hbar", 1.0, "params", cursor);
    const double mass = get_number_or(block, "mass", 1.0, "params", cursor);
    const std::string stat_name =
        get_string_or(block, "statistics", "bose", "params", cursor);
    Statistics statistics;
    if (stat_name == "bose") {
        statistics = Statistics::bose;
    } else if (stat_name == "fermi") {
        statistics = Statistics::fermi;
    } else {
        fail("params.statistics must be \"bose\" or \"fermi\", got \"" + stat_name + "\"" +
             cursor.locate("statistics"));
    }
    if (mode != RunMode::condensate && !(tau > 0.0)) {
        fail("params.tau = " + std::to_string(tau) + " is not positive" +
             cursor.locate("tau") +
             "; zero or negative tau is the condensate regime — use the condensate mode");
    }
    PhysicalParams params = make_params(tau, n, volume, statistics, hbar, mass);
    params.temperature = get_number_or(block, "theta", 0.0, "params", cursor);
    if (const ordered_json* density = find(block, "density")) {
        if (!density->is_number()) fail("params.density must be a number" +
                                        cursor.locate("density"));
        const double given = density->get<double>();
        if (std::abs(given - params.density) > 1e-12 * std::max(1.0, std::abs(params.density))) {
            fail("params.density = " + std::to_string(given) + " conflicts with N / V = " +
                 std::to_string(params.density) + cursor.locate("density"));
        }
    }
    params.validate();
    return params;
}

std::pair<crystal::ReciprocalLattice, crystal::FourierPotential>
parse_lattice(const ordered_json& block, const Cursor& cursor) {
    reject_unknown(block, {"dim", "basis", "cutoff", "potential"}, "lattice", cursor);
    crystal::ReciprocalLattice lattice;
    lattice.dim = static_cast<int>(get_integer(block, "dim", "lattice", cursor));
    if (lattice.dim < 1 || lattice.dim > 3) fail("lattice.dim must be 1, 2, or 3");
    const ordered_json* basis = find(block, "basis");
    if (!basis || !basis->is_array() || static_cast<int>(basis->size()) != lattice.dim) {
        fail("lattice.basis must list exactly dim basis vectors" + cursor.locate("basis"));
    }
    for (int i = 0; i < lattice.dim; ++i) {
        lattice.basis[static_cast<std::size_t>(i)] =
            get_vec3((*basis)[static_cast<std::size_t>(i)],
                     "lattice.basis[" + std::to_string(i) + "]", cursor);
    }
    const ordered_json* cutoff = find(block, "cutoff");
    if (!cutoff || !cutoff->is_array() || static_cast<int>(cutoff->size()) != lattice.dim) {
        fail("lattice.cutoff must list exactly dim integers" + cursor.locate("cutoff"));
    }
    lattice.cutoff = {0, 0, 0};
    for (int i = 0; i < lattice.dim; ++i) {
        if (!(*cutoff)[static_cast<std::size_t>(i)].is_number_integer()) {
            fail("lattice.cutoff entries must be integers" + cursor.locate("cutoff"));
        }
        lattice.cutoff[static_cast<std::size_t>(i)] =
            (*cutoff)[static_cast<std::size_t>(i)].get<int>();
    }
    lattice.validate();

    std::vector<std::pair<crystal::Triple, Complex>> coefficients;
    if (const ordered_json* potential = find(block, "potential")) {
        if (!potential->is_array()) fail("lattice.potential must be an array" +
                                         cursor.locate("potential"));
        for (const ordered_json& entry : *potential) {
            if (!entry.is_object()) fail("lattice.potential entries must be objects");
            reject_unknown(entry, {"B", "re", "im"}, "lattice.potential entry", cursor);
            const ordered_json* b = find(entry, "B");
            if (!b) fail("lattice.potential entry is missing \"B\"");
            coefficients.emplace_back(
                get_triple(*b, "lattice.potential B"),
                Complex(get_number(entry, "re", "lattice.potential entry", cursor),
                        get_number_or(entry, "im", 0.0, "lattice.potential entry", cursor)));
        }
    }
    return {lattice, crystal::FourierPotential(std::move(coefficients))};
}

condensate::CondensateSpec parse_condensate(const ordered_json& block,
                                            const std::optional<crystal::ReciprocalLattice>& lat,
                                            const Cursor& cursor) {
    reject_unknown(block, {"N_c", "p0", "coefficients"}, "condensate", cursor);
    condensate::CondensateSpec spec;
    spec.n_condensate = get_number(block, "N_c", "condensate", cursor);
    if (const ordered_json* p0 = find(block, "p0")) {
        spec.p0 = get_vec3(*p0, "condensate.p0", cursor);
    }
    if (const ordered_json* coefficients = find(block, "coefficients")) {
        if (!coefficients->is_array()) fail("condensate.coefficients must be an array" +
                                            cursor.locate("coefficients"));
        for (const ordered_json& entry : *coefficients) {
            if (!entry.is_object()) fail("condensate.coefficients entries must be objects");
            reject_unknown(entry, {"A", "re", "im"}, "condensate coefficient", cursor);
            const ordered_json* a = find(entry, "A");
            if (!a) fail("condensate coefficient is missing \"A\"");
            spec.coefficients.emplace_back(
                get_triple(*a, "condensate coefficient A"),
                Complex(get_number(entry, "re", "condensate coefficient", cursor),
                        get_number_or(entry, "im", 0.0, "condensate coefficient", cursor)));
        }
    }
    spec.lattice = lat;
    spec.validate();
    return spec;
}

GridBlock parse_grid(const ordered_json& block, const Cursor& cursor) {
    reject_unknown(block, {"dim", "spacing", "extent", "domain"}, "grid", cursor);
    GridBlock grid;
    grid.dim = static_cast<int>(get_integer(block, "dim", "grid", cursor));
    if (grid.dim < 1 || grid.dim > 3) fail("grid.dim must be 1, 2, or 3");
    grid.spacing = get_number(block, "spacing", "grid", cursor);
    grid.extent = get_number(block, "extent", "grid", cursor);
    if (!(grid.spacing > 0.0)) fail("grid.spacing must be > 0");
    if (!(grid.extent > 0.0)) fail("grid.extent must be > 0");
    const std::string domain = get_string_or(block, "domain", "decaying", "grid", cursor);
    if (domain == "decaying") {
        grid.domain = GridDomain::decaying;
    } else if (domain == "box") {
        grid.domain = GridDomain::box;
    } else if (domain == "periodic") {
        grid.domain = GridDomain::periodic;
    } else {
        fail("grid.domain must be decaying, box, or periodic" + cursor.locate("domain"));
    }
    if (grid.half_points() < 1) fail("grid.extent must cover at least one spacing either side");
    const double actual = 2.0 * grid.half_points() * grid.spacing;
    if (std::abs(actual - grid.extent) > 1e-6 * grid.extent) {
        fail("grid.extent = " + std::to_string(grid.extent) +
             " is not an even multiple of spacing (nearest achievable " + std::to_string(actual) +
             ")");
    }
    return grid;
}

WignerBlock parse_wigner(const ordered_json& block, const Cursor& cursor) {
    reject_unknown(block, {"order", "position_half_points"}, "wigner", cursor);
    WignerBlock out;
    out.order = static_cast<int>(
        get_number_or(block, "order", 1.0, "wigner", cursor));
    if (out.order != 1 && out.order != 2) fail("wigner.order must be 1 or 2");
    out.position_half_points = static_cast<int>(
        get_number_or(block, "position_half_points", 32.0, "wigner", cursor));
    if (out.position_half_points < 4) fail("wigner.position_half_points must be at least 4");
    return out;
}

OutputOptions parse_output(const ordered_json& block, const Cursor& cursor) {
    reject_unknown(block, {"format", "path", "precision"}, "output", cursor);
    OutputOptions out;
    out.format = get_string_or(block, "format", "csv", "output", cursor);
    if (out.format != "csv" && out.format != "json") {
        fail("output.format must be \"csv\" or \"json\"" + cursor.locate("format"));
    }
    out.path = get_string_or(block, "path", "", "output", cursor);
    out.precision = static_cast<int>(
        get_number_or(block, "precision", 17.0, "output", cursor));
    if (out.precision < 3 || out.precision > 17) fail("output.precision must be in [3, 17]");
    return out;
}

struct BlockRule {
    bool required = false;
    bool allowed = false;
};

} // namespace

RunConfig parse_config(const std::string& text) {
    const Cursor cursor{text};
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& error) {
        throw ParseError(std::string("config: ") + error.what());
    }
    if (!doc.is_object()) throw ParseError("config: the top level must be an object");

    RunConfig out;
    out.document = doc;
    out.digest = fnv1a_digest(text);

    const ordered_json* mode = find(doc, "mode");
    if (!mode || !mode->is_string()) fail("a string \"mode\" key is required");
    out.mode = mode_from_string(mode->get<std::string>());

    // Block admission matrix per mode.
    auto rule = [&](const char* name) -> BlockRule {
        const std::string key = name;
        switch (out.mode) {
        case RunMode::fluid:
            if (key == "params" || key == "grid") return {true, true};
            if (key == "output") return {false, true};
            return {};
        case RunMode::crystal:
            if (key == "params" || key == "lattice" || key == "grid") return {true, true};
            if (key == "output") return {false, true};
            return {};
        case RunMode::condensate:
            if (key == "params" || key == "condensate") return {true, true};
            if (key == "lattice" || key == "output") return {false, true};
            return {};
        case RunMode::wigner:
            if (key == "params" || key == "grid") return {true, true};
            if (key == "lattice" || key == "wigner" || key == "output") return {false, true};
            return {};
        case RunMode::validate:
            if (key == "output") return {false, true};
            return {};
        }
        return {};
    };
    static const char* kBlocks[] = {"params", "lattice", "condensate", "grid", "wigner",
                                    "output"};
    for (const auto& item : doc.items()) {
        if (item.key() == "mode") continue;
        bool allowed = false;
        for (const char* name : kBlocks) {
            if (item.key() == name && rule(name).allowed) allowed = true;
        }
        if (!allowed) {
            fail("block \"" + item.key() + "\" is not accepted in " + to_string(out.mode) +
                 " mode" + cursor.locate(item.key()));
        }
        if (!item.value().is_object()) {
            fail("block \"" + item.key() + "\" must be an object" + cursor.locate(item.key()));
        }
    }
    for (const char* name : kBlocks) {
        if (rule(name).required && !find(doc, name)) {
            fail(to_string(out.mode) + " mode requires a \"" + std::string(name) + "\" block");
        }
    }

    if (const ordered_json* block = find(doc, "params")) {
        out.params = parse_params(*block, out.mode, cursor);
    }
    if (const ordered_json* block = find(doc, "lattice")) {
        auto [lattice, potential] = parse_lattice(*block, cursor);
        out.lattice = lattice;
        out.potential = std::move(potential);
    }
    if (const ordered_json* block = find(doc, "condensate")) {
        out.condensate_spec = parse_condensate(*block, out.lattice, cursor);
    }
    if (const ordered_json* block = find(doc, "grid")) {
        out.grid = parse_grid(*block, cursor);
    }
    if (const ordered_json* block = find(doc, "wigner")) {
        out.wigner = parse_wigner(*block, cursor);
    }
    if (const ordered_json* block = find(doc, "output")) {
        out.output = parse_output(*block, cursor);
    } else if (out.mode == RunMode::condensate || out.mode == RunMode::validate) {
        // Structured payloads (peak lists, check reports) default to json;
        // the grid modes keep the csv point-table default.
        out.output.format = "json";
    }
    if (out.mode == RunMode::wigner && out.lattice && out.wigner.order != 1) {
        fail("wigner.order must be 1 when a lattice is present; the two-particle kernel is "
             "only available for the uniform gas");
    }
    return out;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("config: cannot open \"" + path + "\"");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

} // namespace momrep::config
