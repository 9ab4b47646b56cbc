#include <doctest.h>

#include <string>

#include "momrep/config.hpp"
#include "momrep/errors.hpp"

using namespace momrep;
using config::parse_config;
using config::RunMode;

namespace {

const char* kFluidConfig = R"({
  "mode": "fluid",
  "params": {"tau": 1.0, "N": 100, "V": 1000.0, "statistics": "bose"},
  "grid": {"dim": 1, "spacing": 0.1, "extent": 16.0}
})";

} // namespace

TEST_CASE("minimal fluid config parses with derived quantities filled in") {
    const config::RunConfig cfg = parse_config(kFluidConfig);
    CHECK(cfg.mode == RunMode::fluid);
    CHECK(cfg.params.tau == 1.0);
    CHECK(cfg.params.n_particles == 100);
    CHECK(cfg.params.volume == 1000.0);
    CHECK(cfg.params.density == doctest::Approx(0.1));
    CHECK(cfg.params.statistics == Statistics::bose);
    REQUIRE(cfg.grid.has_value());
    CHECK(cfg.grid->dim == 1);
    CHECK(cfg.grid->half_points() == 80);
    CHECK(cfg.output.format == "csv");
    CHECK(cfg.digest.size() == 16);
}

TEST_CASE("malformed json reports a parse location") {
    try {
        parse_config("{\"mode\": \"fluid\",}");
        FAIL("expected ParseError");
    } catch (const ParseError& err) {
        CHECK(std::string(err.what()).find("line") != std::string::npos);
    }
}

TEST_CASE("unknown keys are named together with their line") {
    const char* text = R"({
  "mode": "fluid",
  "params": {"tau": 1.0, "N": 100, "V": 1000.0,
             "taul": 2.0},
  "grid": {"dim": 1, "spacing": 0.1, "extent": 16.0}
})";
    try {
        parse_config(text);
        FAIL("expected ValidationError");
    } catch (const ValidationError& err) {
        const std::string what = err.what();
        CHECK(what.find("taul") != std::string::npos);
        CHECK(what.find("line 4") != std::string::npos);
    }
}

TEST_CASE("crystal mode without a lattice block names the missing block") {
    const char* text = R"({
  "mode": "crystal",
  "params": {"tau": 1.0, "N": 100, "V": 100.0},
  "grid": {"dim": 1, "spacing": 0.1, "extent": 16.0}
})";
    try {
        parse_config(text);
        FAIL("expected ValidationError");
    } catch (const ValidationError& err) {
        CHECK(std::string(err.what()).find("lattice") != std::string::npos);
    }
}

TEST_CASE("blocks not admitted by the mode are rejected") {
    const char* text = R"({
  "mode": "fluid",
  "params": {"tau": 1.0, "N": 100, "V": 1000.0},
  "grid": {"dim": 1, "spacing": 0.1, "extent": 16.0},
  "lattice": {"dim": 1, "basis": [[1.0, 0.0, 0.0]], "cutoff": [8]}
})";
    CHECK_THROWS_AS(parse_config(text), ValidationError);
}

TEST_CASE("negative tau outside condensate mode cites the condensate regime") {
    const char* text = R"({
  "mode": "fluid",
  "params": {"tau": -1.0, "N": 100, "V": 1000.0},
  "grid": {"dim": 1, "spacing": 0.1, "extent": 16.0}
})";
    try {
        parse_config(text);
        FAIL("expected ValidationError");
    } catch (const ValidationError& err) {
        CHECK(std::string(err.what()).find("condensate") != std::string::npos);
    }
}

TEST_CASE("redundant density must be consistent with N and V") {
    const char* text = R"({
  "mode": "fluid",
  "params": {"tau": 1.0, "N": 100, "V": 1000.0, "density": 0.2},
  "grid": {"dim": 1, "spacing": 0.1, "extent": 16.0}
})";
    CHECK_THROWS_AS(parse_config(text), ValidationError);
}

TEST_CASE("grid extent must be commensurate with the spacing") {
    const char* text = R"({
  "mode": "fluid",
  "params": {"tau": 1.0, "N": 100, "V": 1000.0},
  "grid": {"dim": 1, "spacing": 0.1, "extent": 16.05}
})";
    CHECK_THROWS_AS(parse_config(text), ValidationError);
}

TEST_CASE("crystal config parses lattice, potential, and cutoffs") {
    const char* text = R"({
  "mode": "crystal",
  "params": {"tau": 1.0, "N": 100, "V": 100.0},
  "lattice": {
    "dim": 1,
    "basis": [[6.283185307179586, 0.0, 0.0]],
    "cutoff": [8],
    "potential": [{"B": [1, 0, 0], "re": 0.25}, {"B": [-1, 0, 0], "re": 0.25}]
  },
  "grid": {"dim": 1, "spacing": 0.04, "extent": 37.68}
})";
    const config::RunConfig cfg = parse_config(text);
    REQUIRE(cfg.lattice.has_value());
    CHECK(cfg.lattice->dim == 1);
    CHECK(cfg.lattice->cutoff[0] == 8);
    CHECK(cfg.potential.coefficient({1, 0, 0}) == Complex(0.25, 0.0));
    CHECK(cfg.potential.coefficient({-1, 0, 0}) == Complex(0.25, 0.0));
}

TEST_CASE("condensate config defaults to json output and validates coefficients") {
    const char* text = R"({
  "mode": "condensate",
  "params": {"tau": -0.5, "N": 1000, "V": 1000.0},
  "condensate": {"N_c": 800.0, "p0": [0.5, 0.0, 0.0]}
})";
    const config::RunConfig cfg = parse_config(text);
    CHECK(cfg.output.format == "json");
    REQUIRE(cfg.condensate_spec.has_value());
    CHECK(cfg.condensate_spec->n_condensate == 800.0);
    CHECK(cfg.condensate_spec->p0.x() == 0.5);
}

TEST_CASE("validate mode accepts a bare mode line and defaults to json") {
    const config::RunConfig cfg = parse_config(R"({"mode": "validate"})");
    CHECK(cfg.mode == RunMode::validate);
    CHECK(cfg.output.format == "json");
}

TEST_CASE("wigner mode with a lattice restricts the order to one") {
    const char* text = R"({
  "mode": "wigner",
  "params": {"tau": 1.0, "N": 60, "V": 60.0},
  "lattice": {"dim": 1, "basis": [[1.0, 0.0, 0.0]], "cutoff": [16]},
  "wigner": {"order": 2},
  "grid": {"dim": 1, "spacing": 0.1, "extent": 16.0}
})";
    CHECK_THROWS_AS(parse_config(text), ValidationError);
}

TEST_CASE("digest is deterministic, input-sensitive, and format-stable") {
    const std::string a = config::fnv1a_digest("abc");
    CHECK(a == config::fnv1a_digest("abc"));
    CHECK(a != config::fnv1a_digest("abd"));
    CHECK(a.size() == 16);
    // Frozen value: offset-basis 0xcbf29ce484222325, prime 0x100000001b3.
    CHECK(a == "e71fa2190541574b");
}

TEST_CASE("unknown mode names are rejected") {
    CHECK_THROWS_AS(parse_config(R"({"mode": "plasma"})"), ValidationError);
    CHECK_THROWS_AS(config::mode_from_string("plasma"), ValidationError);
    CHECK(config::to_string(RunMode::wigner) == "wigner");
    CHECK(config::mode_from_string("wigner") == RunMode::wigner);
}
