#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace momrep::validate {

/// One measured invariant: pass is decided by the suite (usually
/// measured <= threshold; ratio checks use measured >= threshold).
struct CheckResult {
    std::string name;
    double measured = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

/// One invariant suite. elapsed_seconds is informational and never
/// serialized, so reports stay byte-stable across runs.
struct SuiteResult {
    std::string name;
    bool pass = true;
    double elapsed_seconds = 0.0;
    std::vector<CheckResult> checks;
};

/// Uniform-fluid distribution: contour route vs closed form, and the
/// numerically fixed normalization constant vs its closed form.
SuiteResult suite_fluid_closed_form();

/// Residue weights vs contour quadrature on seeded random pole sets.
SuiteResult suite_residue_contour_duality();

/// Parseval, transform round-trips, and density-matrix trace preservation on
/// a family of Gaussian wave packets.
SuiteResult suite_fourier_consistency();

/// Phase-space marginals vs directly computed distributions (uniform and
/// periodic cases) and the exact two-particle Fermi exchange zero.
SuiteResult suite_wigner_marginals();

/// Band-structure limits: empty lattice, perturbative zone-boundary gap, and
/// grid-independent normalization.
SuiteResult suite_crystal_limits();

/// Exact peak measures: weight totals, first moments, and zero-offset peak
/// locations on seeded random coefficient sets.
SuiteResult suite_condensate_exactness();

/// Finite-difference residual checks of the governing equations, including
/// 4th-order convergence under grid halving.
SuiteResult suite_hierarchy_residuals();

/// Zero-temperature ideal-Fermi energy parameter against the mode-counting
/// oracle.
SuiteResult suite_fermi_special_value();

/// Numeric text round-trip: exported doubles parse back bit-identical.
SuiteResult suite_export_roundtrip();

/// All suites in fixed order.
std::vector<SuiteResult> run_all_suites();

bool all_pass(const std::vector<SuiteResult>& suites);

/// Machine-readable report; deterministic for identical inputs (timings are
/// deliberately excluded).
nlohmann::ordered_json report_json(const std::vector<SuiteResult>& suites);

} // namespace momrep::validate
