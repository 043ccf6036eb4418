#pragma once

// File formats: JSON for operators, states, tolerance overrides, universes,
// daseinised values, k-values and check reports; DOT for the coarsening
// order; CSV for arrow tabulations. Every emitter iterates containers in
// their sorted canonical order, so equal inputs produce byte-equal output.

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "toposqt/quantity.hpp"
#include "toposqt/truth.hpp"

namespace toposqt {

// --- Matrices, operators, states ------------------------------------------
// Matrix JSON: {"dim": n, "entries": [[[re,im], ...], ...]} (row-major).
nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);

// State JSON: {"dim": n, "amplitudes": [[re,im], ...]}.
nlohmann::json state_to_json(const StateVector& psi);
StateVector state_from_json(const nlohmann::json& j, const TolerancePolicy& policy = {});

// --- Tolerances ------------------------------------------------------------
nlohmann::json tolerances_to_json(const TolerancePolicy& policy);
// Partial override: fields present in j replace defaults; unknown fields are
// rejected so typos cannot silently fall back to defaults.
TolerancePolicy tolerances_from_json(const nlohmann::json& j);
TolerancePolicy load_tolerances(const std::string& path);
// Resolution order: explicit path if nonempty, else the file named by the
// TOPOSQT_TOLERANCES environment variable, else built-in defaults.
TolerancePolicy resolve_tolerances(const std::string& explicit_path = "");

// --- Universes ---------------------------------------------------------------
// {"dim", "include_trivial", "contexts": [{"key", "blocks": [matrix...]}...],
//  "hasse": [[child, parent]...]} with contexts in canonical key order.
nlohmann::json universe_to_json(const ContextUniverse& universe);
// Rebuilds every context from its blocks and recomputes keys and the
// coarsening order; any mismatch with the stored keys or edges is a
// ParseError (the file was edited or produced under other tolerances).
ContextUniverse universe_from_json(const nlohmann::json& j,
                                   const TolerancePolicy& policy = {});

// --- Daseinised values and k-values ----------------------------------------
// {"context_key", "coefficients", "matrix"}.
nlohmann::json daseinised_to_json(const DaseinisedValue& value, const Context& v);
// {"root", "bv": {context_key: value, ...}}.
nlohmann::json kvalue_to_json(const KValue& value);

// --- Reports ----------------------------------------------------------------
struct CheckResult {
    std::string name;
    bool pass = false;
    double max_deviation = 0.0;
    std::string details;  // locations / counterexample keys, empty when clean
};
// {"seed", "checks": [{"name","pass","max_deviation","details"}...], "pass"}.
nlohmann::json report_to_json(std::uint64_t seed, const std::vector<CheckResult>& results);

// --- Text renderings ---------------------------------------------------------
// Hasse diagram: nodes V0..Vn in canonical key order, labelled with the
// block-rank signature; edges child -> parent along covers.
std::string universe_to_dot(const ContextUniverse& universe);

// One row per (stage, character, subcontext): columns stage, character,
// subcontext, inner, outer. Single-direction arrows leave the other value
// column empty.
std::string arrow_to_csv(const QuantityArrow& arrow);

// Parse a JSON file; filesystem and syntax problems surface as ParseError
// with the underlying diagnostic (byte position included for syntax).
nlohmann::json read_json_file(const std::string& path);

}  // namespace toposqt
