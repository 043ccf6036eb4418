// Command-line front end: build context universes, daseinise operators,
// export quantity arrows and truth sieves, twist by unitaries, decompose
// k-classes, and run the named self-check suites. All output is
// byte-deterministic for a fixed seed and tolerance set.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "toposqt/checks.hpp"
#include "toposqt/fixtures.hpp"
#include "toposqt/io.hpp"

namespace {

using namespace toposqt;

struct CommonOpts {
    std::string tolerances_path;
    std::string universe_path;
    int dim = 0;
};

TolerancePolicy policy_of(const CommonOpts& opts) {
    return resolve_tolerances(opts.tolerances_path);
}

std::shared_ptr<const ContextUniverse> universe_of(const CommonOpts& opts,
                                                   const TolerancePolicy& policy) {
    if (!opts.universe_path.empty()) {
        return std::make_shared<const ContextUniverse>(
            universe_from_json(read_json_file(opts.universe_path), policy));
    }
    if (opts.dim != 0) {
        return fixtures::universe_for_dim(opts.dim, policy);
    }
    throw Error("either --universe FILE or --dim N is required");
}

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_universe = true) {
    cmd->add_option("--tolerances", opts.tolerances_path,
                    "JSON file overriding default tolerances");
    if (with_universe) {
        cmd->add_option("--universe", opts.universe_path,
                        "universe JSON produced by the universe subcommand");
        cmd->add_option("--dim", opts.dim, "built-in universe dimension (2-4)")
            ->check(CLI::Range(2, 4));
    }
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        throw Error("cannot open output file: " + out_path);
    }
    out << text;
}

Matrix read_matrix(const std::string& path) { return matrix_from_json(read_json_file(path)); }

int cmd_universe(const CommonOpts& opts, const std::vector<std::string>& operator_paths,
                 bool include_trivial, const std::string& out_path) {
    const TolerancePolicy policy = policy_of(opts);
    std::shared_ptr<const ContextUniverse> uni;
    if (!operator_paths.empty()) {
        std::vector<std::vector<HermitianOperator>> seeds;
        int dim = 0;
        for (const auto& path : operator_paths) {
            const Matrix m = read_matrix(path);
            dim = static_cast<int>(m.rows());
            seeds.push_back({HermitianOperator(m, policy)});
        }
        uni = std::make_shared<const ContextUniverse>(
            build_universe(dim, seeds, include_trivial, policy));
    } else {
        uni = universe_of(opts, policy);
    }
    emit(universe_to_json(*uni).dump(2) + "\n", out_path);
    std::cerr << "contexts: " << uni->size() << "\n";
    return 0;
}

int cmd_daseinise(const CommonOpts& opts, const std::string& operator_path,
                  const std::string& direction, const std::string& out_path) {
    const TolerancePolicy policy = policy_of(opts);
    const auto uni = universe_of(opts, policy);
    const HermitianOperator a(read_matrix(operator_path), policy);
    nlohmann::json out;
    out["direction"] = direction;
    const Direction dir = direction == "outer" ? Direction::outer : Direction::inner;
    nlohmann::json per;
    for (const auto& [key, value] : groote_table(a, *uni, dir, policy)) {
        per[key] = daseinised_to_json(value, uni->at(key));
    }
    out["contexts"] = per;
    emit(out.dump(2) + "\n", out_path);
    return 0;
}

int cmd_arrow(const CommonOpts& opts, const std::string& operator_path,
              const std::string& mode_name, const std::string& out_path) {
    const TolerancePolicy policy = policy_of(opts);
    const auto uni = universe_of(opts, policy);
    const HermitianOperator a(read_matrix(operator_path), policy);
    const ArrowMode mode = mode_name == "outer"   ? ArrowMode::outer
                           : mode_name == "inner" ? ArrowMode::inner
                                                  : ArrowMode::pair;
    const QuantityArrow arrow = quantity_arrow(a, uni, mode, policy);
    std::string text = arrow_to_csv(arrow);
    const NaturalityReport report = check_natural(arrow.table);
    if (report.ok()) {
        text += "# naturality: ok\n";
    } else {
        text += "# naturality: " + std::to_string(report.violations.size()) + " violations\n";
        for (const auto& v : report.violations) {
            text += "# violation: " + v.parent + " -> " + v.child + " at " + v.element + "\n";
        }
    }
    emit(text, out_path);
    return report.ok() ? 0 : 1;
}

int cmd_truth(const CommonOpts& opts, const std::string& proposition_path,
              const std::string& state_path, std::string root, const std::string& out_path) {
    const TolerancePolicy policy = policy_of(opts);
    const auto uni = universe_of(opts, policy);
    const Projection p(read_matrix(proposition_path), policy);
    const StateVector psi = state_from_json(read_json_file(state_path), policy);
    if (root.empty()) {
        root = uni->maximal_keys().front();
    }
    const Sieve sieve = truth_value(p, psi, root, *uni, policy);
    const auto down = uni->down_set(root);
    nlohmann::json out;
    out["root"] = root;
    out["members"] = sieve.members;
    out["totally_true"] =
        sieve.members == std::set<std::string>(down.begin(), down.end());
    emit(out.dump(2) + "\n", out_path);
    return 0;
}

int cmd_twist(const CommonOpts& opts, const std::string& unitary_path,
              const std::string& operator_path, const std::string& out_path) {
    const TolerancePolicy policy = policy_of(opts);
    const auto uni = universe_of(opts, policy);
    const UnitaryOperator u(read_matrix(unitary_path), policy);
    const ContextUniverse twisted = twist_universe(u, *uni, policy);
    nlohmann::json out;
    out["universe"] = universe_to_json(twisted);
    bool ok = true;
    if (!operator_path.empty()) {
        const HermitianOperator a(read_matrix(operator_path), policy);
        const TwistedIsoReport report = twisted_iso_check(a, u, *uni, policy);
        ok = report.pass(1e-8);
        out["twisted_iso"] = {{"character_bijections", report.character_bijections},
                              {"character_naturality", report.character_naturality},
                              {"square_deviation", report.square_deviation},
                              {"pass", ok}};
    }
    emit(out.dump(2) + "\n", out_path);
    return ok ? 0 : 1;
}

int cmd_kvalue(const CommonOpts& opts, const std::string& function_path, std::string root,
               const std::string& out_path) {
    const TolerancePolicy policy = policy_of(opts);
    const auto uni = universe_of(opts, policy);
    if (root.empty()) {
        root = uni->maximal_keys().front();
    }
    const nlohmann::json j = read_json_file(function_path);
    std::map<std::string, double> f;
    for (const auto& [key, value] : j.items()) {
        if (!value.is_number()) {
            throw ParseError("function file: value at " + key + " is not a number");
        }
        f.emplace(key, value.get<double>());
    }
    const BvDecomposition d = bv_decompose(f, root, *uni);
    nlohmann::json out;
    out["root"] = root;
    out["g"] = kvalue_to_json(KValue{root, d.g.values});
    out["h"] = kvalue_to_json(KValue{root, d.h.values});
    out["total_variation"] = d.total_variation;
    emit(out.dump(2) + "\n", out_path);
    return 0;
}

int cmd_check(const std::string& tolerances_path, const std::vector<std::string>& names,
              std::uint64_t seed, const std::string& json_path, bool list_only) {
    if (list_only) {
        for (const auto& name : checks::all_check_names()) {
            std::cout << name << "\n";
        }
        return 0;
    }
    const TolerancePolicy policy = resolve_tolerances(tolerances_path);
    const std::vector<std::string> selected =
        names.empty() ? checks::all_check_names() : names;
    const std::vector<CheckResult> results = checks::run_checks(selected, seed, policy);
    int failures = 0;
    for (const auto& r : results) {
        std::cout << (r.pass ? "PASS" : "FAIL") << " " << r.name;
        if (!r.pass) {
            ++failures;
            std::cout << " [" << r.details << "]";
        }
        std::cout << "\n";
    }
    std::cout << (failures == 0 ? "all checks passed"
                                : std::to_string(failures) + " check(s) failed")
              << "\n";
    if (!json_path.empty()) {
        emit(report_to_json(seed, results).dump(2) + "\n", json_path);
    }
    return failures == 0 ? 0 : 1;
}

int cmd_export_dot(const CommonOpts& opts, const std::string& out_path) {
    const TolerancePolicy policy = policy_of(opts);
    const auto uni = universe_of(opts, policy);
    emit(universe_to_dot(*uni), out_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-dimensional contextual (presheaf) view of quantum observables"};
    app.require_subcommand(1);

    CommonOpts uni_opts;
    std::vector<std::string> uni_operators;
    bool uni_trivial = false;
    std::string uni_out;
    auto* universe_cmd =
        app.add_subcommand("universe", "build a context universe and print it as JSON");
    add_common(universe_cmd, uni_opts);
    universe_cmd->add_option("--operator", uni_operators,
                             "operator JSON file(s) seeding the universe");
    universe_cmd->add_flag("--include-trivial", uni_trivial,
                           "include the trivial one-block context");
    universe_cmd->add_option("--out", uni_out, "output file (default stdout)");

    CommonOpts das_opts;
    std::string das_operator, das_direction = "outer", das_out;
    auto* das_cmd = app.add_subcommand(
        "daseinise", "approximate an operator inside every context of a universe");
    add_common(das_cmd, das_opts);
    das_cmd->add_option("--operator", das_operator, "operator JSON file")->required();
    das_cmd->add_option("--direction", das_direction, "outer or inner")
        ->check(CLI::IsMember({"outer", "inner"}));
    das_cmd->add_option("--out", das_out, "output file (default stdout)");

    CommonOpts arrow_opts;
    std::string arrow_operator, arrow_mode = "pair", arrow_out;
    auto* arrow_cmd = app.add_subcommand(
        "arrow", "export an operator's quantity-value arrow as CSV with a naturality audit");
    add_common(arrow_cmd, arrow_opts);
    arrow_cmd->add_option("--operator", arrow_operator, "operator JSON file")->required();
    arrow_cmd->add_option("--mode", arrow_mode, "outer, inner, or pair")
        ->check(CLI::IsMember({"outer", "inner", "pair"}));
    arrow_cmd->add_option("--out", arrow_out, "output file (default stdout)");

    CommonOpts truth_opts;
    std::string truth_prop, truth_state, truth_root, truth_out;
    auto* truth_cmd = app.add_subcommand(
        "truth", "evaluate the truth sieve of a proposition in a vector state");
    add_common(truth_cmd, truth_opts);
    truth_cmd->add_option("--proposition", truth_prop, "projection JSON file")->required();
    truth_cmd->add_option("--state", truth_state, "state JSON file")->required();
    truth_cmd->add_option("--root", truth_root, "context key to evaluate at (default: top)");
    truth_cmd->add_option("--out", truth_out, "output file (default stdout)");

    CommonOpts twist_opts;
    std::string twist_unitary, twist_operator, twist_out;
    auto* twist_cmd = app.add_subcommand(
        "twist", "transport a universe by a unitary; optionally audit the twisted square");
    add_common(twist_cmd, twist_opts);
    twist_cmd->add_option("--unitary", twist_unitary, "unitary JSON file")->required();
    twist_cmd->add_option("--operator", twist_operator,
                          "operator JSON file for the twisted-square audit");
    twist_cmd->add_option("--out", twist_out, "output file (default stdout)");

    CommonOpts kv_opts;
    std::string kv_function, kv_root, kv_out;
    auto* kv_cmd = app.add_subcommand(
        "kvalue", "canonical difference decomposition of a function on a down-set");
    add_common(kv_cmd, kv_opts);
    kv_cmd->add_option("--function", kv_function,
                       "JSON object mapping context keys to numbers")
        ->required();
    kv_cmd->add_option("--root", kv_root, "root context key (default: top)");
    kv_cmd->add_option("--out", kv_out, "output file (default stdout)");

    std::string check_tolerances, check_json;
    std::vector<std::string> check_names;
    std::uint64_t check_seed = 0;
    bool check_list = false;
    auto* check_cmd = app.add_subcommand("check", "run named self-check suites");
    check_cmd->add_option("--tolerances", check_tolerances,
                          "JSON file overriding default tolerances");
    check_cmd->add_option("--name", check_names, "check name (repeatable; default: all)");
    check_cmd->add_option("--seed", check_seed, "base seed for randomized rounds");
    check_cmd->add_option("--json", check_json, "write the full report to this file");
    check_cmd->add_flag("--list", check_list, "list check names and exit");

    CommonOpts dot_opts;
    std::string dot_out;
    auto* dot_cmd =
        app.add_subcommand("export-dot", "emit the coarsening graph in DOT format");
    add_common(dot_cmd, dot_opts);
    dot_cmd->add_option("--out", dot_out, "output file (default stdout)");

    try {
        app.parse(argc, argv);
        if (universe_cmd->parsed()) {
            return cmd_universe(uni_opts, uni_operators, uni_trivial, uni_out);
        }
        if (das_cmd->parsed()) {
            return cmd_daseinise(das_opts, das_operator, das_direction, das_out);
        }
        if (arrow_cmd->parsed()) {
            return cmd_arrow(arrow_opts, arrow_operator, arrow_mode, arrow_out);
        }
        if (truth_cmd->parsed()) {
            return cmd_truth(truth_opts, truth_prop, truth_state, truth_root, truth_out);
        }
        if (twist_cmd->parsed()) {
            return cmd_twist(twist_opts, twist_unitary, twist_operator, twist_out);
        }
        if (kv_cmd->parsed()) {
            return cmd_kvalue(kv_opts, kv_function, kv_root, kv_out);
        }
        if (check_cmd->parsed()) {
            return cmd_check(check_tolerances, check_names, check_seed, check_json,
                             check_list);
        }
        if (dot_cmd->parsed()) {
            return cmd_export_dot(dot_opts, dot_out);
        }
        return 2;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const toposqt::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
