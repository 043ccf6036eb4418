#include "toposqt/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace toposqt {

namespace {

void expect(bool cond, const std::string& msg) {
    if (!cond) {
        throw ParseError(msg);
    }
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

nlohmann::json matrix_to_json(const Matrix& m) {
    nlohmann::json entries = nlohmann::json::array();
    for (int r = 0; r < m.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (int c = 0; c < m.cols(); ++c) {
            row.push_back({m(r, c).real(), m(r, c).imag()});
        }
        entries.push_back(std::move(row));
    }
    return {{"dim", m.rows()}, {"entries", std::move(entries)}};
}

Matrix matrix_from_json(const nlohmann::json& j) {
    expect(j.is_object() && j.contains("dim") && j.contains("entries"),
           "matrix: expected object with dim and entries");
    expect(j.at("dim").is_number_integer() && j.at("dim").get<int>() >= 1,
           "matrix: dim must be a positive integer");
    const int d = j.at("dim").get<int>();
    const auto& entries = j.at("entries");
    expect(entries.is_array() && static_cast<int>(entries.size()) == d,
           "matrix: entries must hold dim rows");
    Matrix m(d, d);
    for (int r = 0; r < d; ++r) {
        const auto& row = entries.at(r);
        expect(row.is_array() && static_cast<int>(row.size()) == d,
               "matrix: each row must hold dim entries");
        for (int c = 0; c < d; ++c) {
            const auto& e = row.at(c);
            expect(e.is_array() && e.size() == 2 && e.at(0).is_number() &&
                       e.at(1).is_number(),
                   "matrix: each entry must be a [re, im] pair");
            m(r, c) = std::complex<double>(e.at(0).get<double>(), e.at(1).get<double>());
        }
    }
    return m;
}

nlohmann::json state_to_json(const StateVector& psi) {
    nlohmann::json amps = nlohmann::json::array();
    for (int i = 0; i < psi.dim(); ++i) {
        amps.push_back({psi.amplitudes()(i).real(), psi.amplitudes()(i).imag()});
    }
    return {{"dim", psi.dim()}, {"amplitudes", std::move(amps)}};
}

StateVector state_from_json(const nlohmann::json& j, const TolerancePolicy& policy) {
    expect(j.is_object() && j.contains("dim") && j.contains("amplitudes"),
           "state: expected object with dim and amplitudes");
    expect(j.at("dim").is_number_integer() && j.at("dim").get<int>() >= 1,
           "state: dim must be a positive integer");
    const int d = j.at("dim").get<int>();
    const auto& amps = j.at("amplitudes");
    expect(amps.is_array() && static_cast<int>(amps.size()) == d,
           "state: amplitudes must hold dim entries");
    Vector v(d);
    for (int i = 0; i < d; ++i) {
        const auto& e = amps.at(i);
        expect(e.is_array() && e.size() == 2 && e.at(0).is_number() && e.at(1).is_number(),
               "state: each amplitude must be a [re, im] pair");
        v(i) = std::complex<double>(e.at(0).get<double>(), e.at(1).get<double>());
    }
    return StateVector(std::move(v), policy);
}

nlohmann::json tolerances_to_json(const TolerancePolicy& policy) {
    return {{"eig_cluster_tol", policy.eig_cluster_tol},
            {"proj_tol", policy.proj_tol},
            {"hermitian_tol", policy.hermitian_tol},
            {"unitary_tol", policy.unitary_tol},
            {"zero_overlap_tol", policy.zero_overlap_tol},
            {"order_cmp_tol", policy.order_cmp_tol}};
}

TolerancePolicy tolerances_from_json(const nlohmann::json& j) {
    expect(j.is_object(), "tolerances: expected an object");
    TolerancePolicy policy;
    for (const auto& [key, value] : j.items()) {
        expect(value.is_number(), "tolerances: " + key + " must be a number");
        const double x = value.get<double>();
        expect(x >= 0.0, "tolerances: " + key + " must be nonnegative");
        if (key == "eig_cluster_tol") {
            policy.eig_cluster_tol = x;
        } else if (key == "proj_tol") {
            policy.proj_tol = x;
        } else if (key == "hermitian_tol") {
            policy.hermitian_tol = x;
        } else if (key == "unitary_tol") {
            policy.unitary_tol = x;
        } else if (key == "zero_overlap_tol") {
            policy.zero_overlap_tol = x;
        } else if (key == "order_cmp_tol") {
            policy.order_cmp_tol = x;
        } else {
            throw ParseError("tolerances: unknown field " + key);
        }
    }
    return policy;
}

TolerancePolicy load_tolerances(const std::string& path) {
    return tolerances_from_json(read_json_file(path));
}

TolerancePolicy resolve_tolerances(const std::string& explicit_path) {
    if (!explicit_path.empty()) {
        return load_tolerances(explicit_path);
    }
    if (const char* env = std::getenv("TOPOSQT_TOLERANCES"); env && *env) {
        return load_tolerances(env);
    }
    return TolerancePolicy{};
}

nlohmann::json universe_to_json(const ContextUniverse& universe) {
    nlohmann::json contexts = nlohmann::json::array();
    for (const auto& key : universe.keys()) {
        const Context& v = universe.at(key);
        nlohmann::json blocks = nlohmann::json::array();
        for (const auto& q : v.blocks()) {
            blocks.push_back(matrix_to_json(q.matrix()));
        }
        contexts.push_back({{"key", key}, {"blocks", std::move(blocks)}});
    }
    nlohmann::json hasse = nlohmann::json::array();
    for (const auto& [child, parent] : universe.hasse_edges()) {
        hasse.push_back({child, parent});
    }
    return {{"dim", universe.dim()},
            {"include_trivial", universe.include_trivial()},
            {"contexts", std::move(contexts)},
            {"hasse", std::move(hasse)}};
}

ContextUniverse universe_from_json(const nlohmann::json& j, const TolerancePolicy& policy) {
    expect(j.is_object() && j.contains("dim") && j.contains("include_trivial") &&
               j.contains("contexts") && j.contains("hasse"),
           "universe: expected object with dim, include_trivial, contexts, hasse");
    expect(j.at("dim").is_number_integer() && j.at("dim").get<int>() >= 1,
           "universe: dim must be a positive integer");
    expect(j.at("include_trivial").is_boolean(), "universe: include_trivial must be boolean");
    const int dim = j.at("dim").get<int>();
    expect(j.at("contexts").is_array() && !j.at("contexts").empty(),
           "universe: contexts must be a nonempty array");

    std::vector<Context> contexts;
    for (const auto& entry : j.at("contexts")) {
        expect(entry.is_object() && entry.contains("key") && entry.contains("blocks"),
               "universe: each context needs key and blocks");
        expect(entry.at("key").is_string(), "universe: context key must be a string");
        expect(entry.at("blocks").is_array() && !entry.at("blocks").empty(),
               "universe: blocks must be a nonempty array");
        std::vector<Projection> blocks;
        for (const auto& b : entry.at("blocks")) {
            Matrix m = matrix_from_json(b);
            expect(m.rows() == dim, "universe: block dimension differs from universe dim");
            blocks.emplace_back(std::move(m), policy);
        }
        Context v(std::move(blocks), policy);
        // Integrity: the canonical key must reproduce from the blocks alone.
        expect(v.key() == entry.at("key").get<std::string>(),
               "universe: stored key does not match its blocks (edited file or "
               "different tolerances): " +
                   entry.at("key").get<std::string>());
        contexts.push_back(std::move(v));
    }

    ContextUniverse universe(dim, j.at("include_trivial").get<bool>(), std::move(contexts),
                             policy);
    expect(universe.size() == j.at("contexts").size(),
           "universe: duplicate contexts in file");

    std::vector<std::pair<std::string, std::string>> stored;
    for (const auto& edge : j.at("hasse")) {
        expect(edge.is_array() && edge.size() == 2 && edge.at(0).is_string() &&
                   edge.at(1).is_string(),
               "universe: each hasse edge must be a [child, parent] pair of keys");
        stored.emplace_back(edge.at(0).get<std::string>(), edge.at(1).get<std::string>());
    }
    expect(stored == universe.hasse_edges(),
           "universe: stored hasse edges do not match the recomputed order");
    return universe;
}

nlohmann::json daseinised_to_json(const DaseinisedValue& value, const Context& v) {
    return {{"context_key", value.context_key},
            {"coefficients", value.coefficients},
            {"matrix", matrix_to_json(value.to_operator(v).matrix())}};
}

nlohmann::json kvalue_to_json(const KValue& value) {
    nlohmann::json bv = nlohmann::json::object();
    for (const auto& [key, x] : value.bv) {
        bv[key] = x;
    }
    return {{"root", value.root}, {"bv", std::move(bv)}};
}

nlohmann::json report_to_json(std::uint64_t seed, const std::vector<CheckResult>& results) {
    bool all = true;
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& r : results) {
        all = all && r.pass;
        checks.push_back({{"name", r.name},
                          {"pass", r.pass},
                          {"max_deviation", r.max_deviation},
                          {"details", r.details}});
    }
    return {{"seed", seed}, {"checks", std::move(checks)}, {"pass", all}};
}

std::string universe_to_dot(const ContextUniverse& universe) {
    std::map<std::string, std::string> node;
    std::ostringstream out;
    out << "digraph coarsening {\n  rankdir=BT;\n  node [shape=box];\n";
    int i = 0;
    for (const auto& key : universe.keys()) {
        const Context& v = universe.at(key);
        std::string name = "V" + std::to_string(i++);
        std::string ranks;
        for (const auto& q : v.blocks()) {
            ranks += (ranks.empty() ? "" : "|") + std::to_string(q.rank());
        }
        out << "  " << name << " [label=\"" << name << "\\n[" << ranks << "]\"];\n";
        node.emplace(key, std::move(name));
    }
    for (const auto& [child, parent] : universe.hasse_edges()) {
        out << "  " << node.at(child) << " -> " << node.at(parent) << ";\n";
    }
    out << "}\n";
    return out.str();
}

std::string arrow_to_csv(const QuantityArrow& arrow) {
    std::ostringstream out;
    out << "stage,character,subcontext,inner,outer\n";
    for (const auto& [stage, elements] : arrow.table.components) {
        for (const auto& [element, image] : elements) {
            (void)image;
            const int character = std::stoi(element);
            if (arrow.mode == ArrowMode::pair) {
                const PairFunction& f = arrow.pair_at(stage, character);
                for (const auto& [sub, lo] : f.inner.values) {
                    out << stage << ',' << character << ',' << sub << ',' << fmt(lo) << ','
                        << fmt(f.outer.values.at(sub)) << '\n';
                }
            } else {
                const PoFunction& f = arrow.po_at(stage, character);
                const bool is_inner = arrow.mode == ArrowMode::inner;
                for (const auto& [sub, x] : f.values) {
                    out << stage << ',' << character << ',' << sub << ','
                        << (is_inner ? fmt(x) : "") << ',' << (is_inner ? "" : fmt(x))
                        << '\n';
                }
            }
        }
    }
    return out.str();
}

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open " + path);
    }
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

}  // namespace toposqt
