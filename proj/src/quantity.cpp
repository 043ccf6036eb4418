#include "toposqt/quantity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>

namespace toposqt {

namespace {

std::string hexd(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%a", x);
    return buf;
}

std::string po_key(const PoFunction& f) {
    std::string s = f.direction == Monotonicity::order_reversing ? "r|" : "p|";
    s += f.root;
    s += "|";
    for (const auto& [k, v] : f.values) {
        s += k;
        s += "=";
        s += hexd(v);
        s += ";";
    }
    return s;
}

std::string pair_key(const PairFunction& p) {
    return "pair[" + po_key(p.inner) + "][" + po_key(p.outer) + "]";
}

std::string k_key(const KValue& v) {
    std::string s = "k|" + v.root + "|";
    for (const auto& [k, x] : v.bv) {
        s += k;
        s += "=";
        s += hexd(x);
        s += ";";
    }
    return s;
}

void require_same_domain(const std::map<std::string, double>& a,
                         const std::map<std::string, double>& b, const char* who) {
    if (a.size() != b.size()) {
        throw DimensionMismatch(std::string(who) + ": domain size mismatch");
    }
    for (const auto& [k, _] : a) {
        if (b.find(k) == b.end()) {
            throw DimensionMismatch(std::string(who) + ": domain key mismatch at " + k);
        }
    }
}

}  // namespace

bool po_valid(const PoFunction& f, const ContextUniverse& universe) {
    if (!universe.has(f.root)) {
        return false;
    }
    const auto down = universe.down_set(f.root);
    if (down.size() != f.values.size()) {
        return false;
    }
    for (const auto& k : down) {
        if (f.values.find(k) == f.values.end()) {
            return false;
        }
    }
    for (const auto& child : down) {
        for (const auto& parent : down) {
            if (child == parent || !universe.leq(child, parent)) continue;
            const double vc = f.values.at(child);
            const double vp = f.values.at(parent);
            const bool ok = f.direction == Monotonicity::order_reversing ? vc >= vp : vc <= vp;
            if (!ok) {
                return false;
            }
        }
    }
    return true;
}

PoFunction po_restrict(const PoFunction& f, const std::string& new_root,
                       const ContextUniverse& universe) {
    if (!universe.leq(new_root, f.root)) {
        throw NotASubcontext("po_restrict: new root is not below the current root");
    }
    PoFunction out;
    out.root = new_root;
    out.direction = f.direction;
    for (const auto& k : universe.down_set(new_root)) {
        out.values.emplace(k, f.values.at(k));
    }
    return out;
}

PoFunction po_add(const PoFunction& a, const PoFunction& b) {
    if (a.root != b.root || a.direction != b.direction) {
        throw DimensionMismatch("po_add: mismatched root or direction");
    }
    require_same_domain(a.values, b.values, "po_add");
    PoFunction out = a;
    for (auto& [k, v] : out.values) {
        v += b.values.at(k);
    }
    return out;
}

PoFunction po_mul(const PoFunction& a, const PoFunction& b) {
    if (a.root != b.root || a.direction != b.direction) {
        throw DimensionMismatch("po_mul: mismatched root or direction");
    }
    require_same_domain(a.values, b.values, "po_mul");
    PoFunction out = a;
    for (auto& [k, v] : out.values) {
        v *= b.values.at(k);
    }
    return out;
}

KValue k_class(const PoFunction& lambda, const PoFunction& kappa) {
    if (lambda.direction != Monotonicity::order_reversing ||
        kappa.direction != Monotonicity::order_reversing) {
        throw DimensionMismatch("k_class: operands must be order-reversing");
    }
    if (lambda.root != kappa.root) {
        throw DimensionMismatch("k_class: root mismatch");
    }
    require_same_domain(lambda.values, kappa.values, "k_class");
    KValue out;
    out.root = lambda.root;
    for (const auto& [k, v] : lambda.values) {
        out.bv.emplace(k, v - kappa.values.at(k));
    }
    return out;
}

KValue k_theta(const PoFunction& lambda) {
    if (lambda.direction != Monotonicity::order_reversing) {
        throw DimensionMismatch("k_theta: operand must be order-reversing");
    }
    KValue out;
    out.root = lambda.root;
    out.bv = lambda.values;
    return out;
}

KValue k_zero(const std::string& root, const ContextUniverse& universe) {
    KValue out;
    out.root = root;
    for (const auto& k : universe.down_set(root)) {
        out.bv.emplace(k, 0.0);
    }
    return out;
}

KValue k_add(const KValue& a, const KValue& b) {
    if (a.root != b.root) {
        throw DimensionMismatch("k_add: root mismatch");
    }
    require_same_domain(a.bv, b.bv, "k_add");
    KValue out = a;
    for (auto& [k, v] : out.bv) {
        v += b.bv.at(k);
    }
    return out;
}

KValue k_neg(const KValue& a) {
    KValue out = a;
    for (auto& [k, v] : out.bv) {
        v = -v;
    }
    return out;
}

bool k_equal(const KValue& a, const KValue& b) {
    if (a.root != b.root || a.bv.size() != b.bv.size()) {
        return false;
    }
    for (const auto& [k, v] : a.bv) {
        auto it = b.bv.find(k);
        if (it == b.bv.end() || it->second != v) {
            return false;
        }
    }
    return true;
}

bool pair_equiv(const PairFunction& p, const PairFunction& q) {
    // Defining relation: exists g with mu1 + nu1 + g = mu2 + nu2 + g; reals
    // cancel, so pointwise equality of the sums decides it.
    if (p.inner.root != q.inner.root) {
        return false;
    }
    require_same_domain(p.inner.values, q.inner.values, "pair_equiv");
    for (const auto& [k, v] : p.inner.values) {
        if (v + p.outer.values.at(k) != q.inner.values.at(k) + q.outer.values.at(k)) {
            return false;
        }
    }
    return true;
}

KValue pair_quotient_iso(const PairFunction& p) {
    if (p.inner.direction != Monotonicity::order_preserving ||
        p.outer.direction != Monotonicity::order_reversing) {
        throw DimensionMismatch("pair_quotient_iso: pair directions wrong");
    }
    if (p.inner.root != p.outer.root) {
        throw DimensionMismatch("pair_quotient_iso: root mismatch");
    }
    require_same_domain(p.inner.values, p.outer.values, "pair_quotient_iso");
    // [mu, nu] -> [nu, -mu]; canonical difference nu - (-mu) = mu + nu.
    KValue out;
    out.root = p.inner.root;
    for (const auto& [k, v] : p.inner.values) {
        out.bv.emplace(k, v + p.outer.values.at(k));
    }
    return out;
}

BvDecomposition bv_decompose(const std::map<std::string, double>& f, const std::string& root,
                             const ContextUniverse& universe) {
    const auto down = universe.down_set(root);
    if (down.size() != f.size()) {
        throw DimensionMismatch("bv_decompose: function domain must equal the down-set");
    }
    for (const auto& k : down) {
        if (f.find(k) == f.end()) {
            throw DimensionMismatch("bv_decompose: missing value at " + k);
        }
    }

    // Process in increasing down-set size so every proper subcontext is done
    // before its parents (a child's down-set is strictly smaller).
    std::vector<std::string> order(down.begin(), down.end());
    std::map<std::string, std::size_t> depth;
    for (const auto& k : down) depth[k] = universe.down_set(k).size();
    std::sort(order.begin(), order.end(), [&](const std::string& a, const std::string& b) {
        if (depth[a] != depth[b]) return depth[a] < depth[b];
        return a < b;
    });

    // I_f(V) = max over descending chains ending at V of the summed absolute
    // increments; since inserting intermediate points never lowers the sum,
    // the one-step recursion over proper subcontexts computes the same value.
    std::map<std::string, double> total;
    for (const auto& v : order) {
        double best = 0.0;
        for (const auto& w : down) {
            if (w == v || !universe.leq(w, v)) continue;
            best = std::max(best, total.at(w) + std::abs(f.at(v) - f.at(w)));
        }
        total[v] = best;
    }

    BvDecomposition out;
    out.total_variation = total;
    out.g.root = root;
    out.g.direction = Monotonicity::order_reversing;
    out.h.root = root;
    out.h.direction = Monotonicity::order_reversing;
    for (const auto& k : down) {
        out.g.values.emplace(k, f.at(k) - total.at(k));
        out.h.values.emplace(k, -total.at(k));
    }
    if (!po_valid(out.g, universe) || !po_valid(out.h, universe)) {
        throw Error("bv_decompose: decomposition failed monotonicity (numerical anomaly)");
    }
    return out;
}

KValue k_square_embedded(const KValue& v, const ContextUniverse& universe) {
    PoFunction as_fn;
    as_fn.root = v.root;
    as_fn.direction = Monotonicity::order_reversing;
    as_fn.values = v.bv;
    if (!po_valid(as_fn, universe)) {
        throw NotEmbedded("k_square_embedded: value is not in the monoid image");
    }
    // [lambda, 0]^2 = [lambda_+^2, -lambda_-^2]; the canonical difference is
    // lambda_+^2 + lambda_-^2 = lambda^2 pointwise.
    KValue out;
    out.root = v.root;
    for (const auto& [k, x] : v.bv) {
        const double pos = std::max(x, 0.0);
        const double neg = std::max(-x, 0.0);
        out.bv.emplace(k, pos * pos + neg * neg);
    }
    return out;
}

// --- Arrow builders ------------------------------------------------------

namespace {

// Topological key order, parents before children (descending down-set size).
std::vector<std::string> parents_first(const ContextUniverse& u) {
    std::vector<std::string> order = u.keys();
    std::map<std::string, std::size_t> depth;
    for (const auto& k : order) depth[k] = u.down_set(k).size();
    std::sort(order.begin(), order.end(), [&](const std::string& a, const std::string& b) {
        if (depth[a] != depth[b]) return depth[a] > depth[b];
        return a < b;
    });
    return order;
}

// Assemble a PresheafTable + ArrowTable from per-(stage, character) payloads,
// generically over the payload type. Payload operations supplied as hooks.
template <typename Payload>
struct PayloadOps {
    std::function<std::string(const Payload&)> key;
    std::function<Payload(const Payload&, const std::string&)> restrict_to;
};

template <typename Payload>
void build_arrow(const std::shared_ptr<const ContextUniverse>& universe,
                 const std::map<std::string, std::vector<Payload>>& components,
                 const PayloadOps<Payload>& ops, const TolerancePolicy& policy,
                 ArrowTable& table_out,
                 std::map<std::string, std::map<std::string, Payload>>& payloads_out) {
    // Codomain stages: component images closed under restriction, walking
    // parents before children so one pass suffices (restriction composes by
    // plain value subsetting).
    std::map<std::string, std::map<std::string, Payload>> stages;
    for (const auto& key : universe->keys()) {
        for (const auto& p : components.at(key)) {
            stages[key].emplace(ops.key(p), p);
        }
    }
    for (const auto& parent : parents_first(*universe)) {
        for (const auto& child : universe->keys()) {
            if (child == parent || !universe->leq(child, parent)) continue;
            for (const auto& [k, p] : stages[parent]) {
                Payload r = ops.restrict_to(p, child);
                stages[child].emplace(ops.key(r), std::move(r));
            }
        }
    }

    auto codomain = std::make_shared<PresheafTable>();
    codomain->universe = universe;
    for (const auto& key : universe->keys()) {
        std::vector<std::string> elems;
        for (const auto& [k, _] : stages[key]) elems.push_back(k);
        std::sort(elems.begin(), elems.end());
        codomain->stages.emplace(key, std::move(elems));
    }
    for (const auto& parent : universe->keys()) {
        for (const auto& child : universe->keys()) {
            if (child == parent || !universe->leq(child, parent)) continue;
            std::map<std::string, std::string> map;
            for (const auto& [k, p] : stages[parent]) {
                map.emplace(k, ops.key(ops.restrict_to(p, child)));
            }
            codomain->restrictions.emplace(RestrictionKey{parent, child}, std::move(map));
        }
    }

    auto domain = std::make_shared<PresheafTable>(spectral_presheaf(universe, policy));
    table_out.domain = std::move(domain);
    table_out.codomain = codomain;
    for (const auto& key : universe->keys()) {
        std::map<std::string, std::string> comp;
        const auto& payload_list = components.at(key);
        for (std::size_t i = 0; i < payload_list.size(); ++i) {
            comp.emplace(std::to_string(i), ops.key(payload_list[i]));
        }
        table_out.components.emplace(key, std::move(comp));
    }
    payloads_out = std::move(stages);
}

// Daseinisation coefficients per context, computed once so every function
// value referring to the same (context, block) is the same double.
struct CoeffTables {
    std::map<std::string, std::vector<double>> outer;
    std::map<std::string, std::vector<double>> inner;
};

CoeffTables coefficient_tables(const HermitianOperator& a, const ContextUniverse& u,
                               bool need_outer, bool need_inner,
                               const TolerancePolicy& policy) {
    CoeffTables t;
    for (const auto& key : u.keys()) {
        if (need_outer) {
            t.outer.emplace(key, das_sa(a, u.at(key), Direction::outer, policy).coefficients);
        }
        if (need_inner) {
            t.inner.emplace(key, das_sa(a, u.at(key), Direction::inner, policy).coefficients);
        }
    }
    return t;
}

PoFunction component_function(const ContextUniverse& u,
                              const std::map<std::string, std::vector<double>>& coeffs,
                              const std::string& stage, int character, Monotonicity dir,
                              const TolerancePolicy& policy) {
    PoFunction f;
    f.root = stage;
    f.direction = dir;
    const Context& v = u.at(stage);
    for (const auto& key : u.down_set(stage)) {
        const int j = restrict_character(v, character, u.at(key), policy);
        f.values.emplace(key, coeffs.at(key).at(j));
    }
    return f;
}

}  // namespace

const PoFunction& QuantityArrow::po_at(const std::string& stage, int character) const {
    const std::string& key = table.components.at(stage).at(std::to_string(character));
    return po_payloads.at(stage).at(key);
}

const PairFunction& QuantityArrow::pair_at(const std::string& stage, int character) const {
    const std::string& key = table.components.at(stage).at(std::to_string(character));
    return pair_payloads.at(stage).at(key);
}

QuantityArrow quantity_arrow(const HermitianOperator& a,
                             std::shared_ptr<const ContextUniverse> universe, ArrowMode mode,
                             const TolerancePolicy& policy) {
    const bool need_outer = mode != ArrowMode::inner;
    const bool need_inner = mode != ArrowMode::outer;
    const CoeffTables coeffs =
        coefficient_tables(a, *universe, need_outer, need_inner, policy);

    QuantityArrow out;
    out.mode = mode;
    if (mode == ArrowMode::pair) {
        std::map<std::string, std::vector<PairFunction>> components;
        for (const auto& key : universe->keys()) {
            std::vector<PairFunction> list;
            for (int i = 0; i < universe->at(key).block_count(); ++i) {
                PairFunction p;
                p.inner = component_function(*universe, coeffs.inner, key, i,
                                             Monotonicity::order_preserving, policy);
                p.outer = component_function(*universe, coeffs.outer, key, i,
                                             Monotonicity::order_reversing, policy);
                list.push_back(std::move(p));
            }
            components.emplace(key, std::move(list));
        }
        PayloadOps<PairFunction> ops;
        ops.key = pair_key;
        ops.restrict_to = [&](const PairFunction& p, const std::string& child) {
            return PairFunction{po_restrict(p.inner, child, *universe),
                                po_restrict(p.outer, child, *universe)};
        };
        build_arrow(universe, components, ops, policy, out.table, out.pair_payloads);
    } else {
        const auto& table = mode == ArrowMode::outer ? coeffs.outer : coeffs.inner;
        const Monotonicity dir = mode == ArrowMode::outer ? Monotonicity::order_reversing
                                                          : Monotonicity::order_preserving;
        std::map<std::string, std::vector<PoFunction>> components;
        for (const auto& key : universe->keys()) {
            std::vector<PoFunction> list;
            for (int i = 0; i < universe->at(key).block_count(); ++i) {
                list.push_back(component_function(*universe, table, key, i, dir, policy));
            }
            components.emplace(key, std::move(list));
        }
        PayloadOps<PoFunction> ops;
        ops.key = po_key;
        ops.restrict_to = [&](const PoFunction& p, const std::string& child) {
            return po_restrict(p, child, *universe);
        };
        build_arrow(universe, components, ops, policy, out.table, out.po_payloads);
    }
    return out;
}

QuantityArrow arrow_add(const QuantityArrow& a, const QuantityArrow& b) {
    if (a.mode != b.mode) {
        throw DimensionMismatch("arrow_add: mode mismatch");
    }
    const auto universe = a.table.domain->universe;
    if (universe->keys() != b.table.domain->universe->keys()) {
        throw DimensionMismatch("arrow_add: universe mismatch");
    }
    TolerancePolicy policy;  // engine-side assembly only, no numeric decisions
    QuantityArrow out;
    out.mode = a.mode;
    if (a.mode == ArrowMode::pair) {
        std::map<std::string, std::vector<PairFunction>> components;
        for (const auto& key : universe->keys()) {
            std::vector<PairFunction> list;
            for (int i = 0; i < universe->at(key).block_count(); ++i) {
                PairFunction p;
                p.inner = po_add(a.pair_at(key, i).inner, b.pair_at(key, i).inner);
                p.outer = po_add(a.pair_at(key, i).outer, b.pair_at(key, i).outer);
                list.push_back(std::move(p));
            }
            components.emplace(key, std::move(list));
        }
        PayloadOps<PairFunction> ops;
        ops.key = pair_key;
        ops.restrict_to = [&](const PairFunction& p, const std::string& child) {
            return PairFunction{po_restrict(p.inner, child, *universe),
                                po_restrict(p.outer, child, *universe)};
        };
        build_arrow(universe, components, ops, policy, out.table, out.pair_payloads);
    } else {
        std::map<std::string, std::vector<PoFunction>> components;
        for (const auto& key : universe->keys()) {
            std::vector<PoFunction> list;
            for (int i = 0; i < universe->at(key).block_count(); ++i) {
                list.push_back(po_add(a.po_at(key, i), b.po_at(key, i)));
            }
            components.emplace(key, std::move(list));
        }
        PayloadOps<PoFunction> ops;
        ops.key = po_key;
        ops.restrict_to = [&](const PoFunction& p, const std::string& child) {
            return po_restrict(p, child, *universe);
        };
        build_arrow(universe, components, ops, policy, out.table, out.po_payloads);
    }
    return out;
}

const KValue& DispersionArrow::at(const std::string& stage, int character) const {
    const std::string& key = table.components.at(stage).at(std::to_string(character));
    return payloads.at(stage).at(key);
}

DispersionArrow dispersion(const HermitianOperator& a,
                           std::shared_ptr<const ContextUniverse> universe,
                           const TolerancePolicy& policy) {
    const HermitianOperator a_squared(a.matrix() * a.matrix(), policy);
    const CoeffTables ca = coefficient_tables(a, *universe, true, false, policy);
    const CoeffTables ca2 = coefficient_tables(a_squared, *universe, true, false, policy);

    std::map<std::string, std::vector<KValue>> components;
    for (const auto& key : universe->keys()) {
        std::vector<KValue> list;
        for (int i = 0; i < universe->at(key).block_count(); ++i) {
            const PoFunction f_a = component_function(*universe, ca.outer, key, i,
                                                      Monotonicity::order_reversing, policy);
            const PoFunction f_a2 = component_function(*universe, ca2.outer, key, i,
                                                       Monotonicity::order_reversing, policy);
            list.push_back(k_add(k_theta(f_a2),
                                 k_neg(k_square_embedded(k_theta(f_a), *universe))));
        }
        components.emplace(key, std::move(list));
    }

    PayloadOps<KValue> ops;
    ops.key = k_key;
    ops.restrict_to = [&](const KValue& v, const std::string& child) {
        KValue r;
        r.root = child;
        for (const auto& k : universe->down_set(child)) {
            r.bv.emplace(k, v.bv.at(k));
        }
        return r;
    };
    DispersionArrow out;
    build_arrow(universe, components, ops, policy, out.table, out.payloads);
    return out;
}

}  // namespace toposqt
