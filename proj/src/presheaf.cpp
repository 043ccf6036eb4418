#include "toposqt/presheaf.hpp"

#include <algorithm>

namespace toposqt {

const std::map<std::string, std::string>& PresheafTable::restriction(
    const std::string& parent, const std::string& child) const {
    auto it = restrictions.find({parent, child});
    if (it == restrictions.end()) {
        throw Error("PresheafTable: missing restriction " + parent + " -> " + child);
    }
    return it->second;
}

std::string PresheafTable::restrict_element(const std::string& parent, const std::string& child,
                                            const std::string& element) const {
    if (parent == child) {
        return element;
    }
    const auto& map = restriction(parent, child);
    auto it = map.find(element);
    if (it == map.end()) {
        throw Error("PresheafTable: element " + element + " missing from restriction " +
                    parent + " -> " + child);
    }
    return it->second;
}

void PresheafTable::validate() const {
    if (!universe) {
        throw Error("PresheafTable: no universe");
    }
    for (const auto& key : universe->keys()) {
        if (stages.find(key) == stages.end()) {
            throw Error("PresheafTable: missing stage " + key);
        }
    }
    const auto& ks = universe->keys();
    for (const auto& parent : ks) {
        for (const auto& child : ks) {
            if (parent == child || !universe->leq(child, parent)) continue;
            const auto& map = restriction(parent, child);
            const auto& child_stage = stages.at(child);
            for (const auto& x : stages.at(parent)) {
                auto it = map.find(x);
                if (it == map.end()) {
                    throw Error("PresheafTable: restriction " + parent + " -> " + child +
                                " undefined on " + x);
                }
                if (!std::binary_search(child_stage.begin(), child_stage.end(), it->second)) {
                    throw Error("PresheafTable: restriction image leaves stage " + child);
                }
            }
            // Composition through every intermediate stage must agree.
            for (const auto& mid : ks) {
                if (mid == parent || mid == child) continue;
                if (!universe->leq(mid, parent) || !universe->leq(child, mid)) continue;
                for (const auto& x : stages.at(parent)) {
                    const std::string via_mid =
                        restriction(mid, child).at(restriction(parent, mid).at(x));
                    if (via_mid != map.at(x)) {
                        throw Error("PresheafTable: composition failure " + parent + " -> " +
                                    mid + " -> " + child + " on " + x);
                    }
                }
            }
        }
    }
}

void ArrowTable::validate() const {
    if (!domain || !codomain) {
        throw Error("ArrowTable: missing domain/codomain");
    }
    if (domain->universe->keys() != codomain->universe->keys()) {
        throw Error("ArrowTable: domain and codomain universes differ");
    }
    for (const auto& key : domain->universe->keys()) {
        auto comp = components.find(key);
        if (comp == components.end()) {
            throw Error("ArrowTable: missing component at " + key);
        }
        const auto& target = codomain->stages.at(key);
        for (const auto& x : domain->stages.at(key)) {
            auto it = comp->second.find(x);
            if (it == comp->second.end()) {
                throw Error("ArrowTable: component at " + key + " undefined on " + x);
            }
            if (!std::binary_search(target.begin(), target.end(), it->second)) {
                throw Error("ArrowTable: component image leaves codomain stage " + key);
            }
        }
    }
}

NaturalityReport check_natural(const ArrowTable& arrow) {
    arrow.validate();
    NaturalityReport report;
    const auto& ks = arrow.domain->universe->keys();
    for (const auto& parent : ks) {
        for (const auto& child : ks) {
            if (parent == child || !arrow.domain->universe->leq(child, parent)) continue;
            for (const auto& x : arrow.domain->stages.at(parent)) {
                const std::string down_then_map = arrow.components.at(child).at(
                    arrow.domain->restriction(parent, child).at(x));
                const std::string map_then_down = arrow.codomain->restriction(parent, child)
                                                      .at(arrow.components.at(parent).at(x));
                if (down_then_map != map_then_down) {
                    report.violations.push_back({parent, child, x});
                }
            }
        }
    }
    return report;
}

bool truth_sieve_check(const Sieve& s, const ContextUniverse& universe) {
    if (!universe.has(s.root)) {
        return false;
    }
    for (const auto& m : s.members) {
        if (!universe.has(m) || !universe.leq(m, s.root)) {
            return false;
        }
        for (const auto& k : universe.down_set(m)) {
            if (s.members.find(k) == s.members.end()) {
                return false;
            }
        }
    }
    return true;
}

void SubObjectTable::validate() const {
    if (!presheaf) {
        throw InvalidSubObject("SubObjectTable: no presheaf");
    }
    const auto& ks = presheaf->universe->keys();
    for (const auto& key : ks) {
        auto it = stage_sets.find(key);
        if (it == stage_sets.end()) {
            throw InvalidSubObject("SubObjectTable: missing stage set " + key);
        }
        const auto& stage = presheaf->stages.at(key);
        for (const auto& x : it->second) {
            if (!std::binary_search(stage.begin(), stage.end(), x)) {
                throw InvalidSubObject("SubObjectTable: foreign element " + x + " at " + key);
            }
        }
    }
    for (const auto& parent : ks) {
        for (const auto& child : ks) {
            if (parent == child || !presheaf->universe->leq(child, parent)) continue;
            for (const auto& x : stage_sets.at(parent)) {
                const std::string image = presheaf->restriction(parent, child).at(x);
                if (stage_sets.at(child).find(image) == stage_sets.at(child).end()) {
                    throw InvalidSubObject("SubObjectTable: not restriction-stable at " +
                                           parent + " -> " + child + " on " + x);
                }
            }
        }
    }
}

SubObjectTable pullback_subobject(const ArrowTable& arrow, const SubObjectTable& xi) {
    if (xi.presheaf.get() != arrow.codomain.get()) {
        throw InvalidSubObject("pullback_subobject: subobject lives on a different presheaf");
    }
    xi.validate();
    SubObjectTable out;
    out.presheaf = arrow.domain;
    for (const auto& key : arrow.domain->universe->keys()) {
        std::set<std::string> chosen;
        const auto& comp = arrow.components.at(key);
        const auto& target = xi.stage_sets.at(key);
        for (const auto& x : arrow.domain->stages.at(key)) {
            if (target.find(comp.at(x)) != target.end()) {
                chosen.insert(x);
            }
        }
        out.stage_sets.emplace(key, std::move(chosen));
    }
    // Pullbacks of stable subobjects along natural arrows are stable; validate
    // to catch a non-natural arrow early.
    out.validate();
    return out;
}

namespace {

void search_global(const PresheafTable& p, const std::vector<std::string>& ks, std::size_t idx,
                   std::map<std::string, std::string>& assignment, std::size_t& nodes,
                   std::size_t node_budget,
                   std::vector<std::map<std::string, std::string>>& out) {
    if (idx == ks.size()) {
        out.push_back(assignment);
        return;
    }
    const std::string& key = ks[idx];
    for (const auto& candidate : p.stages.at(key)) {
        if (++nodes > node_budget) {
            throw SizeLimit("global_elements: node budget exceeded");
        }
        bool compatible = true;
        for (std::size_t j = 0; j < idx && compatible; ++j) {
            const std::string& other = ks[j];
            const std::string& assigned = assignment.at(other);
            if (p.universe->leq(key, other)) {
                compatible = p.restriction(other, key).at(assigned) == candidate;
            }
            if (compatible && p.universe->leq(other, key)) {
                compatible = p.restriction(key, other).at(candidate) == assigned;
            }
        }
        if (!compatible) continue;
        assignment[key] = candidate;
        search_global(p, ks, idx + 1, assignment, nodes, node_budget, out);
        assignment.erase(key);
    }
}

}  // namespace

std::vector<std::map<std::string, std::string>> global_elements(const PresheafTable& p,
                                                                std::size_t node_budget) {
    p.validate();
    std::vector<std::map<std::string, std::string>> out;
    std::map<std::string, std::string> assignment;
    std::size_t nodes = 0;
    search_global(p, p.universe->keys(), 0, assignment, nodes, node_budget, out);
    return out;
}

PresheafTable spectral_presheaf(std::shared_ptr<const ContextUniverse> universe,
                                const TolerancePolicy& policy) {
    PresheafTable out;
    out.universe = universe;
    for (const auto& key : universe->keys()) {
        std::vector<std::string> elems;
        for (int i = 0; i < universe->at(key).block_count(); ++i) {
            elems.push_back(std::to_string(i));
        }
        std::sort(elems.begin(), elems.end());
        out.stages.emplace(key, std::move(elems));
    }
    for (const auto& parent : universe->keys()) {
        for (const auto& child : universe->keys()) {
            if (parent == child || !universe->leq(child, parent)) continue;
            std::map<std::string, std::string> map;
            const Context& v = universe->at(parent);
            const Context& sub = universe->at(child);
            for (int i = 0; i < v.block_count(); ++i) {
                map[std::to_string(i)] =
                    std::to_string(restrict_character(v, i, sub, policy));
            }
            out.restrictions.emplace(RestrictionKey{parent, child}, std::move(map));
        }
    }
    return out;
}

namespace {

PresheafTable projection_presheaf(std::shared_ptr<const ContextUniverse> universe,
                                  Direction dir, const TolerancePolicy& policy) {
    PresheafTable out;
    out.universe = universe;
    for (const auto& key : universe->keys()) {
        const unsigned n = 1u << universe->at(key).block_count();
        std::vector<std::string> elems;
        elems.reserve(n);
        for (unsigned mask = 0; mask < n; ++mask) {
            elems.push_back(std::to_string(mask));
        }
        std::sort(elems.begin(), elems.end());
        out.stages.emplace(key, std::move(elems));
    }
    for (const auto& parent : universe->keys()) {
        for (const auto& child : universe->keys()) {
            if (parent == child || !universe->leq(child, parent)) continue;
            const Context& v = universe->at(parent);
            const Context& sub = universe->at(child);
            std::map<std::string, std::string> map;
            for (unsigned mask = 0; mask < (1u << v.block_count()); ++mask) {
                map[std::to_string(mask)] =
                    std::to_string(das_proj_mask(v, mask, sub, dir, policy));
            }
            out.restrictions.emplace(RestrictionKey{parent, child}, std::move(map));
        }
    }
    return out;
}

}  // namespace

PresheafTable outer_presheaf(std::shared_ptr<const ContextUniverse> universe,
                             const TolerancePolicy& policy) {
    return projection_presheaf(std::move(universe), Direction::outer, policy);
}

PresheafTable inner_presheaf(std::shared_ptr<const ContextUniverse> universe,
                             const TolerancePolicy& policy) {
    return projection_presheaf(std::move(universe), Direction::inner, policy);
}

}  // namespace toposqt
