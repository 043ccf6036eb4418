#include "toposqt/universe.hpp"

#include <algorithm>

namespace toposqt {

ContextUniverse::ContextUniverse(int dim, bool include_trivial, std::vector<Context> contexts,
                                 const TolerancePolicy& policy)
    : dim_(dim), include_trivial_(include_trivial) {
    for (auto& c : contexts) {
        if (c.dim() != dim_) {
            throw DimensionMismatch("ContextUniverse: context dimension mismatch");
        }
        if (c.is_trivial() && !include_trivial_) {
            continue;
        }
        const std::string key = c.key();
        contexts_.emplace(key, std::move(c));
    }
    if (contexts_.empty()) {
        throw InvalidOperator("ContextUniverse: empty universe");
    }
    keys_.reserve(contexts_.size());
    for (const auto& [k, _] : contexts_) keys_.push_back(k);

    for (const auto& a : keys_) {
        for (const auto& b : keys_) {
            leq_[a][b] = (a == b) || is_subcontext(contexts_.at(a), contexts_.at(b), policy);
        }
    }
}

const Context& ContextUniverse::at(const std::string& key) const {
    auto it = contexts_.find(key);
    if (it == contexts_.end()) {
        throw Error("ContextUniverse: unknown context key " + key);
    }
    return it->second;
}

bool ContextUniverse::leq(const std::string& child, const std::string& parent) const {
    auto row = leq_.find(child);
    if (row == leq_.end()) throw Error("ContextUniverse: unknown key " + child);
    auto cell = row->second.find(parent);
    if (cell == row->second.end()) throw Error("ContextUniverse: unknown key " + parent);
    return cell->second;
}

std::vector<std::pair<std::string, std::string>> ContextUniverse::hasse_edges() const {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& child : keys_) {
        for (const auto& parent : keys_) {
            if (child == parent || !leq(child, parent)) continue;
            bool covered = true;
            for (const auto& mid : keys_) {
                if (mid != child && mid != parent && leq(child, mid) && leq(mid, parent)) {
                    covered = false;
                    break;
                }
            }
            if (covered) out.emplace_back(child, parent);
        }
    }
    return out;
}

std::vector<std::string> ContextUniverse::down_set(const std::string& root) const {
    std::vector<std::string> out;
    for (const auto& k : keys_) {
        if (leq(k, root)) out.push_back(k);
    }
    return out;
}

std::vector<std::string> ContextUniverse::maximal_keys() const {
    std::vector<std::string> out;
    for (const auto& k : keys_) {
        bool maximal = true;
        for (const auto& other : keys_) {
            if (other != k && leq(k, other)) {
                maximal = false;
                break;
            }
        }
        if (maximal) out.push_back(k);
    }
    return out;
}

bool ContextUniverse::is_down_closed(const TolerancePolicy& policy) const {
    for (const auto& k : keys_) {
        for (const auto& sub : subcontexts(contexts_.at(k), include_trivial_, policy)) {
            if (!has(sub.key())) return false;
        }
    }
    return true;
}

ContextUniverse universe_from_contexts(int dim, const std::vector<Context>& contexts,
                                       bool include_trivial, const TolerancePolicy& policy,
                                       std::size_t max_contexts) {
    std::map<std::string, Context> closed;
    for (const auto& c : contexts) {
        for (auto& sub : subcontexts(c, include_trivial, policy)) {
            closed.emplace(sub.key(), std::move(sub));
        }
        if (include_trivial) {
            Context t = trivial_context(dim);
            closed.emplace(t.key(), std::move(t));
        }
        if (closed.size() > max_contexts) {
            throw SizeLimit("universe_from_contexts: exceeded max contexts (" +
                            std::to_string(max_contexts) + ")");
        }
    }
    std::vector<Context> all;
    all.reserve(closed.size());
    for (auto& [_, c] : closed) all.push_back(std::move(c));
    return ContextUniverse(dim, include_trivial, std::move(all), policy);
}

ContextUniverse build_universe(int dim, const std::vector<std::vector<HermitianOperator>>& seeds,
                               bool include_trivial, const TolerancePolicy& policy,
                               std::size_t max_contexts) {
    std::vector<Context> generated;
    for (const auto& family : seeds) {
        generated.push_back(context_from_operators(family, policy));
    }
    if (generated.empty() && !include_trivial) {
        throw InvalidOperator("build_universe: no seeds and trivial context excluded");
    }
    if (generated.empty()) {
        generated.push_back(trivial_context(dim));
    }
    return universe_from_contexts(dim, generated, include_trivial, policy, max_contexts);
}

ContextUniverse extend_universe(const ContextUniverse& base, const std::vector<Context>& extra,
                                const TolerancePolicy& policy, std::size_t max_contexts) {
    std::vector<Context> all;
    for (const auto& k : base.keys()) all.push_back(base.at(k));
    for (const auto& c : extra) all.push_back(c);
    return universe_from_contexts(base.dim(), all, base.include_trivial(), policy, max_contexts);
}

}  // namespace toposqt
