#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mps/ids.hpp"

namespace mps {

/// Immutable universe of calls together with their direct-reference lists.
/// Every operation over a graph is a pure function; graphs can be shared
/// freely across threads.
class CallGraph {
public:
    CallGraph() = default;

    /// Builds a graph from a call set and per-call reference lists.
    /// Reference lists keep their given order; calls without an entry get
    /// an empty list. Throws std::invalid_argument on empty ids, references
    /// to unknown calls, or duplicate entries within one list.
    CallGraph(std::set<CallId> calls, std::map<CallId, std::vector<CallId>> refs)
        : calls_(std::move(calls)), refs_(std::move(refs)) {
        for (const CallId& c : calls_) {
            if (c.id.empty()) throw std::invalid_argument("call id must be non-empty");
            refs_.try_emplace(c);
        }
        for (const auto& [c, targets] : refs_) {
            if (!calls_.count(c))
                throw std::invalid_argument("reference list for unknown call '" + c.id + "'");
            std::set<CallId> seen;
            for (const CallId& t : targets) {
                if (!calls_.count(t))
                    throw std::invalid_argument("call '" + c.id + "' references unknown call '" +
                                                t.id + "'");
                if (!seen.insert(t).second)
                    throw std::invalid_argument("call '" + c.id + "' references '" + t.id +
                                                "' more than once");
            }
        }
    }

    const std::set<CallId>& calls() const { return calls_; }

    bool contains(const CallId& c) const { return calls_.count(c) != 0; }

    /// Direct references of a call, in declaration order.
    const std::vector<CallId>& refs(const CallId& c) const {
        auto it = refs_.find(c);
        if (it == refs_.end()) throw std::out_of_range("unknown call '" + c.id + "'");
        return it->second;
    }

    bool operator==(const CallGraph&) const = default;

private:
    std::set<CallId> calls_;
    std::map<CallId, std::vector<CallId>> refs_;
};

/// Assignment of every call to its owning contract. The contract list keeps
/// its given order; that order breaks ties when a deployment order is
/// computed.
class ParentMap {
public:
    ParentMap() = default;

    ParentMap(std::map<CallId, ContractId> parent, std::vector<ContractId> contracts)
        : parent_(std::move(parent)), contracts_(std::move(contracts)) {
        std::set<ContractId> seen;
        for (const ContractId& x : contracts_) {
            if (x.id.empty()) throw std::invalid_argument("contract id must be non-empty");
            if (!seen.insert(x).second)
                throw std::invalid_argument("duplicate contract '" + x.id + "'");
        }
        for (const auto& [c, x] : parent_) {
            if (!seen.count(x))
                throw std::invalid_argument("call '" + c.id + "' assigned to unknown contract '" +
                                            x.id + "'");
        }
    }

    const std::map<CallId, ContractId>& parent() const { return parent_; }
    const std::vector<ContractId>& contracts() const { return contracts_; }

    bool has_contract(const ContractId& x) const {
        return std::find(contracts_.begin(), contracts_.end(), x) != contracts_.end();
    }

    const ContractId& parent_of(const CallId& c) const {
        auto it = parent_.find(c);
        if (it == parent_.end()) throw std::out_of_range("call '" + c.id + "' has no parent");
        return it->second;
    }

    bool operator==(const ParentMap&) const = default;

private:
    std::map<CallId, ContractId> parent_;
    std::vector<ContractId> contracts_;
};

/// All calls reachable from c through one or more reference steps. c itself
/// is a member only when some reference cycle leads back to it.
inline std::set<CallId> trace(const CallGraph& g, const CallId& c) {
    if (!g.contains(c)) throw std::out_of_range("unknown call '" + c.id + "'");
    std::set<CallId> reached;
    std::vector<CallId> frontier{c};
    while (!frontier.empty()) {
        std::vector<CallId> next;
        for (const CallId& u : frontier) {
            for (const CallId& v : g.refs(u)) {
                if (reached.insert(v).second) next.push_back(v);
            }
        }
        frontier = std::move(next);
    }
    return reached;
}

/// Traces of every call, computed in one pass.
inline std::map<CallId, std::set<CallId>> all_traces(const CallGraph& g) {
    std::map<CallId, std::set<CallId>> out;
    for (const CallId& c : g.calls()) out.emplace(c, trace(g, c));
    return out;
}

/// Exact preimage of contract x under the parent map.
inline std::set<CallId> children(const ParentMap& pm, const ContractId& x) {
    if (!pm.has_contract(x)) throw std::out_of_range("unknown contract '" + x.id + "'");
    std::set<CallId> out;
    for (const auto& [c, p] : pm.parent()) {
        if (p == x) out.insert(c);
    }
    return out;
}

inline void require_covering(const CallGraph& g, const ParentMap& pm) {
    for (const CallId& c : g.calls()) {
        if (!pm.parent().count(c))
            throw std::invalid_argument("call '" + c.id + "' has no parent contract");
    }
    for (const auto& [c, x] : pm.parent()) {
        if (!g.contains(c))
            throw std::invalid_argument("parent map mentions unknown call '" + c.id + "'");
    }
}

/// Orders contracts so that every cross-contract reference points to a
/// same-or-earlier contract, earliest deployed first. Ties are broken by the
/// parent map's contract order. Returns nullopt when no such order exists.
inline std::optional<std::vector<ContractId>> deployment_order(const CallGraph& g,
                                                               const ParentMap& pm) {
    require_covering(g, pm);

    // Contract-level dependencies: a referenced contract must come first.
    std::map<ContractId, std::set<ContractId>> succ;  // earlier -> later
    std::map<ContractId, int> indegree;
    for (const ContractId& x : pm.contracts()) indegree[x] = 0;
    for (const CallId& c : g.calls()) {
        const ContractId& from = pm.parent_of(c);
        for (const CallId& t : g.refs(c)) {
            const ContractId& to = pm.parent_of(t);
            if (from == to) continue;
            if (succ[to].insert(from).second) ++indegree[from];
        }
    }

    std::vector<ContractId> order;
    std::set<ContractId> emitted;
    while (order.size() < pm.contracts().size()) {
        bool progress = false;
        for (const ContractId& x : pm.contracts()) {
            if (emitted.count(x) || indegree[x] != 0) continue;
            order.push_back(x);
            emitted.insert(x);
            for (const ContractId& y : succ[x]) --indegree[y];
            progress = true;
            break;
        }
        if (!progress) return std::nullopt;  // mutual cross-contract references
    }
    return order;
}

struct FreshCall {
    CallGraph graph;
    CallId call;
};

/// Adds a brand-new call whose only reference is `referencing`, returning the
/// extended graph and the new id. The id is deterministic: the first unused
/// name of the form fresh_<k>.
inline FreshCall fresh_call(const CallGraph& g, const CallId& referencing) {
    if (!g.contains(referencing)) throw std::out_of_range("unknown call '" + referencing.id + "'");
    CallId fresh;
    for (unsigned k = 0;; ++k) {
        fresh = CallId("fresh_" + std::to_string(k));
        if (!g.contains(fresh)) break;
    }
    std::set<CallId> calls = g.calls();
    calls.insert(fresh);
    std::map<CallId, std::vector<CallId>> refs;
    for (const CallId& c : g.calls()) refs[c] = g.refs(c);
    refs[fresh] = {referencing};
    return FreshCall{CallGraph(std::move(calls), std::move(refs)), fresh};
}

}  // namespace mps
