#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mps/call_graph.hpp"
#include "mps/ids.hpp"
#include "mps/order.hpp"

namespace mps {

/// One declared order per contract, each over that contract's child calls.
struct OrderVector {
    std::map<ContractId, StrictPartialOrder> orders;

    bool operator==(const OrderVector&) const = default;
};

/// Per-contract sequencing relations over the whole call set. Produced by
/// induce(); also the shape of the relation vectors that rights-system
/// instances enumerate.
struct ConstraintSet {
    std::map<ContractId, std::set<std::pair<CallId, CallId>>> relations;

    bool operator==(const ConstraintSet&) const = default;
};

/// True iff the order never ranks a call above one it (transitively)
/// references. Throws when the order's domain is not exactly the child set
/// of x.
inline bool is_admissible(const StrictPartialOrder& o, const ContractId& x, const CallGraph& g,
                          const ParentMap& pm) {
    if (o.domain() != children(pm, x))
        throw std::invalid_argument("order domain does not match children of '" + x.id + "'");
    for (const auto& [hi, lo] : o.pairs()) {
        if (trace(g, hi).count(lo)) return false;
    }
    return true;
}

/// True iff the order already carries every pair forced by references among
/// the contract's own children: hi above lo forces hi above any child whose
/// trace contains lo.
inline bool is_trace_closed(const StrictPartialOrder& o, const ContractId& x, const CallGraph& g,
                            const ParentMap& pm) {
    std::set<CallId> kids = children(pm, x);
    if (o.domain() != kids)
        throw std::invalid_argument("order domain does not match children of '" + x.id + "'");
    for (const auto& [hi, lo] : o.pairs()) {
        for (const CallId& w : kids) {
            if (w == lo) continue;
            if (trace(g, w).count(lo) && !o.holds(hi, w)) return false;
        }
    }
    return true;
}

/// Smallest trace-closed extension of an admissible order, or nullopt when
/// no strict partial order contains one (the forced pairs collide).
inline std::optional<StrictPartialOrder> trace_closure(const StrictPartialOrder& o,
                                                       const ContractId& x, const CallGraph& g,
                                                       const ParentMap& pm) {
    std::set<CallId> kids = children(pm, x);
    if (o.domain() != kids)
        throw std::invalid_argument("order domain does not match children of '" + x.id + "'");
    std::set<std::pair<CallId, CallId>> pairs = o.pairs();
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<std::pair<CallId, CallId>> add;
        for (const auto& [hi, lo] : pairs) {
            for (const CallId& w : kids) {
                if (w != lo && trace(g, w).count(lo) && !pairs.count({hi, w}))
                    add.emplace_back(hi, w);
            }
            for (const auto& [m1, m2] : pairs) {
                if (m1 == lo && !pairs.count({hi, m2})) add.emplace_back(hi, m2);
            }
        }
        for (auto& p : add) changed |= pairs.insert(std::move(p)).second;
    }
    for (const auto& [hi, lo] : pairs) {
        if (hi == lo || pairs.count({lo, hi})) return std::nullopt;
    }
    return StrictPartialOrder::from_generators(kids,
                                               {pairs.begin(), pairs.end()});
}

/// Validates an order vector against (g, pm): one order per contract (absent
/// contracts count as empty orders), domains equal to the child sets, every
/// order admissible. Returns the normalized vector.
inline OrderVector validate_order_vector(const CallGraph& g, const ParentMap& pm,
                                         const OrderVector& ov) {
    for (const auto& [x, o] : ov.orders) {
        if (!pm.has_contract(x))
            throw std::invalid_argument("order vector mentions unknown contract '" + x.id + "'");
    }
    OrderVector norm;
    for (const ContractId& x : pm.contracts()) {
        auto it = ov.orders.find(x);
        StrictPartialOrder o =
            it == ov.orders.end() ? StrictPartialOrder(children(pm, x)) : it->second;
        if (!is_admissible(o, x, g, pm))
            throw std::invalid_argument("order for contract '" + x.id + "' is inadmissible");
        norm.orders.emplace(x, std::move(o));
    }
    return norm;
}

/// Materializes the sequencing relations induced by a declared order vector.
/// For contract x, t is constrained above t' exactly when either both are
/// children of x with t declared above t', or t is a child of x, t' is not,
/// and t is declared above some child of x inside t''s trace.
inline ConstraintSet induce(const CallGraph& g, const ParentMap& pm, const OrderVector& ov) {
    if (!deployment_order(g, pm))
        throw std::invalid_argument("parent map is not deployable");
    OrderVector norm = validate_order_vector(g, pm, ov);
    std::map<CallId, std::set<CallId>> traces = all_traces(g);

    ConstraintSet cs;
    for (const ContractId& x : pm.contracts()) {
        const StrictPartialOrder& o = norm.orders.at(x);
        std::set<CallId> kids = children(pm, x);
        auto& rel = cs.relations[x];
        for (const auto& p : o.pairs()) rel.insert(p);
        for (const CallId& t : kids) {
            for (const CallId& t2 : g.calls()) {
                if (kids.count(t2)) continue;
                for (const CallId& c : traces.at(t2)) {
                    if (kids.count(c) && o.holds(t, c)) {
                        rel.emplace(t, t2);
                        break;
                    }
                }
            }
        }
    }
    return cs;
}

/// Membership test on the induced relation of contract x.
inline bool holds(const ConstraintSet& cs, const ContractId& x, const CallId& t,
                  const CallId& t2) {
    auto it = cs.relations.find(x);
    if (it == cs.relations.end()) throw std::out_of_range("unknown contract '" + x.id + "'");
    return it->second.count({t, t2}) != 0;
}

}  // namespace mps
