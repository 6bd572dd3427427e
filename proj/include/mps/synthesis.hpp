#pragma once

#include <algorithm>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mps/call_graph.hpp"
#include "mps/ids.hpp"
#include "mps/order.hpp"
#include "mps/priority.hpp"
#include "mps/rights.hpp"

namespace mps {

namespace detail {

/// Groups a contract's children into classes of mutually-referencing calls
/// and lists the classes highest-priority-first: a class comes before every
/// class it is referenced by or declared above. Ties between unordered
/// classes go to the one containing the smallest call id.
inline std::vector<std::vector<CallId>> priority_classes(
    const std::set<CallId>& kids, const StrictPartialOrder& declared,
    const std::map<CallId, std::set<CallId>>& traces) {
    // Mutual reachability within the child set.
    std::map<CallId, int> cls;
    std::vector<std::vector<CallId>> classes;
    for (const CallId& c : kids) {
        if (cls.count(c)) continue;
        int id = static_cast<int>(classes.size());
        classes.push_back({c});
        cls[c] = id;
        for (const CallId& d : kids) {
            if (cls.count(d)) continue;
            if (traces.at(c).count(d) && traces.at(d).count(c)) {
                classes[id].push_back(d);
                cls[d] = id;
            }
        }
    }

    // before[i][j]: class i must be assigned before (above) class j.
    auto class_before = [&](int i, int j) {
        for (const CallId& u : classes[i]) {
            for (const CallId& v : classes[j]) {
                if (declared.holds(u, v)) return true;
                if (traces.at(v).count(u)) return true;  // v references u
            }
        }
        return false;
    };

    std::vector<int> remaining(classes.size());
    for (size_t i = 0; i < classes.size(); ++i) remaining[i] = static_cast<int>(i);
    std::vector<std::vector<CallId>> out;
    while (!remaining.empty()) {
        int pick = -1;
        for (int i : remaining) {
            bool dominated = false;
            for (int j : remaining) {
                if (j != i && class_before(j, i)) {
                    dominated = true;
                    break;
                }
            }
            if (!dominated && (pick < 0 || classes[i].front() < classes[pick].front())) pick = i;
        }
        if (pick < 0)
            throw std::invalid_argument(
                "order cannot be respected: declared pairs conflict with references");
        out.push_back(classes[pick]);
        std::erase(remaining, pick);
    }
    for (auto& c : out) std::sort(c.begin(), c.end());
    return out;
}

}  // namespace detail

/// Builds a valid priority map whose priorities respect every constraint the
/// declared orders induce, cross-contract ones included. Contracts are
/// processed earliest-deployed-first. Within the first contract the i-th
/// class of calls gets lambda_max - i; within later contracts the first
/// class gets the minimum priority over its references (lambda_max - 1 when
/// it has none) and each following class gets
/// min(previous - 1, minimum over its references). Calls that reference each
/// other mutually form one class and share a priority.
inline PriorityMap synthesize(const CallGraph& g, const ParentMap& pm, const OrderVector& ov,
                              long long lambda_max) {
    auto deploy = deployment_order(g, pm);
    if (!deploy) throw std::invalid_argument("parent map is not deployable");
    OrderVector norm = validate_order_vector(g, pm, ov);
    std::map<CallId, std::set<CallId>> traces = all_traces(g);

    // Close each declared order under references among siblings; the
    // cross-contract guarantee needs the closed pairs respected too.
    std::map<ContractId, StrictPartialOrder> closed;
    for (const ContractId& x : pm.contracts()) {
        auto c = trace_closure(norm.orders.at(x), x, g, pm);
        if (!c)
            throw std::invalid_argument("order for contract '" + x.id +
                                        "' cannot be extended along references");
        closed.emplace(x, std::move(*c));
    }

    PriorityMap out;
    out.lambda_max = lambda_max;
    bool first_contract = true;
    for (const ContractId& x : *deploy) {
        std::set<CallId> kids = children(pm, x);
        auto classes = detail::priority_classes(kids, closed.at(x), traces);
        long long prev = std::numeric_limits<long long>::max();
        long long index = 0;
        for (const auto& cls : classes) {
            ++index;
            bool have_ref_min = false;
            long long ref_min = 0;
            for (const CallId& c : cls) {
                for (const CallId& t : traces.at(c)) {
                    if (std::find(cls.begin(), cls.end(), t) != cls.end()) continue;
                    if (!out.has(t))
                        throw std::logic_error("referenced priority not yet assigned: " + t.id);
                    if (!have_ref_min || out.at(t) < ref_min) {
                        have_ref_min = true;
                        ref_min = out.at(t);
                    }
                }
            }
            long long value;
            if (first_contract) {
                value = lambda_max - index;
            } else if (index == 1) {
                value = have_ref_min ? ref_min : lambda_max - 1;
            } else {
                value = have_ref_min ? std::min(prev - 1, ref_min) : prev - 1;
            }
            for (const CallId& c : cls) out.lambda[c] = value;
            prev = value;
        }
        first_contract = false;
    }
    return out;
}

/// Reads the declared orders a valid priority map encodes: within each
/// contract, t above t' exactly when t's priority is strictly greater. The
/// result is always admissible and trace-closed.
inline OrderVector derive_orders(const CallGraph& g, const ParentMap& pm,
                                 const PriorityMap& pmap) {
    require_covering(g, pm);
    ValidityReport v = is_valid(pmap, g);
    if (!v.valid) throw std::invalid_argument("priority map is not valid");

    OrderVector out;
    for (const ContractId& x : pm.contracts()) {
        std::set<CallId> kids = children(pm, x);
        std::vector<std::pair<CallId, CallId>> gens;
        for (const CallId& t : kids) {
            for (const CallId& t2 : kids) {
                if (pmap.at(t) > pmap.at(t2)) gens.emplace_back(t, t2);
            }
        }
        out.orders.emplace(x, StrictPartialOrder::from_generators(kids, gens));
    }
    return out;
}

}  // namespace mps
