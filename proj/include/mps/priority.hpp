#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "mps/call_graph.hpp"
#include "mps/ids.hpp"

namespace mps {

/// Global integer priorities with a protocol-wide cap. The assignment may be
/// partial while priorities are being filled in; validity requires totality.
struct PriorityMap {
    std::map<CallId, long long> lambda;
    long long lambda_max = 0;

    bool has(const CallId& c) const { return lambda.count(c) != 0; }

    long long at(const CallId& c) const {
        auto it = lambda.find(c);
        if (it == lambda.end())
            throw std::out_of_range("call '" + c.id + "' has no assigned priority");
        return it->second;
    }

    bool operator==(const PriorityMap&) const = default;
};

enum class PriorityViolationKind { CapExceeded, ReferenceInversion };

struct PriorityViolation {
    PriorityViolationKind kind;
    CallId call;
    std::optional<CallId> ref;  // set for ReferenceInversion

    bool operator==(const PriorityViolation&) const = default;
};

struct ValidityReport {
    bool valid = false;
    std::optional<PriorityViolation> violation;
};

/// Checks the two validity conditions: no priority above the cap, and no
/// call prioritized above a call it directly references. A direct-reference
/// check suffices; it extends to full traces transitively. The first
/// violation in (call id, reference id) order is reported.
inline ValidityReport is_valid(const PriorityMap& pmap, const CallGraph& g) {
    for (const CallId& c : g.calls()) {
        if (!pmap.has(c))
            throw std::invalid_argument("call '" + c.id + "' has no assigned priority");
    }
    for (const CallId& c : g.calls()) {
        if (pmap.at(c) > pmap.lambda_max)
            return {false, PriorityViolation{PriorityViolationKind::CapExceeded, c, std::nullopt}};
        std::vector<CallId> targets = g.refs(c);
        std::sort(targets.begin(), targets.end());
        for (const CallId& t : targets) {
            if (pmap.at(c) > pmap.at(t))
                return {false, PriorityViolation{PriorityViolationKind::ReferenceInversion, c, t}};
        }
    }
    return {true, std::nullopt};
}

/// Highest priority call c may take while staying valid: the cap, lowered to
/// the minimum priority among its direct references. All direct references
/// must already be priced.
inline long long max_valid_priority(const CallGraph& g, const PriorityMap& partial,
                                    const CallId& c) {
    long long bound = partial.lambda_max;
    for (const CallId& t : g.refs(c)) {
        if (!partial.has(t))
            throw std::invalid_argument("reference '" + t.id + "' of call '" + c.id +
                                        "' has no assigned priority");
        bound = std::min(bound, partial.at(t));
    }
    return bound;
}

}  // namespace mps
