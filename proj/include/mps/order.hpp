#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mps/ids.hpp"

namespace mps {

/// A strict partial order over a finite call set, stored transitively
/// closed. Construction closes the given generator pairs and rejects any
/// declaration whose closure would be reflexive or break antisymmetry.
class StrictPartialOrder {
public:
    StrictPartialOrder() = default;

    explicit StrictPartialOrder(std::set<CallId> domain) : domain_(std::move(domain)) {}

    static StrictPartialOrder from_generators(std::set<CallId> domain,
                                              const std::vector<std::pair<CallId, CallId>>& gens) {
        StrictPartialOrder o(std::move(domain));
        for (const auto& [hi, lo] : gens) {
            if (!o.domain_.count(hi) || !o.domain_.count(lo))
                throw std::invalid_argument("order pair (" + hi.id + ", " + lo.id +
                                            ") outside the domain");
            o.pairs_.emplace(hi, lo);
        }
        o.close();
        for (const auto& [hi, lo] : o.pairs_) {
            if (hi == lo)
                throw std::invalid_argument("order is reflexive at '" + hi.id + "'");
            if (o.pairs_.count({lo, hi}))
                throw std::invalid_argument("order is not antisymmetric on (" + hi.id + ", " +
                                            lo.id + ")");
        }
        return o;
    }

    const std::set<CallId>& domain() const { return domain_; }

    /// All pairs (greater, lesser) of the transitive closure.
    const std::set<std::pair<CallId, CallId>>& pairs() const { return pairs_; }

    bool holds(const CallId& greater, const CallId& lesser) const {
        return pairs_.count({greater, lesser}) != 0;
    }

    bool empty() const { return pairs_.empty(); }

    /// Minimal generator set: the transitive reduction, which is unique for
    /// a finite strict partial order. Used when serializing.
    std::vector<std::pair<CallId, CallId>> generators() const {
        std::vector<std::pair<CallId, CallId>> out;
        for (const auto& [hi, lo] : pairs_) {
            bool implied = false;
            for (const auto& [m1, m2] : pairs_) {
                if (m1 == hi && m2 != lo && pairs_.count({m2, lo})) {
                    implied = true;
                    break;
                }
            }
            if (!implied) out.emplace_back(hi, lo);
        }
        return out;
    }

    bool operator==(const StrictPartialOrder&) const = default;

private:
    void close() {
        bool changed = true;
        while (changed) {
            changed = false;
            std::vector<std::pair<CallId, CallId>> add;
            for (const auto& [a, b] : pairs_) {
                for (const auto& [c, d] : pairs_) {
                    if (b == c && !pairs_.count({a, d})) add.emplace_back(a, d);
                }
            }
            for (auto& p : add) changed |= pairs_.insert(std::move(p)).second;
        }
    }

    std::set<CallId> domain_;
    std::set<std::pair<CallId, CallId>> pairs_;
};

/// Deterministic linear extension of a strict partial order given as
/// (greater, lesser) pairs: greatest elements first, ties by canonical id.
/// Throws std::invalid_argument if the pair set is cyclic over the domain.
inline std::vector<CallId> linear_extension(const std::set<CallId>& domain,
                                            const std::set<std::pair<CallId, CallId>>& before) {
    std::vector<CallId> out;
    std::set<CallId> remaining = domain;
    while (!remaining.empty()) {
        const CallId* pick = nullptr;
        for (const CallId& c : remaining) {
            bool dominated = false;
            for (const CallId& d : remaining) {
                if (d != c && before.count({d, c})) {
                    dominated = true;
                    break;
                }
            }
            if (!dominated) {
                pick = &c;
                break;
            }
        }
        if (!pick) throw std::invalid_argument("relation is cyclic; no linear extension");
        out.push_back(*pick);
        remaining.erase(*pick);
    }
    return out;
}

}  // namespace mps
