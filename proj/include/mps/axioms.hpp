#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "mps/call_graph.hpp"
#include "mps/enumerate.hpp"
#include "mps/ids.hpp"
#include "mps/indexed.hpp"
#include "mps/order.hpp"
#include "mps/rights.hpp"

namespace mps {

enum class Axiom { Existence, Priority, Extension, Reducibility, IndependenceOfIrrelevantCalls };

inline const std::array<Axiom, 5>& all_axioms() {
    static const std::array<Axiom, 5> a = {Axiom::Existence, Axiom::Priority, Axiom::Extension,
                                           Axiom::Reducibility,
                                           Axiom::IndependenceOfIrrelevantCalls};
    return a;
}

inline std::string axiom_name(Axiom a) {
    switch (a) {
        case Axiom::Existence: return "existence";
        case Axiom::Priority: return "priority";
        case Axiom::Extension: return "extension";
        case Axiom::Reducibility: return "reducibility";
        case Axiom::IndependenceOfIrrelevantCalls: return "independence-of-irrelevant-calls";
    }
    return "?";
}

/// A rights system under test: a name plus an enumerator producing, for a
/// given instance, the finite family of relation vectors the system allows.
/// `can_constrain` is an optional constant-time achievability shortcut; when
/// absent the checkers scan the enumerated family. Family enumeration
/// supports contracts with at most five children.
struct RightsSystemInstance {
    std::string name;
    std::function<std::vector<RelVec>(const IndexedInstance&)> family;
    std::function<bool(const IndexedInstance&, int, int, int)> can_constrain;

    std::vector<ConstraintSet> admits(const CallGraph& g, const ParentMap& pm) const {
        IndexedInstance inst = index_instance(g, pm);
        std::vector<ConstraintSet> out;
        for (const RelVec& v : family(inst)) out.push_back(to_constraint_set(inst, v));
        return out;
    }
};

struct ExistenceWitness {
    ConstraintSet chosen;
    std::vector<CallId> sequence;
};

struct PriorityWitness {
    ConstraintSet chosen;
    ContractId contract;
    StrictPartialOrder requested;  // the order no allowed vector agrees with
};

struct RelationWitness {
    ConstraintSet chosen;
    ContractId contract;
    CallId upper;
    CallId lower;
    std::optional<CallId> via;  // extension: the call whose trace contains `lower`
};

struct IicWitness {
    ConstraintSet chosen;
    ContractId contract;
    CallId upper;
    CallId lower;
    ParentMap base;
    CallGraph alternate_graph;  // may carry one fresh call
    ParentMap alternate;
};

struct AxiomReport {
    Axiom axiom;
    bool pass = true;
    std::variant<std::monostate, ExistenceWitness, PriorityWitness, RelationWitness, IicWitness>
        witness;
};

namespace detail {

inline IndexedInstance require_indexed_deployable(const CallGraph& g, const ParentMap& pm) {
    IndexedInstance inst = index_instance(g, pm);
    if (!inst.deployable()) throw std::invalid_argument("parent map is not deployable");
    return inst;
}

// Multisets in shortest-first order, non-decreasing within one length, so a
// failure is always reported by a shortest witness sequence.
inline void for_each_multiset(int n, int max_len,
                              const std::function<bool(const std::vector<int>&)>& fn) {
    std::vector<int> tuple;
    bool stop = false;
    auto rec = [&](auto&& self, int from, int left) -> void {
        if (left == 0) {
            if (!fn(tuple)) stop = true;
            return;
        }
        for (int c = from; c < n && !stop; ++c) {
            tuple.push_back(c);
            self(self, c, left - 1);
            tuple.pop_back();
        }
    };
    for (int len = 1; len <= max_len && !stop; ++len) rec(rec, 0, len);
}

inline bool inversion_free(const std::vector<int>& arrangement, Rel64 unioned) {
    for (std::size_t j = 1; j < arrangement.size(); ++j) {
        for (std::size_t i = 0; i < j; ++i) {
            if (rel_has(unioned, arrangement[j], arrangement[i])) return false;
        }
    }
    return true;
}

}  // namespace detail

/// Existence: for every allowed vector and every transaction sequence up to
/// max_len (with repetition), some permutation has no inversion. The verdict
/// does not depend on the order of a sequence, so one canonical
/// representative per multiset is tried. max_len is capped at 6.
inline AxiomReport check_existence(const RightsSystemInstance& sys, const CallGraph& g,
                                   const ParentMap& pm, int max_len) {
    if (max_len < 1 || max_len > 6)
        throw std::invalid_argument("sequence length bound must be between 1 and 6");
    IndexedInstance inst = detail::require_indexed_deployable(g, pm);
    AxiomReport report{Axiom::Existence, true, {}};
    for (const RelVec& v : sys.family(inst)) {
        Rel64 unioned = 0;
        for (int x = 0; x < inst.k; ++x) unioned |= v[x];
        detail::for_each_multiset(inst.n, max_len, [&](const std::vector<int>& seq) {
            std::vector<int> perm = seq;
            do {
                if (detail::inversion_free(perm, unioned)) return true;
            } while (std::next_permutation(perm.begin(), perm.end()));
            ExistenceWitness w;
            w.chosen = to_constraint_set(inst, v);
            for (int c : seq) w.sequence.emplace_back(inst.call_names[c]);
            report = {Axiom::Existence, false, std::move(w)};
            return false;
        });
        if (!report.pass) break;
    }
    return report;
}

/// Priority: for every allowed vector, contract, and closed admissible order
/// over the contract's children, some allowed vector agrees with that order
/// on the children and with the original everywhere else.
inline AxiomReport check_priority(const RightsSystemInstance& sys, const CallGraph& g,
                                  const ParentMap& pm) {
    IndexedInstance inst = detail::require_indexed_deployable(g, pm);
    std::vector<RelVec> family = sys.family(inst);

    std::array<Rel64, kMaxIndexedContracts> child_pairs{};
    for (int x = 0; x < inst.k; ++x) {
        for (int i = 0; i < inst.n; ++i) {
            if (!((inst.kids[x] >> i) & 1)) continue;
            for (int j = 0; j < inst.n; ++j) {
                if (i != j && ((inst.kids[x] >> j) & 1)) child_pairs[x] |= rel_bit(i, j);
            }
        }
    }

    using Key = std::array<std::uint64_t, 5>;
    std::set<Key> index;
    for (const RelVec& v : family) {
        for (int x = 0; x < inst.k; ++x) {
            Key key{};
            for (int y = 0; y < inst.k; ++y) key[y] = (y == x) ? (v[y] & child_pairs[x]) : v[y];
            key[4] = static_cast<std::uint64_t>(x);
            index.insert(key);
        }
    }

    for (const RelVec& v : family) {
        for (int x = 0; x < inst.k; ++x) {
            for (Rel64 target : closed_admissible_orders(inst, x)) {
                Key key{};
                for (int y = 0; y < inst.k; ++y) key[y] = (y == x) ? target : v[y];
                key[4] = static_cast<std::uint64_t>(x);
                if (!index.count(key)) {
                    PriorityWitness w;
                    w.chosen = to_constraint_set(inst, v);
                    w.contract = ContractId(inst.contract_names[x]);
                    std::set<CallId> dom;
                    for (int i = 0; i < inst.n; ++i)
                        if ((inst.kids[x] >> i) & 1) dom.emplace(inst.call_names[i]);
                    std::vector<std::pair<CallId, CallId>> gens;
                    Rel64 r = target;
                    while (r) {
                        int b = std::countr_zero(r);
                        r &= r - 1;
                        gens.emplace_back(CallId(inst.call_names[b / 8]),
                                          CallId(inst.call_names[b % 8]));
                    }
                    w.requested = StrictPartialOrder::from_generators(dom, gens);
                    return {Axiom::Priority, false, std::move(w)};
                }
            }
        }
    }
    return {Axiom::Priority, true, {}};
}

/// Extension: a constraint above c' extends above anything whose trace
/// contains c'.
inline AxiomReport check_extension(const RightsSystemInstance& sys, const CallGraph& g,
                                   const ParentMap& pm) {
    IndexedInstance inst = detail::require_indexed_deployable(g, pm);
    for (const RelVec& v : sys.family(inst)) {
        for (int x = 0; x < inst.k; ++x) {
            Rel64 r = v[x];
            while (r) {
                int b = std::countr_zero(r);
                r &= r - 1;
                int c = b / 8, c2 = b % 8;
                std::uint8_t missing =
                    inst.rtrace[c2] & static_cast<std::uint8_t>(~rel_row(v[x], c));
                if (missing) {
                    int via = std::countr_zero(static_cast<unsigned>(missing));
                    RelationWitness w;
                    w.chosen = to_constraint_set(inst, v);
                    w.contract = ContractId(inst.contract_names[x]);
                    w.upper = CallId(inst.call_names[c]);
                    w.lower = CallId(inst.call_names[c2]);
                    w.via = CallId(inst.call_names[via]);
                    return {Axiom::Extension, false, std::move(w)};
                }
            }
        }
    }
    return {Axiom::Extension, true, {}};
}

/// Reducibility: a constraint above c' needs c' in the contract, or some
/// child of the contract inside c''s trace that is also constrained below.
inline AxiomReport check_reducibility(const RightsSystemInstance& sys, const CallGraph& g,
                                      const ParentMap& pm) {
    IndexedInstance inst = detail::require_indexed_deployable(g, pm);
    for (const RelVec& v : sys.family(inst)) {
        for (int x = 0; x < inst.k; ++x) {
            Rel64 r = v[x];
            while (r) {
                int b = std::countr_zero(r);
                r &= r - 1;
                int c = b / 8, c2 = b % 8;
                if (inst.parent[c2] == x) continue;
                if (inst.trace[c2] & inst.kids[x] & rel_row(v[x], c)) continue;
                RelationWitness w;
                w.chosen = to_constraint_set(inst, v);
                w.contract = ContractId(inst.contract_names[x]);
                w.upper = CallId(inst.call_names[c]);
                w.lower = CallId(inst.call_names[c2]);
                return {Axiom::Reducibility, false, std::move(w)};
            }
        }
    }
    return {Axiom::Reducibility, true, {}};
}

/// Independence of irrelevant calls: a granted constraint t above t' must
/// stay grantable under any deployable reassignment that keeps t, t', and
/// both their traces in place. Alternates are enumerated over the instance's
/// own calls, and again with one fresh call referencing t' added, emulating
/// an unbounded call space at finite scale.
inline AxiomReport check_iic(const RightsSystemInstance& sys, const CallGraph& g,
                             const std::vector<ParentMap>& pms) {
    std::map<std::uint64_t, RelVec> achievable_cache;
    auto achievable = [&](const IndexedInstance& alt, int x, int t, int t2) {
        if (sys.can_constrain) return sys.can_constrain(alt, x, t, t2);
        std::uint64_t key = static_cast<std::uint64_t>(alt.n) << 32;
        for (int i = 0; i < alt.n; ++i) key |= static_cast<std::uint64_t>(alt.parent[i]) << (i * 2);
        auto it = achievable_cache.find(key);
        if (it == achievable_cache.end()) {
            RelVec acc{};
            for (const RelVec& v : sys.family(alt)) {
                for (int y = 0; y < alt.k; ++y) acc[y] |= v[y];
            }
            it = achievable_cache.emplace(key, acc).first;
        }
        return rel_has(it->second[x], t, t2);
    };

    for (const ParentMap& pm : pms) {
        IndexedInstance inst = detail::require_indexed_deployable(g, pm);
        achievable_cache.clear();

        IndexedInstance extended;  // one fresh call, rebuilt per target pair
        for (const RelVec& v : sys.family(inst)) {
            for (int x = 0; x < inst.k; ++x) {
                Rel64 r = v[x];
                while (r) {
                    int b = std::countr_zero(r);
                    r &= r - 1;
                    int t = b / 8, t2 = b % 8;
                    std::uint8_t fixed = static_cast<std::uint8_t>((1u << t) | (1u << t2)) |
                                         inst.trace[t] | inst.trace[t2];
                    std::uint8_t all = static_cast<std::uint8_t>((1u << inst.n) - 1);

                    const IndexedInstance* failed = nullptr;
                    IndexedInstance failed_copy;
                    auto probe = [&](const IndexedInstance& alt) {
                        if (failed || !alt.deployable()) return;
                        if (!achievable(alt, x, t, t2)) {
                            failed_copy = alt;
                            failed = &failed_copy;
                        }
                    };
                    for_each_reassignment(inst, static_cast<std::uint8_t>(all & ~fixed), probe);
                    if (!failed && inst.n < kMaxIndexedCalls) {
                        extended = inst;
                        std::string fresh = "fresh_0";
                        for (unsigned u = 0; inst.call_index(fresh) >= 0; ++u)
                            fresh = "fresh_" + std::to_string(u + 1);
                        extended.call_names.push_back(fresh);
                        extended.n = inst.n + 1;
                        extended.refs[inst.n] = std::uint8_t(1) << t2;
                        extended.parent[inst.n] = 0;
                        extended.finalize();
                        std::uint8_t free = static_cast<std::uint8_t>(all & ~fixed) |
                                            static_cast<std::uint8_t>(1u << inst.n);
                        for_each_reassignment(extended, free, probe);
                    }
                    if (failed) {
                        IicWitness w;
                        w.chosen = to_constraint_set(inst, v);
                        w.contract = ContractId(inst.contract_names[x]);
                        w.upper = CallId(inst.call_names[t]);
                        w.lower = CallId(inst.call_names[t2]);
                        w.base = pm;
                        w.alternate_graph = to_call_graph(*failed);
                        w.alternate = to_parent_map(*failed);
                        return {Axiom::IndependenceOfIrrelevantCalls, false, std::move(w)};
                    }
                }
            }
        }
    }
    return {Axiom::IndependenceOfIrrelevantCalls, true, {}};
}

struct QOrderResult {
    std::optional<std::map<CallId, long long>> indices;
    std::vector<CallId> cycle;  // nonempty exactly when no embedding exists

    bool ok() const { return indices.has_value(); }
};

/// Embeds the union of the per-contract relations into the integers when its
/// transitive closure is acyclic: each call gets the rank of a deterministic
/// linear extension, highest first. On a cycle, returns the cycle instead.
inline QOrderResult q_orderable(const std::set<CallId>& calls, const ConstraintSet& cs) {
    std::map<CallId, std::set<CallId>> adj;
    std::set<std::pair<CallId, CallId>> unioned;
    for (const auto& [x, rel] : cs.relations) {
        for (const auto& [hi, lo] : rel) {
            if (!calls.count(hi) || !calls.count(lo))
                throw std::invalid_argument("relation mentions a call outside the call set");
            adj[hi].insert(lo);
            unioned.emplace(hi, lo);
        }
    }

    // Cycle detection, visiting calls and neighbors in canonical order.
    std::map<CallId, int> color;  // 0 white, 1 on path, 2 done
    std::vector<CallId> path;
    std::vector<CallId> cycle;
    auto dfs = [&](auto&& self, const CallId& u) -> bool {
        color[u] = 1;
        path.push_back(u);
        for (const CallId& v : adj[u]) {
            if (color[v] == 1) {
                auto it = std::find(path.begin(), path.end(), v);
                cycle.assign(it, path.end());
                return true;
            }
            if (color[v] == 0 && self(self, v)) return true;
        }
        path.pop_back();
        color[u] = 2;
        return false;
    };
    for (const CallId& c : calls) {
        if (color[c] == 0 && dfs(dfs, c)) {
            auto min_it = std::min_element(cycle.begin(), cycle.end());
            std::rotate(cycle.begin(), min_it, cycle.end());
            return {std::nullopt, cycle};
        }
    }

    std::vector<CallId> ext = linear_extension(calls, unioned);
    std::map<CallId, long long> idx;
    for (std::size_t p = 0; p < ext.size(); ++p)
        idx[ext[p]] = static_cast<long long>(ext.size() - 1 - p);
    return {std::move(idx), {}};
}

}  // namespace mps
