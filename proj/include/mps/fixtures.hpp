#pragma once

#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mps/axioms.hpp"
#include "mps/call_graph.hpp"
#include "mps/indexed.hpp"

namespace mps {

/// Family of the reference rights system: one relation vector per choice of
/// closed admissible declared orders, contract 0 varying slowest.
inline std::vector<RelVec> rstar_family(const IndexedInstance& inst) {
    std::array<std::vector<Rel64>, kMaxIndexedContracts> per;
    for (int x = 0; x < inst.k; ++x) per[x] = closed_admissible_orders(inst, x);
    std::vector<RelVec> out;
    std::array<std::size_t, kMaxIndexedContracts> sel{};
    while (true) {
        RelVec declared{};
        for (int x = 0; x < inst.k; ++x) declared[x] = per[x][sel[x]];
        out.push_back(induce_indexed(inst, declared));
        int x = inst.k - 1;
        while (x >= 0) {
            if (++sel[x] < per[x].size()) break;
            sel[x] = 0;
            --x;
        }
        if (x < 0) break;
    }
    return out;
}

/// Constant-time achievability for the reference system: contract x can put
/// its child t above t2 iff a single declared pair, closed along references,
/// survives admissibility. Cross-checked against rstar_family by tests.
inline bool rstar_can_constrain(const IndexedInstance& inst, int x, int t, int t2) {
    if (t == t2 || inst.parent[t] != x) return false;
    auto single_pair_ok = [&](int c) {
        std::uint8_t forced = static_cast<std::uint8_t>(1u << c) | (inst.rtrace[c] & inst.kids[x]);
        std::uint8_t blocked = inst.trace[t] | static_cast<std::uint8_t>(1u << t);
        return (forced & blocked) == 0;
    };
    if (inst.parent[t2] == x) return single_pair_ok(t2);
    std::uint8_t cands = inst.trace[t2] & inst.kids[x];
    while (cands) {
        int c = std::countr_zero(static_cast<unsigned>(cands));
        cands &= static_cast<std::uint8_t>(cands - 1);
        if (single_pair_ok(c)) return true;
    }
    return false;
}

inline RightsSystemInstance rstar_system() {
    RightsSystemInstance sys;
    sys.name = "rstar";
    sys.family = [](const IndexedInstance& inst) { return rstar_family(inst); };
    sys.can_constrain = [](const IndexedInstance& inst, int x, int t, int t2) {
        return rstar_can_constrain(inst, x, t, t2);
    };
    return sys;
}

namespace detail {

/// Propagates every extra pair above c' to anything whose trace contains c'.
inline Rel64 extend_along_references(const IndexedInstance& inst, Rel64 extras) {
    bool changed = true;
    while (changed) {
        changed = false;
        Rel64 r = extras;
        while (r) {
            int b = std::countr_zero(r);
            r &= r - 1;
            int c = b / 8, c2 = b % 8;
            std::uint8_t ws = inst.rtrace[c2];
            while (ws) {
                int w = std::countr_zero(static_cast<unsigned>(ws));
                ws &= static_cast<std::uint8_t>(ws - 1);
                if (!rel_has(extras, c, w)) {
                    extras |= rel_bit(c, w);
                    changed = true;
                }
            }
        }
    }
    return extras;
}

/// Base reference-system family where one contract may also adopt extra
/// pairs. Every subset of the addable pairs is extended along references
/// and merged into the adder's relation; the result is kept only when it is
/// already a strict partial order as it stands (no transitive repair).
/// `as_block` offers the addable pairs only all-or-nothing.
inline std::vector<RelVec> extras_family(
    const IndexedInstance& inst, int adder,
    const std::function<bool(const IndexedInstance&, int, int)>& addable, bool as_block) {
    std::vector<std::pair<int, int>> pairs;
    for (int c = 0; c < inst.n; ++c) {
        for (int c2 = 0; c2 < inst.n; ++c2) {
            if (c != c2 && addable(inst, c, c2)) pairs.emplace_back(c, c2);
        }
    }
    std::vector<Rel64> extra_sets;
    if (as_block) {
        Rel64 all = 0;
        for (auto [c, c2] : pairs) all |= rel_bit(c, c2);
        extra_sets.push_back(0);
        if (all) extra_sets.push_back(extend_along_references(inst, all));
    } else {
        for (std::uint32_t mask = 0; mask < (1u << pairs.size()); ++mask) {
            Rel64 e = 0;
            for (std::size_t s = 0; s < pairs.size(); ++s)
                if ((mask >> s) & 1) e |= rel_bit(pairs[s].first, pairs[s].second);
            extra_sets.push_back(extend_along_references(inst, e));
        }
    }

    std::vector<RelVec> out;
    std::set<RelVec> seen;
    for (const RelVec& base : rstar_family(inst)) {
        for (Rel64 e : extra_sets) {
            Rel64 combined = base[adder] | e;
            if (!rel_is_strict_partial_order(combined, inst.n)) continue;
            RelVec v = base;
            v[adder] = combined;
            if (seen.insert(v).second) out.push_back(v);
        }
    }
    return out;
}

inline CallGraph wrapper_universe() {
    return CallGraph({CallId("a"), CallId("a'"), CallId("b")},
                     {{CallId("a'"), {CallId("a")}}});
}

inline CallGraph isolated_universe() {
    return CallGraph({CallId("a"), CallId("b"), CallId("c"), CallId("d")}, {});
}

inline ParentMap make_pstar(std::map<std::string, std::string> assign) {
    std::map<CallId, ContractId> parent;
    for (auto& [c, x] : assign) parent.emplace(CallId(c), ContractId(x));
    return ParentMap(std::move(parent), {ContractId("A"), ContractId("B")});
}

}  // namespace detail

/// A named counterexample system: fails exactly `target` on `pstar` and
/// satisfies the other four axioms.
struct Fixture {
    std::string name;
    RightsSystemInstance system;
    CallGraph graph;
    ParentMap pstar;
    Axiom target;
};

inline const std::vector<std::string>& fixture_names() {
    static const std::vector<std::string> names = {"no-existence", "no-priority", "no-extension",
                                                   "no-reducibility", "no-iic"};
    return names;
}

inline Fixture load_fixture(const std::string& name) {
    using detail::extras_family;
    Fixture f;
    f.name = name;
    if (name == "no-existence") {
        // Contract B may additionally rank any call above a child of B it
        // does not reference.
        f.graph = detail::wrapper_universe();
        f.pstar = detail::make_pstar({{"a", "B"}, {"a'", "A"}, {"b", "A"}});
        f.target = Axiom::Existence;
        f.system.name = name;
        f.system.family = [](const IndexedInstance& inst) {
            return extras_family(
                inst, 1,
                [](const IndexedInstance& i, int c, int c2) {
                    return i.parent[c2] == 1 && !((i.trace[c2] >> c) & 1);
                },
                false);
        };
    } else if (name == "no-priority") {
        // The null system: a single vector with no constraints at all.
        f.graph = detail::isolated_universe();
        f.pstar = detail::make_pstar({{"a", "A"}, {"b", "A"}, {"c", "B"}, {"d", "B"}});
        f.target = Axiom::Priority;
        f.system.name = name;
        f.system.family = [](const IndexedInstance&) { return std::vector<RelVec>{RelVec{}}; };
    } else if (name == "no-extension") {
        // Contracts order their own children freely; no cross-contract
        // constraints ever, so nothing extends past a contract boundary.
        f.graph = detail::wrapper_universe();
        f.pstar = detail::make_pstar({{"a", "B"}, {"a'", "A"}, {"b", "B"}});
        f.target = Axiom::Extension;
        f.system.name = name;
        f.system.family = [](const IndexedInstance& inst) {
            std::array<std::vector<Rel64>, kMaxIndexedContracts> per;
            for (int x = 0; x < inst.k; ++x) {
                std::vector<int> ch;
                for (int i = 0; i < inst.n; ++i)
                    if (inst.parent[i] == x) ch.push_back(i);
                for (Rel64 local : strict_partial_orders(static_cast<int>(ch.size()))) {
                    Rel64 global = 0;
                    Rel64 r = local;
                    while (r) {
                        int b = std::countr_zero(r);
                        r &= r - 1;
                        global |= rel_bit(ch[b / 8], ch[b % 8]);
                    }
                    per[x].push_back(global);
                }
            }
            std::vector<RelVec> out;
            std::array<std::size_t, kMaxIndexedContracts> sel{};
            while (true) {
                RelVec v{};
                for (int x = 0; x < inst.k; ++x) v[x] = per[x][sel[x]];
                out.push_back(v);
                int x = inst.k - 1;
                while (x >= 0) {
                    if (++sel[x] < per[x].size()) break;
                    sel[x] = 0;
                    --x;
                }
                if (x < 0) break;
            }
            return out;
        };
    } else if (name == "no-reducibility") {
        // Contract B may additionally rank its own child above an outside
        // call it does not reference, provided that call's trace meets B.
        f.graph = detail::wrapper_universe();
        f.pstar = detail::make_pstar({{"a", "B"}, {"a'", "A"}, {"b", "B"}});
        f.target = Axiom::Reducibility;
        f.system.name = name;
        f.system.family = [](const IndexedInstance& inst) {
            return extras_family(
                inst, 1,
                [](const IndexedInstance& i, int c, int c2) {
                    return i.parent[c] == 1 && i.parent[c2] != 1 && !((i.trace[c2] >> c) & 1) &&
                           (i.trace[c2] & i.kids[1]) != 0;
                },
                false);
        };
    } else if (name == "no-iic") {
        // Contract B may adopt b above a and a' only under one specific
        // assignment, so the grant depends on where the unrelated a' lives.
        f.graph = detail::wrapper_universe();
        f.pstar = detail::make_pstar({{"a", "B"}, {"a'", "B"}, {"b", "A"}});
        f.target = Axiom::IndependenceOfIrrelevantCalls;
        f.system.name = name;
        f.system.family = [](const IndexedInstance& inst) {
            return extras_family(
                inst, 1,
                [](const IndexedInstance& i, int c, int c2) {
                    int a = i.call_index("a");
                    int ap = i.call_index("a'");
                    int b = i.call_index("b");
                    if (a < 0 || ap < 0 || b < 0) return false;
                    if (!(i.parent[b] == 0 && i.parent[a] == 1 && i.parent[ap] == 1)) return false;
                    return c == b && (c2 == a || c2 == ap);
                },
                true);
        };
    } else {
        throw std::invalid_argument("unknown fixture '" + name + "'");
    }
    return f;
}

}  // namespace mps
