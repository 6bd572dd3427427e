#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mps/call_graph.hpp"
#include "mps/ids.hpp"
#include "mps/rights.hpp"

namespace mps {

// The axiom lab enumerates thousands of small instances, so relations are
// kept as 8x8 bit matrices: bit (i*8 + j) set means call i is sequenced
// above call j.
using Rel64 = std::uint64_t;

inline constexpr int kMaxIndexedCalls = 8;
inline constexpr int kMaxIndexedContracts = 4;
inline constexpr Rel64 kRelDiagonal = 0x8040201008040201ULL;

constexpr Rel64 rel_bit(int i, int j) { return Rel64{1} << (i * 8 + j); }
constexpr bool rel_has(Rel64 r, int i, int j) { return (r >> (i * 8 + j)) & 1; }
constexpr std::uint8_t rel_row(Rel64 r, int i) {
    return static_cast<std::uint8_t>((r >> (i * 8)) & 0xFF);
}

/// 8x8 bit-matrix transpose.
inline Rel64 rel_transpose(Rel64 x) {
    Rel64 t;
    t = (x ^ (x >> 7)) & 0x00AA00AA00AA00AAULL;
    x = x ^ t ^ (t << 7);
    t = (x ^ (x >> 14)) & 0x0000CCCC0000CCCCULL;
    x = x ^ t ^ (t << 14);
    t = (x ^ (x >> 28)) & 0x00000000F0F0F0F0ULL;
    x = x ^ t ^ (t << 28);
    return x;
}

inline Rel64 rel_transitive_closure(Rel64 r, int n) {
    std::array<std::uint8_t, 8> row{};
    for (int i = 0; i < n; ++i) row[i] = rel_row(r, i);
    for (int k = 0; k < n; ++k) {
        for (int i = 0; i < n; ++i) {
            if ((row[i] >> k) & 1) row[i] |= row[k];
        }
    }
    Rel64 out = 0;
    for (int i = 0; i < n; ++i) out |= Rel64{row[i]} << (i * 8);
    return out;
}

inline bool rel_irreflexive(Rel64 r) { return (r & kRelDiagonal) == 0; }
inline bool rel_antisymmetric(Rel64 r) { return (r & rel_transpose(r) & ~kRelDiagonal) == 0; }
inline bool rel_is_strict_partial_order(Rel64 r, int n) {
    return rel_irreflexive(r) && rel_antisymmetric(r) && rel_transitive_closure(r, n) == r;
}

/// All strict partial orders on m labeled elements (m <= 5), as transitively
/// closed relation masks in ascending mask order. Built once per process.
inline const std::vector<Rel64>& strict_partial_orders(int m) {
    static const std::array<std::vector<Rel64>, 6> tables = [] {
        std::array<std::vector<Rel64>, 6> t;
        for (int m = 0; m <= 5; ++m) {
            std::vector<std::pair<int, int>> slots;
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j)
                    if (i != j) slots.emplace_back(i, j);
            const std::size_t count = std::size_t{1} << slots.size();
            for (std::size_t mask = 0; mask < count; ++mask) {
                Rel64 r = 0;
                for (std::size_t s = 0; s < slots.size(); ++s)
                    if ((mask >> s) & 1) r |= rel_bit(slots[s].first, slots[s].second);
                if (rel_antisymmetric(r) && rel_transitive_closure(r, m) == r)
                    t[m].push_back(r);
            }
            std::sort(t[m].begin(), t[m].end());
        }
        return t;
    }();
    if (m < 0 || m > 5) throw std::invalid_argument("partial-order table supports 0..5 elements");
    return tables[m];
}

/// Compact instance form used by the axiom checkers and enumerators:
/// up to 8 calls and 4 contracts, references and traces as row bitmasks.
struct IndexedInstance {
    int n = 0;
    int k = 0;
    std::array<std::uint8_t, 8> refs{};    // refs[i]: direct references of call i
    std::array<std::uint8_t, 8> trace{};   // trace[i]: calls reachable from i, one or more steps
    std::array<std::uint8_t, 8> rtrace{};  // rtrace[j]: calls whose trace contains j
    std::array<std::uint8_t, 8> parent{};  // call -> contract index
    std::array<std::uint8_t, 4> kids{};    // contract -> children bitmask
    std::vector<std::string> call_names;
    std::vector<std::string> contract_names;

    /// Recomputes traces and children masks after refs/parent changes.
    void finalize() {
        for (int i = 0; i < n; ++i) trace[i] = refs[i];
        for (int c = 0; c < n; ++c) {
            for (int i = 0; i < n; ++i) {
                if ((trace[i] >> c) & 1) trace[i] |= trace[c];
            }
        }
        rtrace.fill(0);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                if ((trace[i] >> j) & 1) rtrace[j] |= std::uint8_t(1) << i;
            }
        }
        kids.fill(0);
        for (int i = 0; i < n; ++i) kids[parent[i]] |= std::uint8_t(1) << i;
    }

    /// A deployment order exists iff the cross-contract reference
    /// dependencies are acyclic.
    bool deployable() const {
        std::array<std::uint8_t, 4> before{};  // before[x]: contracts that must precede x
        for (int i = 0; i < n; ++i) {
            std::uint8_t r = refs[i];
            while (r) {
                int j = std::countr_zero(static_cast<unsigned>(r));
                r &= static_cast<std::uint8_t>(r - 1);
                if (parent[j] != parent[i]) before[parent[i]] |= std::uint8_t(1) << parent[j];
            }
        }
        for (int c = 0; c < k; ++c) {
            for (int x = 0; x < k; ++x) {
                if ((before[x] >> c) & 1) before[x] |= before[c];
            }
        }
        for (int x = 0; x < k; ++x) {
            if ((before[x] >> x) & 1) return false;
        }
        return true;
    }

    int call_index(const std::string& name) const {
        for (int i = 0; i < n; ++i)
            if (call_names[i] == name) return i;
        return -1;
    }
};

/// Per-contract relation vector of an indexed instance.
using RelVec = std::array<Rel64, kMaxIndexedContracts>;

inline IndexedInstance index_instance(const CallGraph& g, const ParentMap& pm) {
    require_covering(g, pm);
    if (g.calls().size() > kMaxIndexedCalls)
        throw std::invalid_argument("axiom checks support at most 8 calls");
    if (pm.contracts().size() > kMaxIndexedContracts)
        throw std::invalid_argument("axiom checks support at most 4 contracts");

    IndexedInstance inst;
    inst.n = static_cast<int>(g.calls().size());
    inst.k = static_cast<int>(pm.contracts().size());
    std::map<CallId, int> call_idx;
    for (const CallId& c : g.calls()) {
        call_idx.emplace(c, static_cast<int>(inst.call_names.size()));
        inst.call_names.push_back(c.id);
    }
    std::map<ContractId, int> contract_idx;
    for (const ContractId& x : pm.contracts()) {
        contract_idx.emplace(x, static_cast<int>(inst.contract_names.size()));
        inst.contract_names.push_back(x.id);
    }
    for (const CallId& c : g.calls()) {
        int i = call_idx.at(c);
        inst.parent[i] = static_cast<std::uint8_t>(contract_idx.at(pm.parent_of(c)));
        for (const CallId& t : g.refs(c)) inst.refs[i] |= std::uint8_t(1) << call_idx.at(t);
    }
    inst.finalize();
    return inst;
}

inline CallGraph to_call_graph(const IndexedInstance& inst) {
    std::set<CallId> calls;
    std::map<CallId, std::vector<CallId>> refs;
    for (int i = 0; i < inst.n; ++i) {
        CallId c(inst.call_names[i]);
        calls.insert(c);
        for (int j = 0; j < inst.n; ++j) {
            if ((inst.refs[i] >> j) & 1) refs[c].emplace_back(inst.call_names[j]);
        }
    }
    return CallGraph(std::move(calls), std::move(refs));
}

inline ParentMap to_parent_map(const IndexedInstance& inst) {
    std::map<CallId, ContractId> parent;
    std::vector<ContractId> contracts;
    for (int x = 0; x < inst.k; ++x) contracts.emplace_back(inst.contract_names[x]);
    for (int i = 0; i < inst.n; ++i)
        parent.emplace(CallId(inst.call_names[i]), contracts[inst.parent[i]]);
    return ParentMap(std::move(parent), std::move(contracts));
}

inline ConstraintSet to_constraint_set(const IndexedInstance& inst, const RelVec& v) {
    ConstraintSet cs;
    for (int x = 0; x < inst.k; ++x) {
        auto& rel = cs.relations[ContractId(inst.contract_names[x])];
        Rel64 r = v[x];
        while (r) {
            int b = std::countr_zero(r);
            r &= r - 1;
            rel.emplace(CallId(inst.call_names[b / 8]), CallId(inst.call_names[b % 8]));
        }
    }
    return cs;
}

/// Declared-order candidates for contract x: strict partial orders over the
/// children (as global-index masks) that never rank a call above one in its
/// own trace and that already carry every pair forced by references among
/// the children. Ascending local-mask order.
inline std::vector<Rel64> closed_admissible_orders(const IndexedInstance& inst, int x) {
    std::vector<int> ch;
    for (int i = 0; i < inst.n; ++i)
        if (inst.parent[i] == x) ch.push_back(i);
    const int m = static_cast<int>(ch.size());
    if (m > 5)
        throw std::invalid_argument(
            "order enumeration supports at most 5 children per contract");

    Rel64 forbidden = 0;  // (u, v) with v inside u's trace
    for (int a = 0; a < m; ++a) {
        for (int b = 0; b < m; ++b) {
            if (a != b && ((inst.trace[ch[a]] >> ch[b]) & 1)) forbidden |= rel_bit(a, b);
        }
    }
    // closure_req[b]: local children whose trace contains child b; any pair
    // (a, b) forces (a, w) for each such w.
    std::array<std::uint8_t, 8> closure_req{};
    for (int b = 0; b < m; ++b) {
        for (int w = 0; w < m; ++w) {
            if (w != b && ((inst.trace[ch[w]] >> ch[b]) & 1))
                closure_req[b] |= std::uint8_t(1) << w;
        }
    }

    std::vector<Rel64> out;
    for (Rel64 local : strict_partial_orders(m)) {
        if (local & forbidden) continue;
        bool closed = true;
        for (int a = 0; a < m && closed; ++a) {
            std::uint8_t row = rel_row(local, a);
            std::uint8_t need = 0;
            std::uint8_t bits = row;
            while (bits) {
                int b = std::countr_zero(static_cast<unsigned>(bits));
                bits &= static_cast<std::uint8_t>(bits - 1);
                need |= closure_req[b];
            }
            if (need & ~row) closed = false;
        }
        if (!closed) continue;
        Rel64 global = 0;
        Rel64 r = local;
        while (r) {
            int b = std::countr_zero(r);
            r &= r - 1;
            global |= rel_bit(ch[b / 8], ch[b % 8]);
        }
        out.push_back(global);
    }
    return out;
}

/// The relation vector a declared vector induces: declared pairs among a
/// contract's children, plus each child above any outside call whose trace
/// meets a sibling the child is declared above.
inline RelVec induce_indexed(const IndexedInstance& inst, const RelVec& declared) {
    RelVec out{};
    for (int x = 0; x < inst.k; ++x) {
        Rel64 rel = declared[x];
        std::uint8_t members = inst.kids[x];
        std::uint8_t outside = static_cast<std::uint8_t>(~members) &
                               static_cast<std::uint8_t>((1u << inst.n) - 1);
        std::uint8_t ts = members;
        while (ts) {
            int t = std::countr_zero(static_cast<unsigned>(ts));
            ts &= static_cast<std::uint8_t>(ts - 1);
            std::uint8_t drow = rel_row(declared[x], t);
            if (!drow) continue;
            std::uint8_t t2s = outside;
            while (t2s) {
                int t2 = std::countr_zero(static_cast<unsigned>(t2s));
                t2s &= static_cast<std::uint8_t>(t2s - 1);
                if (inst.trace[t2] & drow) rel |= rel_bit(t, t2);
            }
        }
        out[x] = rel;
    }
    return out;
}

}  // namespace mps
