#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mps/indexed.hpp"

namespace mps {

/// Builds an indexed instance from raw rows, with synthetic names c0.., X0..
inline IndexedInstance make_indexed(int n, const std::array<std::uint8_t, 8>& refs, int k,
                                    const std::array<std::uint8_t, 8>& parents) {
    IndexedInstance inst;
    inst.n = n;
    inst.k = k;
    inst.refs = refs;
    inst.parent = parents;
    for (int i = 0; i < n; ++i) inst.call_names.push_back("c" + std::to_string(i));
    for (int x = 0; x < k; ++x) inst.contract_names.push_back("X" + std::to_string(x));
    inst.finalize();
    return inst;
}

/// Every reference structure over n calls without self-references, in
/// ascending edge-mask order. Self-references only add a call to its own
/// trace, which no check distinguishes; they are covered by targeted tests
/// instead of the sweep.
inline void for_each_reference_graph(int n,
                                     const std::function<void(const std::array<std::uint8_t, 8>&)>& fn) {
    std::vector<std::pair<int, int>> slots;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) slots.emplace_back(i, j);
    const std::uint64_t count = std::uint64_t{1} << slots.size();
    for (std::uint64_t mask = 0; mask < count; ++mask) {
        std::array<std::uint8_t, 8> refs{};
        for (std::size_t s = 0; s < slots.size(); ++s) {
            if ((mask >> s) & 1) refs[slots[s].first] |= std::uint8_t(1) << slots[s].second;
        }
        fn(refs);
    }
}

/// Every partition of n calls into at most max_k nonempty contracts,
/// enumerated as restricted growth strings (call 0 always in contract 0).
/// Contract relabelings are omitted; the axiom checks are label-invariant.
inline void for_each_partition(
    int n, int max_k, const std::function<void(const std::array<std::uint8_t, 8>&, int)>& fn) {
    std::array<std::uint8_t, 8> assign{};
    auto rec = [&](auto&& self, int i, int used) -> void {
        if (i == n) {
            fn(assign, used);
            return;
        }
        for (int x = 0; x <= used && x < max_k; ++x) {
            assign[i] = static_cast<std::uint8_t>(x);
            self(self, i + 1, x == used ? used + 1 : used);
        }
    };
    if (n == 0) return;
    rec(rec, 0, 0);
}

/// Every total assignment of the calls selected by `free_mask` to the k
/// contracts, leaving other calls at their base assignment.
inline void for_each_reassignment(const IndexedInstance& base, std::uint8_t free_mask,
                                  const std::function<void(const IndexedInstance&)>& fn) {
    std::vector<int> free_calls;
    for (int i = 0; i < base.n; ++i)
        if ((free_mask >> i) & 1) free_calls.push_back(i);
    IndexedInstance inst = base;
    auto rec = [&](auto&& self, std::size_t pos) -> void {
        if (pos == free_calls.size()) {
            inst.finalize();
            fn(inst);
            return;
        }
        for (int x = 0; x < base.k; ++x) {
            inst.parent[free_calls[pos]] = static_cast<std::uint8_t>(x);
            self(self, pos + 1);
        }
    };
    rec(rec, 0);
}

}  // namespace mps
