#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "mps/ids.hpp"
#include "mps/priority.hpp"
#include "mps/rights.hpp"

namespace mps {

struct Transaction {
    std::string tx_id;
    CallId root_call;

    bool operator==(const Transaction&) const = default;
};

/// An ordered collection of transactions, each entering the system through a
/// single root call.
struct TransactionBatch {
    std::vector<Transaction> txs;

    bool operator==(const TransactionBatch&) const = default;

    std::size_t index_of(const std::string& tx_id) const {
        for (std::size_t i = 0; i < txs.size(); ++i)
            if (txs[i].tx_id == tx_id) return i;
        throw std::out_of_range("unknown transaction '" + tx_id + "'");
    }
};

/// Resolves the order among equal-priority transactions.
struct TieBreaker {
    enum class Kind { InputOrder, LexByTxId, ExplicitPermutation };

    Kind kind = Kind::InputOrder;
    std::vector<std::size_t> permutation;  // rank of each batch index; ExplicitPermutation only

    static TieBreaker input_order() { return {}; }
    static TieBreaker lex_by_tx_id() { return {Kind::LexByTxId, {}}; }
    static TieBreaker explicit_permutation(std::vector<std::size_t> perm) {
        return {Kind::ExplicitPermutation, std::move(perm)};
    }
};

/// Sorts the batch by descending root-call priority, breaking ties with the
/// given rule. Output is a permutation of the batch's transaction ids.
inline std::vector<std::string> build_block(const TransactionBatch& batch,
                                            const PriorityMap& pmap, const TieBreaker& tau) {
    for (const Transaction& t : batch.txs) {
        if (!pmap.has(t.root_call))
            throw std::invalid_argument("root call '" + t.root_call.id + "' of transaction '" +
                                        t.tx_id + "' has no assigned priority");
    }
    {
        std::set<std::string> ids;
        for (const Transaction& t : batch.txs) {
            if (!ids.insert(t.tx_id).second)
                throw std::invalid_argument("duplicate transaction id '" + t.tx_id + "'");
        }
    }
    if (tau.kind == TieBreaker::Kind::ExplicitPermutation) {
        if (tau.permutation.size() != batch.txs.size())
            throw std::invalid_argument("tie-breaking permutation has the wrong length");
        std::vector<bool> seen(batch.txs.size(), false);
        for (std::size_t r : tau.permutation) {
            if (r >= seen.size() || seen[r])
                throw std::invalid_argument("tie-breaking permutation is not a bijection");
            seen[r] = true;
        }
    }

    std::vector<std::size_t> idx(batch.txs.size());
    std::iota(idx.begin(), idx.end(), 0);
    auto priority = [&](std::size_t i) { return pmap.at(batch.txs[i].root_call); };
    switch (tau.kind) {
        case TieBreaker::Kind::InputOrder:
            std::stable_sort(idx.begin(), idx.end(),
                             [&](std::size_t a, std::size_t b) { return priority(a) > priority(b); });
            break;
        case TieBreaker::Kind::LexByTxId:
            std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
                if (priority(a) != priority(b)) return priority(a) > priority(b);
                return batch.txs[a].tx_id < batch.txs[b].tx_id;
            });
            break;
        case TieBreaker::Kind::ExplicitPermutation:
            std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
                if (priority(a) != priority(b)) return priority(a) > priority(b);
                return tau.permutation[a] < tau.permutation[b];
            });
            break;
    }

    std::vector<std::string> out;
    out.reserve(idx.size());
    for (std::size_t i : idx) out.push_back(batch.txs[i].tx_id);
    return out;
}

struct BlockViolation {
    ContractId contract;
    std::size_t earlier;  // position whose root call the later one is constrained above
    std::size_t later;

    bool operator==(const BlockViolation&) const = default;
};

struct BlockValidation {
    bool ok = false;
    std::optional<BlockViolation> violation;
};

/// Checks an ordering for inversions: positions i < j violate the constraints
/// when some contract sequences the j-th root call above the i-th. The first
/// violation in (i, j, contract) order is reported.
inline BlockValidation validate_block(const std::vector<std::string>& ordering,
                                      const TransactionBatch& batch, const ConstraintSet& cs) {
    if (ordering.size() != batch.txs.size())
        throw std::invalid_argument("ordering is not a permutation of the batch");
    std::set<std::string> known;
    for (const Transaction& t : batch.txs) known.insert(t.tx_id);
    std::set<std::string> seen;
    for (const std::string& id : ordering) {
        if (!known.count(id))
            throw std::invalid_argument("ordering mentions unknown transaction '" + id + "'");
        if (!seen.insert(id).second)
            throw std::invalid_argument("ordering repeats transaction '" + id + "'");
    }

    std::vector<CallId> roots;
    roots.reserve(ordering.size());
    for (const std::string& id : ordering) roots.push_back(batch.txs[batch.index_of(id)].root_call);

    for (std::size_t i = 0; i < roots.size(); ++i) {
        for (std::size_t j = i + 1; j < roots.size(); ++j) {
            for (const auto& [x, rel] : cs.relations) {
                if (rel.count({roots[j], roots[i]}))
                    return {false, BlockViolation{x, i, j}};
            }
        }
    }
    return {true, std::nullopt};
}

}  // namespace mps
