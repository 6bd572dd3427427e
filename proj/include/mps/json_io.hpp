#pragma once

#include <fstream>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "mps/block.hpp"
#include "mps/call_graph.hpp"
#include "mps/ids.hpp"
#include "mps/priority.hpp"
#include "mps/rights.hpp"

namespace mps {

using json = nlohmann::ordered_json;

/// One graph document: the call universe, the parent assignment, and any
/// priorities already chosen. Priorities may be partial; lambda_max defaults
/// to 0 when the document does not set it.
struct Instance {
    CallGraph graph;
    ParentMap parents;
    PriorityMap priorities;

    bool operator==(const Instance&) const = default;
};

namespace detail {

inline void reject_unknown_fields(const json& obj, const std::set<std::string>& allowed,
                                  const std::string& where) {
    if (!obj.is_object()) throw std::invalid_argument(where + " must be a JSON object");
    for (const auto& item : obj.items()) {
        if (!allowed.count(item.key()))
            throw std::invalid_argument("unknown field '" + item.key() + "' in " + where);
    }
}

inline json parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open '" + path + "'");
    return json::parse(in);
}

}  // namespace detail

inline Instance load_instance(const json& doc) {
    detail::reject_unknown_fields(doc, {"lambda_max", "contracts", "calls"}, "graph document");
    if (!doc.contains("contracts") || !doc["contracts"].is_array())
        throw std::invalid_argument("graph document needs a 'contracts' array");
    if (!doc.contains("calls") || !doc["calls"].is_array())
        throw std::invalid_argument("graph document needs a 'calls' array");

    long long lambda_max = 0;
    if (doc.contains("lambda_max")) {
        if (!doc["lambda_max"].is_number_integer())
            throw std::invalid_argument("'lambda_max' must be an integer");
        lambda_max = doc["lambda_max"].get<long long>();
    }

    std::vector<ContractId> contracts;
    for (const auto& x : doc["contracts"]) {
        if (!x.is_string()) throw std::invalid_argument("contract ids must be strings");
        contracts.emplace_back(x.get<std::string>());
    }

    std::set<CallId> calls;
    std::map<CallId, std::vector<CallId>> refs;
    std::map<CallId, ContractId> parent;
    std::map<CallId, long long> lambda;
    for (const auto& entry : doc["calls"]) {
        detail::reject_unknown_fields(entry, {"id", "contract", "refs", "priority"}, "call entry");
        for (const char* key : {"id", "contract", "refs", "priority"}) {
            if (!entry.contains(key))
                throw std::invalid_argument(std::string("call entry needs field '") + key + "'");
        }
        if (!entry["id"].is_string() || !entry["contract"].is_string() ||
            !entry["refs"].is_array())
            throw std::invalid_argument("malformed call entry");
        CallId id(entry["id"].get<std::string>());
        if (!calls.insert(id).second)
            throw std::invalid_argument("duplicate call '" + id.id + "'");
        parent.emplace(id, ContractId(entry["contract"].get<std::string>()));
        for (const auto& r : entry["refs"]) {
            if (!r.is_string()) throw std::invalid_argument("reference ids must be strings");
            refs[id].emplace_back(r.get<std::string>());
        }
        const auto& prio = entry["priority"];
        if (prio.is_number_integer())
            lambda.emplace(id, prio.get<long long>());
        else if (!prio.is_null())
            throw std::invalid_argument("'priority' must be an integer or null");
    }

    Instance inst;
    inst.graph = CallGraph(std::move(calls), std::move(refs));
    inst.parents = ParentMap(std::move(parent), std::move(contracts));
    require_covering(inst.graph, inst.parents);
    inst.priorities = PriorityMap{std::move(lambda), lambda_max};
    return inst;
}

inline json save_instance(const Instance& inst) {
    json doc;
    doc["lambda_max"] = inst.priorities.lambda_max;
    doc["contracts"] = json::array();
    for (const ContractId& x : inst.parents.contracts()) doc["contracts"].push_back(x.id);
    doc["calls"] = json::array();
    for (const CallId& c : inst.graph.calls()) {
        json entry;
        entry["id"] = c.id;
        entry["contract"] = inst.parents.parent_of(c).id;
        entry["refs"] = json::array();
        for (const CallId& r : inst.graph.refs(c)) entry["refs"].push_back(r.id);
        if (inst.priorities.has(c))
            entry["priority"] = inst.priorities.at(c);
        else
            entry["priority"] = nullptr;
        doc["calls"].push_back(std::move(entry));
    }
    return doc;
}

inline OrderVector load_order_vector(const json& doc, const CallGraph& g, const ParentMap& pm) {
    require_covering(g, pm);
    detail::reject_unknown_fields(doc, {"orders"}, "orders document");
    if (!doc.contains("orders") || !doc["orders"].is_object())
        throw std::invalid_argument("orders document needs an 'orders' object");
    OrderVector ov;
    for (const auto& item : doc["orders"].items()) {
        ContractId x(item.key());
        if (!pm.has_contract(x))
            throw std::invalid_argument("orders mention unknown contract '" + x.id + "'");
        std::vector<std::pair<CallId, CallId>> gens;
        if (!item.value().is_array())
            throw std::invalid_argument("order pairs for '" + x.id + "' must be an array");
        for (const auto& pair : item.value()) {
            if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() ||
                !pair[1].is_string())
                throw std::invalid_argument("order pairs must be [greater, lesser] string pairs");
            gens.emplace_back(CallId(pair[0].get<std::string>()),
                              CallId(pair[1].get<std::string>()));
        }
        ov.orders.emplace(x, StrictPartialOrder::from_generators(children(pm, x), gens));
    }
    for (const ContractId& x : pm.contracts()) {
        if (!ov.orders.count(x)) ov.orders.emplace(x, StrictPartialOrder(children(pm, x)));
    }
    return ov;
}

inline json save_order_vector(const OrderVector& ov) {
    json doc;
    doc["orders"] = json::object();
    for (const auto& [x, o] : ov.orders) {
        json pairs = json::array();
        auto gens = o.generators();
        std::sort(gens.begin(), gens.end());
        for (const auto& [hi, lo] : gens) pairs.push_back(json::array({hi.id, lo.id}));
        doc["orders"][x.id] = std::move(pairs);
    }
    return doc;
}

inline TransactionBatch load_batch(const json& doc, const CallGraph& g) {
    detail::reject_unknown_fields(doc, {"txs"}, "batch document");
    if (!doc.contains("txs") || !doc["txs"].is_array())
        throw std::invalid_argument("batch document needs a 'txs' array");
    TransactionBatch batch;
    std::set<std::string> ids;
    for (const auto& entry : doc["txs"]) {
        detail::reject_unknown_fields(entry, {"id", "root"}, "transaction entry");
        if (!entry.contains("id") || !entry.contains("root") || !entry["id"].is_string() ||
            !entry["root"].is_string())
            throw std::invalid_argument("malformed transaction entry");
        Transaction tx{entry["id"].get<std::string>(), CallId(entry["root"].get<std::string>())};
        if (!ids.insert(tx.tx_id).second)
            throw std::invalid_argument("duplicate transaction id '" + tx.tx_id + "'");
        if (!g.contains(tx.root_call))
            throw std::invalid_argument("transaction '" + tx.tx_id + "' has unknown root call '" +
                                        tx.root_call.id + "'");
        batch.txs.push_back(std::move(tx));
    }
    return batch;
}

inline json save_batch(const TransactionBatch& batch) {
    json doc;
    doc["txs"] = json::array();
    for (const Transaction& tx : batch.txs) {
        json entry;
        entry["id"] = tx.tx_id;
        entry["root"] = tx.root_call.id;
        doc["txs"].push_back(std::move(entry));
    }
    return doc;
}

inline Instance load_instance_file(const std::string& path) {
    return load_instance(detail::parse_file(path));
}

inline OrderVector load_order_vector_file(const std::string& path, const CallGraph& g,
                                          const ParentMap& pm) {
    return load_order_vector(detail::parse_file(path), g, pm);
}

inline TransactionBatch load_batch_file(const std::string& path, const CallGraph& g) {
    return load_batch(detail::parse_file(path), g);
}

}  // namespace mps
