#pragma once

#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mps/axioms.hpp"
#include "mps/block.hpp"
#include "mps/fixtures.hpp"
#include "mps/json_io.hpp"
#include "mps/synthesis.hpp"

namespace mps {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFail = 1;        // validity or axiom failure
inline constexpr int kExitInputError = 2;  // unreadable, unparsable, or malformed input

/// Files and options one invocation works with.
struct Workspace {
    std::string graph_file;
    std::string orders_file;
    std::string batch_file;
    std::optional<long long> lambda_max;
    TieBreaker tau;
    int max_seq_len = 4;
};

namespace detail {

inline json relations_to_json(const ConstraintSet& cs) {
    json out = json::object();
    for (const auto& [x, rel] : cs.relations) {
        json pairs = json::array();
        for (const auto& [hi, lo] : rel) pairs.push_back(json::array({hi.id, lo.id}));
        out[x.id] = std::move(pairs);
    }
    return out;
}

inline json parent_map_to_json(const ParentMap& pm) {
    json out = json::object();
    for (const auto& [c, x] : pm.parent()) out[c.id] = x.id;
    return out;
}

inline json witness_to_json(const AxiomReport& report) {
    if (report.pass) return nullptr;
    json w = json::object();
    if (const auto* e = std::get_if<ExistenceWitness>(&report.witness)) {
        w["vector"] = relations_to_json(e->chosen);
        w["sequence"] = json::array();
        for (const CallId& c : e->sequence) w["sequence"].push_back(c.id);
    } else if (const auto* p = std::get_if<PriorityWitness>(&report.witness)) {
        w["vector"] = relations_to_json(p->chosen);
        w["contract"] = p->contract.id;
        json pairs = json::array();
        for (const auto& [hi, lo] : p->requested.pairs())
            pairs.push_back(json::array({hi.id, lo.id}));
        w["requested"] = std::move(pairs);
    } else if (const auto* r = std::get_if<RelationWitness>(&report.witness)) {
        w["vector"] = relations_to_json(r->chosen);
        w["contract"] = r->contract.id;
        w["upper"] = r->upper.id;
        w["lower"] = r->lower.id;
        if (r->via) w["via"] = r->via->id;
    } else if (const auto* i = std::get_if<IicWitness>(&report.witness)) {
        w["vector"] = relations_to_json(i->chosen);
        w["contract"] = i->contract.id;
        w["upper"] = i->upper.id;
        w["lower"] = i->lower.id;
        w["base"] = parent_map_to_json(i->base);
        w["alternate"] = parent_map_to_json(i->alternate);
    }
    return w;
}

inline void print_axiom_reports(const std::vector<AxiomReport>& reports, std::ostream& out) {
    for (const AxiomReport& r : reports) {
        json line;
        line["axiom"] = axiom_name(r.axiom);
        line["verdict"] = r.pass ? "pass" : "fail";
        line["witness"] = witness_to_json(r);
        out << line.dump() << "\n";
    }
}

}  // namespace detail

/// validate: checks the graph file's priorities. Exit 0 when valid, 1 with
/// the first violation when not.
inline int cmd_validate(const std::string& graph_file, std::ostream& out, std::ostream& err) {
    try {
        Instance inst = load_instance_file(graph_file);
        ValidityReport report = is_valid(inst.priorities, inst.graph);
        if (report.valid) {
            out << "valid\n";
            return kExitOk;
        }
        const PriorityViolation& v = *report.violation;
        if (v.kind == PriorityViolationKind::CapExceeded)
            out << "invalid: priority of '" << v.call.id << "' exceeds lambda_max ("
                << inst.priorities.lambda_max << ")\n";
        else
            out << "invalid: '" << v.call.id << "' is prioritized above its reference '"
                << v.ref->id << "'\n";
        return kExitFail;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    }
}

/// trace: prints the trace of one call, one id per line, canonical order.
inline int cmd_trace(const std::string& graph_file, const std::string& call,
                     std::ostream& out, std::ostream& err) {
    try {
        Instance inst = load_instance_file(graph_file);
        for (const CallId& c : trace(inst.graph, CallId(call))) out << c.id << "\n";
        return kExitOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    }
}

/// synthesize: fills in priorities respecting the declared orders and writes
/// the completed graph document (stdout, or output_file when given).
inline int cmd_synthesize(const std::string& graph_file, const std::string& orders_file,
                          std::optional<long long> lambda_max_override,
                          const std::optional<std::string>& output_file, std::ostream& out,
                          std::ostream& err) {
    try {
        Instance inst = load_instance_file(graph_file);
        OrderVector ov = load_order_vector_file(orders_file, inst.graph, inst.parents);
        long long lambda_max = lambda_max_override.value_or(inst.priorities.lambda_max);
        inst.priorities = synthesize(inst.graph, inst.parents, ov, lambda_max);
        json doc = save_instance(inst);
        if (output_file) {
            std::ofstream f(*output_file);
            if (!f) throw std::invalid_argument("cannot write '" + *output_file + "'");
            f << doc.dump(2) << "\n";
        } else {
            out << doc.dump(2) << "\n";
        }
        return kExitOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    }
}

/// order: prints the block ordering for a batch, one transaction id per line
/// (or a JSON list with as_json). max_count keeps only the first entries
/// after sorting; block size limits sit outside the validity rule.
inline int cmd_order(const std::string& graph_file, const std::string& batch_file,
                     const TieBreaker& tau, bool as_json,
                     std::optional<std::size_t> max_count, std::ostream& out,
                     std::ostream& err) {
    Instance inst;
    TransactionBatch batch;
    try {
        inst = load_instance_file(graph_file);
        batch = load_batch_file(batch_file, inst.graph);
        for (const CallId& c : inst.graph.calls()) {
            if (!inst.priorities.has(c))
                throw std::invalid_argument("call '" + c.id + "' has no assigned priority");
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    ValidityReport report = is_valid(inst.priorities, inst.graph);
    if (!report.valid) {
        err << "error: graph priorities are not valid\n";
        return kExitFail;
    }
    try {
        std::vector<std::string> ordering = build_block(batch, inst.priorities, tau);
        if (max_count && ordering.size() > *max_count) ordering.resize(*max_count);
        if (as_json) {
            json list = json::array();
            for (const std::string& id : ordering) list.push_back(id);
            out << list.dump() << "\n";
        } else {
            for (const std::string& id : ordering) out << id << "\n";
        }
        return kExitOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    }
}

/// check-axioms: runs the five checks against a named fixture, or against
/// the reference system on a graph file's parent map. Prints one JSON object
/// per axiom; exit 1 when any check fails.
inline int cmd_check_axioms(const std::optional<std::string>& fixture_name,
                            const std::optional<std::string>& graph_file,
                            const std::optional<std::string>& orders_file, int max_seq_len,
                            std::ostream& out, std::ostream& err, int max_calls = 8,
                            int max_contracts = 4) {
    try {
        RightsSystemInstance sys;
        CallGraph g;
        ParentMap pm;
        if (fixture_name) {
            Fixture f = load_fixture(*fixture_name);
            sys = f.system;
            g = f.graph;
            pm = f.pstar;
        } else if (graph_file) {
            Instance inst = load_instance_file(*graph_file);
            g = inst.graph;
            pm = inst.parents;
            if (orders_file) {
                // Validated for admissibility; the checks themselves quantify
                // over every declared vector the system allows.
                OrderVector ov = load_order_vector_file(*orders_file, g, pm);
                validate_order_vector(g, pm, ov);
            }
            sys = rstar_system();
        } else {
            err << "error: need a fixture name or a graph file\n";
            return kExitInputError;
        }
        if (static_cast<int>(g.calls().size()) > max_calls ||
            static_cast<int>(pm.contracts().size()) > max_contracts) {
            err << "error: instance exceeds the check bounds (" << max_calls << " calls, "
                << max_contracts << " contracts)\n";
            return kExitInputError;
        }

        std::vector<AxiomReport> reports;
        reports.push_back(check_existence(sys, g, pm, max_seq_len));
        reports.push_back(check_priority(sys, g, pm));
        reports.push_back(check_extension(sys, g, pm));
        reports.push_back(check_reducibility(sys, g, pm));
        reports.push_back(check_iic(sys, g, {pm}));
        detail::print_axiom_reports(reports, out);
        for (const AxiomReport& r : reports) {
            if (!r.pass) return kExitFail;
        }
        return kExitOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    }
}

inline int cmd_fixture_list(std::ostream& out) {
    for (const std::string& name : fixture_names()) out << name << "\n";
    return kExitOk;
}

inline int cmd_fixture_show(const std::string& name, std::ostream& out, std::ostream& err) {
    try {
        Fixture f = load_fixture(name);
        json doc;
        doc["name"] = f.name;
        doc["fails"] = axiom_name(f.target);
        doc["contracts"] = json::array();
        for (const ContractId& x : f.pstar.contracts()) doc["contracts"].push_back(x.id);
        doc["calls"] = json::array();
        for (const CallId& c : f.graph.calls()) {
            json entry;
            entry["id"] = c.id;
            entry["contract"] = f.pstar.parent_of(c).id;
            entry["refs"] = json::array();
            for (const CallId& r : f.graph.refs(c)) entry["refs"].push_back(r.id);
            doc["calls"].push_back(std::move(entry));
        }
        out << doc.dump(2) << "\n";
        return kExitOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    }
}

}  // namespace mps
