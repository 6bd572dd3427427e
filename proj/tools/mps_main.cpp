#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mps/commands.hpp"

namespace {

mps::TieBreaker parse_tau(const std::string& spec) {
    if (spec == "input") return mps::TieBreaker::input_order();
    if (spec == "lex") return mps::TieBreaker::lex_by_tx_id();
    if (spec.rfind("file:", 0) == 0) {
        std::string path = spec.substr(5);
        std::ifstream in(path);
        if (!in) throw CLI::ValidationError("--tau", "cannot open '" + path + "'");
        nlohmann::json doc = nlohmann::json::parse(in, nullptr, false);
        if (doc.is_discarded() || !doc.is_array())
            throw CLI::ValidationError("--tau", "'" + path + "' must hold a JSON array of ranks");
        std::vector<std::size_t> perm;
        for (const auto& v : doc) {
            if (!v.is_number_unsigned())
                throw CLI::ValidationError("--tau", "ranks must be non-negative integers");
            perm.push_back(v.get<std::size_t>());
        }
        return mps::TieBreaker::explicit_permutation(std::move(perm));
    }
    throw CLI::ValidationError("--tau", "expected input, lex, or file:<path>");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Contract-specific transaction sequencing with monotone integer priorities"};
    app.require_subcommand(1);

    mps::Workspace ws;
    std::string call_id, fixture_name;
    std::optional<std::string> output_file;
    std::string tau_spec = "input";
    bool as_json = false;
    int max_calls = 8;
    int max_contracts = 4;
    std::optional<std::size_t> max_count;

    auto* validate = app.add_subcommand("validate", "Check the priorities in a graph file");
    validate->add_option("graph", ws.graph_file, "graph JSON file")->required();

    auto* synthesize =
        app.add_subcommand("synthesize", "Fill in priorities that respect declared orders");
    synthesize->add_option("graph", ws.graph_file, "graph JSON file")->required();
    synthesize->add_option("orders", ws.orders_file, "orders JSON file")->required();
    synthesize->add_option("--lambda-max", ws.lambda_max, "maximum priority (overrides the file)");
    synthesize->add_option("-o,--output", output_file, "write the result here instead of stdout");

    auto* order = app.add_subcommand("order", "Sequence a batch of transactions");
    order->add_option("graph", ws.graph_file, "graph JSON file")->required();
    order->add_option("batch", ws.batch_file, "batch JSON file")->required();
    order->add_option("--tau", tau_spec, "tie-breaker: input, lex, or file:<path>");
    order->add_flag("--json", as_json, "print a JSON list instead of one id per line");
    order->add_option("--max-count", max_count, "keep only the first N transactions");

    auto* tr = app.add_subcommand("trace", "Print every call reachable from a call");
    tr->add_option("graph", ws.graph_file, "graph JSON file")->required();
    tr->add_option("call", call_id, "call id")->required();

    auto* check = app.add_subcommand("check-axioms", "Run the five axiom checks");
    check->add_option("graph", ws.graph_file, "graph JSON file");
    check->add_option("orders", ws.orders_file, "orders JSON file (validated for admissibility)");
    check->add_option("--fixture", fixture_name, "check a named fixture instead of a file");
    check->add_option("--max-seq-len", ws.max_seq_len, "sequence length bound for the existence check")
        ->check(CLI::Range(1, 6));
    check->add_option("--max-calls", max_calls, "largest call universe accepted")
        ->check(CLI::Range(1, 8));
    check->add_option("--max-contracts", max_contracts, "most contracts accepted")
        ->check(CLI::Range(1, 4));

    auto* fixture = app.add_subcommand("fixture", "List or show the counterexample fixtures");
    auto* fixture_list = fixture->add_subcommand("list", "List fixture names");
    auto* fixture_show = fixture->add_subcommand("show", "Show one fixture");
    fixture_show->add_option("name", fixture_name, "fixture name")->required();
    fixture->require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? mps::kExitInputError : mps::kExitOk;
    }

    try {
        if (validate->parsed()) return mps::cmd_validate(ws.graph_file, std::cout, std::cerr);
        if (synthesize->parsed())
            return mps::cmd_synthesize(ws.graph_file, ws.orders_file, ws.lambda_max, output_file, std::cout,
                                       std::cerr);
        if (order->parsed()) {
            ws.tau = parse_tau(tau_spec);
            return mps::cmd_order(ws.graph_file, ws.batch_file, ws.tau, as_json, max_count,
                                  std::cout, std::cerr);
        }
        if (tr->parsed()) return mps::cmd_trace(ws.graph_file, call_id, std::cout, std::cerr);
        if (check->parsed()) {
            std::optional<std::string> fx =
                fixture_name.empty() ? std::nullopt : std::make_optional(fixture_name);
            std::optional<std::string> gf =
                ws.graph_file.empty() ? std::nullopt : std::make_optional(ws.graph_file);
            std::optional<std::string> of =
                ws.orders_file.empty() ? std::nullopt : std::make_optional(ws.orders_file);
            return mps::cmd_check_axioms(fx, gf, of, ws.max_seq_len, std::cout, std::cerr,
                                         max_calls, max_contracts);
        }
        if (fixture_list->parsed()) return mps::cmd_fixture_list(std::cout);
        if (fixture_show->parsed()) return mps::cmd_fixture_show(fixture_name, std::cout, std::cerr);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return mps::kExitInputError;
    }
    return mps::kExitInputError;
}
