#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>

#include "mps/axioms.hpp"
#include "mps/block.hpp"
#include "mps/fixtures.hpp"

using namespace mps;

namespace {

CallId C(const std::string& s) { return CallId(s); }
ContractId X(const std::string& s) { return ContractId(s); }

std::map<Axiom, AxiomReport> run_all(const RightsSystemInstance& sys, const CallGraph& g,
                                     const ParentMap& pm, int max_len = 4) {
    std::map<Axiom, AxiomReport> out;
    out.emplace(Axiom::Existence, check_existence(sys, g, pm, max_len));
    out.emplace(Axiom::Priority, check_priority(sys, g, pm));
    out.emplace(Axiom::Extension, check_extension(sys, g, pm));
    out.emplace(Axiom::Reducibility, check_reducibility(sys, g, pm));
    out.emplace(Axiom::IndependenceOfIrrelevantCalls, check_iic(sys, g, {pm}));
    return out;
}

std::vector<ParentMap> all_deployable_maps(const CallGraph& g,
                                           const std::vector<ContractId>& contracts) {
    std::vector<CallId> calls(g.calls().begin(), g.calls().end());
    std::vector<ParentMap> out;
    const std::size_t count = 1;
    std::size_t total = 1;
    for (std::size_t i = 0; i < calls.size(); ++i) total *= contracts.size();
    for (std::size_t mask = 0; mask < total; ++mask) {
        std::size_t m = mask;
        std::map<CallId, ContractId> parent;
        for (const CallId& c : calls) {
            parent.emplace(c, contracts[m % contracts.size()]);
            m /= contracts.size();
        }
        ParentMap pm(std::move(parent), contracts);
        if (deployment_order(g, pm)) out.push_back(std::move(pm));
    }
    (void)count;
    return out;
}

}  // namespace

TEST_CASE("q_orderable ranks a chain from the top") {
    ConstraintSet cs;
    cs.relations[X("A")] = {{C("a"), C("b")}, {C("b"), C("c")}, {C("a"), C("c")}};
    QOrderResult r = q_orderable({C("a"), C("b"), C("c")}, cs);
    REQUIRE(r.ok());
    CHECK(r.indices->at(C("a")) == 2);
    CHECK(r.indices->at(C("b")) == 1);
    CHECK(r.indices->at(C("c")) == 0);
}

TEST_CASE("q_orderable reports cycles") {
    ConstraintSet cs;
    cs.relations[X("A")] = {{C("a"), C("b")}};
    cs.relations[X("B")] = {{C("b"), C("a")}};
    QOrderResult r = q_orderable({C("a"), C("b")}, cs);
    REQUIRE_FALSE(r.ok());
    CHECK(r.cycle == std::vector<CallId>{C("a"), C("b")});
}

TEST_CASE("q_orderable orders an unconstrained set by id") {
    QOrderResult r = q_orderable({C("a"), C("b"), C("c")}, ConstraintSet{});
    REQUIRE(r.ok());
    CHECK(r.indices->at(C("a")) == 2);
    CHECK(r.indices->at(C("b")) == 1);
    CHECK(r.indices->at(C("c")) == 0);
}

TEST_CASE("q_orderable embeddings respect every pair") {
    Fixture f = load_fixture("no-existence");
    for (const ConstraintSet& cs : f.system.admits(f.graph, f.pstar)) {
        QOrderResult r = q_orderable(f.graph.calls(), cs);
        if (!r.ok()) continue;
        for (const auto& [x, rel] : cs.relations) {
            for (const auto& [hi, lo] : rel) CHECK(r.indices->at(hi) > r.indices->at(lo));
        }
    }
}

TEST_CASE("the reference system passes all five checks on its home instance") {
    Fixture f = load_fixture("no-existence");  // same universe, reference rules
    for (const auto& [axiom, report] : run_all(rstar_system(), f.graph, f.pstar)) {
        CAPTURE(axiom_name(axiom));
        CHECK(report.pass);
    }
}

TEST_CASE("each fixture fails exactly its target axiom on its parent map") {
    for (const std::string& name : fixture_names()) {
        Fixture f = load_fixture(name);
        auto reports = run_all(f.system, f.graph, f.pstar);
        for (const auto& [axiom, report] : reports) {
            CAPTURE(name, axiom_name(axiom));
            CHECK(report.pass == (axiom != f.target));
        }
    }
}

TEST_CASE("fixtures keep the other four axioms on every deployable map") {
    for (const std::string& name : fixture_names()) {
        Fixture f = load_fixture(name);
        std::vector<ParentMap> maps = all_deployable_maps(f.graph, f.pstar.contracts());
        REQUIRE(!maps.empty());
        for (const ParentMap& pm : maps) {
            for (Axiom axiom : all_axioms()) {
                if (axiom == f.target || axiom == Axiom::IndependenceOfIrrelevantCalls) continue;
                AxiomReport report = axiom == Axiom::Existence
                                         ? check_existence(f.system, f.graph, pm, 4)
                                     : axiom == Axiom::Priority
                                         ? check_priority(f.system, f.graph, pm)
                                     : axiom == Axiom::Extension
                                         ? check_extension(f.system, f.graph, pm)
                                         : check_reducibility(f.system, f.graph, pm);
                CAPTURE(name, axiom_name(axiom));
                CHECK(report.pass);
            }
        }
        if (f.target != Axiom::IndependenceOfIrrelevantCalls) {
            AxiomReport report = check_iic(f.system, f.graph, maps);
            CAPTURE(name);
            CHECK(report.pass);
        }
    }
}

TEST_CASE("the existence witness replays as an unorderable batch") {
    Fixture f = load_fixture("no-existence");
    AxiomReport report = check_existence(f.system, f.graph, f.pstar, 4);
    REQUIRE_FALSE(report.pass);
    const auto& w = std::get<ExistenceWitness>(report.witness);
    CHECK(w.sequence == std::vector<CallId>{C("a'"), C("b")});

    TransactionBatch batch;
    for (std::size_t i = 0; i < w.sequence.size(); ++i)
        batch.txs.push_back({"t" + std::to_string(i), w.sequence[i]});
    std::vector<std::string> ordering;
    for (const Transaction& t : batch.txs) ordering.push_back(t.tx_id);
    std::sort(ordering.begin(), ordering.end());
    do {
        CHECK_FALSE(validate_block(ordering, batch, w.chosen).ok);
    } while (std::next_permutation(ordering.begin(), ordering.end()));
}

TEST_CASE("the priority witness replays against the whole family") {
    Fixture f = load_fixture("no-priority");
    AxiomReport report = check_priority(f.system, f.graph, f.pstar);
    REQUIRE_FALSE(report.pass);
    const auto& w = std::get<PriorityWitness>(report.witness);
    CHECK_FALSE(w.requested.pairs().empty());
    for (const ConstraintSet& member : f.system.admits(f.graph, f.pstar)) {
        bool agrees = true;
        for (const CallId& c1 : w.requested.domain()) {
            for (const CallId& c2 : w.requested.domain()) {
                if (c1 == c2) continue;
                if (holds(member, w.contract, c1, c2) != w.requested.holds(c1, c2))
                    agrees = false;
            }
        }
        CHECK_FALSE(agrees);
    }
}

TEST_CASE("the extension witness replays directly") {
    Fixture f = load_fixture("no-extension");
    AxiomReport report = check_extension(f.system, f.graph, f.pstar);
    REQUIRE_FALSE(report.pass);
    const auto& w = std::get<RelationWitness>(report.witness);
    CHECK(w.upper == C("b"));
    CHECK(w.lower == C("a"));
    CHECK(w.via == C("a'"));
    CHECK(holds(w.chosen, w.contract, w.upper, w.lower));
    CHECK(trace(f.graph, *w.via).count(w.lower) == 1);
    CHECK_FALSE(holds(w.chosen, w.contract, w.upper, *w.via));
}

TEST_CASE("the reducibility witness replays directly") {
    Fixture f = load_fixture("no-reducibility");
    AxiomReport report = check_reducibility(f.system, f.graph, f.pstar);
    REQUIRE_FALSE(report.pass);
    const auto& w = std::get<RelationWitness>(report.witness);
    CHECK(w.upper == C("b"));
    CHECK(w.lower == C("a'"));
    CHECK(holds(w.chosen, w.contract, w.upper, w.lower));
    CHECK(f.pstar.parent_of(w.lower) != w.contract);
    for (const CallId& c : trace(f.graph, w.lower)) {
        if (f.pstar.parent_of(c) == w.contract)
            CHECK_FALSE(holds(w.chosen, w.contract, w.upper, c));
    }
}

TEST_CASE("the iic witness replays against the alternate assignment") {
    Fixture f = load_fixture("no-iic");
    AxiomReport report = check_iic(f.system, f.graph, {f.pstar});
    REQUIRE_FALSE(report.pass);
    const auto& w = std::get<IicWitness>(report.witness);
    CHECK(w.upper == C("b"));
    CHECK(w.lower == C("a"));
    CHECK(holds(w.chosen, w.contract, w.upper, w.lower));
    // The alternate moves only calls outside both traces...
    for (const CallId& c : trace(w.alternate_graph, w.upper))
        CHECK(w.alternate.parent_of(c) == w.base.parent_of(c));
    for (const CallId& c : trace(w.alternate_graph, w.lower))
        CHECK(w.alternate.parent_of(c) == w.base.parent_of(c));
    CHECK(w.alternate.parent_of(w.upper) == w.base.parent_of(w.upper));
    CHECK(w.alternate.parent_of(w.lower) == w.base.parent_of(w.lower));
    // ...yet no allowed vector grants the pair any more.
    for (const ConstraintSet& member : f.system.admits(w.alternate_graph, w.alternate))
        CHECK_FALSE(holds(member, w.contract, w.upper, w.lower));
}

TEST_CASE("the existence bound is enforced") {
    Fixture f = load_fixture("no-existence");
    CHECK_THROWS_AS(check_existence(f.system, f.graph, f.pstar, 7), std::invalid_argument);
    CHECK_THROWS_AS(check_existence(f.system, f.graph, f.pstar, 0), std::invalid_argument);
}

TEST_CASE("checks demand a deployable parent map") {
    CallGraph g({C("a"), C("b")}, {{C("a"), {C("b")}}, {C("b"), {C("a")}}});
    ParentMap pm({{C("a"), X("A")}, {C("b"), X("B")}}, {X("A"), X("B")});
    CHECK_THROWS_AS(check_extension(rstar_system(), g, pm), std::invalid_argument);
}

TEST_CASE("the constant-time achievability shortcut agrees with the family") {
    RightsSystemInstance sys = rstar_system();
    int checked = 0;
    auto verify = [&](const IndexedInstance& inst) {
        if (!inst.deployable()) return;
        RelVec unioned{};
        for (const RelVec& v : rstar_family(inst)) {
            for (int x = 0; x < inst.k; ++x) unioned[x] |= v[x];
        }
        for (int x = 0; x < inst.k; ++x) {
            for (int t = 0; t < inst.n; ++t) {
                for (int t2 = 0; t2 < inst.n; ++t2) {
                    if (t == t2) continue;
                    CAPTURE(inst.n, x, t, t2);
                    REQUIRE(rstar_can_constrain(inst, x, t, t2) ==
                            rel_has(unioned[x], t, t2));
                }
            }
        }
        ++checked;
    };
    for (int n = 1; n <= 3; ++n) {
        for_each_reference_graph(n, [&](const std::array<std::uint8_t, 8>& refs) {
            for_each_partition(n, 3, [&](const std::array<std::uint8_t, 8>& parts, int k) {
                verify(make_indexed(n, refs, k, parts));
            });
        });
    }
    // A strided slice of the 4-call universes keeps the runtime short.
    int counter = 0;
    for_each_reference_graph(4, [&](const std::array<std::uint8_t, 8>& refs) {
        if (counter++ % 37 != 0) return;
        for_each_partition(4, 3, [&](const std::array<std::uint8_t, 8>& parts, int k) {
            verify(make_indexed(4, refs, k, parts));
        });
    });
    CHECK(checked > 500);
}

TEST_CASE("existence and orderability agree member by member") {
    Fixture f = load_fixture("no-existence");
    IndexedInstance inst = index_instance(f.graph, f.pstar);
    int failures = 0;
    for (const RelVec& member : f.system.family(inst)) {
        RightsSystemInstance single;
        single.name = "single";
        single.family = [member](const IndexedInstance&) {
            return std::vector<RelVec>{member};
        };
        bool exists = check_existence(single, f.graph, f.pstar, 4).pass;
        bool orderable = q_orderable(f.graph.calls(), to_constraint_set(inst, member)).ok();
        CHECK(exists == orderable);
        if (!exists) ++failures;
    }
    CHECK(failures > 0);
}

TEST_CASE("fixture loading rejects unknown names") {
    CHECK_THROWS_AS(load_fixture("nope"), std::invalid_argument);
    CHECK(fixture_names().size() == 5);
}
