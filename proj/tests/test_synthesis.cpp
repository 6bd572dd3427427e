#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "mps/synthesis.hpp"
#include "support/random_instances.hpp"

using namespace mps;

namespace {

CallId C(const std::string& s) { return CallId(s); }
ContractId X(const std::string& s) { return ContractId(s); }

OrderVector single_order(const ParentMap& pm, const ContractId& x,
                         std::vector<std::pair<CallId, CallId>> gens) {
    OrderVector ov;
    ov.orders.emplace(x, StrictPartialOrder::from_generators(children(pm, x), std::move(gens)));
    return ov;
}

bool respects_induced(const CallGraph& g, const ParentMap& pm, const OrderVector& ov,
                      const PriorityMap& pmap) {
    ConstraintSet cs = induce(g, pm, ov);
    for (const auto& [x, rel] : cs.relations) {
        for (const auto& [t, t2] : rel) {
            if (!(pmap.at(t) > pmap.at(t2))) return false;
        }
    }
    return true;
}

}  // namespace

TEST_CASE("a single contract's chain counts down from the cap") {
    CallGraph g({C("c1"), C("c2"), C("c3")}, {});
    ParentMap pm({{C("c1"), X("A")}, {C("c2"), X("A")}, {C("c3"), X("A")}}, {X("A")});
    OrderVector ov = single_order(pm, X("A"),
                                  {{C("c1"), C("c2")}, {C("c2"), C("c3")}});
    PriorityMap out = synthesize(g, pm, ov, 0);
    CHECK(out.at(C("c1")) == -1);
    CHECK(out.at(C("c2")) == -2);
    CHECK(out.at(C("c3")) == -3);
    CHECK(is_valid(out, g).valid);
}

TEST_CASE("with no orders and no references the cap counts down in id order") {
    CallGraph g({C("p"), C("q"), C("r")}, {});
    ParentMap pm({{C("p"), X("A")}, {C("q"), X("A")}, {C("r"), X("A")}}, {X("A")});
    PriorityMap out = synthesize(g, pm, OrderVector{}, 10);
    CHECK(out.at(C("p")) == 9);
    CHECK(out.at(C("q")) == 8);
    CHECK(out.at(C("r")) == 7);
}

TEST_CASE("a declared order stays below a referenced helper") {
    // x' owns c; x owns a and b, a references c, and x wants a above b.
    CallGraph g({C("a"), C("b"), C("c")}, {{C("a"), {C("c")}}});
    ParentMap pm({{C("a"), X("x")}, {C("b"), X("x")}, {C("c"), X("x'")}}, {X("x"), X("x'")});
    OrderVector ov = single_order(pm, X("x"), {{C("a"), C("b")}});
    PriorityMap out = synthesize(g, pm, ov, 0);
    CHECK(out.at(C("a")) <= out.at(C("c")));
    CHECK(out.at(C("a")) > out.at(C("b")));
    CHECK(is_valid(out, g).valid);
    CHECK(respects_induced(g, pm, ov, out));
}

TEST_CASE("a later contract with no references starts at lambda_max - 1") {
    CallGraph g({C("a"), C("b"), C("m"), C("n")}, {});
    ParentMap pm({{C("a"), X("A")}, {C("b"), X("A")}, {C("m"), X("B")}, {C("n"), X("B")}},
                 {X("A"), X("B")});
    PriorityMap out = synthesize(g, pm, OrderVector{}, 0);
    CHECK(out.at(C("a")) == -1);
    CHECK(out.at(C("b")) == -2);
    CHECK(out.at(C("m")) == -1);  // equality across contracts is fine
    CHECK(out.at(C("n")) == -2);
    CHECK(is_valid(out, g).valid);
}

TEST_CASE("a later contract's first call inherits the trace minimum exactly") {
    CallGraph g({C("a"), C("b"), C("w")}, {{C("w"), {C("b")}}});
    ParentMap pm({{C("a"), X("A")}, {C("b"), X("A")}, {C("w"), X("B")}}, {X("A"), X("B")});
    PriorityMap out = synthesize(g, pm, OrderVector{}, 0);
    CHECK(out.at(C("b")) == -2);
    CHECK(out.at(C("w")) == -2);  // equal to its reference, not below it
}

TEST_CASE("mutually referencing siblings share one priority") {
    CallGraph g({C("u"), C("v"), C("t")}, {{C("u"), {C("v")}}, {C("v"), {C("u")}}});
    ParentMap pm({{C("u"), X("A")}, {C("v"), X("A")}, {C("t"), X("A")}}, {X("A")});
    PriorityMap out = synthesize(g, pm, OrderVector{}, 0);
    CHECK(out.at(C("u")) == out.at(C("v")));
    CHECK(is_valid(out, g).valid);
}

TEST_CASE("synthesis rejects what cannot be ordered") {
    CallGraph cyc({C("a"), C("b")}, {{C("a"), {C("b")}}, {C("b"), {C("a")}}});
    ParentMap split({{C("a"), X("A")}, {C("b"), X("B")}}, {X("A"), X("B")});
    CHECK_THROWS_AS(synthesize(cyc, split, OrderVector{}, 0), std::invalid_argument);

    // Declared pairs whose reference closure collides.
    CallGraph g({C("w"), C("x"), C("y"), C("z")},
                {{C("y"), {C("x")}}, {C("w"), {C("z")}}});
    ParentMap pm({{C("w"), X("A")}, {C("x"), X("A")}, {C("y"), X("A")}, {C("z"), X("A")}},
                 {X("A")});
    OrderVector ov = single_order(pm, X("A"), {{C("w"), C("x")}, {C("y"), C("z")}});
    CHECK_THROWS_AS(synthesize(g, pm, ov, 0), std::invalid_argument);

    OrderVector bad = single_order(pm, X("A"), {{C("y"), C("x")}});
    CHECK_THROWS_AS(synthesize(g, pm, bad, 0), std::invalid_argument);  // inadmissible
}

TEST_CASE("synthesized maps are valid and respect every induced constraint") {
    std::mt19937_64 rng(20240730);
    for (int round = 0; round < 150; ++round) {
        auto [g, pm] = testgen::random_deployable_instance(rng, 12, 4);
        OrderVector ov = testgen::random_closed_order_vector(rng, g, pm);
        CAPTURE(round);
        PriorityMap out = synthesize(g, pm, ov, 0);
        REQUIRE(is_valid(out, g).valid);
        REQUIRE(respects_induced(g, pm, ov, out));
    }
}

TEST_CASE("derived orders refine what synthesis was given") {
    std::mt19937_64 rng(20240731);
    for (int round = 0; round < 100; ++round) {
        auto [g, pm] = testgen::random_deployable_instance(rng, 10, 3);
        OrderVector ov = testgen::random_closed_order_vector(rng, g, pm);
        PriorityMap out = synthesize(g, pm, ov, 0);
        OrderVector derived = derive_orders(g, pm, out);
        for (const auto& [x, o] : ov.orders) {
            for (const auto& [hi, lo] : o.pairs()) {
                CAPTURE(round, x.id, hi.id, lo.id);
                REQUIRE(derived.orders.at(x).holds(hi, lo));
            }
        }
    }
}

TEST_CASE("synthesis is deterministic") {
    std::mt19937_64 rng(20240732);
    auto [g, pm] = testgen::random_deployable_instance(rng, 10, 3);
    OrderVector ov = testgen::random_closed_order_vector(rng, g, pm);
    CHECK(synthesize(g, pm, ov, 0) == synthesize(g, pm, ov, 0));
}

TEST_CASE("derive_orders reads strict inequalities within each contract") {
    CallGraph g({C("a"), C("b"), C("c")}, {{C("a"), {C("c")}}});
    ParentMap pm({{C("a"), X("x")}, {C("b"), X("x")}, {C("c"), X("x'")}}, {X("x"), X("x'")});
    PriorityMap pmap{{{C("a"), -100}, {C("b"), -101}, {C("c"), -100}}, 0};
    OrderVector ov = derive_orders(g, pm, pmap);
    CHECK(ov.orders.at(X("x")).holds(C("a"), C("b")));
    CHECK_FALSE(ov.orders.at(X("x")).holds(C("b"), C("a")));
    CHECK(ov.orders.at(X("x'")).empty());
}

TEST_CASE("equal priorities derive an empty order") {
    CallGraph g({C("a"), C("b")}, {});
    ParentMap pm({{C("a"), X("A")}, {C("b"), X("A")}}, {X("A")});
    PriorityMap pmap{{{C("a"), -1}, {C("b"), -1}}, 0};
    CHECK(derive_orders(g, pm, pmap).orders.at(X("A")).empty());
}

TEST_CASE("derive_orders rejects invalid maps") {
    CallGraph g({C("a"), C("c")}, {{C("a"), {C("c")}}});
    ParentMap pm({{C("a"), X("A")}, {C("c"), X("A")}}, {X("A")});
    PriorityMap bad{{{C("a"), 0}, {C("c"), -1}}, 0};
    CHECK_THROWS_AS(derive_orders(g, pm, bad), std::invalid_argument);
}

TEST_CASE("orders derived from random valid maps are admissible and respected") {
    std::mt19937_64 rng(20240733);
    for (int round = 0; round < 150; ++round) {
        auto [g, pm] = testgen::random_deployable_instance(rng, 10, 4);
        PriorityMap pmap = testgen::random_valid_priority_map(rng, g, 0);
        CAPTURE(round);
        OrderVector derived = derive_orders(g, pm, pmap);
        for (const ContractId& x : pm.contracts()) {
            REQUIRE(is_admissible(derived.orders.at(x), x, g, pm));
            REQUIRE(is_trace_closed(derived.orders.at(x), x, g, pm));
        }
        ConstraintSet cs = induce(g, pm, derived);
        for (const auto& [x, rel] : cs.relations) {
            for (const auto& [t, t2] : rel) REQUIRE(pmap.at(t) > pmap.at(t2));
        }
    }
}
