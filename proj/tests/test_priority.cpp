#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "mps/priority.hpp"
#include "support/oracles.hpp"
#include "support/random_instances.hpp"

using namespace mps;

namespace {

CallId C(const std::string& s) { return CallId(s); }

// One contract's calls a, b plus a helper c in another contract: a calls c.
CallGraph helper_graph() {
    return CallGraph({C("a"), C("b"), C("c")}, {{C("a"), {C("c")}}});
}

}  // namespace

TEST_CASE("a deprioritized helper keeps the callers below it") {
    CallGraph g = helper_graph();
    PriorityMap pmap{{{C("a"), -100}, {C("b"), -101}, {C("c"), -100}}, 0};
    CHECK(is_valid(pmap, g).valid);

    PriorityMap too_high{{{C("a"), -99}, {C("b"), -101}, {C("c"), -100}}, 0};
    ValidityReport r = is_valid(too_high, g);
    REQUIRE_FALSE(r.valid);
    CHECK(r.violation->kind == PriorityViolationKind::ReferenceInversion);
    CHECK(r.violation->call == C("a"));
    CHECK(r.violation->ref == C("c"));
}

TEST_CASE("an isolated call may sit exactly at the cap") {
    CallGraph g({C("solo")}, {});
    CHECK(is_valid(PriorityMap{{{C("solo"), 7}}, 7}, g).valid);

    ValidityReport r = is_valid(PriorityMap{{{C("solo"), 8}}, 7}, g);
    REQUIRE_FALSE(r.valid);
    CHECK(r.violation->kind == PriorityViolationKind::CapExceeded);
    CHECK(r.violation->call == C("solo"));
}

TEST_CASE("reference cycles force equal priorities and are accepted") {
    CallGraph g({C("u"), C("v")}, {{C("u"), {C("v")}}, {C("v"), {C("u")}}});
    CHECK(is_valid(PriorityMap{{{C("u"), -3}, {C("v"), -3}}, 0}, g).valid);
    CHECK_FALSE(is_valid(PriorityMap{{{C("u"), -2}, {C("v"), -3}}, 0}, g).valid);
}

TEST_CASE("is_valid needs a total assignment") {
    CallGraph g = helper_graph();
    PriorityMap partial{{{C("a"), -100}}, 0};
    CHECK_THROWS_AS(is_valid(partial, g), std::invalid_argument);
}

TEST_CASE("the first violation is reported in call, reference order") {
    CallGraph g({C("a"), C("b"), C("c")},
                {{C("b"), {C("a"), C("c")}}, {C("c"), {C("a")}}});
    // b is above both its references; the (b, a) edge comes first.
    PriorityMap pmap{{{C("a"), -5}, {C("b"), -1}, {C("c"), -4}}, 0};
    ValidityReport r = is_valid(pmap, g);
    REQUIRE_FALSE(r.valid);
    CHECK(r.violation->call == C("b"));
    CHECK(r.violation->ref == C("a"));
}

TEST_CASE("direct-reference validity equals the full-trace oracle") {
    std::mt19937_64 rng(20240720);
    int valid_seen = 0, invalid_seen = 0;
    for (int round = 0; round < 300; ++round) {
        auto [g, pm] = testgen::random_deployable_instance(rng, 12, 4);
        PriorityMap pmap;
        pmap.lambda_max = 0;
        if (round % 2 == 0) {
            pmap = testgen::random_valid_priority_map(rng, g, 0);
        } else {
            std::uniform_int_distribution<long long> any(-6, 1);
            for (const CallId& c : g.calls()) pmap.lambda[c] = any(rng);
        }
        bool got = is_valid(pmap, g).valid;
        CAPTURE(round);
        REQUIRE(got == oracles::valid_oracle(pmap, g));
        (got ? valid_seen : invalid_seen)++;
    }
    CHECK(valid_seen > 50);
    CHECK(invalid_seen > 50);
}

TEST_CASE("max_valid_priority is the cap lowered by direct references") {
    CallGraph g = helper_graph();
    PriorityMap partial{{{C("c"), -100}}, 0};
    CHECK(max_valid_priority(g, partial, C("a")) == -100);
    CHECK(max_valid_priority(g, partial, C("b")) == 0);

    CallGraph two({C("a"), C("c1"), C("c2")}, {{C("a"), {C("c1"), C("c2")}}});
    PriorityMap p2{{{C("c1"), -3}, {C("c2"), -7}}, 0};
    CHECK(max_valid_priority(two, p2, C("a")) == -7);

    PriorityMap unpriced{{}, 0};
    CHECK_THROWS_AS(max_valid_priority(g, unpriced, C("a")), std::invalid_argument);
}

TEST_CASE("assigning the maximum valid priority is actually valid") {
    std::mt19937_64 rng(20240721);
    for (int round = 0; round < 100; ++round) {
        auto [g, pm] = testgen::random_deployable_instance(rng, 10, 3);
        PriorityMap pmap = testgen::random_valid_priority_map(rng, g, 0);
        for (const CallId& c : g.calls()) {
            long long mvp = max_valid_priority(g, pmap, c);
            PriorityMap bumped = pmap;
            bumped.lambda[c] = mvp;
            // Raising c to its bound keeps c's own constraints satisfied.
            CHECK(bumped.at(c) <= bumped.lambda_max);
            for (const CallId& t : g.refs(c)) CHECK(bumped.at(c) <= bumped.at(t));
        }
    }
}

TEST_CASE("adding a reference can only lower the maximum valid priority") {
    std::mt19937_64 rng(20240722);
    for (int round = 0; round < 100; ++round) {
        auto [g, pm] = testgen::random_deployable_instance(rng, 8, 3);
        PriorityMap pmap = testgen::random_valid_priority_map(rng, g, 0);
        std::vector<CallId> calls(g.calls().begin(), g.calls().end());
        std::uniform_int_distribution<std::size_t> pick(0, calls.size() - 1);
        CallId from = calls[pick(rng)], to = calls[pick(rng)];
        const std::vector<CallId>& existing = g.refs(from);
        if (std::find(existing.begin(), existing.end(), to) != existing.end()) continue;
        long long before = max_valid_priority(g, pmap, from);

        std::map<CallId, std::vector<CallId>> refs;
        for (const CallId& c : g.calls()) refs[c] = g.refs(c);
        refs[from].push_back(to);
        CallGraph extended(g.calls(), std::move(refs));
        CHECK(max_valid_priority(extended, pmap, from) <= before);
    }
}

TEST_CASE("validity survives uniform downward shifts") {
    std::mt19937_64 rng(20240723);
    for (int round = 0; round < 60; ++round) {
        auto [g, pm] = testgen::random_deployable_instance(rng, 10, 3);
        PriorityMap pmap = testgen::random_valid_priority_map(rng, g, 0);
        REQUIRE(is_valid(pmap, g).valid);
        PriorityMap shifted = pmap;
        for (auto& [c, v] : shifted.lambda) v -= 17;
        CHECK(is_valid(shifted, g).valid);
    }
}
