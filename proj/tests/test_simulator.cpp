#include "support.hpp"

#include "switchcost/constructions.hpp"
#include "switchcost/error.hpp"
#include "switchcost/simulator.hpp"
#include "switchcost/solver.hpp"

#include <doctest.h>

#include <sstream>

using namespace switchcost;

namespace {

auto witness_6_4() -> const AllocationTable &
{
    static const AllocationTable table = *feasible({ 6, 4, Regime::FullMultiset }, 2).witness;
    return table;
}

} // namespace

TEST_CASE("the three-step walk on two agents returns to its start")
{
    auto t = ordered_construction({ 2, 3, Regime::FullMultiset });
    DemandVector start({ 1, 1, 0 });
    // tasks 2->3, 1->2, 3->1 in 1-indexed terms
    Trace trace { start, { { 1, 2 }, { 0, 1 }, { 2, 0 } }, std::nullopt };
    auto records = run_trace(t, trace);
    REQUIRE(records.size() == 3);
    CHECK(records[0].after == DemandVector({ 1, 0, 1 }));
    CHECK(records[1].after == DemandVector({ 0, 1, 1 }));
    CHECK(records[2].after == start);
    CHECK(records[0].cost == 1);
    CHECK(records[1].cost == 1);
    // a history-free table cannot end at [b,a,_]: the last step moves both agents
    CHECK(records[2].cost == 2);
    CHECK(records[0].moved == std::vector<AgentMove> { { 1, 1, 2 } });
    CHECK(records[1].moved == std::vector<AgentMove> { { 0, 0, 1 } });
    CHECK(records[2].moved == std::vector<AgentMove> { { 0, 1, 0 }, { 1, 2, 1 } });
    CHECK(t.at(records[2].after) == t.at(start));
}

TEST_CASE("records are consistent with the table")
{
    CHECK(run_trace(witness_6_4(), { DemandVector({ 0, 0, 0, 6 }), {}, std::nullopt }).empty());
    auto walk = random_walk(witness_6_4(), DemandVector({ 2, 2, 1, 1 }), 300, 9);
    for (const auto & r : walk.records) {
        CHECK(adjacency(r.before, r.after).has_value());
        CHECK(r.cost == static_cast<int>(r.moved.size()));
        CHECK(r.cost == switching_cost(witness_6_4().at(r.before), witness_6_4().at(r.after)));
        CHECK(r.cost >= 1);
        CHECK(r.cost <= 2);
    }
}

TEST_CASE("trace errors")
{
    auto t = ordered_construction({ 2, 3, Regime::FullMultiset });
    Trace bad { DemandVector({ 1, 1, 0 }), { { 0, 2 }, { 0, 1 } }, std::nullopt };
    try {
        static_cast<void>(run_trace(t, bad));
        FAIL("empty source accepted");
    }
    catch (const TraceError & e) {
        CHECK(std::string(e.what()).find("step 2") != std::string::npos);
    }
    CHECK_THROWS_AS(static_cast<void>(run_trace(t, { DemandVector({ 1, 1 }), {}, std::nullopt })), InvalidInputError);

    auto g = group_construction({ 6, 4, Regime::FullMultiset }, 3);
    Trace out { DemandVector({ 2, 0, 0, 4 }), { { 3, 0 } }, std::nullopt };
    CHECK_THROWS_AS(static_cast<void>(run_trace(g, out)), DomainError);

    auto single = ordered_construction({ 3, 1, Regime::FullMultiset });
    CHECK_THROWS_AS(static_cast<void>(random_walk(single, DemandVector({ 3 }), 1, 0)), TraceError);
    CHECK(random_walk(single, DemandVector({ 3 }), 0, 0).records.empty());
}

TEST_CASE("random walks on a partial table stay in its domain")
{
    auto g = group_construction({ 6, 4, Regime::FullMultiset }, 3);
    auto walk = random_walk(g, DemandVector({ 1, 1, 1, 3 }), 500, 5);
    for (const auto & r : walk.records)
        CHECK(g.find(r.after) != nullptr);
}

TEST_CASE("walks are reproducible")
{
    auto a = random_walk(witness_6_4(), DemandVector({ 2, 2, 1, 1 }), 1000, 42);
    auto b = random_walk(witness_6_4(), DemandVector({ 2, 2, 1, 1 }), 1000, 42);
    CHECK(a.trace == b.trace);
    CHECK(a.records == b.records);
    CHECK(a.trace.seed == 42u);
    auto c = random_walk(witness_6_4(), DemandVector({ 2, 2, 1, 1 }), 1000, 43);
    CHECK(c.trace.moves != a.trace.moves);

    // replaying the saved trace gives the same records
    auto replay = run_trace(witness_6_4(), trace_from_json(trace_to_json(a.trace)));
    CHECK(replay == a.records);
}

TEST_CASE("walks on the cost-2 witness")
{
    auto walk = random_walk(witness_6_4(), DemandVector({ 6, 0, 0, 0 }), 1000, 1);
    CHECK(walk_stats(walk.records).max <= 2);

    auto long_walk = random_walk(witness_6_4(), DemandVector({ 2, 2, 1, 1 }), 10000, 42);
    auto stats = walk_stats(long_walk.records);
    for (const auto & [cost, count] : stats.histogram) {
        CHECK(cost >= 1);
        CHECK(cost <= 2);
    }

    // endpoint costs along the walk respect D times half the l1 distance
    const auto & t = witness_6_4();
    const auto & v0 = long_walk.trace.start;
    for (std::size_t i = 0; i < long_walk.records.size(); i += 97) {
        const auto & v = long_walk.records[i].after;
        CHECK(2 * switching_cost(t.at(v0), t.at(v)) <= 2 * l1_distance(v0, v));
    }
}

TEST_CASE("walk statistics")
{
    auto rec = [](int cost) { return StepRecord { DemandVector({ 1, 0 }), DemandVector({ 0, 1 }), cost, {} }; };
    auto ones = walk_stats({ rec(1), rec(1), rec(1) });
    CHECK(ones.max == 1);
    CHECK(ones.mean == doctest::Approx(1.0));
    auto mixed = walk_stats({ rec(1), rec(2), rec(1), rec(2) });
    CHECK(mixed.mean == doctest::Approx(1.5));
    CHECK(mixed.histogram == std::map<int, std::uint64_t> { { 1, 2 }, { 2, 2 } });
    CHECK(mixed.steps == 4);
    auto none = walk_stats({});
    CHECK(none.steps == 0);
    CHECK(none.max == 0);
    CHECK(none.mean == 0.0);
    CHECK(stats_to_json(mixed)["histogram"]["2"] == 2);
}

TEST_CASE("the generator is the standard 64-bit Mersenne Twister")
{
    std::mt19937_64 rng;
    rng.discard(9999);
    CHECK(rng() == 9981545732273789042ull);

    std::mt19937_64 a(3);
    std::vector<int> hits(6, 0);
    for (int i = 0; i < 60000; ++i)
        ++hits[uniform_below(a, 6)];
    for (auto h : hits)
        CHECK(std::abs(h - 10000) < 500);
    std::mt19937_64 b(3);
    CHECK(uniform_below(b, 1) == 0);
    CHECK_THROWS_AS(static_cast<void>(uniform_below(b, 0)), InvalidInputError);
}

TEST_CASE("records export as comma-separated rows")
{
    auto t = ordered_construction({ 2, 3, Regime::FullMultiset });
    auto records = run_trace(t, { DemandVector({ 1, 1, 0 }), { { 1, 2 }, { 0, 1 }, { 2, 0 } }, std::nullopt });
    std::ostringstream out;
    write_records_csv(records, out);
    CHECK(out.str()
        == "step,source,target,cost,moved\n"
           "0,1,2,1,1:1>2\n"
           "1,0,1,1,0:0>1\n"
           "2,2,0,2,0:1>0 1:2>1\n");
    auto doc = records_to_json(records);
    CHECK(doc.size() == 3);
    CHECK(doc[2]["cost"] == 2);
}

TEST_CASE("trace documents")
{
    Trace t { DemandVector({ 1, 1, 0 }), { { 1, 2 } }, 7 };
    CHECK(trace_from_json(trace_to_json(t)) == t);
    Trace u { DemandVector({ 1, 1, 0 }), {}, std::nullopt };
    CHECK(trace_from_json(trace_to_json(u)) == u);
    CHECK_THROWS_AS(static_cast<void>(trace_from_json({ { "start", { 1, 1 } } })), LoadError);
    CHECK_THROWS_AS(static_cast<void>(trace_from_json({ { "start", { 1, -1 } }, { "moves", nlohmann::json::array() } })),
        LoadError);
    CHECK_THROWS_AS(static_cast<void>(trace_from_json({ { "start", { 1, 1 } }, { "moves", { { 0 } } } })), LoadError);
}

TEST_CASE("composite bound over all pairs")
{
    auto t = ordered_construction({ 4, 4, Regime::FullMultiset });
    auto r = check_composite_bound(t);
    CHECK(r.max_cost == 3);
    CHECK(r.pairs == 35 * 34 / 2);
    CHECK(r.violations == 0);
    CHECK_FALSE(r.first_violation.has_value());

    auto serial = check_composite_bound(t, 1);
    CHECK(serial.pairs == r.pairs);
    CHECK(serial.violations == r.violations);

    // a partial table whose entries are never adjacent has D = 0
    AllocationTable sparse(ProblemInstance { 3, 2, Regime::FullMultiset });
    sparse.set(DemandVector({ 3, 0 }), Assignment({ 0, 0, 0 }));
    sparse.set(DemandVector({ 1, 2 }), Assignment({ 1, 0, 1 }));
    auto v = check_composite_bound(sparse, 2);
    CHECK(v.max_cost == 0);
    CHECK(v.violations == 1);
    REQUIRE(v.first_violation.has_value());
    CHECK(v.first_violation->first == sparse.space().index_of(DemandVector({ 1, 2 })));
}
