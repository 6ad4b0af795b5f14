#include "support.hpp"

#include "switchcost/constructions.hpp"
#include "switchcost/error.hpp"
#include "switchcost/solver.hpp"
#include "switchcost/task_types.hpp"

#include <doctest.h>

using namespace switchcost;

namespace {

auto witness_6_4() -> const AllocationTable &
{
    static const AllocationTable table = *feasible({ 6, 4, Regime::FullMultiset }, 2).witness;
    return table;
}

// v = [1,1,1,0]; moves into task 3 go through different intermediates
auto mixed_table() -> AllocationTable
{
    AllocationTable t(ProblemInstance { 3, 4, Regime::FullMultiset });
    t.set(DemandVector({ 1, 1, 1, 0 }), Assignment({ 0, 1, 2 }));
    t.set(DemandVector({ 0, 1, 1, 1 }), Assignment({ 1, 3, 2 }));
    t.set(DemandVector({ 1, 0, 1, 1 }), Assignment({ 0, 2, 3 }));
    t.set(DemandVector({ 1, 1, 0, 1 }), Assignment({ 0, 1, 3 }));
    return t;
}

} // namespace

TEST_CASE("moves report cost, movers and intermediate")
{
    auto t = ordered_construction({ 3, 3, Regime::FullMultiset });
    TaskClassifier c(t);
    auto v = t.space().index_of(DemandVector({ 2, 1, 0 }));
    auto m = c.move(v, 0, 2);
    REQUIRE(m.has_value());
    CHECK(m->cost == 2);
    CHECK(m->intermediate == 1);
    CHECK(m->source_agent == 1);
    CHECK(m->intermediate_agent == 2);
    CHECK(m->moved == std::vector<AgentId> { 1, 2 });
    auto one = c.move(v, 1, 2);
    REQUIRE(one.has_value());
    CHECK(one->cost == 1);
    CHECK_FALSE(one->intermediate.has_value());
    CHECK_FALSE(c.move(v, 2, 0).has_value());
    CHECK(c.moves_into(v, 2).size() == 2);
    CHECK(c.nonempty_besides(v, 2) == 2);
}

TEST_CASE("a cost-1 table has only type-1 tasks")
{
    auto t = oracle::small_example_table(true);
    for (std::size_t i = 0; i < t.size(); ++i)
        for (TaskId task = 0; task < 2; ++task)
            CHECK(classify_task(t, t.space().vector(i), task).type == TaskType::Type1);
}

TEST_CASE("the group construction routes moves through its special task")
{
    for (TaskId special = 0; special < 4; ++special) {
        auto t = group_construction({ 6, 4, Regime::FullMultiset }, special);
        TaskClassifier c(t);
        auto scheme = make_group_scheme({ 6, 4, Regime::FullMultiset }, special);
        std::size_t checked = 0;
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (! t.has(i))
                continue;
            const auto & v = t.space().vector(i);
            for (TaskId task = 0; task < 4; ++task) {
                if (task == special || v[task] >= scheme.capacity() || c.nonempty_besides(i, task) < 3)
                    continue;
                auto r = c.classify(i, task);
                CHECK(r.type == TaskType::Type2);
                CHECK(r.intermediate == special);
                // the next agent of the target's group
                CHECK(r.agent == scheme.groups.at(task)[static_cast<std::size_t>(v[task])]);
                ++checked;
            }
        }
        CHECK(checked > 0);
    }
}

TEST_CASE("two intermediates for one target is mixed")
{
    auto t = mixed_table();
    CHECK_THROWS_AS(static_cast<void>(classify_task(t, DemandVector({ 1, 1, 1, 0 }), 3)), PreconditionError);
    auto r = classify_task_unchecked(t, DemandVector({ 1, 1, 1, 0 }), 3);
    CHECK(r.type == TaskType::Unclassified);
    CHECK(r.reason == "mixed");
}

TEST_CASE("too few non-empty tasks leave the intermediate ambiguous")
{
    auto t = ordered_construction({ 3, 3, Regime::FullMultiset });
    auto r = classify_task(t, DemandVector({ 2, 1, 0 }), 2);
    CHECK(r.type == TaskType::Unclassified);
    CHECK(r.reason == "ambiguous-intermediate");
}

TEST_CASE("classification needs cost at most 2")
{
    auto t = ordered_construction({ 3, 4, Regime::FullMultiset });
    CHECK_THROWS_AS(TaskClassifier { t }, PreconditionError);
    auto bad = oracle::small_example_table();
    bad.set(DemandVector({ 2, 1 }), Assignment({ 1, 1, 1 }));
    CHECK_THROWS_AS(TaskClassifier { bad }, ValidationError);
}

TEST_CASE("no mixed targets on the six-agent, four-task witness")
{
    const auto & t = witness_6_4();
    auto report = classify_all(t);
    CHECK(report.entries.size() == 84 * 4);
    CHECK(report.type1 + report.type2 + report.ambiguous + report.mixed == report.entries.size());
    CHECK(report.mixed == 0);
    CHECK(report.type2 > 0);
    auto doc = task_report_to_json(t, report);
    CHECK(doc["counts"]["mixed"] == 0);
}

TEST_CASE("table lemmas on the six-agent, four-task witness")
{
    const auto & t = witness_6_4();
    for (auto lemma : { TableLemma::Dest2, TableLemma::Sw1 }) {
        auto r = check_table_lemma(t, lemma);
        CHECK(r.failures == 0);
        CHECK(r.non_vacuous_passes > 0);
    }
    auto tech = check_table_lemma(t, TableLemma::Tech);
    CHECK(tech.passed());
    // five distinct tasks do not fit in four
    for (auto lemma : { TableLemma::Ss, TableLemma::One2, TableLemma::All2int, TableLemma::Ind }) {
        auto r = check_table_lemma(t, lemma);
        CHECK(r.passed());
        CHECK(r.instances > 0);
        CHECK(r.vacuous == r.instances);
    }
}

TEST_CASE("table lemmas on smaller cost-2 witnesses")
{
    for (auto p : { ProblemInstance { 4, 4, Regime::FullMultiset }, ProblemInstance { 5, 4, Regime::FullMultiset },
             ProblemInstance { 2, 5, Regime::FullMultiset } }) {
        auto o = feasible(p, 2);
        REQUIRE(o.witness.has_value());
        for (auto lemma : { TableLemma::Dest2, TableLemma::Sw1, TableLemma::Tech, TableLemma::Ss,
                 TableLemma::All2int, TableLemma::Ind })
            CHECK(check_table_lemma(*o.witness, lemma).passed());
    }
}

TEST_CASE("one2 fails with two agents: two non-empty tasks are not enough")
{
    // every table on two agents has cost at most 2, so this witness is arbitrary
    auto o = feasible({ 2, 5, Regime::FullMultiset }, 2);
    REQUIRE(o.witness.has_value());
    auto r = check_table_lemma(*o.witness, TableLemma::One2);
    CHECK(r.failures > 0);
    for (const auto & c : r.counterexamples) {
        DemandVector v(c["vector"]["demand"].get<std::vector<int>>());
        CHECK(v.nonempty_tasks() == 2);
        // with both agents on their own task, no move into an empty task costs 2
        for (TaskId t = 0; t < 5; ++t)
            CHECK(classify_task(*o.witness, v, t).type != TaskType::Type2);
    }
    for (auto p : { ProblemInstance { 4, 4, Regime::FullMultiset }, ProblemInstance { 5, 4, Regime::FullMultiset } })
        CHECK(check_table_lemma(*feasible(p, 2).witness, TableLemma::One2).passed());
}

TEST_CASE("table lemma arguments")
{
    for (auto name : { "dest2", "sw1", "tech", "ss", "one2", "all2int", "ind" }) {
        CHECK(is_table_lemma(name));
        CHECK(to_string(parse_table_lemma(name)) == name);
    }
    CHECK(required_tasks(TableLemma::Dest2) == 4);
    CHECK(required_tasks(TableLemma::Ss) == 5);
    CHECK_FALSE(is_table_lemma("fix"));
    CHECK_THROWS_AS(static_cast<void>(parse_table_lemma("zzz")), InvalidInputError);
    auto partial = group_construction({ 6, 4, Regime::FullMultiset }, 0);
    CHECK_THROWS_AS(static_cast<void>(check_table_lemma(partial, TableLemma::Dest2)), PreconditionError);
    auto steep = ordered_construction({ 3, 4, Regime::FullMultiset });
    CHECK_THROWS_AS(static_cast<void>(check_table_lemma(steep, TableLemma::Dest2)), PreconditionError);
    CHECK_NOTHROW(static_cast<void>(check_table_lemma(steep, TableLemma::Dest2, { false })));
}
