#include "support.hpp"

#include "switchcost/consistency.hpp"
#include "switchcost/error.hpp"
#include "switchcost/solver.hpp"

#include <doctest.h>

#include <algorithm>

using namespace switchcost;

namespace {

// C(n, r) by Pascal's rule, independent of the library.
auto pascal(int n, int r) -> std::uint64_t
{
    if (r < 0 || r > n)
        return 0;
    std::vector<std::uint64_t> row(static_cast<std::size_t>(r) + 1, 0);
    row[0] = 1;
    for (int i = 1; i <= n; ++i)
        for (int j = std::min(i, r); j >= 1; --j)
            row[static_cast<std::size_t>(j)] += row[static_cast<std::size_t>(j) - 1];
    return row[static_cast<std::size_t>(r)];
}

auto family(int k, CharSet anchor, const std::vector<std::pair<TaskId, std::vector<TaskId>>> & rows) -> LocalFamily
{
    std::vector<FamilyMember> members;
    for (const auto & [x, word] : rows)
        members.push_back({ x, Assignment(word) });
    return LocalFamily(k, std::move(anchor), std::move(members));
}

} // namespace

TEST_CASE("unions keep agreeing values and report disagreements")
{
    std::map<CharSet, IndexMap> parts { { { 0, 1 }, { { 0, 0 }, { 1, 2 } } }, { { 0, 2 }, { { 0, 1 }, { 2, 2 } } },
        { { 0, 3 }, { { 3, 1 } } } };
    auto u = union_maps({ 0 }, parts);
    CHECK_FALSE(u.consistent());
    REQUIRE(u.conflicts.size() == 1);
    CHECK(u.conflicts[0].character == 0);
    CHECK(u.conflicts[0].first_anchor == CharSet { 0, 1 });
    CHECK(u.conflicts[0].first_index == 0);
    CHECK(u.conflicts[0].second_anchor == CharSet { 0, 2 });
    CHECK(u.conflicts[0].second_index == 1);
    CHECK(u.values == IndexMap { { 1, 2 }, { 2, 2 }, { 3, 1 } });

    auto empty = union_maps({ 0 }, {});
    CHECK(empty.consistent());
    CHECK(empty.values.empty());
}

TEST_CASE("consistency maps from families sharing an anchor")
{
    // Q = {0}; R = {0,1} freezes 0 at agent 0, R' = {0,2} freezes 0 at agent 1
    auto f1 = family(4, { 0, 1 }, { { 2, { 0, 1, 2 } }, { 3, { 0, 3, 1 } } });
    auto f2 = family(4, { 0, 2 }, { { 1, { 1, 0, 2 } }, { 3, { 3, 0, 2 } } });
    auto m = build_consistency_maps({ f1, f2 });
    CHECK(m.anchor == CharSet { 0 });
    CHECK_FALSE(m.g.consistent());
    REQUIRE(m.g.conflicts.size() == 1);
    CHECK(m.g.conflicts[0].character == 0);

    auto none = build_consistency_maps({});
    CHECK(none.anchor.empty());
    CHECK(none.g.values.empty());
    CHECK(none.h_prime.empty());
    CHECK_FALSE(none.all_semi_frozen);

    auto other = family(5, { 3, 4 }, { { 0, { 3, 4, 0 } } });
    CHECK_THROWS_AS(static_cast<void>(build_consistency_maps({ f1, other })), InvalidInputError);
    CHECK_THROWS_AS(static_cast<void>(build_consistency_maps({ f1, f1 })), InvalidInputError);
}

TEST_CASE("semi-frozen families give h' on the characters where they agree")
{
    // identical placements make every family semi-frozen with wildcard 0
    auto f1 = family(5, { 0, 1, 2 }, { { 3, { 3, 0, 1, 2 } }, { 4, { 4, 0, 1, 2 } } });
    auto f2 = family(5, { 0, 1, 3 }, { { 2, { 2, 0, 1, 3 } }, { 4, { 4, 0, 1, 3 } } });
    auto m = build_consistency_maps({ f1, f2 });
    CHECK(m.anchor == CharSet { 0, 1 });
    CHECK(m.all_semi_frozen);
    CHECK(m.h_prime == IndexMap { { 0, 1 }, { 1, 2 } });
    CHECK(m.t_set() == CharSet { 0, 1 });

    // moving 1 in the second family changes its h
    auto f3 = family(5, { 0, 1, 3 }, { { 2, { 2, 0, 3, 1 } }, { 4, { 4, 0, 3, 1 } } });
    auto m2 = build_consistency_maps({ f1, f3 });
    CHECK(m2.h_prime == IndexMap { { 0, 1 } });

    ConsistencyMaps a;
    a.anchor = { 0, 1 };
    a.h_prime = { { 0, 1 }, { 1, 2 } };
    ConsistencyMaps b;
    b.anchor = { 0, 2 };
    b.h_prime = { { 0, 1 }, { 2, 3 } };
    ConsistencyMaps c;
    c.anchor = { 1, 2 };
    c.h_prime = { { 1, 0 } };
    auto hp = build_projected_map({ 0 }, { a, b, c });
    CHECK(hp.consistent());
    CHECK(hp.values == IndexMap { { 0, 1 }, { 1, 2 }, { 2, 3 } });
}

TEST_CASE("freezing maps agree on tables of cost 2")
{
    // with two or more spare tasks no subset table reaches cost 2
    CHECK(feasible({ 4, 6, Regime::SubsetOnly }, 2).verdict == Verdict::Infeasible);
    for (auto p : { ProblemInstance { 3, 4, Regime::SubsetOnly }, ProblemInstance { 4, 5, Regime::SubsetOnly },
             ProblemInstance { 5, 6, Regime::SubsetOnly } }) {
        CAPTURE(p.n);
        CAPTURE(p.k);
        auto o = feasible(p, 2);
        REQUIRE(o.witness.has_value());
        auto maps = consistency_maps_from_table(*o.witness);
        CHECK(maps.size() == subsets_of_size(p.k, p.n - 2).size());
        for (const auto & m : maps)
            CHECK(m.g.consistent());
    }
}

TEST_CASE("subsets in lexicographic order")
{
    CHECK(subsets_of_size(4, 2) == std::vector<CharSet> { { 0, 1 }, { 0, 2 }, { 0, 3 }, { 1, 2 }, { 1, 3 }, { 2, 3 } });
    CHECK(subsets_of_size(3, 0) == std::vector<CharSet> { {} });
    CHECK(subsets_of_size(3, 4).empty());
}

TEST_CASE("a planted freezing structure produces n-3 irregular pairs per anchor")
{
    for (int n = 4; n <= 6; ++n)
        for (int kp = n; kp <= 9; ++kp) {
            CAPTURE(n);
            CAPTURE(kp);
            // each R freezes its n-3 smallest characters at their rank in R
            std::map<CharSet, IndexMap> parts;
            for (const auto & r : subsets_of_size(kp, n - 1)) {
                IndexMap g;
                for (int i = 0; i < n - 3; ++i)
                    g[r[static_cast<std::size_t>(i)]] = i;
                parts[r] = g;
            }
            auto unions = unions_over_anchors(kp, n - 2, parts);
            auto c = count_irregular_pairs(CountingStep::FreezeStep, unions, n, kp);
            CHECK(c.observed == static_cast<std::uint64_t>(n - 3) * pascal(kp, n - 1));
            CHECK(c.lower_bound == c.observed);

            std::map<CharSet, IndexMap> empty;
            for (const auto & r : subsets_of_size(kp, n - 1))
                empty[r] = {};
            CHECK(count_irregular_pairs(CountingStep::FreezeStep, unions_over_anchors(kp, n - 2, empty), n, kp).observed
                == 0);
        }
}

TEST_CASE("irregular-pair bounds match direct binomials")
{
    for (int n = 4; n <= 8; ++n)
        for (int kp = n; kp <= 20; ++kp) {
            CAPTURE(n);
            CAPTURE(kp);
            auto a = irregular_pair_bounds(CountingStep::FreezeStep, n, kp);
            CHECK(a.upper_bound == 2 * pascal(kp, n - 2));
            CHECK(a.lower_bound == static_cast<std::uint64_t>(n - 3) * pascal(kp, n - 1));
            auto b = irregular_pair_bounds(CountingStep::SemiFreezeStep, n, kp);
            CHECK(b.upper_bound == 3 * pascal(kp, n - 3));
            CHECK(b.lower_bound == static_cast<std::uint64_t>(n - 4) * pascal(kp, n - 2));

            // the closed forms are exact rearrangements of the comparisons
            CHECK(counting_contradiction(CountingStep::FreezeStep, n, kp)
                == threshold_condition(CountingStep::FreezeStep, n, kp));
            if (n >= 5)
                CHECK(counting_contradiction(CountingStep::SemiFreezeStep, n, kp)
                    == threshold_condition(CountingStep::SemiFreezeStep, n, kp));
        }
    CHECK(counting_contradiction(CountingStep::FreezeStep, 5, 12));
    CHECK(threshold_condition(CountingStep::FreezeStep, 5, 12));
    CHECK(counting_contradiction(CountingStep::SemiFreezeStep, 5, 12));
    CHECK(threshold_condition(CountingStep::SemiFreezeStep, 5, 12));
    // below the threshold (n=5 needs k' > 7 for the first step)
    CHECK_FALSE(counting_contradiction(CountingStep::FreezeStep, 5, 7));
    CHECK(counting_contradiction(CountingStep::FreezeStep, 5, 8));
    CHECK_THROWS_AS(static_cast<void>(irregular_pair_bounds(CountingStep::FreezeStep, 2, 5)), InvalidInputError);
}

TEST_CASE("map unions serialize")
{
    auto u = union_maps({ 0 }, { { { 0, 1 }, { { 1, 2 } } }, { { 0, 2 }, { { 1, 3 } } } });
    auto doc = map_union_to_json(u);
    CHECK(doc["anchor"] == std::vector<int> { 0 });
    CHECK(doc["values"].empty());
    CHECK(doc["conflicts"].size() == 1);
    CHECK(doc["conflicts"][0]["character"] == 1);
}
