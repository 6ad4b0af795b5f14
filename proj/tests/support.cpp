#include "support.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace oracle {

using namespace switchcost;

auto demand_vectors(int n, int k, bool subsets_only) -> std::vector<std::vector<int>>
{
    std::vector<std::vector<int>> out;
    std::vector<int> v(static_cast<std::size_t>(k), 0);
    // odometer over [0, n]^k
    for (;;) {
        if (std::accumulate(v.begin(), v.end(), 0) == n
            && (! subsets_only || std::all_of(v.begin(), v.end(), [](int c) { return c <= 1; })))
            out.push_back(v);
        int i = k - 1;
        while (i >= 0 && v[static_cast<std::size_t>(i)] == n)
            v[static_cast<std::size_t>(i--)] = 0;
        if (i < 0)
            break;
        ++v[static_cast<std::size_t>(i)];
    }
    std::sort(out.begin(), out.end());
    return out;
}

auto l1(const std::vector<int> & a, const std::vector<int> & b) -> int
{
    int d = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        d += std::abs(a[i] - b[i]);
    return d;
}

auto hamming(const std::vector<int> & a, const std::vector<int> & b) -> int
{
    int d = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        d += a[i] != b[i];
    return d;
}

auto arrangements(const std::vector<int> & counts) -> std::vector<std::vector<int>>
{
    std::vector<int> word;
    for (std::size_t t = 0; t < counts.size(); ++t)
        word.insert(word.end(), static_cast<std::size_t>(counts[t]), static_cast<int>(t));
    std::vector<std::vector<int>> out;
    do
        out.push_back(word);
    while (std::next_permutation(word.begin(), word.end()));
    return out;
}

namespace {

    struct Brute
    {
        std::vector<std::vector<int>> vectors;
        std::vector<std::vector<std::vector<int>>> options;
        std::vector<std::vector<std::size_t>> earlier; // adjacent vectors before each one
        std::vector<std::size_t> choice;
        int max_cost = 0;
        std::uint64_t nodes = 0;
        std::uint64_t budget = 0;
        bool out_of_budget = false;

        auto run(std::size_t depth) -> bool
        {
            if (depth == vectors.size())
                return true;
            for (std::size_t c = 0; c < options[depth].size(); ++c) {
                if (++nodes > budget) {
                    out_of_budget = true;
                    return false;
                }
                bool ok = true;
                for (auto j : earlier[depth])
                    if (hamming(options[depth][c], options[j][choice[j]]) > max_cost) {
                        ok = false;
                        break;
                    }
                if (! ok)
                    continue;
                choice[depth] = c;
                if (run(depth + 1))
                    return true;
                if (out_of_budget)
                    return false;
            }
            return false;
        }
    };
}

auto brute_force(int n, int k, bool subsets_only, int max_cost, std::uint64_t budget) -> std::optional<BruteResult>
{
    Brute b;
    b.vectors = demand_vectors(n, k, subsets_only);
    b.max_cost = max_cost;
    b.budget = budget;
    for (std::size_t i = 0; i < b.vectors.size(); ++i) {
        b.options.push_back(arrangements(b.vectors[i]));
        b.earlier.emplace_back();
        for (std::size_t j = 0; j < i; ++j)
            if (l1(b.vectors[i], b.vectors[j]) == 2)
                b.earlier.back().push_back(j);
    }
    b.choice.assign(b.vectors.size(), 0);
    BruteResult r;
    r.feasible = b.run(0);
    r.nodes = b.nodes;
    if (b.out_of_budget)
        return std::nullopt;
    if (r.feasible)
        for (std::size_t i = 0; i < b.vectors.size(); ++i)
            r.table[b.vectors[i]] = b.options[i][b.choice[i]];
    return r;
}

auto frozen_by_scan(const LocalFamily & family) -> std::map<TaskId, AgentId>
{
    std::map<TaskId, AgentId> out;
    for (auto c : family.anchor()) {
        std::set<AgentId> seen;
        for (const auto & m : family.members()) {
            const auto & tasks = m.assignment.tasks();
            for (std::size_t a = 0; a < tasks.size(); ++a)
                if (tasks[a] == c)
                    seen.insert(static_cast<AgentId>(a));
        }
        if (seen.size() == 1)
            out[c] = *seen.begin();
    }
    return out;
}

auto semi_freezes_by_search(const LocalFamily & family) -> std::vector<std::pair<AgentId, std::map<TaskId, AgentId>>>
{
    const int n = family.n();
    const auto & anchor = family.anchor();
    std::vector<std::pair<AgentId, std::map<TaskId, AgentId>>> out;
    std::vector<int> slots(static_cast<std::size_t>(n));
    std::iota(slots.begin(), slots.end(), 0);
    // slots[0] is the wildcard, slots[1..] the images of the anchor in order
    do {
        std::map<TaskId, AgentId> h;
        for (std::size_t i = 0; i < anchor.size(); ++i)
            h[anchor[i]] = slots[i + 1];
        bool ok = true;
        for (const auto & m : family.members())
            for (auto c : anchor)
                if (m.assignment[h[c]] != c && m.assignment[slots[0]] != c)
                    ok = false;
        if (ok)
            out.emplace_back(slots[0], h);
    } while (std::next_permutation(slots.begin(), slots.end()));
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

    auto member_sets(int k, const CharSet & anchor, int members) -> std::vector<TaskId>
    {
        std::vector<TaskId> ext;
        for (TaskId c = 0; c < k && static_cast<int>(ext.size()) < members; ++c)
            if (! std::binary_search(anchor.begin(), anchor.end(), c))
                ext.push_back(c);
        return ext;
    }
}

auto random_family(std::mt19937_64 & rng, int k, const CharSet & anchor, int members) -> LocalFamily
{
    std::vector<FamilyMember> out;
    for (auto x : member_sets(k, anchor, members)) {
        auto word = anchor;
        word.push_back(x);
        std::shuffle(word.begin(), word.end(), rng);
        out.push_back({ x, Assignment(word) });
    }
    return LocalFamily(k, anchor, std::move(out));
}

auto planted_frozen_family(std::mt19937_64 & rng, int k, const CharSet & anchor, const std::map<TaskId, AgentId> & g,
    int members) -> LocalFamily
{
    const int n = static_cast<int>(anchor.size()) + 1;
    std::vector<FamilyMember> out;
    for (auto x : member_sets(k, anchor, members)) {
        std::vector<TaskId> word(static_cast<std::size_t>(n), -1);
        std::vector<TaskId> rest;
        for (auto c : anchor)
            if (auto it = g.find(c); it != g.end())
                word[static_cast<std::size_t>(it->second)] = c;
            else
                rest.push_back(c);
        rest.push_back(x);
        std::shuffle(rest.begin(), rest.end(), rng);
        auto next = rest.begin();
        for (auto & w : word)
            if (w < 0)
                w = *next++;
        out.push_back({ x, Assignment(word) });
    }
    return LocalFamily(k, anchor, std::move(out));
}

namespace {

    auto family_from_rows(const std::vector<std::vector<TaskId>> & rows) -> LocalFamily
    {
        // rows are listed for the extensions 4..9 in order
        std::vector<FamilyMember> members;
        for (std::size_t i = 0; i < rows.size(); ++i)
            members.push_back({ static_cast<TaskId>(4 + i), Assignment(rows[i]) });
        return LocalFamily(10, { 0, 1, 2, 3 }, std::move(members));
    }
}

auto figure_config1_family() -> LocalFamily
{
    // a, b fixed at agents 0 and 1; c and d each visit agents 2, 3 and 4
    return family_from_rows({
        { 0, 1, 2, 3, 4 },
        { 0, 1, 3, 2, 5 },
        { 0, 1, 6, 2, 3 },
        { 0, 1, 2, 7, 3 },
        { 0, 1, 3, 8, 2 },
        { 0, 1, 9, 3, 2 },
    });
}

auto figure_config2_family() -> LocalFamily
{
    // each member sends one anchor character to agent 4
    return family_from_rows({
        { 4, 1, 2, 3, 0 },
        { 0, 5, 2, 3, 1 },
        { 0, 1, 6, 3, 2 },
        { 0, 1, 2, 7, 3 },
        { 8, 1, 2, 3, 0 },
        { 0, 9, 2, 3, 1 },
    });
}

auto small_example_table(bool low_distortion) -> AllocationTable
{
    AllocationTable t(ProblemInstance { 3, 2, Regime::FullMultiset });
    t.set(DemandVector({ 3, 0 }), Assignment({ 0, 0, 0 }));
    t.set(DemandVector({ 2, 1 }), Assignment({ 0, 1, 0 }));
    t.set(DemandVector({ 1, 2 }), low_distortion ? Assignment({ 1, 1, 0 }) : Assignment({ 1, 0, 1 }));
    t.set(DemandVector({ 0, 3 }), Assignment({ 1, 1, 1 }));
    return t;
}

auto random_table(std::mt19937_64 & rng, const ProblemInstance & instance) -> AllocationTable
{
    AllocationTable t(instance);
    for (std::size_t i = 0; i < t.size(); ++i) {
        auto word = to_multiset(t.space().vector(i));
        std::shuffle(word.begin(), word.end(), rng);
        t.set(i, Assignment(word));
    }
    return t;
}

} // namespace oracle
