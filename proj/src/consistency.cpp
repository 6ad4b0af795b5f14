#include "switchcost/consistency.hpp"

#include "switchcost/error.hpp"

#include <algorithm>
#include <set>

namespace switchcost {

namespace {

    auto contains(const CharSet & set, TaskId c) -> bool { return std::binary_search(set.begin(), set.end(), c); }

    auto is_extension(const CharSet & small, const CharSet & big) -> bool
    {
        return big.size() == small.size() + 1 && std::includes(big.begin(), big.end(), small.begin(), small.end());
    }

    void subsets(int universe, int size, int from, CharSet & current, std::vector<CharSet> & out)
    {
        if (static_cast<int>(current.size()) == size) {
            out.push_back(current);
            return;
        }
        for (int c = from; c < universe; ++c) {
            current.push_back(c);
            subsets(universe, size, c + 1, current, out);
            current.pop_back();
        }
    }
}

auto union_maps(const CharSet & anchor, const std::map<CharSet, IndexMap> & parts) -> MapUnion
{
    MapUnion out;
    out.anchor = anchor;
    std::map<TaskId, std::pair<CharSet, AgentId>> first;
    std::set<TaskId> broken;
    for (const auto & [part_anchor, map] : parts)
        for (const auto & [c, index] : map) {
            auto it = first.find(c);
            if (it == first.end()) {
                first.emplace(c, std::make_pair(part_anchor, index));
                continue;
            }
            if (it->second.second != index) {
                out.conflicts.push_back({ c, it->second.first, it->second.second, part_anchor, index });
                broken.insert(c);
            }
        }
    for (const auto & [c, where] : first)
        if (! broken.contains(c))
            out.values[c] = where.second;
    return out;
}

auto ConsistencyMaps::t_set() const -> CharSet
{
    CharSet out;
    for (const auto & [c, i] : h_prime)
        out.push_back(c);
    return out;
}

auto build_consistency_maps(const std::vector<LocalFamily> & families) -> ConsistencyMaps
{
    ConsistencyMaps out;
    if (families.empty())
        return out;

    out.anchor = families.front().anchor();
    for (const auto & f : families) {
        CharSet common;
        std::set_intersection(out.anchor.begin(), out.anchor.end(), f.anchor().begin(), f.anchor().end(),
            std::back_inserter(common));
        out.anchor = std::move(common);
    }
    std::map<CharSet, IndexMap> freezes;
    for (const auto & f : families) {
        if (! is_extension(out.anchor, f.anchor()))
            throw InvalidInputError("family anchors must each add one character to a common anchor");
        if (! freezes.emplace(f.anchor(), detect_freezing(f).g).second)
            throw InvalidInputError("two families share an anchor");
    }
    out.g = union_maps(out.anchor, freezes);

    std::vector<SemiFreezeReport> semi;
    for (const auto & f : families) {
        auto s = detect_semi_freeze(f);
        if (! s)
            return out;
        semi.push_back(std::move(*s));
    }
    out.all_semi_frozen = true;
    for (auto c : out.anchor) {
        auto index = semi.front().h.at(c);
        if (std::all_of(semi.begin(), semi.end(), [&](const SemiFreezeReport & s) { return s.h.at(c) == index; }))
            out.h_prime[c] = index;
    }
    return out;
}

auto build_projected_map(const CharSet & p, const std::vector<ConsistencyMaps> & maps) -> MapUnion
{
    std::map<CharSet, IndexMap> parts;
    for (const auto & m : maps)
        if (is_extension(p, m.anchor))
            parts.emplace(m.anchor, m.h_prime);
    return union_maps(p, parts);
}

auto consistency_maps_from_table(const AllocationTable & table) -> std::vector<ConsistencyMaps>
{
    const auto n = table.instance().n;
    const auto k = table.instance().k;
    if (n < 2 || n > k)
        throw InvalidInputError("consistency maps need 2 <= n <= k");
    std::vector<ConsistencyMaps> out;
    for (const auto & q : subsets_of_size(k, n - 2)) {
        std::vector<LocalFamily> families;
        for (const auto & r : extensions(q, k))
            families.push_back(family_from_table(table, r));
        out.push_back(build_consistency_maps(families));
    }
    return out;
}

auto subsets_of_size(int universe, int size) -> std::vector<CharSet>
{
    std::vector<CharSet> out;
    if (size < 0 || size > universe)
        return out;
    CharSet current;
    subsets(universe, size, 0, current, out);
    return out;
}

auto unions_over_anchors(int universe, int size, const std::map<CharSet, IndexMap> & parts) -> std::vector<MapUnion>
{
    std::vector<MapUnion> out;
    for (const auto & anchor : subsets_of_size(universe, size)) {
        std::map<CharSet, IndexMap> relevant;
        for (const auto & [a, map] : parts)
            if (is_extension(anchor, a))
                relevant.emplace(a, map);
        out.push_back(union_maps(anchor, relevant));
    }
    return out;
}

auto to_string(CountingStep step) -> std::string_view
{
    return step == CountingStep::FreezeStep ? "freeze" : "semi-freeze";
}

auto irregular_pair_bounds(CountingStep step, int n, int k_prime) -> IrregularCount
{
    if (n < 3 || k_prime < 1)
        throw InvalidInputError("irregular-pair bounds need n >= 3 and k' >= 1");
    auto kp = static_cast<std::uint64_t>(k_prime);
    auto un = static_cast<std::uint64_t>(n);
    IrregularCount c;
    if (step == CountingStep::FreezeStep) {
        c.upper_bound = 2 * binomial(kp, un - 2);
        c.lower_bound = (un - 3) * binomial(kp, un - 1);
    }
    else {
        c.upper_bound = 3 * binomial(kp, un - 3);
        c.lower_bound = n >= 4 ? (un - 4) * binomial(kp, un - 2) : 0;
    }
    return c;
}

auto count_irregular_pairs(CountingStep step, const std::vector<MapUnion> & maps, int n, int k_prime) -> IrregularCount
{
    auto c = irregular_pair_bounds(step, n, k_prime);
    for (const auto & m : maps)
        for (const auto & [ch, index] : m.values)
            if (! contains(m.anchor, ch))
                ++c.observed;
    return c;
}

auto counting_contradiction(CountingStep step, int n, int k_prime) -> bool
{
    auto c = irregular_pair_bounds(step, n, k_prime);
    return c.upper_bound < c.lower_bound;
}

auto threshold_condition(CountingStep step, int n, int k_prime) -> bool
{
    auto kp = static_cast<long long>(k_prime);
    auto nn = static_cast<long long>(n);
    if (step == CountingStep::FreezeStep)
        return n >= 4 && kp * (nn - 3) > nn * nn - 3 * nn + 4;
    return n >= 5 && kp * (nn - 4) > nn * nn - 4 * nn + 6;
}

auto map_union_to_json(const MapUnion & u) -> nlohmann::json
{
    auto values = nlohmann::json::object();
    for (const auto & [c, i] : u.values)
        values[std::to_string(c)] = i;
    auto conflicts = nlohmann::json::array();
    for (const auto & c : u.conflicts)
        conflicts.push_back({ { "character", c.character }, { "first_anchor", c.first_anchor },
            { "first_index", c.first_index }, { "second_anchor", c.second_anchor },
            { "second_index", c.second_index } });
    return { { "anchor", u.anchor }, { "values", values }, { "conflicts", conflicts } };
}

} // namespace switchcost
