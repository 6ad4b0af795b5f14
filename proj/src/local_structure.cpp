#include "switchcost/local_structure.hpp"

#include "set_system.hpp"
#include "switchcost/error.hpp"
#include "switchcost/parallel.hpp"

#include <algorithm>
#include <set>

#include <omp.h>

namespace switchcost {

namespace detail {

    SetSystem::SetSystem(std::vector<CharSet> sets, int max_cost) :
        sets_(std::move(sets))
    {
        if (sets_.empty())
            return;
        n_ = static_cast<int>(sets_.front().size());
        perm_count_ = 1;
        for (int i = 2; i <= n_; ++i)
            perm_count_ *= static_cast<std::size_t>(i);
        if (static_cast<std::uint64_t>(perm_count_) * sets_.size() > max_family_candidates)
            throw CapacityError("local search would scan more than " + std::to_string(max_family_candidates)
                + " candidate assignments");
        words_ = (perm_count_ + 63) / 64;
        auto compat_words = static_cast<std::uint64_t>(sets_.size()) * sets_.size() * perm_count_ * words_;
        if (compat_words > max_compatibility_words)
            throw CapacityError("local search would need " + std::to_string(compat_words)
                + " compatibility words, the limit is " + std::to_string(max_compatibility_words));

        perms_.reserve(sets_.size() * perm_count_ * static_cast<std::size_t>(n_));
        for (const auto & set : sets_) {
            if (static_cast<int>(set.size()) != n_)
                throw InvalidInputError("character sets must have equal size");
            auto current = set;
            do
                perms_.insert(perms_.end(), current.begin(), current.end());
            while (std::next_permutation(current.begin(), current.end()));
        }

        auto adjacent = [](const CharSet & a, const CharSet & b) {
            std::vector<TaskId> diff;
            std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(diff));
            return diff.size() == 2;
        };
        later_.resize(sets_.size());
        compat_.assign(sets_.size() * sets_.size() * perm_count_ * words_, 0);
        for (std::size_t s = 0; s < sets_.size(); ++s)
            for (std::size_t o = s + 1; o < sets_.size(); ++o) {
                if (! adjacent(sets_[s], sets_[o]))
                    continue;
                later_[s].push_back(o);
                for (std::size_t p = 0; p < perm_count_; ++p) {
                    Word * row = &compat_[((s * sets_.size() + o) * perm_count_ + p) * words_];
                    const auto * a = perm(s, p);
                    for (std::size_t q = 0; q < perm_count_; ++q) {
                        const auto * b = perm(o, q);
                        int d = 0;
                        for (int i = 0; i < n_; ++i)
                            d += a[i] != b[i];
                        if (d <= max_cost)
                            row[q / 64] |= Word{ 1 } << (q % 64);
                    }
                }
            }
    }

}

namespace {

    void check_charset(const CharSet & set, int k, const char * what)
    {
        for (std::size_t i = 0; i < set.size(); ++i) {
            if (set[i] < 0 || set[i] >= k)
                throw InvalidInputError(std::string(what) + " contains task " + std::to_string(set[i])
                    + " outside [0, " + std::to_string(k) + ")");
            if (i > 0 && set[i] <= set[i - 1])
                throw InvalidInputError(std::string(what) + " must be sorted without repeats");
        }
    }

    auto with(CharSet set, TaskId x) -> CharSet
    {
        set.insert(std::lower_bound(set.begin(), set.end(), x), x);
        return set;
    }

    auto canonical_anchor(const FamilyQuery & q) -> CharSet
    {
        if (q.n < 2 || q.k < q.n)
            throw InvalidInstanceError("local families need 2 <= n <= k, got n=" + std::to_string(q.n)
                + " k=" + std::to_string(q.k));
        if (q.anchor_size != q.n - 1)
            throw InvalidInputError("anchor size must be n-1");
        if (q.max_cost < 0)
            throw InvalidInputError("maximum switching cost must be non-negative");
        CharSet anchor;
        for (TaskId t = 0; t < q.n - 1; ++t)
            anchor.push_back(t);
        return anchor;
    }

    auto make_family(const detail::SetSystem & system, const CharSet & anchor, int k,
        const std::vector<std::uint32_t> & choice) -> LocalFamily
    {
        std::vector<FamilyMember> members;
        members.reserve(choice.size());
        for (std::size_t s = 0; s < choice.size(); ++s)
            members.push_back({ system.set(s).back(), system.assignment(s, choice[s]) });
        return LocalFamily(k, anchor, std::move(members));
    }
}

auto extensions(const CharSet & anchor, int k) -> std::vector<CharSet>
{
    check_charset(anchor, k, "anchor");
    std::vector<CharSet> out;
    for (TaskId x = 0; x < k; ++x)
        if (! std::binary_search(anchor.begin(), anchor.end(), x))
            out.push_back(with(anchor, x));
    return out;
}

LocalFamily::LocalFamily(int k, CharSet anchor, std::vector<FamilyMember> members) :
    k_(k),
    anchor_(std::move(anchor)),
    members_(std::move(members))
{
    check_charset(anchor_, k_, "anchor");
    for (std::size_t i = 0; i < members_.size(); ++i) {
        const auto & m = members_[i];
        if (m.extension < 0 || m.extension >= k_ || std::binary_search(anchor_.begin(), anchor_.end(), m.extension))
            throw InvalidInputError("member extension " + std::to_string(m.extension) + " is not outside the anchor");
        if (i > 0 && m.extension <= members_[i - 1].extension)
            throw InvalidInputError("members must be sorted by extension without repeats");
        auto sorted = m.assignment.tasks();
        std::sort(sorted.begin(), sorted.end());
        if (sorted != member_set(i))
            throw InvalidInputError("member assignment is not a permutation of its set");
    }
}

auto LocalFamily::member_set(std::size_t i) const -> CharSet { return with(anchor_, members_[i].extension); }

auto LocalFamily::position(std::size_t i, TaskId character) const -> AgentId
{
    const auto & tasks = members_[i].assignment.tasks();
    auto it = std::find(tasks.begin(), tasks.end(), character);
    return it == tasks.end() ? -1 : static_cast<AgentId>(it - tasks.begin());
}

auto LocalFamily::max_pairwise_cost() const -> int
{
    int best = 0;
    for (std::size_t i = 0; i < members_.size(); ++i)
        for (std::size_t j = i + 1; j < members_.size(); ++j)
            best = std::max(best, switching_cost(members_[i].assignment, members_[j].assignment));
    return best;
}

auto subset_vector(const CharSet & set, int k) -> DemandVector
{
    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    for (auto t : set)
        counts[static_cast<std::size_t>(t)] = 1;
    return DemandVector(std::move(counts));
}

auto family_from_table(const AllocationTable & table, const CharSet & anchor) -> LocalFamily
{
    auto k = table.instance().k;
    if (static_cast<int>(anchor.size()) + 1 != table.instance().n)
        throw InvalidInputError("anchor must have n-1 characters");
    std::vector<FamilyMember> members;
    for (const auto & set : extensions(anchor, k)) {
        auto x = *std::find_if(set.begin(), set.end(),
            [&](TaskId t) { return ! std::binary_search(anchor.begin(), anchor.end(), t); });
        members.push_back({ x, table.at(subset_vector(set, k)) });
    }
    return LocalFamily(k, anchor, std::move(members));
}

auto FreezeReport::frozen_set() const -> CharSet
{
    CharSet out;
    for (const auto & [c, i] : g)
        out.push_back(c);
    return out;
}

auto detect_freezing(const LocalFamily & family) -> FreezeReport
{
    FreezeReport report;
    if (family.members().empty())
        return report;
    for (auto c : family.anchor()) {
        auto at = family.position(0, c);
        bool frozen = true;
        for (std::size_t i = 1; i < family.members().size() && frozen; ++i)
            frozen = family.position(i, c) == at;
        if (frozen)
            report.g[c] = at;
    }
    return report;
}

auto all_semi_freezes(const LocalFamily & family) -> std::vector<SemiFreezeReport>
{
    std::vector<SemiFreezeReport> out;
    const auto n = family.n();
    if (static_cast<int>(family.anchor().size()) != n - 1)
        return out;
    for (AgentId w = 0; w < n; ++w) {
        SemiFreezeReport report;
        report.wildcard = w;
        std::vector<bool> used(static_cast<std::size_t>(n), false);
        used[static_cast<std::size_t>(w)] = true;
        std::vector<TaskId> unplaced;
        bool ok = true;
        for (auto c : family.anchor()) {
            std::set<AgentId> seen;
            for (std::size_t i = 0; i < family.members().size(); ++i)
                if (auto at = family.position(i, c); at != w)
                    seen.insert(at);
            if (seen.size() > 1 || (seen.size() == 1 && used[static_cast<std::size_t>(*seen.begin())])) {
                ok = false;
                break;
            }
            if (seen.empty())
                unplaced.push_back(c);
            else {
                report.h[c] = *seen.begin();
                used[static_cast<std::size_t>(*seen.begin())] = true;
            }
        }
        if (! ok)
            continue;
        // characters always at the wildcard take the free indices in order
        AgentId next = 0;
        for (auto c : unplaced) {
            while (used[static_cast<std::size_t>(next)])
                ++next;
            report.h[c] = next;
            used[static_cast<std::size_t>(next)] = true;
        }
        out.push_back(std::move(report));
    }
    return out;
}

auto detect_semi_freeze(const LocalFamily & family) -> std::optional<SemiFreezeReport>
{
    auto all = all_semi_freezes(family);
    if (all.empty())
        return std::nullopt;
    return all.front();
}

auto to_string(Configuration c) -> std::string_view
{
    switch (c) {
    case Configuration::Config1:
        return "config1";
    case Configuration::Config2:
        return "config2";
    case Configuration::Both:
        return "both";
    case Configuration::Neither:
        break;
    }
    return "neither";
}

auto classify_config(const LocalFamily & family) -> ConfigReport
{
    ConfigReport report;
    report.freeze = detect_freezing(family);
    report.semi_freeze = detect_semi_freeze(family);
    bool one = static_cast<int>(report.freeze.g.size()) >= family.n() - 3;
    bool two = report.semi_freeze.has_value();
    report.configuration = one && two ? Configuration::Both
        : one                         ? Configuration::Config1
        : two                         ? Configuration::Config2
                                      : Configuration::Neither;
    return report;
}

void for_each_local_family(const FamilyQuery & query, const std::function<void(const LocalFamily &)> & visit)
{
    auto anchor = canonical_anchor(query);
    detail::SetSystem system(extensions(anchor, query.k), query.max_cost);
    for (std::size_t p = 0; p < system.perm_count() && system.set_count() > 0; ++p)
        system.visit_prefix({ static_cast<std::uint32_t>(p) }, [&](const std::vector<std::uint32_t> & choice) {
            visit(make_family(system, anchor, query.k, choice));
        });
}

auto enumerate_local_families_serial(const FamilyQuery & query) -> std::vector<LocalFamily>
{
    std::vector<LocalFamily> out;
    for_each_local_family(query, [&](const LocalFamily & f) { out.push_back(f); });
    return out;
}

auto enumerate_local_families(const FamilyQuery & query, int threads) -> std::vector<LocalFamily>
{
    auto anchor = canonical_anchor(query);
    detail::SetSystem system(extensions(anchor, query.k), query.max_cost);
    if (system.set_count() == 0)
        return {};

    auto blocks = static_cast<long>(system.perm_count());
    std::vector<std::vector<LocalFamily>> parts(system.perm_count());
#pragma omp parallel for schedule(dynamic, 1) num_threads(resolve_threads(threads))
    for (long p = 0; p < blocks; ++p)
        system.visit_prefix({ static_cast<std::uint32_t>(p) }, [&](const std::vector<std::uint32_t> & choice) {
            parts[static_cast<std::size_t>(p)].push_back(make_family(system, anchor, query.k, choice));
        });

    std::vector<LocalFamily> out;
    for (auto & part : parts)
        std::move(part.begin(), part.end(), std::back_inserter(out));
    return out;
}

auto family_to_json(const LocalFamily & family) -> nlohmann::json
{
    auto members = nlohmann::json::array();
    for (std::size_t i = 0; i < family.members().size(); ++i)
        members.push_back(
            { { "set", family.member_set(i) }, { "assignment", family.members()[i].assignment.tasks() } });
    return { { "k", family.k() }, { "anchor", family.anchor() }, { "members", members } };
}

auto family_from_json(const nlohmann::json & doc) -> LocalFamily
{
    try {
        auto k = doc.at("k").get<int>();
        auto anchor = doc.at("anchor").get<CharSet>();
        std::vector<FamilyMember> members;
        for (const auto & m : doc.at("members")) {
            auto set = m.at("set").get<CharSet>();
            std::vector<TaskId> extra;
            std::set_difference(set.begin(), set.end(), anchor.begin(), anchor.end(), std::back_inserter(extra));
            if (extra.size() != 1 || set.size() != anchor.size() + 1)
                throw InvalidInputError("member set must add exactly one character to the anchor");
            members.push_back({ extra.front(), Assignment(m.at("assignment").get<std::vector<TaskId>>()) });
        }
        return LocalFamily(k, std::move(anchor), std::move(members));
    }
    catch (const Error &) {
        throw;
    }
    catch (const std::exception & e) {
        throw LoadError(std::string("malformed family document: ") + e.what());
    }
}

} // namespace switchcost
