#include "switchcost/constructions.hpp"

#include "switchcost/error.hpp"

namespace switchcost {

auto ordered_assignment(const DemandVector & v) -> Assignment
{
    std::vector<TaskId> tasks;
    tasks.reserve(static_cast<std::size_t>(v.total()));
    for (TaskId t = 0; t < v.k(); ++t)
        tasks.insert(tasks.end(), static_cast<std::size_t>(v[t]), t);
    return Assignment(std::move(tasks));
}

auto ordered_construction(const ProblemInstance & instance) -> AllocationTable
{
    AllocationTable table(instance);
    for (std::size_t i = 0; i < table.size(); ++i)
        table.set(i, ordered_assignment(table.space().vector(i)));
    return table;
}

auto GroupScheme::contains(const DemandVector & v) const -> bool
{
    if (v.k() != k || v.total() != n)
        return false;
    for (TaskId t = 0; t < k; ++t)
        if (t != special && v[t] > capacity())
            return false;
    return true;
}

auto make_group_scheme(const ProblemInstance & instance, TaskId special) -> GroupScheme
{
    instance.validate();
    if (instance.k < 2)
        throw InvalidInputError("group construction needs at least two tasks");
    if (instance.n % (instance.k - 1) != 0)
        throw InvalidInputError("group construction needs (k-1) | n, got n=" + std::to_string(instance.n)
            + " k=" + std::to_string(instance.k));
    if (special < 0 || special >= instance.k)
        throw InvalidInputError("special task " + std::to_string(special) + " out of range");

    GroupScheme scheme{ instance.n, instance.k, special, {} };
    AgentId next = 0;
    for (TaskId t = 0; t < instance.k; ++t) {
        if (t == special)
            continue;
        auto & group = scheme.groups[t];
        for (int j = 0; j < scheme.capacity(); ++j)
            group.push_back(next++);
    }
    return scheme;
}

auto group_assignment(const GroupScheme & scheme, const DemandVector & v) -> Assignment
{
    if (! scheme.contains(v))
        throw DomainError("demand vector " + format_counts(v) + " is outside the group construction's domain");
    std::vector<TaskId> tasks(static_cast<std::size_t>(scheme.n), scheme.special);
    for (const auto & [task, group] : scheme.groups)
        for (int j = 0; j < v[task]; ++j)
            tasks[static_cast<std::size_t>(group[static_cast<std::size_t>(j)])] = task;
    return Assignment(std::move(tasks));
}

auto group_construction(const ProblemInstance & instance, TaskId special) -> AllocationTable
{
    auto scheme = make_group_scheme(instance, special);
    AllocationTable table(instance);
    for (std::size_t i = 0; i < table.size(); ++i)
        if (const auto & v = table.space().vector(i); scheme.contains(v))
            table.set(i, group_assignment(scheme, v));
    return table;
}

} // namespace switchcost
