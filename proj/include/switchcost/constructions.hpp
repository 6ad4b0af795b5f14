#pragma once

#include "switchcost/model.hpp"

#include <map>
#include <vector>

namespace switchcost {

/// Agents fill tasks 0..k-1 in order of increasing agent index. A unit move
/// from task i to task j costs at most |i - j|.
[[nodiscard]] auto ordered_assignment(const DemandVector & v) -> Assignment;
[[nodiscard]] auto ordered_construction(const ProblemInstance & instance) -> AllocationTable;

/// Consecutive blocks of n/(k-1) agents, one block per non-special task in
/// increasing task order.
struct GroupScheme
{
    int n = 0;
    int k = 0;
    TaskId special = 0;
    std::map<TaskId, std::vector<AgentId>> groups;

    [[nodiscard]] auto capacity() const -> int { return n / (k - 1); }
    /// Every non-special task has demand <= capacity().
    [[nodiscard]] auto contains(const DemandVector & v) const -> bool;
};

/// Throws InvalidInputError unless k >= 2 and (k-1) divides n.
[[nodiscard]] auto make_group_scheme(const ProblemInstance & instance, TaskId special) -> GroupScheme;

/// Each non-special task takes the lowest-indexed agents of its group; every
/// other agent goes to the special task. Throws DomainError outside S_i.
[[nodiscard]] auto group_assignment(const GroupScheme & scheme, const DemandVector & v) -> Assignment;

/// Partial table over the vectors where every non-special demand fits its group.
[[nodiscard]] auto group_construction(const ProblemInstance & instance, TaskId special) -> AllocationTable;

} // namespace switchcost
