#pragma once

// Independent oracles and fixtures shared by the tests. Nothing here calls
// the library's search or enumeration code.

#include "switchcost/local_structure.hpp"
#include "switchcost/model.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <vector>

namespace oracle {

using switchcost::AgentId;
using switchcost::TaskId;

/// Every k-tuple over [0, n] summing to n, filtered by regime, sorted.
auto demand_vectors(int n, int k, bool subsets_only) -> std::vector<std::vector<int>>;

auto l1(const std::vector<int> & a, const std::vector<int> & b) -> int;
auto hamming(const std::vector<int> & a, const std::vector<int> & b) -> int;

/// All distinct arrangements of a vector's multiset, sorted.
auto arrangements(const std::vector<int> & counts) -> std::vector<std::vector<int>>;

struct BruteResult
{
    bool feasible = false;
    std::map<std::vector<int>, std::vector<int>> table;
    std::uint64_t nodes = 0;
};

/// Plain backtracking over every arrangement of every vector, no symmetry
/// reduction. Gives up (nullopt) beyond `budget` nodes.
auto brute_force(int n, int k, bool subsets_only, int max_cost, std::uint64_t budget = 50'000'000)
    -> std::optional<BruteResult>;

/// Characters whose agent is the same in every member, by scanning each
/// character's set of positions.
auto frozen_by_scan(const switchcost::LocalFamily & family) -> std::map<TaskId, AgentId>;

/// Every (wildcard, h) pair satisfying the semi-freeze definition, found by
/// trying all injective h.
auto semi_freezes_by_search(const switchcost::LocalFamily & family)
    -> std::vector<std::pair<AgentId, std::map<TaskId, AgentId>>>;

/// Family over `anchor` whose assignments are random permutations.
auto random_family(std::mt19937_64 & rng, int k, const switchcost::CharSet & anchor, int members)
    -> switchcost::LocalFamily;

/// Family in which every character of `frozen` sits at the agent given by
/// `g` in every member and the rest are shuffled.
auto planted_frozen_family(std::mt19937_64 & rng, int k, const switchcost::CharSet & anchor,
    const std::map<TaskId, AgentId> & g, int members) -> switchcost::LocalFamily;

/// The two local families drawn for n = 5, k = 10, R = {a,b,c,d}: the first
/// freezes {a,b} only, the second is semi-frozen and freezes nothing.
auto figure_config1_family() -> switchcost::LocalFamily;
auto figure_config2_family() -> switchcost::LocalFamily;
/// Wildcard agent of figure_config2_family.
inline constexpr AgentId figure_config2_wildcard = 4;

/// The table for n = 3, k = 2 assigning aaa, aba, bab, bbb.
auto small_example_table(bool low_distortion = false) -> switchcost::AllocationTable;

/// A total table for `instance` with a random valid assignment everywhere.
auto random_table(std::mt19937_64 & rng, const switchcost::ProblemInstance & instance) -> switchcost::AllocationTable;

} // namespace oracle
