#pragma once

// Consistency of freezing maps across anchors and the irregular-pair count.
//
// For an anchor Q of size n-2, G_Q merges g_R over R in U_Q. T_Q collects
// the characters of Q whose semi-freezing index is the same for every R in
// U_Q, and h'_Q records that index. For P of size n-3, H_P merges h'_Q over
// Q in U_P.

#include "switchcost/local_structure.hpp"

#include <cstdint>
#include <map>
#include <vector>

#include <json.hpp>

namespace switchcost {

using IndexMap = std::map<TaskId, AgentId>;

struct MapConflict
{
    TaskId character = 0;
    CharSet first_anchor;
    AgentId first_index = 0;
    CharSet second_anchor;
    AgentId second_index = 0;

    friend auto operator==(const MapConflict &, const MapConflict &) -> bool = default;
};

/// Union of maps keyed by their anchors. A character with two different
/// values is left out of `values` and reported once per disagreeing pair
/// with its first occurrence.
struct MapUnion
{
    CharSet anchor;
    IndexMap values;
    std::vector<MapConflict> conflicts;

    [[nodiscard]] auto consistent() const -> bool { return conflicts.empty(); }
};

[[nodiscard]] auto union_maps(const CharSet & anchor, const std::map<CharSet, IndexMap> & parts) -> MapUnion;

struct ConsistencyMaps
{
    CharSet anchor; ///< Q
    MapUnion g;     ///< G_Q
    bool all_semi_frozen = false;
    IndexMap h_prime; ///< h'_Q on T_Q; empty unless every family is semi-frozen

    [[nodiscard]] auto t_set() const -> CharSet;
};

/// `families` are the families of the members of U_Q for one Q; Q is the
/// intersection of their anchors. Semi-freezing maps are the canonical ones.
[[nodiscard]] auto build_consistency_maps(const std::vector<LocalFamily> & families) -> ConsistencyMaps;

/// H_P from the h'_Q of every Q in U_P present in `maps`.
[[nodiscard]] auto build_projected_map(const CharSet & p, const std::vector<ConsistencyMaps> & maps) -> MapUnion;

/// G_Q for every Q of size n-2 in [k] from a table holding every 0/1 vector.
[[nodiscard]] auto consistency_maps_from_table(const AllocationTable & table) -> std::vector<ConsistencyMaps>;

/// Each anchor of size `size` inside [universe], in lexicographic order.
[[nodiscard]] auto subsets_of_size(int universe, int size) -> std::vector<CharSet>;

/// For every anchor of size `size` in [universe], the union of those parts
/// whose anchor extends it by one character.
[[nodiscard]] auto unions_over_anchors(int universe, int size, const std::map<CharSet, IndexMap> & parts)
    -> std::vector<MapUnion>;

enum class CountingStep { FreezeStep, SemiFreezeStep };

[[nodiscard]] auto to_string(CountingStep step) -> std::string_view;

struct IrregularCount
{
    std::uint64_t observed = 0;
    std::uint64_t upper_bound = 0; ///< 2 C(k', n-2) or 3 C(k', n-3)
    std::uint64_t lower_bound = 0; ///< (n-3) C(k', n-1) or (n-4) C(k', n-2)
};

/// Pairs (anchor, c) with c defined in the union and c outside the anchor.
[[nodiscard]] auto count_irregular_pairs(CountingStep step, const std::vector<MapUnion> & maps, int n, int k_prime)
    -> IrregularCount;

/// The two bounds alone.
[[nodiscard]] auto irregular_pair_bounds(CountingStep step, int n, int k_prime) -> IrregularCount;

/// upper < lower, the counting contradiction.
[[nodiscard]] auto counting_contradiction(CountingStep step, int n, int k_prime) -> bool;

/// The closed-form threshold: k'(n-3) > n^2-3n+4 with n >= 4, or
/// k'(n-4) > n^2-4n+6 with n >= 5.
[[nodiscard]] auto threshold_condition(CountingStep step, int n, int k_prime) -> bool;

[[nodiscard]] auto map_union_to_json(const MapUnion & u) -> nlohmann::json;

} // namespace switchcost
