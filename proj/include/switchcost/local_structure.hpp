#pragma once

// Local families in the subset regime. For an anchor R of size n-1, the
// family holds one assignment for each S = R + {x}. Agents are the
// "indices" of a family and tasks are its "characters".

#include "switchcost/model.hpp"

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include <json.hpp>

namespace switchcost {

/// Sorted, duplicate-free set of task ids.
using CharSet = std::vector<TaskId>;

/// Every superset of `anchor` inside [k] with one more element, in order of
/// the added element.
[[nodiscard]] auto extensions(const CharSet & anchor, int k) -> std::vector<CharSet>;

struct FamilyMember
{
    TaskId extension = 0; ///< the member is anchor + {extension}
    Assignment assignment;

    friend auto operator==(const FamilyMember &, const FamilyMember &) -> bool = default;
};

class LocalFamily
{
public:
    /// Members must be sorted by extension, each extension outside the anchor,
    /// and each assignment a permutation of its member set. Throws
    /// InvalidInputError otherwise.
    LocalFamily(int k, CharSet anchor, std::vector<FamilyMember> members);

    [[nodiscard]] auto k() const -> int { return k_; }
    [[nodiscard]] auto n() const -> int { return static_cast<int>(anchor_.size()) + 1; }
    [[nodiscard]] auto anchor() const -> const CharSet & { return anchor_; }
    [[nodiscard]] auto members() const -> const std::vector<FamilyMember> & { return members_; }
    [[nodiscard]] auto member_set(std::size_t i) const -> CharSet;
    /// Agent holding `character` in member i; -1 when absent.
    [[nodiscard]] auto position(std::size_t i, TaskId character) const -> AgentId;
    /// Largest Hamming distance between two members, 0 for fewer than two.
    [[nodiscard]] auto max_pairwise_cost() const -> int;

    friend auto operator==(const LocalFamily &, const LocalFamily &) -> bool = default;

private:
    int k_;
    CharSet anchor_;
    std::vector<FamilyMember> members_;
};

/// The family of `anchor` read from a table. The table must hold every 0/1
/// demand vector of the family, in either regime.
[[nodiscard]] auto family_from_table(const AllocationTable & table, const CharSet & anchor) -> LocalFamily;

/// Subset demand vector of a character set.
[[nodiscard]] auto subset_vector(const CharSet & set, int k) -> DemandVector;

struct FreezeReport
{
    std::map<TaskId, AgentId> g; ///< frozen character -> its fixed agent

    [[nodiscard]] auto frozen_set() const -> CharSet;
    friend auto operator==(const FreezeReport &, const FreezeReport &) -> bool = default;
};

struct SemiFreezeReport
{
    std::map<TaskId, AgentId> h;
    AgentId wildcard = 0;

    friend auto operator==(const SemiFreezeReport &, const SemiFreezeReport &) -> bool = default;
};

/// The maximal frozen set: characters of the anchor held by the same agent
/// in every member.
[[nodiscard]] auto detect_freezing(const LocalFamily & family) -> FreezeReport;

/// Every valid (h, w) pair ordered by wildcard. For a fixed wildcard the
/// semi-freezing map is unique.
[[nodiscard]] auto all_semi_freezes(const LocalFamily & family) -> std::vector<SemiFreezeReport>;

/// The valid pair with the smallest wildcard, if any.
[[nodiscard]] auto detect_semi_freeze(const LocalFamily & family) -> std::optional<SemiFreezeReport>;

enum class Configuration { Config1, Config2, Both, Neither };

[[nodiscard]] auto to_string(Configuration c) -> std::string_view;

struct ConfigReport
{
    Configuration configuration = Configuration::Neither;
    FreezeReport freeze;
    std::optional<SemiFreezeReport> semi_freeze;
};

/// Config1 when at least n-3 characters are frozen, Config2 when semi-frozen.
[[nodiscard]] auto classify_config(const LocalFamily & family) -> ConfigReport;

/// Candidate scans above this size are refused with CapacityError.
inline constexpr std::uint64_t max_family_candidates = 10'000'000;
/// Pairwise compatibility bitsets above this many 64-bit words are refused too.
inline constexpr std::uint64_t max_compatibility_words = std::uint64_t { 1 } << 27;

struct FamilyQuery
{
    int n = 3;
    int k = 5;
    int max_cost = 2;
    int anchor_size = 2; ///< must be n-1
};

/// Every family over the anchor {0..n-2} whose members are pairwise within
/// max_cost. Families come in lexicographic order of their member
/// assignments. `threads` <= 0 means the configured default.
[[nodiscard]] auto enumerate_local_families(const FamilyQuery & query, int threads = 0) -> std::vector<LocalFamily>;
[[nodiscard]] auto enumerate_local_families_serial(const FamilyQuery & query) -> std::vector<LocalFamily>;

/// Streams the same families as enumerate_local_families without storing them.
void for_each_local_family(const FamilyQuery & query, const std::function<void(const LocalFamily &)> & visit);

[[nodiscard]] auto family_to_json(const LocalFamily & family) -> nlohmann::json;
[[nodiscard]] auto family_from_json(const nlohmann::json & doc) -> LocalFamily;

} // namespace switchcost
