#pragma once

// Exact feasibility search for a target maximum switching cost.
//
// Demand vectors are assigned in canonical order; the candidates at each
// vector are the distinct permutations of its multiset in lexicographic
// order. The first complete table found is therefore the lexicographically
// least table with maximum switching cost <= D, once pruning is restricted
// to branches that cannot contain that table:
//
//  * forward checking removes, from every later neighbour, the candidates
//    whose Hamming distance to the new assignment exceeds D;
//  * agents a < b that have performed the same task at every vector assigned
//    so far are interchangeable, and the lexicographically least table places
//    them with tasks[a] <= tasks[b] at the first vector where they split.
//    At the first vector this fixes the sorted permutation.
//
// The parallel search splits the tree at a fixed depth and solves the
// subtrees independently, keeping the lowest-ordered success. Verdict,
// witness and statistics are identical to the serial search for any number
// of workers.

#include "switchcost/model.hpp"

#include <cstdint>
#include <optional>
#include <vector>

#include <json.hpp>

namespace switchcost {

enum class Verdict { Feasible, Infeasible };

struct SolveStats
{
    std::uint64_t nodes_expanded = 0; ///< placements tried, counted as the serial search would
    int max_depth = 0;                ///< most vectors assigned at once
    bool exhaustive = false;          ///< the whole (reduced) space was covered

    friend auto operator==(const SolveStats &, const SolveStats &) -> bool = default;
};

struct SolveOutcome
{
    ProblemInstance instance;
    int max_cost = 0;
    Verdict verdict = Verdict::Infeasible;
    std::optional<AllocationTable> witness;
    SolveStats stats;
};

struct SolveOptions
{
    int threads = 0; ///< <= 0 means resolve_threads(0)
};

/// Candidate permutations above this total are refused with CapacityError.
inline constexpr std::uint64_t max_candidate_permutations = 5'000'000;
inline constexpr std::uint64_t max_compatibility_bits = std::uint64_t{ 1 } << 31;

[[nodiscard]] auto feasible(const ProblemInstance & instance, int max_cost, const SolveOptions & options = {})
    -> SolveOutcome;

/// Plain recursive search with no splitting; the reference for feasible().
[[nodiscard]] auto feasible_serial(const ProblemInstance & instance, int max_cost) -> SolveOutcome;

struct MinDistortionResult
{
    int min_cost = 0;
    AllocationTable witness;
    std::vector<SolveOutcome> attempts; ///< one per D tried, witnesses dropped
};

/// Tries D = 0, 1, ... up to min(k-1, n); the ordered construction makes
/// k-1 always feasible.
[[nodiscard]] auto min_max_distortion(const ProblemInstance & instance, const SolveOptions & options = {})
    -> MinDistortionResult;

/// Re-checks a Feasible outcome with core-model operations only.
[[nodiscard]] auto verify_witness(const SolveOutcome & outcome) -> bool;

[[nodiscard]] auto outcome_to_json(const SolveOutcome & outcome) -> nlohmann::json;
[[nodiscard]] auto outcome_from_json(const nlohmann::json & doc) -> SolveOutcome;

[[nodiscard]] auto to_string(Verdict verdict) -> std::string_view;

} // namespace switchcost
