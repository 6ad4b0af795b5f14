#pragma once

// Replays adjacent demand changes against a table.
//
// Random walks draw from std::mt19937_64 seeded with the walk seed. A move
// is chosen uniformly among the ordered pairs (s, t), s != t, whose moved
// vector has an entry, by rejection sampling on the raw 64-bit output, so a
// seed gives the same walk on every platform.

#include "switchcost/model.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <random>
#include <vector>

#include <json.hpp>

namespace switchcost {

struct Move
{
    TaskId source = 0;
    TaskId target = 0;

    friend auto operator==(const Move &, const Move &) -> bool = default;
};

struct Trace
{
    DemandVector start;
    std::vector<Move> moves;
    std::optional<std::uint64_t> seed;

    friend auto operator==(const Trace &, const Trace &) -> bool = default;
};

struct AgentMove
{
    AgentId agent = 0;
    TaskId from = 0;
    TaskId to = 0;

    friend auto operator==(const AgentMove &, const AgentMove &) -> bool = default;
};

struct StepRecord
{
    DemandVector before;
    DemandVector after;
    int cost = 0;
    std::vector<AgentMove> moved;

    friend auto operator==(const StepRecord &, const StepRecord &) -> bool = default;
};

/// Throws TraceError naming the step when a move has no demand at its
/// source, and DomainError when a visited vector has no entry.
[[nodiscard]] auto run_trace(const AllocationTable & table, const Trace & trace) -> std::vector<StepRecord>;

struct Walk
{
    Trace trace;
    std::vector<StepRecord> records;
};

/// Throws TraceError when the current vector has no applicable move.
[[nodiscard]] auto random_walk(const AllocationTable & table, const DemandVector & start, std::size_t steps,
    std::uint64_t seed) -> Walk;

/// Uniform integer in [0, bound), bound > 0: draws until x >= 2^64 mod bound,
/// then returns x mod bound.
[[nodiscard]] auto uniform_below(std::mt19937_64 & rng, std::uint64_t bound) -> std::uint64_t;

struct WalkStats
{
    std::size_t steps = 0;
    int max = 0;
    double mean = 0.0;
    std::map<int, std::uint64_t> histogram;
};

[[nodiscard]] auto walk_stats(const std::vector<StepRecord> & records) -> WalkStats;

/// Header "step,source,target,cost,moved"; moved agents as a
/// space-separated list of agent:from>to, all 0-indexed.
void write_records_csv(const std::vector<StepRecord> & records, std::ostream & out);

[[nodiscard]] auto trace_to_json(const Trace & trace) -> nlohmann::json;
[[nodiscard]] auto trace_from_json(const nlohmann::json & doc) -> Trace;
[[nodiscard]] auto records_to_json(const std::vector<StepRecord> & records) -> nlohmann::json;
[[nodiscard]] auto stats_to_json(const WalkStats & stats) -> nlohmann::json;

struct CompositeBoundReport
{
    int max_cost = 0;            ///< the table's maximum switching cost D
    std::uint64_t pairs = 0;     ///< unordered pairs of distinct present vectors
    std::uint64_t violations = 0;
    /// First violating pair in canonical order, if any.
    std::optional<std::pair<std::size_t, std::size_t>> first_violation;
};

/// Checks cost(v, v') <= D * l1(v, v') / 2 for every pair of present vectors.
[[nodiscard]] auto check_composite_bound(const AllocationTable & table, int threads = 0) -> CompositeBoundReport;

} // namespace switchcost
