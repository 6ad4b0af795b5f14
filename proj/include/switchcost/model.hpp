#pragma once

// Problem instances, demand vectors, assignments and allocation tables.
//
// Tasks and agents are 0-indexed everywhere in code and in files. Human
// facing output adds one.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace switchcost {

using TaskId = int;
using AgentId = int;

enum class Regime {
    FullMultiset, ///< every composition of n into k non-negative parts
    SubsetOnly    ///< only demands in {0, 1}; requires n <= k
};

[[nodiscard]] auto to_string(Regime regime) -> std::string_view;
[[nodiscard]] auto parse_regime(std::string_view text) -> Regime;

/// Refuse to materialise more demand vectors than this.
inline constexpr std::uint64_t max_demand_vectors = 10'000'000;

struct ProblemInstance
{
    int n = 1;
    int k = 1;
    Regime regime = Regime::FullMultiset;

    /// Throws InvalidInstanceError.
    void validate() const;

    /// C(n+k-1, k-1) or C(k, n), saturating at UINT64_MAX.
    [[nodiscard]] auto vector_count() const -> std::uint64_t;

    friend auto operator==(const ProblemInstance &, const ProblemInstance &) -> bool = default;
};

[[nodiscard]] auto binomial(std::uint64_t n, std::uint64_t r) -> std::uint64_t;

class DemandVector
{
public:
    DemandVector() = default;
    explicit DemandVector(std::vector<int> counts);

    [[nodiscard]] auto counts() const -> const std::vector<int> & { return counts_; }
    [[nodiscard]] auto k() const -> int { return static_cast<int>(counts_.size()); }
    [[nodiscard]] auto total() const -> int;
    [[nodiscard]] auto operator[](TaskId task) const -> int { return counts_[static_cast<std::size_t>(task)]; }
    [[nodiscard]] auto nonempty_tasks() const -> int;

    /// Moves one unit of demand from `source` to `target`.
    [[nodiscard]] auto moved(TaskId source, TaskId target) const -> DemandVector;

    [[nodiscard]] auto belongs_to(const ProblemInstance & instance) const -> bool;

    friend auto operator<=>(const DemandVector &, const DemandVector &) = default;

private:
    std::vector<int> counts_;
};

[[nodiscard]] auto l1_distance(const DemandVector & a, const DemandVector & b) -> int;

/// tasks()[a] is the task agent a performs.
class Assignment
{
public:
    Assignment() = default;
    explicit Assignment(std::vector<TaskId> tasks);

    [[nodiscard]] auto tasks() const -> const std::vector<TaskId> & { return tasks_; }
    [[nodiscard]] auto n() const -> int { return static_cast<int>(tasks_.size()); }
    [[nodiscard]] auto operator[](AgentId agent) const -> TaskId { return tasks_[static_cast<std::size_t>(agent)]; }

    [[nodiscard]] auto task_counts(int k) const -> std::vector<int>;
    [[nodiscard]] auto satisfies(const DemandVector & demand) const -> bool;

    friend auto operator<=>(const Assignment &, const Assignment &) = default;

private:
    std::vector<TaskId> tasks_;
};

/// Hamming distance. Throws InvalidInputError on length mismatch.
[[nodiscard]] auto switching_cost(const Assignment & a, const Assignment & b) -> int;
[[nodiscard]] auto moved_agents(const Assignment & a, const Assignment & b) -> std::vector<AgentId>;

/// Sorted sequence of task ids.
using Multiset = std::vector<TaskId>;

[[nodiscard]] auto to_multiset(const DemandVector & v) -> Multiset;
[[nodiscard]] auto from_multiset(const Multiset & m, int k) -> DemandVector;
[[nodiscard]] auto symmetric_difference_size(Multiset a, Multiset b) -> int;

struct AdjacencyWitness
{
    TaskId source = 0;
    TaskId target = 0;
    DemandVector from;
    DemandVector to;
};

[[nodiscard]] auto adjacency(const DemandVector & from, const DemandVector & to) -> std::optional<AdjacencyWitness>;

/// All regime members reachable by one unit move, ordered by (source, target).
[[nodiscard]] auto neighbors(const ProblemInstance & instance, const DemandVector & v)
    -> std::vector<std::pair<AdjacencyWitness, DemandVector>>;

/// Lexicographic order on counts.
[[nodiscard]] auto enumerate_demand_vectors(const ProblemInstance & instance) -> std::vector<DemandVector>;

/// Canonical enumeration of one instance with ranking and adjacency.
class DemandSpace
{
public:
    explicit DemandSpace(ProblemInstance instance);

    [[nodiscard]] static auto make(ProblemInstance instance) -> std::shared_ptr<const DemandSpace>;

    [[nodiscard]] auto instance() const -> const ProblemInstance & { return instance_; }
    [[nodiscard]] auto size() const -> std::size_t { return vectors_.size(); }
    [[nodiscard]] auto vector(std::size_t index) const -> const DemandVector & { return vectors_[index]; }
    [[nodiscard]] auto vectors() const -> const std::vector<DemandVector> & { return vectors_; }

    /// Position in canonical order, or nullopt when v is not a member.
    [[nodiscard]] auto rank(const DemandVector & v) const -> std::optional<std::size_t>;
    /// As rank(), but throws DomainError.
    [[nodiscard]] auto index_of(const DemandVector & v) const -> std::size_t;

    struct Neighbor
    {
        TaskId source;
        TaskId target;
        std::size_t index;
    };

    [[nodiscard]] auto neighbors(std::size_t index) const -> std::vector<Neighbor>;

private:
    ProblemInstance instance_;
    std::vector<DemandVector> vectors_;
    // completions_[slots][total]: members of the tail with `slots` entries summing to `total`
    std::vector<std::vector<std::uint64_t>> completions_;
};

/// Map from demand vectors to assignments. A table may be partial; a
/// partial table's domain is the set of vectors that have an entry.
class AllocationTable
{
public:
    explicit AllocationTable(std::shared_ptr<const DemandSpace> space);
    explicit AllocationTable(const ProblemInstance & instance);

    [[nodiscard]] auto space() const -> const DemandSpace & { return *space_; }
    [[nodiscard]] auto shared_space() const -> const std::shared_ptr<const DemandSpace> & { return space_; }
    [[nodiscard]] auto instance() const -> const ProblemInstance & { return space_->instance(); }
    [[nodiscard]] auto size() const -> std::size_t { return entries_.size(); }

    void set(std::size_t index, Assignment assignment);
    void set(const DemandVector & v, Assignment assignment);
    void erase(std::size_t index);

    [[nodiscard]] auto has(std::size_t index) const -> bool { return entries_[index].has_value(); }
    [[nodiscard]] auto entry(std::size_t index) const -> const std::optional<Assignment> & { return entries_[index]; }
    /// Throws DomainError when v has no entry.
    [[nodiscard]] auto at(const DemandVector & v) const -> const Assignment &;
    [[nodiscard]] auto find(const DemandVector & v) const -> const Assignment *;

    [[nodiscard]] auto is_total() const -> bool;
    [[nodiscard]] auto present_count() const -> std::size_t;

    friend auto operator==(const AllocationTable & a, const AllocationTable & b) -> bool;

private:
    std::shared_ptr<const DemandSpace> space_;
    std::vector<std::optional<Assignment>> entries_;
};

struct ValidationReport
{
    bool total = true;
    std::vector<std::size_t> missing;   ///< indices with no entry
    std::vector<std::size_t> violating; ///< indices whose assignment misses the demand

    /// Total and every entry satisfies its demand.
    [[nodiscard]] auto valid() const -> bool { return total && violating.empty(); }
    /// Every present entry satisfies its demand.
    [[nodiscard]] auto valid_partial() const -> bool { return violating.empty(); }
};

[[nodiscard]] auto validate_table(const AllocationTable & table) -> ValidationReport;

struct CostWitness
{
    AdjacencyWitness adjacency;
    std::size_t from_index = 0;
    std::size_t to_index = 0;
    std::vector<AgentId> moved;
};

struct DistortionReport
{
    int max_cost = 0;
    std::optional<CostWitness> witness;
};

/// Exact maximum over adjacent pairs of present entries. The witness is the
/// attaining pair with the smallest (from, to) indices, from < to. Throws
/// ValidationError when an entry violates its demand. `threads` <= 0 means
/// the configured default; the result does not depend on it.
[[nodiscard]] auto max_switching_cost(const AllocationTable & table, int threads = 0) -> DistortionReport;
/// Single-threaded reference for max_switching_cost.
[[nodiscard]] auto max_switching_cost_serial(const AllocationTable & table) -> DistortionReport;

/// Entries supported on the first `k2` tasks, truncated to length k2.
[[nodiscard]] auto restrict_tasks(const AllocationTable & table, int k2) -> AllocationTable;
/// Entries of a full-regime table whose demands are all 0/1.
[[nodiscard]] auto restrict_to_subsets(const AllocationTable & table) -> AllocationTable;

/// "[2,0,1]" with 0-indexed counts in order.
[[nodiscard]] auto format_counts(const DemandVector & v) -> std::string;
/// "1,3,1" style, tasks printed 1-indexed.
[[nodiscard]] auto format_assignment_human(const Assignment & a) -> std::string;

} // namespace switchcost
