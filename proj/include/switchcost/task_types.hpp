#pragma once

// Task types of a table whose adjacent pairs cost at most 2.
//
// A unit move from s to t with cost 2 sends one agent from s to some task i
// and another from i to t; i is the intermediate task and the second agent
// is (i,t)-mobile. A task t is type 1 at v when every move into t costs 1,
// and type 2 with intermediate i and agent a when every move into t from a
// non-empty task other than i costs 2 through i with (i,t)-mobile agent a.
// Moves that leave a partial table's domain are skipped.

#include "switchcost/model.hpp"
#include "switchcost/report.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace switchcost {

struct MoveOutcome
{
    TaskId source = 0;
    TaskId target = 0;
    std::size_t to_index = 0;
    int cost = 0;
    std::vector<AgentId> moved;
    std::optional<TaskId> intermediate; ///< present for cost-2 moves
    std::optional<AgentId> source_agent;      ///< (s,i)-mobile, or the single mover of a cost-1 move
    std::optional<AgentId> intermediate_agent; ///< (i,t)-mobile
};

enum class TaskType { Type1, Type2, Unclassified };

struct TaskClassification
{
    TaskType type = TaskType::Unclassified;
    TaskId intermediate = -1;
    AgentId agent = -1;
    std::string reason; ///< "ambiguous-intermediate" or "mixed" when unclassified

    friend auto operator==(const TaskClassification &, const TaskClassification &) -> bool = default;
};

[[nodiscard]] auto to_string(TaskType type) -> std::string_view;

/// Answers type questions about one table. The checked constructor throws
/// PreconditionError when some adjacent pair costs more than 2 and
/// ValidationError when an entry misses its demand.
class TaskClassifier
{
public:
    explicit TaskClassifier(const AllocationTable & table);
    static auto unchecked(const AllocationTable & table) -> TaskClassifier;

    [[nodiscard]] auto table() const -> const AllocationTable & { return *table_; }

    /// nullopt when v or the moved vector has no entry, or v[source] = 0.
    [[nodiscard]] auto move(std::size_t index, TaskId source, TaskId target) const -> std::optional<MoveOutcome>;
    /// Every move into `task` from a non-empty task, by source.
    [[nodiscard]] auto moves_into(std::size_t index, TaskId task) const -> std::vector<MoveOutcome>;

    [[nodiscard]] auto is_type1(std::size_t index, TaskId task) const -> bool;
    /// The intermediate agent when `task` is type 2 with intermediate i at v.
    /// Requires at least one qualifying source move.
    [[nodiscard]] auto type2_agent(std::size_t index, TaskId task, TaskId intermediate) const -> std::optional<AgentId>;

    /// Type 1 first; with fewer than three non-empty tasks besides `task`
    /// the intermediate is ambiguous; otherwise type 2 or "mixed".
    [[nodiscard]] auto classify(std::size_t index, TaskId task) const -> TaskClassification;

    [[nodiscard]] auto nonempty_besides(std::size_t index, TaskId task) const -> int;

private:
    struct Unchecked
    {
    };
    TaskClassifier(const AllocationTable & table, Unchecked);

    const AllocationTable * table_;
};

[[nodiscard]] auto classify_task(const AllocationTable & table, const DemandVector & v, TaskId task)
    -> TaskClassification;
/// Skips the cost precondition, for tables built to violate it.
[[nodiscard]] auto classify_task_unchecked(const AllocationTable & table, const DemandVector & v, TaskId task)
    -> TaskClassification;

struct TaskTypeEntry
{
    std::size_t index = 0;
    TaskId task = 0;
    TaskClassification classification;
};

struct TaskTypeReport
{
    std::vector<TaskTypeEntry> entries; ///< every present vector and task
    std::size_t type1 = 0;
    std::size_t type2 = 0;
    std::size_t ambiguous = 0;
    std::size_t mixed = 0;
};

[[nodiscard]] auto classify_all(const AllocationTable & table) -> TaskTypeReport;
[[nodiscard]] auto task_report_to_json(const AllocationTable & table, const TaskTypeReport & report)
    -> nlohmann::json;

// dest2    cost-2 move (s1,t) through i: every move (s2,t), s2 not i,
//          costs 2 through i with the same (i,t)-mobile agent
// sw1      t type 2 through i, demand in two tasks outside {t,i}: the move
//          (i,t) costs 1
// tech     at least four non-empty tasks, t type 2 through i: i is type 1
// ss       cost-2 moves (s,t1) through i1 and (s,t2) through i2: the five
//          tasks are not all distinct
// one2     at least two non-empty tasks: some task is type 2
// all2int  at least four non-empty tasks: at most one task is type 1
// ind      at least four non-empty tasks: some t is type 2 with four other
//          non-empty tasks, and for every such t and intermediate i the
//          move (i,t) keeps t type 2 through i
//
// dest2, sw1 and tech need four distinct tasks, the others five; with
// fewer tasks every instance is recorded as vacuous.
enum class TableLemma { Dest2, Sw1, Tech, Ss, One2, All2int, Ind };

[[nodiscard]] auto to_string(TableLemma lemma) -> std::string_view;
[[nodiscard]] auto parse_table_lemma(std::string_view name) -> TableLemma;
[[nodiscard]] auto is_table_lemma(std::string_view name) -> bool;
[[nodiscard]] auto required_tasks(TableLemma lemma) -> int;

struct TableLemmaOptions
{
    bool check_cost = true; ///< false skips the cost <= 2 precondition
};

/// The table must be total. Throws PreconditionError otherwise or when the
/// cost check fails.
[[nodiscard]] auto check_table_lemma(const AllocationTable & table, TableLemma lemma,
    const TableLemmaOptions & options = {}) -> PropertyReport;

} // namespace switchcost
