#include "switchcost/task_types.hpp"

#include "switchcost/error.hpp"
#include "switchcost/table_io.hpp"

#include <algorithm>
#include <array>
#include <set>

namespace switchcost {

namespace {

    constexpr std::array<std::pair<TableLemma, std::string_view>, 7> names{ {
        { TableLemma::Dest2, "dest2" },
        { TableLemma::Sw1, "sw1" },
        { TableLemma::Tech, "tech" },
        { TableLemma::Ss, "ss" },
        { TableLemma::One2, "one2" },
        { TableLemma::All2int, "all2int" },
        { TableLemma::Ind, "ind" },
    } };

    auto move_json(const AllocationTable & table, std::size_t index, const MoveOutcome & m) -> nlohmann::json
    {
        nlohmann::json doc = { { "from", table.space().vector(index).counts() },
            { "to", table.space().vector(m.to_index).counts() }, { "source", m.source }, { "target", m.target },
            { "cost", m.cost }, { "moved", m.moved } };
        if (m.intermediate)
            doc["intermediate"] = *m.intermediate;
        if (m.intermediate_agent)
            doc["intermediate_agent"] = *m.intermediate_agent;
        return doc;
    }

    auto vector_json(const AllocationTable & table, std::size_t index) -> nlohmann::json
    {
        return { { "demand", table.space().vector(index).counts() }, { "assignment", table.entry(index)->tasks() } };
    }
}

auto to_string(TaskType type) -> std::string_view
{
    switch (type) {
    case TaskType::Type1:
        return "type1";
    case TaskType::Type2:
        return "type2";
    case TaskType::Unclassified:
        break;
    }
    return "unclassified";
}

TaskClassifier::TaskClassifier(const AllocationTable & table, Unchecked) :
    table_(&table)
{
}

TaskClassifier::TaskClassifier(const AllocationTable & table) :
    table_(&table)
{
    auto report = max_switching_cost(table);
    if (report.max_cost > 2)
        throw PreconditionError("task types need maximum switching cost <= 2, table has "
            + std::to_string(report.max_cost));
}

auto TaskClassifier::unchecked(const AllocationTable & table) -> TaskClassifier
{
    return TaskClassifier(table, Unchecked{});
}

auto TaskClassifier::move(std::size_t index, TaskId source, TaskId target) const -> std::optional<MoveOutcome>
{
    const auto & v = table_->space().vector(index);
    if (! table_->has(index) || source == target || v[source] == 0)
        return std::nullopt;
    auto to = table_->space().rank(v.moved(source, target));
    if (! to || ! table_->has(*to))
        return std::nullopt;

    const auto & a = *table_->entry(index);
    const auto & b = *table_->entry(*to);
    MoveOutcome m;
    m.source = source;
    m.target = target;
    m.to_index = *to;
    m.moved = moved_agents(a, b);
    m.cost = static_cast<int>(m.moved.size());
    if (m.cost == 1)
        m.source_agent = m.moved.front();
    else if (m.cost == 2) {
        for (auto agent : m.moved) {
            if (a[agent] == source)
                m.source_agent = agent;
            else if (b[agent] == target)
                m.intermediate_agent = agent;
        }
        if (m.source_agent && m.intermediate_agent && b[*m.source_agent] == a[*m.intermediate_agent])
            m.intermediate = b[*m.source_agent];
        else
            m.source_agent.reset(), m.intermediate_agent.reset();
    }
    return m;
}

auto TaskClassifier::moves_into(std::size_t index, TaskId task) const -> std::vector<MoveOutcome>
{
    std::vector<MoveOutcome> out;
    for (TaskId s = 0; s < table_->instance().k; ++s)
        if (auto m = move(index, s, task))
            out.push_back(std::move(*m));
    return out;
}

auto TaskClassifier::is_type1(std::size_t index, TaskId task) const -> bool
{
    auto moves = moves_into(index, task);
    return std::all_of(moves.begin(), moves.end(), [](const MoveOutcome & m) { return m.cost == 1; });
}

auto TaskClassifier::type2_agent(std::size_t index, TaskId task, TaskId intermediate) const -> std::optional<AgentId>
{
    if (intermediate == task)
        return std::nullopt;
    std::optional<AgentId> agent;
    for (const auto & m : moves_into(index, task)) {
        if (m.source == intermediate)
            continue;
        if (m.cost != 2 || m.intermediate != intermediate)
            return std::nullopt;
        if (agent && *agent != *m.intermediate_agent)
            return std::nullopt;
        agent = m.intermediate_agent;
    }
    return agent;
}

auto TaskClassifier::nonempty_besides(std::size_t index, TaskId task) const -> int
{
    const auto & v = table_->space().vector(index);
    return v.nonempty_tasks() - (v[task] > 0 ? 1 : 0);
}

auto TaskClassifier::classify(std::size_t index, TaskId task) const -> TaskClassification
{
    if (! table_->has(index))
        throw DomainError("demand vector " + format_counts(table_->space().vector(index)) + " has no entry");
    auto moves = moves_into(index, task);
    if (std::all_of(moves.begin(), moves.end(), [](const MoveOutcome & m) { return m.cost == 1; }))
        return { TaskType::Type1, -1, -1, "" };
    if (nonempty_besides(index, task) < 3)
        return { TaskType::Unclassified, -1, -1, "ambiguous-intermediate" };
    std::set<TaskId> candidates;
    for (const auto & m : moves)
        if (m.intermediate)
            candidates.insert(*m.intermediate);
    for (auto i : candidates)
        if (auto agent = type2_agent(index, task, i))
            return { TaskType::Type2, i, *agent, "" };
    return { TaskType::Unclassified, -1, -1, "mixed" };
}

auto classify_task(const AllocationTable & table, const DemandVector & v, TaskId task) -> TaskClassification
{
    return TaskClassifier(table).classify(table.space().index_of(v), task);
}

auto classify_task_unchecked(const AllocationTable & table, const DemandVector & v, TaskId task)
    -> TaskClassification
{
    return TaskClassifier::unchecked(table).classify(table.space().index_of(v), task);
}

auto classify_all(const AllocationTable & table) -> TaskTypeReport
{
    TaskClassifier classifier(table);
    TaskTypeReport report;
    for (std::size_t i = 0; i < table.size(); ++i) {
        if (! table.has(i))
            continue;
        for (TaskId t = 0; t < table.instance().k; ++t) {
            auto c = classifier.classify(i, t);
            switch (c.type) {
            case TaskType::Type1:
                ++report.type1;
                break;
            case TaskType::Type2:
                ++report.type2;
                break;
            case TaskType::Unclassified:
                ++(c.reason == "mixed" ? report.mixed : report.ambiguous);
                break;
            }
            report.entries.push_back({ i, t, std::move(c) });
        }
    }
    return report;
}

auto task_report_to_json(const AllocationTable & table, const TaskTypeReport & report) -> nlohmann::json
{
    auto entries = nlohmann::json::array();
    for (const auto & e : report.entries) {
        nlohmann::json doc = { { "demand", table.space().vector(e.index).counts() }, { "task", e.task },
            { "type", std::string(to_string(e.classification.type)) } };
        if (e.classification.type == TaskType::Type2) {
            doc["intermediate"] = e.classification.intermediate;
            doc["agent"] = e.classification.agent;
        }
        if (! e.classification.reason.empty())
            doc["reason"] = e.classification.reason;
        entries.push_back(std::move(doc));
    }
    return { { "instance", instance_to_json(table.instance()) },
        { "counts",
            { { "type1", report.type1 }, { "type2", report.type2 }, { "ambiguous", report.ambiguous },
                { "mixed", report.mixed } } },
        { "entries", entries } };
}

auto to_string(TableLemma lemma) -> std::string_view
{
    for (const auto & [l, name] : names)
        if (l == lemma)
            return name;
    return "unknown";
}

auto is_table_lemma(std::string_view name) -> bool
{
    return std::any_of(names.begin(), names.end(), [&](const auto & e) { return e.second == name; });
}

auto parse_table_lemma(std::string_view name) -> TableLemma
{
    for (const auto & [l, text] : names)
        if (text == name)
            return l;
    throw InvalidInputError("unknown table lemma '" + std::string(name) + "'");
}

auto required_tasks(TableLemma lemma) -> int
{
    switch (lemma) {
    case TableLemma::Dest2:
    case TableLemma::Sw1:
    case TableLemma::Tech:
        return 4;
    default:
        return 5;
    }
}

namespace {

    class LemmaRun
    {
    public:
        LemmaRun(const TaskClassifier & c, TableLemma lemma, PropertyReport & report) :
            c_(c),
            t_(c.table()),
            k_(c.table().instance().k),
            vacuous_(k_ < required_tasks(lemma)),
            report_(report)
        {
        }

        void run(TableLemma lemma)
        {
            for (std::size_t v = 0; v < t_.size(); ++v) {
                switch (lemma) {
                case TableLemma::Dest2:
                    dest2(v);
                    break;
                case TableLemma::Sw1:
                    sw1(v);
                    break;
                case TableLemma::Tech:
                    tech(v);
                    break;
                case TableLemma::Ss:
                    ss(v);
                    break;
                case TableLemma::One2:
                    one2(v);
                    break;
                case TableLemma::All2int:
                    all2int(v);
                    break;
                case TableLemma::Ind:
                    ind(v);
                    break;
                }
            }
        }

    private:
        // Records an instance whose conclusion is `ok`; the witness is built
        // only on failure.
        template <class Witness>
        void record(bool ok, Witness && witness)
        {
            if (vacuous_)
                report_.record_vacuous();
            else if (ok)
                report_.record_pass();
            else
                report_.record_failure(witness());
        }

        [[nodiscard]] auto demand(std::size_t v) const -> const DemandVector & { return t_.space().vector(v); }

        void dest2(std::size_t v)
        {
            for (TaskId t = 0; t < k_; ++t)
                for (const auto & first : c_.moves_into(v, t)) {
                    if (first.cost != 2 || ! first.intermediate)
                        continue;
                    auto i = *first.intermediate;
                    for (const auto & second : c_.moves_into(v, t)) {
                        if (second.source == first.source || second.source == i)
                            continue;
                        bool ok = second.cost == 2 && second.intermediate == i
                            && second.intermediate_agent == first.intermediate_agent;
                        record(ok, [&] {
                            return nlohmann::json{ { "vector", vector_json(t_, v) },
                                { "first", move_json(t_, v, first) }, { "second", move_json(t_, v, second) } };
                        });
                    }
                }
        }

        // (t, i, agent) with t type 2 through i at v
        [[nodiscard]] auto type2_pairs(std::size_t v) const -> std::vector<std::tuple<TaskId, TaskId, AgentId>>
        {
            std::vector<std::tuple<TaskId, TaskId, AgentId>> out;
            for (TaskId t = 0; t < k_; ++t)
                for (TaskId i = 0; i < k_; ++i)
                    if (auto a = c_.type2_agent(v, t, i))
                        out.emplace_back(t, i, *a);
            return out;
        }

        [[nodiscard]] auto nonempty_outside(std::size_t v, TaskId a, TaskId b) const -> int
        {
            int count = 0;
            for (TaskId s = 0; s < k_; ++s)
                count += s != a && s != b && demand(v)[s] > 0;
            return count;
        }

        void sw1(std::size_t v)
        {
            for (auto [t, i, agent] : type2_pairs(v)) {
                if (nonempty_outside(v, t, i) < 2)
                    continue;
                auto m = c_.move(v, i, t);
                if (! m)
                    continue;
                record(m->cost == 1, [&] {
                    return nlohmann::json{ { "vector", vector_json(t_, v) }, { "task", t }, { "intermediate", i },
                        { "agent", agent }, { "move", move_json(t_, v, *m) } };
                });
            }
        }

        void tech(std::size_t v)
        {
            if (demand(v).nonempty_tasks() < 4)
                return;
            for (auto [t, i, agent] : type2_pairs(v))
                record(c_.is_type1(v, i), [&] {
                    auto moves = nlohmann::json::array();
                    for (const auto & m : c_.moves_into(v, i))
                        moves.push_back(move_json(t_, v, m));
                    return nlohmann::json{ { "vector", vector_json(t_, v) }, { "task", t }, { "intermediate", i },
                        { "moves_into_intermediate", moves } };
                });
        }

        void ss(std::size_t v)
        {
            for (TaskId s = 0; s < k_; ++s)
                for (TaskId t1 = 0; t1 < k_; ++t1)
                    for (TaskId t2 = t1 + 1; t2 < k_; ++t2) {
                        auto m1 = c_.move(v, s, t1);
                        auto m2 = c_.move(v, s, t2);
                        if (! m1 || ! m2 || ! m1->intermediate || ! m2->intermediate)
                            continue;
                        std::set<TaskId> tasks{ s, t1, t2, *m1->intermediate, *m2->intermediate };
                        record(tasks.size() < 5, [&] {
                            return nlohmann::json{ { "vector", vector_json(t_, v) }, { "first", move_json(t_, v, *m1) },
                                { "second", move_json(t_, v, *m2) } };
                        });
                    }
        }

        void one2(std::size_t v)
        {
            if (demand(v).nonempty_tasks() < 2)
                return;
            record(! type2_pairs(v).empty(), [&] { return nlohmann::json{ { "vector", vector_json(t_, v) } }; });
        }

        void all2int(std::size_t v)
        {
            if (demand(v).nonempty_tasks() < 4)
                return;
            std::vector<TaskId> type1;
            for (TaskId t = 0; t < k_; ++t)
                if (c_.is_type1(v, t))
                    type1.push_back(t);
            record(type1.size() <= 1,
                [&] { return nlohmann::json{ { "vector", vector_json(t_, v) }, { "type1_tasks", type1 } }; });
        }

        void ind(std::size_t v)
        {
            if (demand(v).nonempty_tasks() < 4)
                return;
            bool found = false;
            for (auto [t, i, agent] : type2_pairs(v)) {
                if (c_.nonempty_besides(v, t) < 4)
                    continue;
                auto m = c_.move(v, i, t);
                if (! m)
                    continue;
                found = true;
                auto after = c_.type2_agent(m->to_index, t, i);
                record(after.has_value(), [&] {
                    return nlohmann::json{ { "vector", vector_json(t_, v) }, { "task", t }, { "intermediate", i },
                        { "after", vector_json(t_, m->to_index) } };
                });
            }
            if (! found)
                record(false, [&] {
                    return nlohmann::json{ { "vector", vector_json(t_, v) },
                        { "reason", "no type 2 task with four other non-empty tasks" } };
                });
        }

        const TaskClassifier & c_;
        const AllocationTable & t_;
        int k_;
        bool vacuous_;
        PropertyReport & report_;
    };
}

auto check_table_lemma(const AllocationTable & table, TableLemma lemma, const TableLemmaOptions & options)
    -> PropertyReport
{
    if (! table.is_total())
        throw PreconditionError("table lemmas need a total table");
    auto classifier = options.check_cost ? TaskClassifier(table) : TaskClassifier::unchecked(table);
    PropertyReport report;
    report.property = std::string(to_string(lemma));
    report.n = table.instance().n;
    report.k = table.instance().k;
    LemmaRun(classifier, lemma, report).run(lemma);
    return report;
}

} // namespace switchcost
