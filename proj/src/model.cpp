#include "switchcost/model.hpp"

#include "switchcost/error.hpp"
#include "switchcost/parallel.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>

#include <omp.h>

namespace switchcost {

namespace {

    constexpr auto saturated = std::numeric_limits<std::uint64_t>::max();

    auto saturating_add(std::uint64_t a, std::uint64_t b) -> std::uint64_t
    {
        return (a > saturated - b) ? saturated : a + b;
    }

    auto cap_for(Regime regime, int total) -> int
    {
        return regime == Regime::SubsetOnly ? std::min(total, 1) : total;
    }

    void enumerate_into(const ProblemInstance & inst, std::vector<int> & prefix, int remaining,
        std::vector<DemandVector> & out)
    {
        auto slot = static_cast<int>(prefix.size());
        if (slot == inst.k - 1) {
            if (remaining <= cap_for(inst.regime, inst.n)) {
                prefix.push_back(remaining);
                out.emplace_back(prefix);
                prefix.pop_back();
            }
            return;
        }
        for (int c = 0, cap = cap_for(inst.regime, remaining); c <= cap; ++c) {
            prefix.push_back(c);
            enumerate_into(inst, prefix, remaining - c, out);
            prefix.pop_back();
        }
    }

    // Strict "better" for the witness: higher cost, then lower indices.
    struct Best
    {
        int cost = -1;
        std::size_t from = 0, to = 0;
        TaskId source = 0, target = 0;

        [[nodiscard]] auto beats(const Best & other) const -> bool
        {
            if (cost != other.cost)
                return cost > other.cost;
            if (from != other.from)
                return from < other.from;
            return to < other.to;
        }
    };

    void check_entries(const AllocationTable & table)
    {
        auto report = validate_table(table);
        if (! report.valid_partial())
            throw ValidationError("table entry " + std::to_string(report.violating.front())
                + " does not satisfy its demand vector " + format_counts(table.space().vector(report.violating.front())));
    }

    void scan_from(const AllocationTable & table, std::size_t i, Best & best)
    {
        if (! table.has(i))
            return;
        const auto & a = *table.entry(i);
        for (const auto & nb : table.space().neighbors(i)) {
            if (nb.index < i || ! table.has(nb.index))
                continue;
            Best candidate{ switching_cost(a, *table.entry(nb.index)), i, nb.index, nb.source, nb.target };
            if (candidate.beats(best))
                best = candidate;
        }
    }

    auto finish_report(const AllocationTable & table, const Best & best) -> DistortionReport
    {
        DistortionReport report;
        if (best.cost < 0)
            return report;
        report.max_cost = best.cost;
        const auto & space = table.space();
        report.witness = CostWitness{
            AdjacencyWitness{ best.source, best.target, space.vector(best.from), space.vector(best.to) },
            best.from, best.to,
            moved_agents(*table.entry(best.from), *table.entry(best.to)) };
        return report;
    }
}

auto to_string(Regime regime) -> std::string_view
{
    return regime == Regime::SubsetOnly ? "subset" : "full";
}

auto parse_regime(std::string_view text) -> Regime
{
    if (text == "full")
        return Regime::FullMultiset;
    if (text == "subset")
        return Regime::SubsetOnly;
    throw InvalidInputError("unknown regime '" + std::string(text) + "' (expected full or subset)");
}

auto binomial(std::uint64_t n, std::uint64_t r) -> std::uint64_t
{
    if (r > n)
        return 0;
    r = std::min(r, n - r);
    std::uint64_t result = 1;
    for (std::uint64_t i = 1; i <= r; ++i) {
        // result * (n - r + i) / i stays integral at every step
        auto g = std::gcd(result, i);
        auto num = n - r + i;
        auto den = i / g;
        auto reduced = result / g;
        auto g2 = std::gcd(num, den);
        num /= g2;
        den /= g2;
        if (reduced > saturated / num)
            return saturated;
        result = reduced * num / den;
    }
    return result;
}

void ProblemInstance::validate() const
{
    if (n < 1)
        throw InvalidInstanceError("n must be positive, got " + std::to_string(n));
    if (k < 1)
        throw InvalidInstanceError("k must be positive, got " + std::to_string(k));
    if (regime == Regime::SubsetOnly && n > k)
        throw InvalidInstanceError("subset regime requires n <= k, got n=" + std::to_string(n)
            + " k=" + std::to_string(k));
}

auto ProblemInstance::vector_count() const -> std::uint64_t
{
    if (regime == Regime::SubsetOnly)
        return binomial(static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(n));
    return binomial(static_cast<std::uint64_t>(n + k - 1), static_cast<std::uint64_t>(k - 1));
}

DemandVector::DemandVector(std::vector<int> counts) :
    counts_(std::move(counts))
{
    if (counts_.empty())
        throw InvalidInputError("demand vector must have at least one task");
    for (auto c : counts_)
        if (c < 0)
            throw InvalidInputError("demand vector entries must be non-negative");
}

auto DemandVector::total() const -> int
{
    return std::accumulate(counts_.begin(), counts_.end(), 0);
}

auto DemandVector::nonempty_tasks() const -> int
{
    return static_cast<int>(std::count_if(counts_.begin(), counts_.end(), [](int c) { return c > 0; }));
}

auto DemandVector::moved(TaskId source, TaskId target) const -> DemandVector
{
    if (source < 0 || source >= k() || target < 0 || target >= k() || source == target)
        throw InvalidInputError("bad move " + std::to_string(source) + "->" + std::to_string(target));
    if (counts_[static_cast<std::size_t>(source)] == 0)
        throw InvalidInputError("no demand to move out of task " + std::to_string(source + 1));
    auto next = counts_;
    --next[static_cast<std::size_t>(source)];
    ++next[static_cast<std::size_t>(target)];
    return DemandVector(std::move(next));
}

auto DemandVector::belongs_to(const ProblemInstance & instance) const -> bool
{
    if (k() != instance.k || total() != instance.n)
        return false;
    if (instance.regime == Regime::SubsetOnly)
        return std::all_of(counts_.begin(), counts_.end(), [](int c) { return c <= 1; });
    return true;
}

auto l1_distance(const DemandVector & a, const DemandVector & b) -> int
{
    if (a.k() != b.k())
        throw InvalidInputError("demand vectors of different lengths");
    int d = 0;
    for (int i = 0; i < a.k(); ++i)
        d += std::abs(a[i] - b[i]);
    return d;
}

Assignment::Assignment(std::vector<TaskId> tasks) :
    tasks_(std::move(tasks))
{
    for (auto t : tasks_)
        if (t < 0)
            throw InvalidInputError("task ids must be non-negative");
}

auto Assignment::task_counts(int k) const -> std::vector<int>
{
    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    for (auto t : tasks_) {
        if (t >= k)
            throw InvalidInputError("task id " + std::to_string(t) + " out of range for k=" + std::to_string(k));
        ++counts[static_cast<std::size_t>(t)];
    }
    return counts;
}

auto Assignment::satisfies(const DemandVector & demand) const -> bool
{
    if (n() != demand.total())
        return false;
    std::vector<int> counts(static_cast<std::size_t>(demand.k()), 0);
    for (auto t : tasks_) {
        if (t >= demand.k())
            return false;
        ++counts[static_cast<std::size_t>(t)];
    }
    return counts == demand.counts();
}

auto switching_cost(const Assignment & a, const Assignment & b) -> int
{
    if (a.n() != b.n())
        throw InvalidInputError("assignments of different lengths (" + std::to_string(a.n()) + " vs "
            + std::to_string(b.n()) + ")");
    int d = 0;
    for (int i = 0; i < a.n(); ++i)
        d += a[i] != b[i];
    return d;
}

auto moved_agents(const Assignment & a, const Assignment & b) -> std::vector<AgentId>
{
    if (a.n() != b.n())
        throw InvalidInputError("assignments of different lengths");
    std::vector<AgentId> moved;
    for (int i = 0; i < a.n(); ++i)
        if (a[i] != b[i])
            moved.push_back(i);
    return moved;
}

auto to_multiset(const DemandVector & v) -> Multiset
{
    Multiset m;
    for (TaskId t = 0; t < v.k(); ++t)
        m.insert(m.end(), static_cast<std::size_t>(v[t]), t);
    return m;
}

auto from_multiset(const Multiset & m, int k) -> DemandVector
{
    if (k < 1)
        throw InvalidInputError("k must be positive");
    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    for (auto t : m) {
        if (t < 0 || t >= k)
            throw InvalidInputError("multiset element " + std::to_string(t) + " outside [0," + std::to_string(k) + ")");
        ++counts[static_cast<std::size_t>(t)];
    }
    return DemandVector(std::move(counts));
}

auto symmetric_difference_size(Multiset a, Multiset b) -> int
{
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    int size = 0;
    auto i = a.begin(), j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i == *j) {
            ++i;
            ++j;
        }
        else if (*i < *j) {
            ++size;
            ++i;
        }
        else {
            ++size;
            ++j;
        }
    }
    return size + static_cast<int>((a.end() - i) + (b.end() - j));
}

auto adjacency(const DemandVector & from, const DemandVector & to) -> std::optional<AdjacencyWitness>
{
    if (from.k() != to.k())
        throw InvalidInputError("demand vectors of different lengths");
    TaskId source = -1, target = -1;
    for (TaskId t = 0; t < from.k(); ++t) {
        auto diff = to[t] - from[t];
        if (diff == 0)
            continue;
        if (diff == -1 && source < 0)
            source = t;
        else if (diff == 1 && target < 0)
            target = t;
        else
            return std::nullopt;
    }
    if (source < 0 || target < 0)
        return std::nullopt;
    return AdjacencyWitness{ source, target, from, to };
}

auto neighbors(const ProblemInstance & instance, const DemandVector & v)
    -> std::vector<std::pair<AdjacencyWitness, DemandVector>>
{
    instance.validate();
    if (! v.belongs_to(instance))
        throw InvalidInputError("demand vector " + format_counts(v) + " is not a member of the instance");
    std::vector<std::pair<AdjacencyWitness, DemandVector>> result;
    for (TaskId s = 0; s < v.k(); ++s) {
        if (v[s] == 0)
            continue;
        for (TaskId t = 0; t < v.k(); ++t) {
            if (t == s || (instance.regime == Regime::SubsetOnly && v[t] > 0))
                continue;
            auto w = v.moved(s, t);
            result.emplace_back(AdjacencyWitness{ s, t, v, w }, w);
        }
    }
    return result;
}

auto enumerate_demand_vectors(const ProblemInstance & instance) -> std::vector<DemandVector>
{
    instance.validate();
    if (instance.vector_count() > max_demand_vectors)
        throw CapacityError("instance has " + std::to_string(instance.vector_count())
            + " demand vectors, above the limit of " + std::to_string(max_demand_vectors));
    std::vector<DemandVector> out;
    out.reserve(static_cast<std::size_t>(instance.vector_count()));
    std::vector<int> prefix;
    prefix.reserve(static_cast<std::size_t>(instance.k));
    enumerate_into(instance, prefix, instance.n, out);
    return out;
}

DemandSpace::DemandSpace(ProblemInstance instance) :
    instance_(instance),
    vectors_(enumerate_demand_vectors(instance))
{
    auto n = static_cast<std::size_t>(instance.n);
    completions_.assign(static_cast<std::size_t>(instance.k) + 1, std::vector<std::uint64_t>(n + 1, 0));
    completions_[0][0] = 1;
    for (std::size_t slots = 1; slots <= static_cast<std::size_t>(instance.k); ++slots)
        for (std::size_t total = 0; total <= n; ++total) {
            std::uint64_t sum = 0;
            auto cap = static_cast<std::size_t>(cap_for(instance.regime, static_cast<int>(total)));
            for (std::size_t c = 0; c <= cap; ++c)
                sum = saturating_add(sum, completions_[slots - 1][total - c]);
            completions_[slots][total] = sum;
        }
}

auto DemandSpace::make(ProblemInstance instance) -> std::shared_ptr<const DemandSpace>
{
    return std::make_shared<const DemandSpace>(instance);
}

auto DemandSpace::rank(const DemandVector & v) const -> std::optional<std::size_t>
{
    if (! v.belongs_to(instance_))
        return std::nullopt;
    std::uint64_t r = 0;
    int remaining = instance_.n;
    for (int i = 0; i + 1 < instance_.k; ++i) {
        auto slots = static_cast<std::size_t>(instance_.k - i - 1);
        for (int c = 0; c < v[i]; ++c)
            r += completions_[slots][static_cast<std::size_t>(remaining - c)];
        remaining -= v[i];
    }
    return static_cast<std::size_t>(r);
}

auto DemandSpace::index_of(const DemandVector & v) const -> std::size_t
{
    auto r = rank(v);
    if (! r)
        throw DomainError("demand vector " + format_counts(v) + " is not a member of the instance");
    return *r;
}

auto DemandSpace::neighbors(std::size_t index) const -> std::vector<Neighbor>
{
    const auto & v = vectors_[index];
    std::vector<Neighbor> result;
    for (TaskId s = 0; s < instance_.k; ++s) {
        if (v[s] == 0)
            continue;
        for (TaskId t = 0; t < instance_.k; ++t) {
            if (t == s || (instance_.regime == Regime::SubsetOnly && v[t] > 0))
                continue;
            result.push_back(Neighbor{ s, t, *rank(v.moved(s, t)) });
        }
    }
    return result;
}

AllocationTable::AllocationTable(std::shared_ptr<const DemandSpace> space) :
    space_(std::move(space)),
    entries_(space_->size())
{
}

AllocationTable::AllocationTable(const ProblemInstance & instance) :
    AllocationTable(DemandSpace::make(instance))
{
}

void AllocationTable::set(std::size_t index, Assignment assignment)
{
    if (index >= entries_.size())
        throw DomainError("table index " + std::to_string(index) + " out of range");
    entries_[index] = std::move(assignment);
}

void AllocationTable::set(const DemandVector & v, Assignment assignment)
{
    set(space_->index_of(v), std::move(assignment));
}

void AllocationTable::erase(std::size_t index)
{
    entries_.at(index).reset();
}

auto AllocationTable::at(const DemandVector & v) const -> const Assignment &
{
    const auto * a = find(v);
    if (! a)
        throw DomainError("demand vector " + format_counts(v) + " is outside the table's domain");
    return *a;
}

auto AllocationTable::find(const DemandVector & v) const -> const Assignment *
{
    auto r = space_->rank(v);
    if (! r || ! entries_[*r])
        return nullptr;
    return &*entries_[*r];
}

auto AllocationTable::is_total() const -> bool
{
    return std::all_of(entries_.begin(), entries_.end(), [](const auto & e) { return e.has_value(); });
}

auto AllocationTable::present_count() const -> std::size_t
{
    return static_cast<std::size_t>(std::count_if(entries_.begin(), entries_.end(), [](const auto & e) { return e.has_value(); }));
}

auto operator==(const AllocationTable & a, const AllocationTable & b) -> bool
{
    return a.instance() == b.instance() && a.entries_ == b.entries_;
}

auto validate_table(const AllocationTable & table) -> ValidationReport
{
    ValidationReport report;
    for (std::size_t i = 0; i < table.size(); ++i) {
        if (! table.has(i)) {
            report.total = false;
            report.missing.push_back(i);
        }
        else if (! table.entry(i)->satisfies(table.space().vector(i)))
            report.violating.push_back(i);
    }
    return report;
}

auto max_switching_cost_serial(const AllocationTable & table) -> DistortionReport
{
    check_entries(table);
    Best best;
    for (std::size_t i = 0; i < table.size(); ++i)
        scan_from(table, i, best);
    return finish_report(table, best);
}

auto max_switching_cost(const AllocationTable & table, int threads) -> DistortionReport
{
    check_entries(table);
    auto count = static_cast<long>(table.size());
    Best best;
#pragma omp parallel num_threads(resolve_threads(threads))
    {
        Best local;
#pragma omp for schedule(static)
        for (long i = 0; i < count; ++i)
            scan_from(table, static_cast<std::size_t>(i), local);
#pragma omp critical(switchcost_max_cost)
        if (local.beats(best))
            best = local;
    }
    return finish_report(table, best);
}

auto restrict_tasks(const AllocationTable & table, int k2) -> AllocationTable
{
    const auto & inst = table.instance();
    if (k2 < 1 || k2 >= inst.k)
        throw InvalidInputError("restriction target k2=" + std::to_string(k2) + " must satisfy 1 <= k2 < k="
            + std::to_string(inst.k));
    check_entries(table);
    AllocationTable result(ProblemInstance{ inst.n, k2, inst.regime });
    const auto & small = result.space();
    for (std::size_t i = 0; i < small.size(); ++i) {
        auto counts = small.vector(i).counts();
        counts.resize(static_cast<std::size_t>(inst.k), 0);
        if (const auto * a = table.find(DemandVector(std::move(counts))))
            result.set(i, *a);
    }
    return result;
}

auto restrict_to_subsets(const AllocationTable & table) -> AllocationTable
{
    const auto & inst = table.instance();
    if (inst.regime != Regime::FullMultiset)
        throw InvalidInputError("table is already in the subset regime");
    AllocationTable result(ProblemInstance{ inst.n, inst.k, Regime::SubsetOnly });
    const auto & small = result.space();
    for (std::size_t i = 0; i < small.size(); ++i)
        if (const auto * a = table.find(small.vector(i)))
            result.set(i, *a);
    return result;
}

auto format_counts(const DemandVector & v) -> std::string
{
    std::ostringstream out;
    out << '[';
    for (int i = 0; i < v.k(); ++i)
        out << (i ? "," : "") << v[i];
    out << ']';
    return out.str();
}

auto format_assignment_human(const Assignment & a) -> std::string
{
    std::ostringstream out;
    for (int i = 0; i < a.n(); ++i)
        out << (i ? "," : "") << a[i] + 1;
    return out.str();
}

} // namespace switchcost
