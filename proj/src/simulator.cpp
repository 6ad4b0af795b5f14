#include "switchcost/simulator.hpp"

#include "switchcost/error.hpp"
#include "switchcost/parallel.hpp"

#include <omp.h>

#include <ostream>

namespace switchcost {

namespace {

    auto step_record(const DemandVector & before, const DemandVector & after, const Assignment & a,
        const Assignment & b) -> StepRecord
    {
        StepRecord r { before, after, 0, {} };
        for (auto agent : moved_agents(a, b))
            r.moved.push_back({ agent, a[agent], b[agent] });
        r.cost = static_cast<int>(r.moved.size());
        return r;
    }

    auto applicable_moves(const AllocationTable & table, const DemandVector & v) -> std::vector<Move>
    {
        std::vector<Move> out;
        for (TaskId s = 0; s < v.k(); ++s) {
            if (v[s] == 0)
                continue;
            for (TaskId t = 0; t < v.k(); ++t)
                if (t != s && table.find(v.moved(s, t)))
                    out.push_back({ s, t });
        }
        return out;
    }

    auto counts_from_json(const nlohmann::json & j, const char * what) -> DemandVector
    {
        if (! j.is_array())
            throw LoadError(std::string(what) + " must be an integer array");
        std::vector<int> counts;
        for (const auto & c : j) {
            if (! c.is_number_integer())
                throw LoadError(std::string(what) + " must be an integer array");
            counts.push_back(c.get<int>());
        }
        try {
            return DemandVector(std::move(counts));
        }
        catch (const InvalidInputError & e) {
            throw LoadError(e.what());
        }
    }
}

auto run_trace(const AllocationTable & table, const Trace & trace) -> std::vector<StepRecord>
{
    if (trace.start.k() != table.instance().k)
        throw InvalidInputError("trace start has " + std::to_string(trace.start.k()) + " tasks, the table has "
            + std::to_string(table.instance().k));
    std::vector<StepRecord> out;
    out.reserve(trace.moves.size());
    auto current = trace.start;
    const Assignment * a = &table.at(current);
    for (std::size_t step = 0; step < trace.moves.size(); ++step) {
        const auto & m = trace.moves[step];
        DemandVector next;
        try {
            next = current.moved(m.source, m.target);
        }
        catch (const InvalidInputError & e) {
            throw TraceError("step " + std::to_string(step + 1) + ": " + e.what());
        }
        const Assignment * b = &table.at(next);
        out.push_back(step_record(current, next, *a, *b));
        current = std::move(next);
        a = b;
    }
    return out;
}

auto uniform_below(std::mt19937_64 & rng, std::uint64_t bound) -> std::uint64_t
{
    if (bound == 0)
        throw InvalidInputError("uniform_below needs a positive bound");
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
        std::uint64_t x = rng();
        if (x >= threshold)
            return x % bound;
    }
}

auto random_walk(const AllocationTable & table, const DemandVector & start, std::size_t steps, std::uint64_t seed)
    -> Walk
{
    Walk w;
    w.trace.start = start;
    w.trace.seed = seed;
    static_cast<void>(table.at(start));
    std::mt19937_64 rng(seed);
    auto current = start;
    for (std::size_t step = 0; step < steps; ++step) {
        auto moves = applicable_moves(table, current);
        if (moves.empty())
            throw TraceError("step " + std::to_string(step + 1) + ": no applicable move from " + format_counts(current));
        auto m = moves[uniform_below(rng, moves.size())];
        w.trace.moves.push_back(m);
        current = current.moved(m.source, m.target);
    }
    w.records = run_trace(table, w.trace);
    return w;
}

auto walk_stats(const std::vector<StepRecord> & records) -> WalkStats
{
    WalkStats s;
    s.steps = records.size();
    std::uint64_t total = 0;
    for (const auto & r : records) {
        s.max = std::max(s.max, r.cost);
        total += static_cast<std::uint64_t>(r.cost);
        ++s.histogram[r.cost];
    }
    if (! records.empty())
        s.mean = static_cast<double>(total) / static_cast<double>(records.size());
    return s;
}

void write_records_csv(const std::vector<StepRecord> & records, std::ostream & out)
{
    out << "step,source,target,cost,moved\n";
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto & r = records[i];
        auto w = adjacency(r.before, r.after);
        out << i << ',' << (w ? w->source : -1) << ',' << (w ? w->target : -1) << ',' << r.cost << ',';
        for (std::size_t j = 0; j < r.moved.size(); ++j) {
            if (j)
                out << ' ';
            out << r.moved[j].agent << ':' << r.moved[j].from << '>' << r.moved[j].to;
        }
        out << '\n';
    }
}

auto trace_to_json(const Trace & trace) -> nlohmann::json
{
    auto moves = nlohmann::json::array();
    for (const auto & m : trace.moves)
        moves.push_back({ m.source, m.target });
    nlohmann::json doc { { "start", trace.start.counts() }, { "moves", moves } };
    doc["seed"] = trace.seed ? nlohmann::json(*trace.seed) : nlohmann::json(nullptr);
    return doc;
}

auto trace_from_json(const nlohmann::json & doc) -> Trace
{
    if (! doc.is_object() || ! doc.contains("start") || ! doc.contains("moves"))
        throw LoadError("trace needs \"start\" and \"moves\"");
    Trace t;
    t.start = counts_from_json(doc["start"], "trace start");
    if (! doc["moves"].is_array())
        throw LoadError("trace moves must be an array");
    long index = 0;
    for (const auto & m : doc["moves"]) {
        if (! m.is_array() || m.size() != 2 || ! m[0].is_number_integer() || ! m[1].is_number_integer())
            throw LoadError("each move must be a [source, target] pair", index);
        t.moves.push_back({ m[0].get<TaskId>(), m[1].get<TaskId>() });
        ++index;
    }
    if (doc.contains("seed") && ! doc["seed"].is_null()) {
        if (! doc["seed"].is_number_unsigned() && ! doc["seed"].is_number_integer())
            throw LoadError("trace seed must be an integer");
        t.seed = doc["seed"].get<std::uint64_t>();
    }
    return t;
}

auto records_to_json(const std::vector<StepRecord> & records) -> nlohmann::json
{
    auto out = nlohmann::json::array();
    for (const auto & r : records) {
        auto moved = nlohmann::json::array();
        for (const auto & m : r.moved)
            moved.push_back({ m.agent, m.from, m.to });
        out.push_back({ { "before", r.before.counts() }, { "after", r.after.counts() }, { "cost", r.cost },
            { "moved", moved } });
    }
    return out;
}

auto stats_to_json(const WalkStats & stats) -> nlohmann::json
{
    auto hist = nlohmann::json::object();
    for (const auto & [cost, count] : stats.histogram)
        hist[std::to_string(cost)] = count;
    return { { "steps", stats.steps }, { "max", stats.max }, { "mean", stats.mean }, { "histogram", hist } };
}

auto check_composite_bound(const AllocationTable & table, int threads) -> CompositeBoundReport
{
    CompositeBoundReport out;
    out.max_cost = max_switching_cost(table, threads).max_cost;

    std::vector<std::size_t> present;
    for (std::size_t i = 0; i < table.size(); ++i)
        if (table.has(i))
            present.push_back(i);
    const auto m = static_cast<long long>(present.size());
    const auto & space = table.space();
    const int d = out.max_cost;

    std::uint64_t pairs = 0;
    std::uint64_t violations = 0;
    // lowest violating pair, packed as row * m + column
    long long first = -1;
#pragma omp parallel for schedule(dynamic, 4) num_threads(resolve_threads(threads)) \
    reduction(+ : pairs, violations)
    for (long long x = 0; x < m; ++x) {
        const auto & vx = space.vector(present[static_cast<std::size_t>(x)]);
        const auto & ax = *table.entry(present[static_cast<std::size_t>(x)]);
        long long local_first = -1;
        for (long long y = x + 1; y < m; ++y) {
            const auto & vy = space.vector(present[static_cast<std::size_t>(y)]);
            int cost = switching_cost(ax, *table.entry(present[static_cast<std::size_t>(y)]));
            ++pairs;
            // cost <= D * l1 / 2, kept in integers
            if (2 * cost > d * l1_distance(vx, vy)) {
                ++violations;
                if (local_first < 0)
                    local_first = x * m + y;
            }
        }
        if (local_first >= 0) {
#pragma omp critical(composite_first)
            if (first < 0 || local_first < first)
                first = local_first;
        }
    }
    out.pairs = pairs;
    out.violations = violations;
    if (first >= 0)
        out.first_violation = std::make_pair(present[static_cast<std::size_t>(first / m)],
            present[static_cast<std::size_t>(first % m)]);
    return out;
}

} // namespace switchcost
