#include "switchcost/solver.hpp"

#include "switchcost/constructions.hpp"
#include "switchcost/error.hpp"
#include "switchcost/parallel.hpp"
#include "switchcost/table_io.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <climits>

#include <omp.h>

namespace switchcost {

namespace {

    using Word = std::uint64_t;

    constexpr std::size_t frontier_target = 64;
    constexpr std::size_t frontier_cap = 4096;

    auto words_for(std::size_t bits) -> std::size_t { return (bits + 63) / 64; }

    // Candidates, domain layout and pairwise compatibility for one (instance, D).
    struct SearchModel
    {
        std::shared_ptr<const DemandSpace> space;
        int n = 0;
        std::size_t size = 0;

        std::vector<std::size_t> perm_first; // index of the vector's first candidate
        std::vector<std::size_t> perm_count;
        std::vector<std::uint8_t> perm_data; // n tasks per candidate

        std::vector<std::size_t> dom_offset; // word offset of each vector's domain, plus end
        std::vector<std::size_t> dom_words;

        struct Later
        {
            std::size_t vector;
            std::size_t compat_offset; // rows of dom_words[vector] words, one per candidate of the source
        };
        std::vector<std::vector<Later>> later;
        std::vector<Word> compat;

        [[nodiscard]] auto perm(std::size_t v, std::size_t p) const -> const std::uint8_t *
        {
            return &perm_data[(perm_first[v] + p) * static_cast<std::size_t>(n)];
        }
    };

    auto hamming(const std::uint8_t * a, const std::uint8_t * b, int n) -> int
    {
        int d = 0;
        for (int i = 0; i < n; ++i)
            d += a[i] != b[i];
        return d;
    }

    auto build_model(const ProblemInstance & instance, int max_cost) -> SearchModel
    {
        if (max_cost < 0)
            throw InvalidInputError("maximum switching cost must be non-negative");
        instance.validate();
        if (instance.k > 255)
            throw CapacityError("solver supports at most 255 tasks");

        SearchModel m;
        m.space = DemandSpace::make(instance);
        m.n = instance.n;
        m.size = m.space->size();

        std::uint64_t total = 0;
        m.perm_first.resize(m.size);
        m.perm_count.resize(m.size);
        for (std::size_t v = 0; v < m.size; ++v) {
            auto tasks = ordered_assignment(m.space->vector(v)).tasks();
            std::vector<std::uint8_t> current(tasks.begin(), tasks.end());
            m.perm_first[v] = static_cast<std::size_t>(total);
            std::size_t count = 0;
            do {
                if (++total > max_candidate_permutations)
                    throw CapacityError("instance needs more than " + std::to_string(max_candidate_permutations)
                        + " candidate assignments");
                m.perm_data.insert(m.perm_data.end(), current.begin(), current.end());
                ++count;
            } while (std::next_permutation(current.begin(), current.end()));
            m.perm_count[v] = count;
        }

        m.dom_offset.resize(m.size + 1);
        m.dom_words.resize(m.size);
        for (std::size_t v = 0; v < m.size; ++v) {
            m.dom_words[v] = words_for(m.perm_count[v]);
            m.dom_offset[v + 1] = m.dom_offset[v] + m.dom_words[v];
        }

        std::uint64_t bits = 0;
        m.later.resize(m.size);
        for (std::size_t v = 0; v < m.size; ++v)
            for (const auto & nb : m.space->neighbors(v))
                if (nb.index > v) {
                    bits += static_cast<std::uint64_t>(m.perm_count[v]) * m.dom_words[nb.index] * 64;
                    if (bits > max_compatibility_bits)
                        throw CapacityError("compatibility tables exceed the solver's memory limit");
                    m.later[v].push_back({ nb.index, 0 });
                }
        for (auto & list : m.later)
            std::sort(list.begin(), list.end(), [](const auto & a, const auto & b) { return a.vector < b.vector; });

        std::size_t offset = 0;
        for (std::size_t v = 0; v < m.size; ++v)
            for (auto & e : m.later[v]) {
                e.compat_offset = offset;
                offset += m.perm_count[v] * m.dom_words[e.vector];
            }
        m.compat.assign(offset, 0);

        auto edges = std::vector<std::pair<std::size_t, std::size_t>>{};
        for (std::size_t v = 0; v < m.size; ++v)
            for (std::size_t e = 0; e < m.later[v].size(); ++e)
                edges.emplace_back(v, e);

#pragma omp parallel for schedule(dynamic, 4)
        for (long idx = 0; idx < static_cast<long>(edges.size()); ++idx) {
            auto [v, e] = edges[static_cast<std::size_t>(idx)];
            const auto & edge = m.later[v][e];
            auto w = edge.vector;
            for (std::size_t p = 0; p < m.perm_count[v]; ++p) {
                Word * row = &m.compat[edge.compat_offset + p * m.dom_words[w]];
                for (std::size_t q = 0; q < m.perm_count[w]; ++q)
                    if (hamming(m.perm(v, p), m.perm(w, q), m.n) <= max_cost)
                        row[q / 64] |= Word{ 1 } << (q % 64);
            }
        }

        return m;
    }

    auto initial_domains(const SearchModel & m) -> std::vector<Word>
    {
        std::vector<Word> dom(m.dom_offset.back(), 0);
        for (std::size_t v = 0; v < m.size; ++v)
            for (std::size_t p = 0; p < m.perm_count[v]; ++p)
                dom[m.dom_offset[v] + p / 64] |= Word{ 1 } << (p % 64);
        return dom;
    }

    struct Counters
    {
        std::uint64_t nodes = 0;
        int max_depth = 0;
    };

    struct FrontierEntry
    {
        std::vector<Word> domains;
        std::vector<std::uint8_t> classes;
        std::vector<std::uint32_t> choice;
        std::uint64_t nodes_before; // generation nodes up to and including this entry
        int depth_before;
    };

    class Searcher
    {
    public:
        Searcher(const SearchModel & model, std::size_t start_depth, const std::vector<Word> & domains,
            const std::vector<std::uint8_t> & classes, std::vector<std::uint32_t> choice) :
            m_(model),
            dom_(model.size + 1),
            cls_(model.size + 1),
            choice_(std::move(choice))
        {
            for (std::size_t d = start_depth; d <= model.size; ++d) {
                dom_[d].resize(model.dom_offset.back());
                cls_[d].resize(static_cast<std::size_t>(model.n));
            }
            dom_[start_depth] = domains;
            cls_[start_depth] = classes;
            choice_.resize(model.size);
            remap_.resize(static_cast<std::size_t>(model.n) * 256);
        }

        void watch(const std::atomic<long> * best, long index)
        {
            best_ = best;
            index_ = index;
        }

        void set_frontier(std::size_t depth, std::vector<FrontierEntry> * out, std::size_t cap)
        {
            frontier_depth_ = depth;
            frontier_ = out;
            frontier_cap_ = cap;
        }

        auto run(std::size_t depth) -> bool { return dfs(depth); }

        [[nodiscard]] auto counters() const -> const Counters & { return counters_; }
        [[nodiscard]] auto aborted() const -> bool { return aborted_; }
        [[nodiscard]] auto overflowed() const -> bool { return overflowed_; }
        [[nodiscard]] auto choice() const -> const std::vector<std::uint32_t> & { return choice_; }

    private:
        auto symmetric_ok(const std::vector<std::uint8_t> & classes, const std::uint8_t * perm) -> bool
        {
            // within each class of interchangeable agents tasks must be non-decreasing
            std::fill(last_.begin(), last_.end(), 0);
            for (int a = 0; a < m_.n; ++a) {
                auto c = classes[static_cast<std::size_t>(a)];
                auto t = static_cast<int>(perm[a]) + 1;
                if (t < last_[c])
                    return false;
                last_[c] = t;
            }
            return true;
        }

        void refine(const std::vector<std::uint8_t> & from, const std::uint8_t * perm, std::vector<std::uint8_t> & to)
        {
            std::uint8_t next = 0;
            std::fill(remap_.begin(), remap_.end(), 0);
            for (int a = 0; a < m_.n; ++a) {
                auto key = static_cast<std::size_t>(from[static_cast<std::size_t>(a)]) * 256 + perm[a];
                if (! remap_[key])
                    remap_[key] = ++next;
                to[static_cast<std::size_t>(a)] = static_cast<std::uint8_t>(remap_[key] - 1);
            }
        }

        auto dfs(std::size_t d) -> bool
        {
            if (frontier_ && d == frontier_depth_) {
                if (frontier_->size() >= frontier_cap_) {
                    overflowed_ = true;
                    aborted_ = true;
                    return false;
                }
                frontier_->push_back(FrontierEntry{ dom_[d], cls_[d],
                    std::vector<std::uint32_t>(choice_.begin(), choice_.begin() + static_cast<long>(d)),
                    counters_.nodes, counters_.max_depth });
                return false;
            }
            if (d == m_.size)
                return true;

            const auto & here = dom_[d];
            auto & next = dom_[d + 1];
            auto begin = m_.dom_offset[d];
            for (std::size_t w = 0; w < m_.dom_words[d]; ++w) {
                for (Word bits = here[begin + w]; bits; bits &= bits - 1) {
                    auto p = w * 64 + static_cast<std::size_t>(std::countr_zero(bits));
                    const auto * perm = m_.perm(d, p);
                    if (! symmetric_ok(cls_[d], perm))
                        continue;

                    ++counters_.nodes;
                    counters_.max_depth = std::max(counters_.max_depth, static_cast<int>(d + 1));
                    if (best_ && (counters_.nodes & 1023) == 0 && best_->load(std::memory_order_relaxed) < index_) {
                        aborted_ = true;
                        return false;
                    }

                    auto tail = m_.dom_offset[d + 1];
                    std::copy(here.begin() + static_cast<long>(tail), here.end(), next.begin() + static_cast<long>(tail));
                    bool alive = true;
                    for (const auto & e : m_.later[d]) {
                        const Word * row = &m_.compat[e.compat_offset + p * m_.dom_words[e.vector]];
                        Word * target = &next[m_.dom_offset[e.vector]];
                        Word any = 0;
                        for (std::size_t x = 0; x < m_.dom_words[e.vector]; ++x)
                            any |= (target[x] &= row[x]);
                        if (! any) {
                            alive = false;
                            break;
                        }
                    }
                    if (! alive)
                        continue;

                    refine(cls_[d], perm, cls_[d + 1]);
                    choice_[d] = static_cast<std::uint32_t>(p);
                    if (dfs(d + 1))
                        return true;
                    if (aborted_)
                        return false;
                }
            }
            return false;
        }

        const SearchModel & m_;
        std::vector<std::vector<Word>> dom_;
        std::vector<std::vector<std::uint8_t>> cls_;
        std::vector<std::uint32_t> choice_;
        std::vector<int> last_ = std::vector<int>(256, 0);
        std::vector<std::uint8_t> remap_;
        Counters counters_;

        const std::atomic<long> * best_ = nullptr;
        long index_ = 0;
        bool aborted_ = false;

        std::size_t frontier_depth_ = 0;
        std::vector<FrontierEntry> * frontier_ = nullptr;
        std::size_t frontier_cap_ = 0;
        bool overflowed_ = false;
    };

    auto witness_from(const SearchModel & m, const std::vector<std::uint32_t> & choice) -> AllocationTable
    {
        AllocationTable table(m.space);
        for (std::size_t v = 0; v < m.size; ++v) {
            const auto * perm = m.perm(v, choice[v]);
            table.set(v, Assignment(std::vector<TaskId>(perm, perm + m.n)));
        }
        return table;
    }

    auto make_outcome(const SearchModel & m, const ProblemInstance & instance, int max_cost,
        const std::vector<std::uint32_t> * choice, const Counters & counters) -> SolveOutcome
    {
        SolveOutcome outcome;
        outcome.instance = instance;
        outcome.max_cost = max_cost;
        outcome.stats.nodes_expanded = counters.nodes;
        outcome.stats.max_depth = counters.max_depth;
        if (choice) {
            outcome.verdict = Verdict::Feasible;
            outcome.witness = witness_from(m, *choice);
            outcome.stats.exhaustive = false;
        }
        else {
            outcome.verdict = Verdict::Infeasible;
            outcome.stats.exhaustive = true;
        }
        return outcome;
    }

    auto root_classes(const SearchModel & m) -> std::vector<std::uint8_t>
    {
        return std::vector<std::uint8_t>(static_cast<std::size_t>(m.n), 0);
    }

    struct SubResult
    {
        bool found = false;
        bool cancelled = false;
        Counters counters;
        std::vector<std::uint32_t> choice;
    };
}

auto to_string(Verdict verdict) -> std::string_view
{
    return verdict == Verdict::Feasible ? "Feasible" : "Infeasible";
}

auto feasible_serial(const ProblemInstance & instance, int max_cost) -> SolveOutcome
{
    auto model = build_model(instance, max_cost);
    Searcher searcher(model, 0, initial_domains(model), root_classes(model), {});
    bool found = searcher.run(0);
    return make_outcome(model, instance, max_cost, found ? &searcher.choice() : nullptr, searcher.counters());
}

auto feasible(const ProblemInstance & instance, int max_cost, const SolveOptions & options) -> SolveOutcome
{
    auto model = build_model(instance, max_cost);
    auto threads = resolve_threads(options.threads);

    // Split at the shallowest depth that yields enough subtrees. The choice
    // depends only on the instance, never on the worker count.
    std::vector<FrontierEntry> frontier;
    Counters generation;
    std::size_t depth = 1;
    for (;; ++depth) {
        if (depth > model.size) {
            depth = model.size;
            break;
        }
        std::vector<FrontierEntry> attempt;
        Searcher gen(model, 0, initial_domains(model), root_classes(model), {});
        gen.set_frontier(depth, &attempt, frontier_cap);
        gen.run(0);
        if (gen.overflowed())
            break;
        frontier = std::move(attempt);
        generation = gen.counters();
        if (frontier.size() >= frontier_target || depth == model.size)
            break;
    }
    if (frontier.empty() && depth == 1 && model.size > 0) {
        // either the root is dead or depth 1 already overflowed; overflow at
        // depth 1 cannot happen with the cap above the root's candidate count
        // unless the first vector has more than frontier_cap candidates
        Searcher gen(model, 0, initial_domains(model), root_classes(model), {});
        gen.set_frontier(1, &frontier, std::numeric_limits<std::size_t>::max());
        gen.run(0);
        generation = gen.counters();
    }
    if (frontier.size() > 0)
        depth = frontier.front().choice.size();

    if (frontier.empty())
        return make_outcome(model, instance, max_cost, nullptr, generation);

    auto count = static_cast<long>(frontier.size());
    std::vector<SubResult> results(frontier.size());
    std::atomic<long> best{ LONG_MAX };

#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (long e = 0; e < count; ++e) {
        auto & result = results[static_cast<std::size_t>(e)];
        if (best.load() < e) {
            result.cancelled = true;
            continue;
        }
        const auto & entry = frontier[static_cast<std::size_t>(e)];
        Searcher sub(model, depth, entry.domains, entry.classes, entry.choice);
        sub.watch(&best, e);
        bool found = sub.run(depth);
        if (sub.aborted()) {
            result.cancelled = true;
            continue;
        }
        result.found = found;
        result.counters = sub.counters();
        if (found) {
            result.choice = sub.choice();
            long current = best.load();
            while (e < current && ! best.compare_exchange_weak(current, e)) {
            }
        }
    }

    Counters total;
    for (std::size_t e = 0; e < results.size(); ++e) {
        const auto & r = results[e];
        if (r.cancelled)
            throw std::logic_error("subtree cancelled before the winning subtree was resolved");
        total.nodes += r.counters.nodes;
        total.max_depth = std::max(total.max_depth, r.counters.max_depth);
        if (r.found) {
            total.nodes += frontier[e].nodes_before;
            total.max_depth = std::max(total.max_depth, frontier[e].depth_before);
            return make_outcome(model, instance, max_cost, &r.choice, total);
        }
    }
    total.nodes += generation.nodes;
    total.max_depth = std::max(total.max_depth, generation.max_depth);
    return make_outcome(model, instance, max_cost, nullptr, total);
}

auto min_max_distortion(const ProblemInstance & instance, const SolveOptions & options) -> MinDistortionResult
{
    instance.validate();
    auto ceiling = std::min(instance.k - 1, instance.n);
    std::vector<SolveOutcome> attempts;
    for (int d = 0; d <= ceiling; ++d) {
        auto outcome = feasible(instance, d, options);
        if (outcome.verdict == Verdict::Feasible) {
            auto witness = std::move(*outcome.witness);
            outcome.witness.reset();
            attempts.push_back(std::move(outcome));
            return MinDistortionResult{ d, std::move(witness), std::move(attempts) };
        }
        attempts.push_back(std::move(outcome));
    }
    throw std::logic_error("no feasible maximum switching cost up to k-1; the ordered construction guarantees one");
}

auto verify_witness(const SolveOutcome & outcome) -> bool
{
    if (outcome.verdict != Verdict::Feasible || ! outcome.witness)
        return false;
    const auto & table = *outcome.witness;
    if (table.instance() != outcome.instance)
        return false;
    if (! validate_table(table).valid())
        return false;
    return max_switching_cost_serial(table).max_cost <= outcome.max_cost;
}

auto outcome_to_json(const SolveOutcome & outcome) -> nlohmann::json
{
    nlohmann::json doc;
    doc["verdict"] = std::string(to_string(outcome.verdict));
    doc["D"] = outcome.max_cost;
    doc["instance"] = instance_to_json(outcome.instance);
    doc["stats"] = { { "nodes_expanded", outcome.stats.nodes_expanded }, { "max_depth", outcome.stats.max_depth },
        { "exhaustive", outcome.stats.exhaustive } };
    if (outcome.witness)
        doc["witness"] = table_to_json(*outcome.witness);
    return doc;
}

auto outcome_from_json(const nlohmann::json & doc) -> SolveOutcome
{
    try {
        SolveOutcome outcome;
        auto verdict = doc.at("verdict").get<std::string>();
        if (verdict == "Feasible")
            outcome.verdict = Verdict::Feasible;
        else if (verdict == "Infeasible")
            outcome.verdict = Verdict::Infeasible;
        else
            throw LoadError("unknown verdict '" + verdict + "'");
        outcome.max_cost = doc.at("D").get<int>();
        const auto & inst = doc.at("instance");
        outcome.instance = ProblemInstance{ inst.at("n").get<int>(), inst.at("k").get<int>(),
            parse_regime(inst.at("regime").get<std::string>()) };
        const auto & stats = doc.at("stats");
        outcome.stats.nodes_expanded = stats.at("nodes_expanded").get<std::uint64_t>();
        outcome.stats.max_depth = stats.at("max_depth").get<int>();
        outcome.stats.exhaustive = stats.at("exhaustive").get<bool>();
        if (doc.contains("witness"))
            outcome.witness = table_from_json(doc["witness"]);
        return outcome;
    }
    catch (const Error &) {
        throw;
    }
    catch (const std::exception & e) {
        throw LoadError(std::string("malformed outcome document: ") + e.what());
    }
}

} // namespace switchcost
