#include "switchcost/cli.hpp"

#include "switchcost/consistency.hpp"
#include "switchcost/constructions.hpp"
#include "switchcost/error.hpp"
#include "switchcost/local_lemmas.hpp"
#include "switchcost/local_structure.hpp"
#include "switchcost/simulator.hpp"
#include "switchcost/solver.hpp"
#include "switchcost/table_io.hpp"
#include "switchcost/task_types.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

namespace switchcost {

namespace {

    using nlohmann::json;

    struct Flags
    {
        int n = 0;
        int k = 0;
        std::string regime = "full";
        int max_cost = -1;
        std::string table;
        std::string output;
        std::string format = "human";
        std::uint64_t seed = 0;
        std::size_t steps = 0;
        int threads = 0;
        std::string method = "ordered";
        int special = 1;
        std::string lemma;
        std::string start;
        std::string trace;
    };

    struct Context
    {
        const Flags & f;
        std::ostream & out;
        std::ostream & err;

        [[nodiscard]] auto machine() const -> bool { return f.format == "machine"; }

        [[nodiscard]] auto instance() const -> ProblemInstance
        {
            ProblemInstance p { f.n, f.k, parse_regime(f.regime) };
            p.validate();
            return p;
        }

        void emit(const json & doc) const { out << doc.dump(2) << '\n'; }
    };

    void write_text(const std::string & path, const std::string & text)
    {
        std::ofstream file(path);
        if (! file)
            throw InvalidInputError("cannot write " + path);
        file << text;
        if (! file)
            throw InvalidInputError("cannot write " + path);
    }

    auto parse_counts(const std::string & text) -> DemandVector
    {
        std::vector<int> counts;
        std::string cleaned;
        for (char c : text)
            cleaned += (c == '[' || c == ']') ? ' ' : c;
        std::stringstream in(cleaned);
        std::string item;
        while (std::getline(in, item, ',')) {
            try {
                std::size_t used = 0;
                counts.push_back(std::stoi(item, &used));
                if (item.find_first_not_of(' ', used) != std::string::npos)
                    throw std::invalid_argument(item);
            }
            catch (const std::logic_error &) {
                throw InvalidInputError("bad demand vector \"" + text + "\"");
            }
        }
        return DemandVector(std::move(counts));
    }

    auto human_task(TaskId t) -> std::string { return std::to_string(t + 1); }

    auto witness_json(const AllocationTable & table, const DistortionReport & r) -> json
    {
        json doc { { "max_cost", r.max_cost } };
        if (r.witness) {
            const auto & w = *r.witness;
            doc["witness"] = { { "from", table.space().vector(w.from_index).counts() },
                { "to", table.space().vector(w.to_index).counts() },
                { "from_assignment", table.entry(w.from_index)->tasks() },
                { "to_assignment", table.entry(w.to_index)->tasks() }, { "moved", w.moved } };
        }
        else
            doc["witness"] = nullptr;
        return doc;
    }

    void print_witness(std::ostream & out, const AllocationTable & table, const DistortionReport & r)
    {
        out << "maximum switching cost: " << r.max_cost << '\n';
        if (! r.witness)
            return;
        const auto & w = *r.witness;
        out << "attained between " << format_counts(table.space().vector(w.from_index)) << " ("
            << format_assignment_human(*table.entry(w.from_index)) << ") and "
            << format_counts(table.space().vector(w.to_index)) << " ("
            << format_assignment_human(*table.entry(w.to_index)) << ")\n";
    }

    void print_table(std::ostream & out, const AllocationTable & table)
    {
        const auto & p = table.instance();
        out << "n=" << p.n << " k=" << p.k << " regime=" << to_string(p.regime) << ", " << table.present_count()
            << " of " << table.size() << " demand vectors\n";
        for (std::size_t i = 0; i < table.size(); ++i)
            if (table.has(i))
                out << format_counts(table.space().vector(i)) << " -> " << format_assignment_human(*table.entry(i))
                    << '\n';
    }

    void print_report(std::ostream & out, const PropertyReport & r)
    {
        out << r.property << " at n=" << r.n << " k=" << r.k << ": " << (r.passed() ? "holds" : "FAILS") << '\n'
            << "  instances " << r.instances << ", non-vacuous passes " << r.non_vacuous_passes << ", vacuous "
            << r.vacuous << ", failures " << r.failures << '\n';
        for (const auto & c : r.counterexamples)
            out << "  counterexample " << c.dump() << '\n';
    }

    auto run_enumerate(const Context & c) -> int
    {
        auto p = c.instance();
        auto vectors = enumerate_demand_vectors(p);
        if (c.machine()) {
            auto list = json::array();
            for (const auto & v : vectors)
                list.push_back(v.counts());
            json doc { { "instance", instance_to_json(p) }, { "count", vectors.size() }, { "vectors", list } };
            c.emit(doc);
            if (! c.f.output.empty())
                write_json_file(doc, c.f.output);
            return exit_ok;
        }
        c.out << vectors.size() << " demand vectors for n=" << p.n << " k=" << p.k << " (" << to_string(p.regime)
              << ")\n";
        for (std::size_t i = 0; i < vectors.size(); ++i)
            c.out << (i + 1) << ' ' << format_counts(vectors[i]) << '\n';
        return exit_ok;
    }

    auto run_construct(const Context & c) -> int
    {
        auto p = c.instance();
        AllocationTable table = [&] {
            if (c.f.method == "ordered")
                return ordered_construction(p);
            if (c.f.method == "group")
                return group_construction(p, c.f.special - 1);
            throw InvalidInputError("unknown method \"" + c.f.method + "\"");
        }();
        if (! c.f.output.empty())
            save_table(table, c.f.output);
        if (c.machine())
            c.emit(table_to_json(table));
        else {
            print_table(c.out, table);
            print_witness(c.out, table, max_switching_cost(table, c.f.threads));
        }
        return exit_ok;
    }

    void print_outcome(std::ostream & out, const SolveOutcome & o)
    {
        out << to_string(o.verdict) << ": maximum switching cost " << o.max_cost << " for n=" << o.instance.n
            << " k=" << o.instance.k << " (" << to_string(o.instance.regime) << "), "
            << o.instance.vector_count() << " demand vectors\n"
            << "nodes expanded " << o.stats.nodes_expanded << ", deepest " << o.stats.max_depth << ", exhaustive "
            << (o.stats.exhaustive ? "yes" : "no") << '\n';
    }

    auto run_solve(const Context & c) -> int
    {
        auto p = c.instance();
        auto outcome = feasible(p, c.f.max_cost, { c.f.threads });
        if (! c.f.output.empty() && outcome.witness)
            save_table(*outcome.witness, c.f.output);
        if (c.machine())
            c.emit(outcome_to_json(outcome));
        else {
            print_outcome(c.out, outcome);
            if (outcome.witness)
                print_table(c.out, *outcome.witness);
        }
        return outcome.verdict == Verdict::Feasible ? exit_ok : exit_negative;
    }

    auto run_min_distortion(const Context & c) -> int
    {
        auto p = c.instance();
        auto result = min_max_distortion(p, { c.f.threads });
        if (! c.f.output.empty())
            save_table(result.witness, c.f.output);
        if (c.machine()) {
            auto attempts = json::array();
            for (const auto & a : result.attempts)
                attempts.push_back(outcome_to_json(a));
            c.emit({ { "instance", instance_to_json(p) }, { "D", result.min_cost },
                { "witness", table_to_json(result.witness) }, { "attempts", attempts } });
        }
        else
            c.out << result.min_cost << '\n';
        return exit_ok;
    }

    auto run_verify(const Context & c) -> int
    {
        auto doc = read_json_file(c.f.table);
        if (doc.is_object() && doc.contains("verdict")) {
            auto outcome = outcome_from_json(doc);
            bool ok = false;
            json result { { "kind", "outcome" }, { "verdict", std::string(to_string(outcome.verdict)) },
                { "D", outcome.max_cost } };
            if (outcome.verdict == Verdict::Feasible)
                ok = verify_witness(outcome);
            else {
                // infeasible claims are re-derived serially
                auto again = feasible_serial(outcome.instance, outcome.max_cost);
                ok = again.verdict == Verdict::Infeasible && again.stats.exhaustive;
            }
            result["confirmed"] = ok;
            if (c.machine())
                c.emit(result);
            else
                c.out << to_string(outcome.verdict) << " claim for D=" << outcome.max_cost << ": "
                      << (ok ? "confirmed" : "NOT confirmed") << '\n';
            return ok ? exit_ok : exit_negative;
        }

        AllocationTable table = [&] {
            try {
                return table_from_json(doc);
            }
            catch (const LoadError & e) {
                throw LoadError(c.f.table + ": " + e.what(), e.entry());
            }
        }();
        auto validation = validate_table(table);
        auto cost = max_switching_cost(table, c.f.threads);
        bool within = c.f.max_cost < 0 || cost.max_cost <= c.f.max_cost;
        bool ok = validation.valid_partial() && within;
        if (c.machine()) {
            json result { { "kind", "table" }, { "instance", instance_to_json(table.instance()) },
                { "total", validation.total }, { "present", table.present_count() },
                { "violating", validation.violating.size() } };
            result.update(witness_json(table, cost));
            result["bound"] = c.f.max_cost < 0 ? json(nullptr) : json(c.f.max_cost);
            result["ok"] = ok;
            c.emit(result);
        }
        else {
            c.out << (validation.total ? "total" : "partial") << " table, " << table.present_count()
                  << " entries, all demands satisfied\n";
            print_witness(c.out, table, cost);
            if (c.f.max_cost >= 0)
                c.out << (within ? "within" : "EXCEEDS") << " the bound " << c.f.max_cost << '\n';
        }
        return ok ? exit_ok : exit_negative;
    }

    auto config_json(const CharSet & anchor, const ConfigReport & r) -> json
    {
        json g = json::object();
        for (const auto & [ch, i] : r.freeze.g)
            g[std::to_string(ch)] = i;
        json doc { { "anchor", anchor }, { "configuration", std::string(to_string(r.configuration)) },
            { "freeze", g } };
        if (r.semi_freeze) {
            json h = json::object();
            for (const auto & [ch, i] : r.semi_freeze->h)
                h[std::to_string(ch)] = i;
            doc["semi_freeze"] = { { "h", h }, { "wildcard", r.semi_freeze->wildcard } };
        }
        else
            doc["semi_freeze"] = nullptr;
        return doc;
    }

    auto run_analyze(const Context & c) -> int
    {
        auto table = load_table(c.f.table);
        const auto & p = table.instance();
        auto cost = max_switching_cost(table, c.f.threads);
        json doc { { "instance", instance_to_json(p) } };
        doc["distortion"] = witness_json(table, cost);

        // task types need every adjacent pair at cost <= 2
        std::optional<TaskTypeReport> types;
        if (cost.max_cost <= 2) {
            types = classify_all(table);
            doc["task_types"] = task_report_to_json(table, *types);
        }
        else
            doc["task_types"] = nullptr;

        // local families need every 0/1 vector
        bool has_subsets = p.n >= 2 && p.n <= p.k && p.n <= 255;
        if (has_subsets)
            for (const auto & set : subsets_of_size(p.k, p.n))
                if (! table.find(subset_vector(set, p.k))) {
                    has_subsets = false;
                    break;
                }
        auto families = json::array();
        std::map<std::string, std::size_t> config_counts;
        if (has_subsets)
            for (const auto & anchor : subsets_of_size(p.k, p.n - 1)) {
                auto r = classify_config(family_from_table(table, anchor));
                ++config_counts[std::string(to_string(r.configuration))];
                families.push_back(config_json(anchor, r));
            }
        doc["families"] = has_subsets ? families : json(nullptr);

        if (c.machine())
            c.emit(doc);
        else {
            c.out << "n=" << p.n << " k=" << p.k << " regime=" << to_string(p.regime) << '\n';
            print_witness(c.out, table, cost);
            if (types)
                c.out << "task types over " << types->entries.size() << " (vector, task) pairs: type 1 "
                      << types->type1 << ", type 2 " << types->type2 << ", ambiguous " << types->ambiguous
                      << ", mixed " << types->mixed << '\n';
            if (has_subsets) {
                c.out << "local families: " << families.size();
                for (const auto & [name, count] : config_counts)
                    c.out << ", " << name << ' ' << count;
                c.out << '\n';
            }
        }
        if (! c.f.output.empty())
            write_json_file(doc, c.f.output);
        return exit_ok;
    }

    auto run_check_lemma(const Context & c) -> int
    {
        PropertyReport report;
        if (is_local_lemma(c.f.lemma)) {
            if (! c.f.table.empty())
                throw InvalidInputError("lemma " + c.f.lemma + " takes --n and --k, not --table");
            if (c.f.n <= 0 || c.f.k <= 0)
                throw InvalidInputError("lemma " + c.f.lemma + " needs --n and --k");
            report = check_local_lemma(parse_local_lemma(c.f.lemma), c.f.n, c.f.k, { c.f.threads, false });
        }
        else if (is_table_lemma(c.f.lemma)) {
            if (c.f.table.empty())
                throw InvalidInputError("lemma " + c.f.lemma + " needs --table");
            if (c.f.n > 0 || c.f.k > 0)
                throw InvalidInputError("lemma " + c.f.lemma + " reads n and k from the table");
            report = check_table_lemma(load_table(c.f.table), parse_table_lemma(c.f.lemma));
        }
        else
            throw InvalidInputError("unknown lemma \"" + c.f.lemma + "\"");
        auto doc = report_to_json(report);
        if (c.machine())
            c.emit(doc);
        else
            print_report(c.out, report);
        if (! c.f.output.empty())
            write_json_file(doc, c.f.output);
        return report.passed() ? exit_ok : exit_negative;
    }

    auto run_simulate(const Context & c) -> int
    {
        auto table = load_table(c.f.table);
        Trace trace;
        std::vector<StepRecord> records;
        if (! c.f.trace.empty()) {
            if (! c.f.start.empty())
                throw InvalidInputError("--trace already names the start vector");
            trace = trace_from_json(read_json_file(c.f.trace));
            records = run_trace(table, trace);
        }
        else {
            if (c.f.start.empty())
                throw InvalidInputError("simulate needs --trace or --start");
            auto walk = random_walk(table, parse_counts(c.f.start), c.f.steps, c.f.seed);
            trace = std::move(walk.trace);
            records = std::move(walk.records);
        }
        auto stats = walk_stats(records);
        if (! c.f.output.empty()) {
            std::ostringstream csv;
            write_records_csv(records, csv);
            write_text(c.f.output, csv.str());
        }
        if (c.machine())
            c.emit({ { "trace", trace_to_json(trace) }, { "records", records_to_json(records) },
                { "stats", stats_to_json(stats) } });
        else {
            for (std::size_t i = 0; i < records.size(); ++i) {
                const auto & r = records[i];
                c.out << "step " << (i + 1) << ": " << format_counts(r.before) << " -> " << format_counts(r.after)
                      << " cost " << r.cost;
                for (const auto & m : r.moved)
                    c.out << "  agent " << (m.agent + 1) << ' ' << human_task(m.from) << "->" << human_task(m.to);
                c.out << '\n';
            }
            c.out << stats.steps << " steps, max cost " << stats.max << ", mean " << stats.mean << '\n';
        }
        return exit_ok;
    }

    auto exit_code(ErrorKind kind) -> int
    {
        switch (kind) {
        case ErrorKind::Capacity:
        case ErrorKind::Domain:
        case ErrorKind::Precondition:
            return exit_limits;
        default:
            return exit_usage;
        }
    }
}

auto dispatch(int argc, const char * const * argv, std::ostream & out, std::ostream & err) -> int
{
    Flags f;
    CLI::App app { "Agent allocation tables with bounded switching cost", "switchcost" };
    app.require_subcommand(1);

    const auto add_instance = [&](CLI::App * sub, bool required) {
        auto * n = sub->add_option("--n", f.n, "number of agents")->check(CLI::PositiveNumber);
        auto * k = sub->add_option("--k", f.k, "number of tasks")->check(CLI::PositiveNumber);
        if (required) {
            n->required();
            k->required();
        }
    };
    const auto add_regime = [&](CLI::App * sub) {
        sub->add_option("--regime", f.regime, "full or subset")->check(CLI::IsMember({ "full", "subset" }));
    };
    const auto add_format = [&](CLI::App * sub) {
        sub->add_option("--format", f.format, "human or machine")->check(CLI::IsMember({ "human", "machine" }));
        sub->add_option("--output", f.output, "file for the result");
    };
    const auto add_threads = [&](CLI::App * sub) {
        sub->add_option("--threads", f.threads, "worker threads, 0 for the default")->check(CLI::NonNegativeNumber);
    };

    auto * enumerate = app.add_subcommand("enumerate", "list the demand vectors in canonical order");
    add_instance(enumerate, true);
    add_regime(enumerate);
    add_format(enumerate);

    auto * construct = app.add_subcommand("construct", "build the ordered or group construction");
    add_instance(construct, true);
    add_regime(construct);
    add_format(construct);
    add_threads(construct);
    construct->add_option("--method", f.method, "ordered or group")->check(CLI::IsMember({ "ordered", "group" }));
    construct->add_option("--special", f.special, "special task of the group construction, from 1")
        ->check(CLI::PositiveNumber);

    auto * solve = app.add_subcommand("solve", "decide whether maximum switching cost D is attainable");
    add_instance(solve, true);
    add_regime(solve);
    add_format(solve);
    add_threads(solve);
    solve->add_option("--max-cost", f.max_cost, "the bound D")->required()->check(CLI::NonNegativeNumber);

    auto * min_distortion = app.add_subcommand("min-distortion", "smallest attainable maximum switching cost");
    add_instance(min_distortion, true);
    add_regime(min_distortion);
    add_format(min_distortion);
    add_threads(min_distortion);

    auto * verify = app.add_subcommand("verify", "re-check a table or a solver outcome");
    verify->add_option("--table", f.table, "table or outcome document")->required();
    verify->add_option("--max-cost", f.max_cost, "fail when the table exceeds this")->check(CLI::NonNegativeNumber);
    verify->add_option("--format", f.format, "human or machine")->check(CLI::IsMember({ "human", "machine" }));
    add_threads(verify);

    auto * analyze = app.add_subcommand("analyze", "task types and local family structure of a table");
    analyze->add_option("--table", f.table, "table document")->required();
    add_format(analyze);
    add_threads(analyze);

    auto * check = app.add_subcommand("check-lemma", "check a structural property exhaustively");
    check->add_option("--lemma", f.lemma, "fix, exists3, fix2, pair, spec, dest2, sw1, tech, ss, one2, all2int, ind")
        ->required();
    add_instance(check, false);
    check->add_option("--table", f.table, "table document, for the table properties");
    add_format(check);
    add_threads(check);

    auto * simulate = app.add_subcommand("simulate", "replay or generate a sequence of demand changes");
    simulate->add_option("--table", f.table, "table document")->required();
    simulate->add_option("--trace", f.trace, "trace document to replay");
    simulate->add_option("--start", f.start, "start vector for a random walk, e.g. 1,1,0");
    simulate->add_option("--steps", f.steps, "random walk length");
    simulate->add_option("--seed", f.seed, "random walk seed");
    add_format(simulate);

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError & e) {
        auto code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    const std::vector<std::pair<CLI::App *, std::function<int(const Context &)>>> handlers {
        { enumerate, run_enumerate }, { construct, run_construct }, { solve, run_solve },
        { min_distortion, run_min_distortion }, { verify, run_verify }, { analyze, run_analyze },
        { check, run_check_lemma }, { simulate, run_simulate } };

    Context ctx { f, out, err };
    try {
        for (const auto & [sub, handler] : handlers)
            if (sub->parsed())
                return handler(ctx);
    }
    catch (const Error & e) {
        err << "error: " << e.what() << '\n';
        return exit_code(e.kind());
    }
    catch (const nlohmann::json::exception & e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }
    catch (const std::exception & e) {
        err << "error: " << e.what() << '\n';
        return exit_limits;
    }
    return exit_usage;
}

auto dispatch(const std::vector<std::string> & args, std::ostream & out, std::ostream & err) -> int
{
    std::vector<const char *> argv { "switchcost" };
    for (const auto & a : args)
        argv.push_back(a.c_str());
    return dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
}

} // namespace switchcost
