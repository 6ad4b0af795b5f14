#include "switchcost/table_io.hpp"

#include "switchcost/error.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace switchcost {

using nlohmann::json;

namespace {

    auto int_array(const json & value, const char * what, long entry) -> std::vector<int>
    {
        if (! value.is_array())
            throw LoadError(std::string(what) + " must be an integer array", entry);
        std::vector<int> out;
        out.reserve(value.size());
        for (const auto & x : value) {
            if (! x.is_number_integer())
                throw LoadError(std::string(what) + " must be an integer array", entry);
            out.push_back(x.get<int>());
        }
        return out;
    }

    auto required(const json & doc, const char * key) -> const json &
    {
        auto it = doc.find(key);
        if (it == doc.end())
            throw LoadError(std::string("missing field \"") + key + "\"");
        return *it;
    }
}

auto instance_to_json(const ProblemInstance & instance) -> json
{
    return json{ { "n", instance.n }, { "k", instance.k }, { "regime", std::string(to_string(instance.regime)) } };
}

auto table_to_json(const AllocationTable & table) -> json
{
    auto doc = instance_to_json(table.instance());
    auto entries = json::array();
    auto domain = json::array();
    for (std::size_t i = 0; i < table.size(); ++i) {
        if (! table.has(i))
            continue;
        const auto & counts = table.space().vector(i).counts();
        entries.push_back(json{ { "demand", counts }, { "assignment", table.entry(i)->tasks() } });
        domain.push_back(counts);
    }
    doc["entries"] = std::move(entries);
    if (! table.is_total())
        doc["domain"] = std::move(domain);
    return doc;
}

auto table_from_json(const json & doc) -> AllocationTable
{
    if (! doc.is_object())
        throw LoadError("table document must be an object");

    ProblemInstance instance;
    try {
        instance.n = required(doc, "n").get<int>();
        instance.k = required(doc, "k").get<int>();
        instance.regime = parse_regime(required(doc, "regime").get<std::string>());
        instance.validate();
    }
    catch (const LoadError &) {
        throw;
    }
    catch (const std::exception & e) {
        throw LoadError(std::string("bad header: ") + e.what());
    }

    std::shared_ptr<const DemandSpace> space;
    try {
        space = DemandSpace::make(instance);
    }
    catch (const std::exception & e) {
        throw LoadError(std::string("bad header: ") + e.what());
    }
    AllocationTable table(space);

    const auto & entries = required(doc, "entries");
    if (! entries.is_array())
        throw LoadError("\"entries\" must be an array");

    std::optional<std::size_t> previous;
    for (std::size_t e = 0; e < entries.size(); ++e) {
        auto entry = static_cast<long>(e);
        const auto & record = entries[e];
        if (! record.is_object() || ! record.contains("demand") || ! record.contains("assignment"))
            throw LoadError("entry needs \"demand\" and \"assignment\"", entry);
        auto counts = int_array(record["demand"], "demand", entry);
        auto tasks = int_array(record["assignment"], "assignment", entry);

        std::optional<std::size_t> index;
        try {
            index = space->rank(DemandVector(counts));
        }
        catch (const std::exception &) {
        }
        if (! index)
            throw LoadError("demand is not a member of the instance", entry);
        if (previous && *index <= *previous)
            throw LoadError("entries are not in canonical order or repeat a demand", entry);
        previous = index;

        if (std::any_of(tasks.begin(), tasks.end(), [](int t) { return t < 0; }))
            throw LoadError("assignment contains a negative task id", entry);
        Assignment assignment(std::move(tasks));
        if (! assignment.satisfies(space->vector(*index)))
            throw LoadError("assignment does not satisfy demand " + format_counts(space->vector(*index)), entry);
        table.set(*index, std::move(assignment));
    }

    if (auto it = doc.find("domain"); it != doc.end()) {
        if (! it->is_array() || it->size() != table.present_count())
            throw LoadError("\"domain\" must list exactly the vectors that have entries");
        for (std::size_t d = 0; d < it->size(); ++d) {
            auto counts = int_array((*it)[d], "domain member", static_cast<long>(d));
            const Assignment * found = nullptr;
            try {
                found = table.find(DemandVector(counts));
            }
            catch (const std::exception &) {
            }
            if (! found)
                throw LoadError("domain member has no entry", static_cast<long>(d));
        }
    }
    else if (! table.is_total()) {
        auto report = validate_table(table);
        throw LoadError("table is not total: demand " + format_counts(space->vector(report.missing.front()))
                + " has no entry",
            static_cast<long>(report.missing.front()));
    }

    return table;
}

auto read_json_file(const std::filesystem::path & path) -> json
{
    std::ifstream in(path);
    if (! in)
        throw LoadError("cannot open " + path.string());
    try {
        return json::parse(in);
    }
    catch (const json::parse_error & e) {
        throw LoadError("malformed document " + path.string() + ": " + e.what());
    }
}

void write_json_file(const json & doc, const std::filesystem::path & path)
{
    std::ofstream out(path);
    if (! out)
        throw InvalidInputError("cannot write " + path.string());
    out << doc.dump(1) << '\n';
}

void save_table(const AllocationTable & table, const std::filesystem::path & path)
{
    write_json_file(table_to_json(table), path);
}

auto load_table(const std::filesystem::path & path) -> AllocationTable
{
    return table_from_json(read_json_file(path));
}

} // namespace switchcost
