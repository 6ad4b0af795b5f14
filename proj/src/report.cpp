#include "switchcost/report.hpp"

#include "switchcost/error.hpp"

namespace switchcost {

void PropertyReport::record_failure(nlohmann::json witness)
{
    ++instances;
    ++failures;
    if (counterexamples.size() < max_recorded_failures)
        counterexamples.push_back(std::move(witness));
}

void PropertyReport::merge(const PropertyReport & other)
{
    instances += other.instances;
    non_vacuous_passes += other.non_vacuous_passes;
    vacuous += other.vacuous;
    failures += other.failures;
    for (const auto & c : other.counterexamples) {
        if (counterexamples.size() >= max_recorded_failures)
            break;
        counterexamples.push_back(c);
    }
}

auto report_to_json(const PropertyReport & report) -> nlohmann::json
{
    return { { "property", report.property }, { "n", report.n }, { "k", report.k },
        { "instances", report.instances }, { "non_vacuous_passes", report.non_vacuous_passes },
        { "vacuous", report.vacuous }, { "failures", report.failures },
        { "counterexamples", report.counterexamples } };
}

auto report_from_json(const nlohmann::json & doc) -> PropertyReport
{
    try {
        PropertyReport report;
        report.property = doc.at("property").get<std::string>();
        report.n = doc.at("n").get<int>();
        report.k = doc.at("k").get<int>();
        report.instances = doc.at("instances").get<std::uint64_t>();
        report.non_vacuous_passes = doc.at("non_vacuous_passes").get<std::uint64_t>();
        report.vacuous = doc.at("vacuous").get<std::uint64_t>();
        report.failures = doc.at("failures").get<std::uint64_t>();
        report.counterexamples = doc.at("counterexamples").get<std::vector<nlohmann::json>>();
        if (report.instances != report.non_vacuous_passes + report.vacuous + report.failures)
            throw LoadError("report counts do not add up");
        return report;
    }
    catch (const Error &) {
        throw;
    }
    catch (const std::exception & e) {
        throw LoadError(std::string("malformed report document: ") + e.what());
    }
}

} // namespace switchcost
