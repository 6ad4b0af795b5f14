#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace switchcost {

/// Counterexamples kept verbatim in a report; the count is always exact.
inline constexpr std::size_t max_recorded_failures = 16;

/// Outcome of checking one property over every instantiation of its
/// hypothesis. instances = non_vacuous_passes + vacuous + failures.
struct PropertyReport
{
    std::string property;
    int n = 0;
    int k = 0;
    std::uint64_t instances = 0;
    std::uint64_t non_vacuous_passes = 0;
    std::uint64_t vacuous = 0;
    std::uint64_t failures = 0;
    std::vector<nlohmann::json> counterexamples;

    [[nodiscard]] auto passed() const -> bool { return failures == 0; }

    void record_pass() { ++instances, ++non_vacuous_passes; }
    void record_vacuous() { ++instances, ++vacuous; }
    void record_failure(nlohmann::json witness);
    /// Appends another report's counts and, up to the cap, its counterexamples.
    void merge(const PropertyReport & other);

    friend auto operator==(const PropertyReport &, const PropertyReport &) -> bool = default;
};

[[nodiscard]] auto report_to_json(const PropertyReport & report) -> nlohmann::json;
[[nodiscard]] auto report_from_json(const nlohmann::json & doc) -> PropertyReport;

} // namespace switchcost
