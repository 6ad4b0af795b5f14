#pragma once

// Allocation table documents.
//
//   {"n": 3, "k": 2, "regime": "full",
//    "entries": [{"demand": [0,3], "assignment": [1,1,1]}, ...],
//    "domain": [[0,3], ...]}          // partial tables only
//
// Entries appear in canonical demand-vector order, tasks 0-indexed.

#include "switchcost/model.hpp"

#include <filesystem>

#include <json.hpp>

namespace switchcost {

[[nodiscard]] auto table_to_json(const AllocationTable & table) -> nlohmann::json;

/// Validates the document and the table it describes; throws LoadError
/// naming the offending entry index.
[[nodiscard]] auto table_from_json(const nlohmann::json & doc) -> AllocationTable;

void save_table(const AllocationTable & table, const std::filesystem::path & path);
[[nodiscard]] auto load_table(const std::filesystem::path & path) -> AllocationTable;

[[nodiscard]] auto read_json_file(const std::filesystem::path & path) -> nlohmann::json;
void write_json_file(const nlohmann::json & doc, const std::filesystem::path & path);

[[nodiscard]] auto instance_to_json(const ProblemInstance & instance) -> nlohmann::json;

} // namespace switchcost
