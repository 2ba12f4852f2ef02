#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "femu/beam_fe.hpp"

namespace femu {

/// Schema identifier and version written into, and required from, structure files.
inline constexpr const char* kStructureSchema = "femu.structure";
inline constexpr int kStructureSchemaVersion = 1;

StructureModel structure_from_json(const nlohmann::json& doc);
nlohmann::json structure_to_json(const StructureModel& model, const std::string& name,
                                 const std::string& note = {});

StructureModel load_structure(const std::filesystem::path& path);

/// Directory holding the shipped configuration files (h_structure.default.json etc.).
std::filesystem::path default_data_dir();

}  // namespace femu
