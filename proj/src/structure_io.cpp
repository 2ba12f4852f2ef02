#include "femu/structure_io.hpp"

#include <cstdlib>
#include <fstream>
#include <map>

#include "femu/errors.hpp"

namespace femu {
namespace {

using nlohmann::json;

const json& require(const json& obj, const char* key, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key))
        throw ConfigError(where + ": missing field '" + key + "'");
    return obj.at(key);
}

double require_number(const json& obj, const char* key, const std::string& where) {
    const json& v = require(obj, key, where);
    if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
    return v.get<double>();
}

Dof parse_dof(const json& v, const std::string& where) {
    if (!v.is_string()) throw ConfigError(where + ".dof: expected \"u\", \"v\" or \"theta\"");
    const auto s = v.get<std::string>();
    if (s == "u") return Dof::U;
    if (s == "v") return Dof::V;
    if (s == "theta") return Dof::Theta;
    throw ConfigError(where + ".dof: unknown DOF '" + s + "'");
}

const char* dof_name(int local) {
    static const char* names[] = {"u", "v", "theta"};
    return names[local];
}

}  // namespace

StructureModel structure_from_json(const json& doc) {
    const std::string root = "structure";
    if (require(doc, "schema", root) != kStructureSchema)
        throw ConfigError("structure.schema: expected '" + std::string(kStructureSchema) + "'");
    if (require(doc, "version", root) != kStructureSchemaVersion)
        throw ConfigError("structure.version: unsupported version " + doc.at("version").dump());

    std::map<std::string, ElementSection> sections;
    for (const auto& [name, s] : require(doc, "sections", root).items()) {
        const std::string where = "structure.sections." + name;
        sections[name] = {require_number(s, "area", where), require_number(s, "second_moment", where),
                          require_number(s, "density", where)};
    }

    StructureModel model;
    const json& nodes = require(doc, "nodes", root);
    if (!nodes.is_array()) throw ConfigError("structure.nodes: expected an array");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const std::string where = "structure.nodes[" + std::to_string(i) + "]";
        model.nodes.push_back({static_cast<int>(i), require_number(nodes[i], "x", where),
                               require_number(nodes[i], "y", where)});
    }

    const json& elements = require(doc, "elements", root);
    if (!elements.is_array()) throw ConfigError("structure.elements: expected an array");
    for (std::size_t i = 0; i < elements.size(); ++i) {
        const std::string where = "structure.elements[" + std::to_string(i) + "]";
        const json& e = elements[i];
        const json& ends = require(e, "nodes", where);
        if (!ends.is_array() || ends.size() != 2 || !ends[0].is_number_integer() ||
            !ends[1].is_number_integer())
            throw ConfigError(where + ".nodes: expected two node indices");
        const auto section_name = require(e, "section", where).get<std::string>();
        const auto it = sections.find(section_name);
        if (it == sections.end())
            throw ConfigError(where + ".section: unknown section '" + section_name + "'");
        model.elements.push_back({static_cast<int>(i), ends[0].get<int>(), ends[1].get<int>(),
                                  it->second, require_number(e, "modulus", where)});
    }

    if (doc.contains("measured_dofs")) {
        const json& measured = doc.at("measured_dofs");
        for (std::size_t i = 0; i < measured.size(); ++i) {
            const std::string where = "structure.measured_dofs[" + std::to_string(i) + "]";
            const json& node = require(measured[i], "node", where);
            if (!node.is_number_integer()) throw ConfigError(where + ".node: expected an integer");
            model.measured_dofs.push_back(
                dof_index(node.get<int>(), parse_dof(require(measured[i], "dof", where), where)));
        }
    }

    try {
        model.validate();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& ex) {
        throw ConfigError(std::string("structure: ") + ex.what());
    }
    return model;
}

json structure_to_json(const StructureModel& model, const std::string& name,
                       const std::string& note) {
    json doc;
    doc["schema"] = kStructureSchema;
    doc["version"] = kStructureSchemaVersion;
    doc["name"] = name;
    if (!note.empty()) doc["note"] = note;

    // Sections are deduplicated by value and named in order of first use.
    std::vector<ElementSection> unique;
    auto section_name = [&](const ElementSection& s) {
        for (std::size_t i = 0; i < unique.size(); ++i)
            if (unique[i] == s) return "section" + std::to_string(i);
        unique.push_back(s);
        return "section" + std::to_string(unique.size() - 1);
    };

    json elements = json::array();
    for (const auto& e : model.elements)
        elements.push_back({{"nodes", {e.node_a, e.node_b}},
                            {"section", section_name(e.section)},
                            {"modulus", e.modulus}});
    json sections = json::object();
    for (std::size_t i = 0; i < unique.size(); ++i)
        sections["section" + std::to_string(i)] = {{"area", unique[i].area},
                                                   {"second_moment", unique[i].second_moment},
                                                   {"density", unique[i].density}};
    json nodes = json::array();
    for (const auto& n : model.nodes) nodes.push_back({{"x", n.x}, {"y", n.y}});
    json measured = json::array();
    for (int d : model.measured_dofs)
        measured.push_back({{"node", d / kDofsPerNode}, {"dof", dof_name(d % kDofsPerNode)}});

    doc["sections"] = sections;
    doc["nodes"] = nodes;
    doc["elements"] = elements;
    doc["measured_dofs"] = measured;
    return doc;
}

StructureModel load_structure(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open structure file " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& ex) {
        throw ConfigError(path.string() + ": " + ex.what());
    }
    return structure_from_json(doc);
}

std::filesystem::path default_data_dir() {
    if (const char* env = std::getenv("FEMU_DATA_DIR")) return env;
    return FEMU_DATA_DIR;
}

}  // namespace femu
