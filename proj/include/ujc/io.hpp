#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "ujc/graph.hpp"
#include "ujc/lattice.hpp"

namespace ujc {

using json = nlohmann::json;

// "u v" per line, '#' comments, blank lines ignored. Nodes are renumbered in
// first-appearance order and the original tokens become labels.
Graph load_edge_list(const std::string& text);
std::string save_edge_list(const Graph& g);

json graph_to_json(const Graph& g);
Graph graph_from_json(const json& j);

json placement_to_json(const Placement& p);
Placement placement_from_json(const json& j);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& text);

// Dispatches on extension: .json is graph JSON, anything else an edge list.
Graph load_graph_file(const std::filesystem::path& path);

}  // namespace ujc
