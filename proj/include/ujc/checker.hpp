#pragma once

#include <array>
#include <set>
#include <string>
#include <vector>

#include "ujc/graph.hpp"
#include "ujc/io.hpp"

namespace ujc {

// Achievable triangle counts per degree for a UJ node.
struct AdmissibilityTable {
    std::array<std::set<int>, 9> interior;  // full 8-neighbourhood
    std::array<std::set<int>, 9> boundary;  // 5-neighbourhood (edge of the array)
    std::array<std::set<int>, 9> corner;    // 3-neighbourhood

    bool admissible(int degree, int triangles) const {
        return degree >= 0 && degree <= 8 && interior[degree].count(triangles) > 0;
    }
};

AdmissibilityTable build_admissibility_table();
const AdmissibilityTable& admissibility_table();

// Edges among the neighbours of v.
int node_triangle_count(const Graph& g, int v);

struct NodeFailure {
    int node = -1;
    int degree = 0;
    int triangles = 0;
    std::string reason;
};

struct CompatibilityReport {
    bool compatible_candidate = true;
    std::vector<NodeFailure> failing_nodes;
    std::vector<std::string> checks_run;
};

// depth 1: d_max <= 8. depth >= 2: every node's (degree, triangles) must be achievable.
// A positive answer is necessary, not sufficient, for native embeddability.
CompatibilityReport check_graph(const Graph& g, int depth = 2);

json report_to_json(const CompatibilityReport& r);

}  // namespace ujc
