#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ujc/graph.hpp"
#include "ujc/io.hpp"
#include "ujc/solvers.hpp"

namespace ujc {

struct ReductionStep {
    int selected = -1;
    std::vector<int> removed;  // neighbourhood at removal time, ascending, without selected
    int clique_size = 1;
};

struct ReductionTrace {
    std::vector<ReductionStep> steps;
    Graph kernel;
    std::vector<int> kernel_node_map;  // kernel node -> original node
    int original_n = 0;

    std::vector<int> selections() const;
};

// Nodes whose neighbourhood is a clique, ascending.
std::vector<int> find_exposed_nodes(const Graph& g);
bool is_exposed(const Graph& g, int v);

// Isolated clique removal in (degree, label) order; with a seed the label
// tie-break uses a random relabelling instead.
ReductionTrace reduce(const Graph& g, std::optional<std::uint64_t> relabel_seed = std::nullopt);

// Union of trace selections and the mapped kernel solution. Throws Infeasible.
Assignment expand_solution(const ReductionTrace& trace, const Assignment& kernel_mis);

// (n - n_K) / n, and 1 for the empty graph.
double reduction_factor(const ReductionTrace& trace);

// Kernel components as lists of kernel node ids.
std::vector<std::vector<int>> kernel_components(const ReductionTrace& trace);

json trace_to_json(const ReductionTrace& trace);
ReductionTrace trace_from_json(const json& j);

struct SplitOptions {
    int cap = 10;  // largest allowed K
    OracleLimits limits;
};

struct SplitResult {
    Assignment solution;
    int size = 0;
    std::vector<int> pattern;  // per requested split node: 1 included, 0 excluded
    std::vector<std::pair<int, int>> decisions;  // every split taken on the best path, (node, 0/1)
    int reduced_selections = 0;  // nodes picked by reduction rather than by a split
    int branches = 0;
    int pruned = 0;
};

// Branch on split nodes (include first), reduce each branch, and keep splitting on the
// highest-degree kernel node while the budget K lasts. Leftover kernels go to the oracle.
SplitResult split_and_reduce(const Graph& g, const std::vector<int>& split_nodes, int budget,
                             const SplitOptions& options = {});

}  // namespace ujc
