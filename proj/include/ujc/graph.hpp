#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ujc {

using Edge = std::pair<int, int>;

// Simple undirected graph in CSR form. Immutable once built.
class Graph {
public:
    Graph() = default;
    explicit Graph(int n);

    // Self-loops are dropped and parallel edges collapsed. Endpoints must be in [0, n).
    static Graph from_edges(int n, const std::vector<Edge>& edges);

    int node_count() const { return n_; }
    std::size_t edge_count() const { return targets_.size() / 2; }
    bool empty() const { return n_ == 0; }

    std::span<const int> neighbors(int v) const {
        return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
    }
    int degree(int v) const { return static_cast<int>(offsets_[v + 1] - offsets_[v]); }
    int max_degree() const;
    bool has_edge(int u, int v) const;

    // Edges with u < v, lexicographic.
    std::vector<Edge> edges() const;

    // Original identifiers; empty when labels are the indices themselves.
    const std::vector<std::string>& labels() const { return labels_; }
    void set_labels(std::vector<std::string> labels);
    std::string label(int v) const;

    // Subgraph induced by nodes, renumbered in the given order. Labels carry over.
    Graph induced(const std::vector<int>& nodes) const;

    bool operator==(const Graph& o) const {
        return n_ == o.n_ && offsets_ == o.offsets_ && targets_ == o.targets_;
    }

private:
    int n_ = 0;
    std::vector<std::size_t> offsets_{0};
    std::vector<int> targets_;
    std::vector<std::string> labels_;
};

struct GraphStats {
    int n = 0;
    std::size_t m = 0;
    double avg_degree = 0.0;
    int max_degree = 0;
    int components = 0;
    int largest_component = 0;
};

GraphStats graph_stats(const Graph& g);

// Component id per node (ids in order of smallest member) and the component count.
std::pair<std::vector<int>, int> connected_components(const Graph& g);

// Node lists per component, each ascending, components ordered by smallest node.
std::vector<std::vector<int>> component_nodes(const Graph& g);

bool is_independent(const Graph& g, const std::vector<int>& nodes);

}  // namespace ujc
