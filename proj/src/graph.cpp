#include "ujc/graph.hpp"

#include <algorithm>
#include <numeric>

#include "ujc/errors.hpp"

namespace ujc {

Graph::Graph(int n) : n_(n), offsets_(static_cast<std::size_t>(n) + 1, 0) {
    if (n < 0) throw InvalidArgument("negative node count");
}

Graph Graph::from_edges(int n, const std::vector<Edge>& edges) {
    Graph g(n);
    std::vector<Edge> half;
    half.reserve(edges.size() * 2);
    for (auto [u, v] : edges) {
        if (u < 0 || v < 0 || u >= n || v >= n)
            throw InvalidArgument("edge (" + std::to_string(u) + "," + std::to_string(v) + ") out of range");
        if (u == v) continue;
        half.emplace_back(u, v);
        half.emplace_back(v, u);
    }
    std::sort(half.begin(), half.end());
    half.erase(std::unique(half.begin(), half.end()), half.end());
    g.targets_.resize(half.size());
    for (std::size_t i = 0; i < half.size(); ++i) {
        g.offsets_[half[i].first + 1]++;
        g.targets_[i] = half[i].second;
    }
    std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());
    return g;
}

int Graph::max_degree() const {
    int d = 0;
    for (int v = 0; v < n_; ++v) d = std::max(d, degree(v));
    return d;
}

bool Graph::has_edge(int u, int v) const {
    if (u < 0 || v < 0 || u >= n_ || v >= n_) return false;
    if (degree(u) > degree(v)) std::swap(u, v);
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<Edge> Graph::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (int u = 0; u < n_; ++u)
        for (int v : neighbors(u))
            if (u < v) out.emplace_back(u, v);
    return out;
}

void Graph::set_labels(std::vector<std::string> labels) {
    if (!labels.empty() && static_cast<int>(labels.size()) != n_)
        throw InvalidArgument("label count does not match node count");
    labels_ = std::move(labels);
}

std::string Graph::label(int v) const {
    return labels_.empty() ? std::to_string(v) : labels_[v];
}

Graph Graph::induced(const std::vector<int>& nodes) const {
    std::vector<int> index(n_, -1);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const int v = nodes[i];
        if (v < 0 || v >= n_) throw InvalidArgument("induced: node " + std::to_string(v) + " out of range");
        if (index[v] >= 0) throw InvalidArgument("induced: node " + std::to_string(v) + " repeated");
        index[v] = static_cast<int>(i);
    }
    // CSR built directly; linear in the kept edges. Rows come out sorted when nodes ascend.
    Graph h(static_cast<int>(nodes.size()));
    const bool ascending = std::is_sorted(nodes.begin(), nodes.end());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        for (int w : neighbors(nodes[i]))
            if (index[w] >= 0) h.targets_.push_back(index[w]);
        h.offsets_[i + 1] = h.targets_.size();
        if (!ascending) std::sort(h.targets_.begin() + h.offsets_[i], h.targets_.end());
    }
    if (!labels_.empty()) {
        std::vector<std::string> ls;
        ls.reserve(nodes.size());
        for (int v : nodes) ls.push_back(labels_[v]);
        h.labels_ = std::move(ls);
    }
    return h;
}

std::pair<std::vector<int>, int> connected_components(const Graph& g) {
    const int n = g.node_count();
    std::vector<int> comp(n, -1);
    std::vector<int> stack;
    int count = 0;
    for (int s = 0; s < n; ++s) {
        if (comp[s] >= 0) continue;
        comp[s] = count;
        stack.push_back(s);
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int w : g.neighbors(v))
                if (comp[w] < 0) {
                    comp[w] = count;
                    stack.push_back(w);
                }
        }
        ++count;
    }
    return {comp, count};
}

std::vector<std::vector<int>> component_nodes(const Graph& g) {
    auto [comp, count] = connected_components(g);
    std::vector<std::vector<int>> out(count);
    for (int v = 0; v < g.node_count(); ++v) out[comp[v]].push_back(v);
    return out;
}

GraphStats graph_stats(const Graph& g) {
    GraphStats s;
    s.n = g.node_count();
    s.m = g.edge_count();
    s.avg_degree = s.n > 0 ? 2.0 * static_cast<double>(s.m) / s.n : 0.0;
    s.max_degree = g.max_degree();
    auto [comp, count] = connected_components(g);
    s.components = count;
    std::vector<int> sizes(count, 0);
    for (int c : comp) sizes[c]++;
    for (int sz : sizes) s.largest_component = std::max(s.largest_component, sz);
    return s;
}

bool is_independent(const Graph& g, const std::vector<int>& nodes) {
    std::vector<char> in(g.node_count(), 0);
    for (int v : nodes) {
        if (v < 0 || v >= g.node_count() || in[v]) return false;
        in[v] = 1;
    }
    for (int v : nodes)
        for (int w : g.neighbors(v))
            if (in[w]) return false;
    return true;
}

}  // namespace ujc
