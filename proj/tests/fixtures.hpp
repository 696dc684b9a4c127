#pragma once

#include <vector>

#include "ujc/graph.hpp"

namespace fixtures {

// The 13-node reduction walkthrough graph. Node k of the figure is index k - 1.
inline ujc::Graph walkthrough13() {
    const std::vector<ujc::Edge> e1 = {{2, 3},  {3, 4},  {3, 5},  {3, 6},   {3, 7},   {4, 5},  {4, 6},
                                       {4, 7},  {5, 6},  {5, 7},  {6, 7},   {6, 8},   {7, 8},  {7, 10},
                                       {9, 10}, {10, 11}, {10, 12}, {11, 12}, {12, 13}};
    std::vector<ujc::Edge> e;
    for (auto [u, v] : e1) e.emplace_back(u - 1, v - 1);
    ujc::Graph g = ujc::Graph::from_edges(13, e);
    std::vector<std::string> labels;
    for (int k = 1; k <= 13; ++k) labels.push_back(std::to_string(k));
    g.set_labels(labels);
    return g;
}

inline std::vector<int> one_based(const std::vector<int>& zero_based) {
    std::vector<int> out;
    for (int v : zero_based) out.push_back(v + 1);
    return out;
}

// Five-node logical graph of the random-key walkthrough.
inline ujc::Graph rk5() { return ujc::Graph::from_edges(5, {{0, 1}, {0, 2}, {1, 2}, {2, 3}, {3, 4}, {0, 4}}); }

inline const std::vector<double> kChiSpurious = {0.84, 0.34, 0.27, 0.07, 0.18, 0.42, 0.71, 0.13, 0.54};
inline const std::vector<double> kChiPerfect = {0.16, 0.23, 0.71, 0.05, 0.62, 0.29, 0.79, 0.47, 0.98};

inline ujc::Graph complete(int n) {
    std::vector<ujc::Edge> e;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) e.emplace_back(u, v);
    return ujc::Graph::from_edges(n, e);
}

inline ujc::Graph path(int n) {
    std::vector<ujc::Edge> e;
    for (int u = 0; u + 1 < n; ++u) e.emplace_back(u, u + 1);
    return ujc::Graph::from_edges(n, e);
}

inline ujc::Graph cycle(int n) {
    std::vector<ujc::Edge> e;
    for (int u = 0; u < n; ++u) e.emplace_back(u, (u + 1) % n);
    return ujc::Graph::from_edges(n, e);
}

inline ujc::Graph star(int leaves) {
    std::vector<ujc::Edge> e;
    for (int v = 1; v <= leaves; ++v) e.emplace_back(0, v);
    return ujc::Graph::from_edges(leaves + 1, e);
}

}  // namespace fixtures
