#pragma once

// Independent reference implementations used only by tests. Deliberately naive.

#include <cstdint>
#include <vector>

#include "ujc/graph.hpp"

namespace oracle {

inline bool independent_mask(const ujc::Graph& g, std::uint32_t mask) {
    for (auto [u, v] : g.edges())
        if ((mask >> u & 1u) && (mask >> v & 1u)) return false;
    return true;
}

// Counts of independent sets by size, by visiting all 2^n subsets (n <= 24).
inline std::vector<std::uint64_t> subset_counts(const ujc::Graph& g) {
    const int n = g.node_count();
    std::vector<std::uint64_t> c(n + 1, 0);
    for (std::uint32_t m = 0; m < (1u << n); ++m)
        if (independent_mask(g, m)) c[__builtin_popcount(m)]++;
    while (c.size() > 1 && c.back() == 0) c.pop_back();
    return c;
}

inline int subset_mis(const ujc::Graph& g) { return static_cast<int>(subset_counts(g).size()) - 1; }

inline std::vector<std::uint32_t> subset_optima(const ujc::Graph& g) {
    const int n = g.node_count();
    int best = subset_mis(g);
    std::vector<std::uint32_t> out;
    for (std::uint32_t m = 0; m < (1u << n); ++m)
        if (__builtin_popcount(m) == best && independent_mask(g, m)) out.push_back(m);
    return out;
}

// Exposed-node test straight from the definition.
inline bool neighbourhood_is_clique(const ujc::Graph& g, int v) {
    std::vector<int> nb(g.neighbors(v).begin(), g.neighbors(v).end());
    for (int a : nb)
        for (int b : nb)
            if (a != b && !g.has_edge(a, b)) return false;
    return true;
}

}  // namespace oracle
