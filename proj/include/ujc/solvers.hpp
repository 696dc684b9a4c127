#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ujc/graph.hpp"

namespace ujc {

// n_i in {0, 1} per node.
using Assignment = std::vector<std::uint8_t>;

Assignment to_assignment(int n, const std::vector<int>& nodes);
std::vector<int> selected_nodes(const Assignment& x);
bool is_feasible(const Graph& g, const Assignment& x);

struct MisResult {
    int size = 0;
    double weight = 0.0;
    Assignment witness;
    std::vector<Assignment> all_optima;  // filled only when enumeration was requested
    bool exact = false;
};

struct OracleLimits {
    std::uint64_t max_branches = 400'000'000;
    std::size_t max_optima = 1'000'000;
    int max_component = 512;
};

// Exact branch and bound over connected components. Throws OracleLimit when a cap is hit.
MisResult brute_force_mis(const Graph& g, bool enumerate_all = false, const OracleLimits& limits = {});

// D_alpha for every alpha (index = set size). Throws OracleLimit on overflow or caps.
std::vector<std::uint64_t> independence_polynomial(const Graph& g, const OracleLimits& limits = {});
std::uint64_t count_independent_sets(const Graph& g, int alpha, const OracleLimits& limits = {});

struct HardnessRecord {
    int mis = 0;
    std::uint64_t d_mis = 0;
    std::uint64_t d_mis_minus_1 = 0;
    double hardness = 0.0;
    std::optional<double> fit_c;
    std::optional<double> fit_alpha;
};

HardnessRecord hardness_parameter(const Graph& g, const OracleLimits& limits = {});

// H = -sum n_i + U sum_{(i,j) in E} n_i n_j.
double cost(const Graph& g, const Assignment& x, double penalty = 2.0);

struct AnnealSchedule {
    double t_initial = 2.0;
    double t_final = 0.02;
    int steps = 400;        // temperature levels, one sweep of n flips each
    int restarts = 4;
    double penalty = 2.0;   // U
    int threads = 1;
};

// Single-bit-flip SA on the penalty Hamiltonian with greedy repair at readout.
// weights, when given, turn the objective into MWIS with per-edge penalty U * max(w_i, w_j).
MisResult anneal_mis(const Graph& g, const AnnealSchedule& schedule, std::uint64_t seed,
                     const std::vector<double>* weights = nullptr);

// Drop conflicting nodes (most conflicts first), then add free nodes greedily.
Assignment greedy_repair(const Graph& g, Assignment x, const std::vector<double>* weights = nullptr);

struct SwapOptions {
    int depth = -1;                   // combined swaps; -1 means number of candidates
    std::size_t max_combinations = 1u << 20;
    const Graph* candidate_graph = nullptr;  // graph the swaps are proposed on; defaults to g
};

// 1-for-1 swaps (s out, t in) where t's only selected neighbour in the candidate graph is s.
// Every combination up to depth is applied; those feasible on g with unchanged size are kept.
std::vector<Assignment> local_search_swaps(const Graph& g, const Assignment& mis, const SwapOptions& options = {});

}  // namespace ujc
