#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ujc/graph.hpp"
#include "ujc/io.hpp"
#include "ujc/lattice.hpp"

namespace ujc {

// Stable argsort: ties keep index order.
std::vector<int> argsort_keys(const std::vector<double>& keys);

struct EdgeDiff {
    std::vector<Edge> missing;   // in the target, absent physically
    std::vector<Edge> spurious;  // physical, absent in the target
};

// Half the squared adjacency difference. Throws InvalidArgument on node count mismatch.
int edit_distance(const Graph& target, const Graph& physical);
EdgeDiff edge_diff(const Graph& target, const Graph& physical);

struct DecodeResult {
    Placement placement;
    Graph physical;
    int d_edit = 0;
};

// Node i goes to site argsort(keys)[i], with site index = x + y * Lx.
DecodeResult decode(const std::vector<double>& keys, const Graph& target, const LatticeConfig& lattice);

struct GageConfig {
    int restarts = 8;
    long max_evaluations = 10000;  // total decodes across restarts
    double t_initial = 1.0;
    double t_final = 0.05;
};

struct GageResult {
    Placement placement;
    std::vector<double> keys;  // empty for exhaustive results
    int d_edit = 0;
    EdgeDiff diff;
    long evaluations = 0;
    long evaluations_to_best = 0;
};

// Key-space annealing: resample one key, Metropolis on d_edit, restarts. Stops at d_edit = 0.
GageResult gage_optimize(const Graph& target, const LatticeConfig& lattice, const GageConfig& config,
                         std::uint64_t seed);

// Every injective placement, branch and bound on partial edit distance. Ties resolve to the
// lexicographically smallest site tuple.
GageResult gage_exhaustive(const Graph& target, const LatticeConfig& lattice, std::uint64_t max_nodes = 500'000'000);

// A d_edit = 0 UJ placement on an unbounded lattice, if one exists (backtracking per component).
std::optional<Placement> native_placement(const Graph& g, std::uint64_t max_nodes = 50'000'000);

// Vacant sites adjacent to the node and to no other occupied site. extra holds further atoms.
std::vector<std::vector<Site>> find_qw_openings(const Placement& p, const std::vector<Site>& extra = {});

struct QuantumWire {
    int u = -1;
    int v = -1;
    std::vector<Site> ancillas;
};

// Shortest even-length ancilla path between an opening of u and an opening of v.
// Throws InvalidArgument if u and v are already adjacent, StageFailure if no wire exists.
QuantumWire route_quantum_wire(const Placement& p, int u, int v, const std::vector<Site>& extra = {});

struct WiredEmbedding {
    Placement placement;
    std::vector<QuantumWire> wires;
    EdgeDiff diff;          // before wiring
    int d_edit = 0;         // before wiring
    int effective_d_edit = 0;
    std::vector<Edge> unrouted;
};

// Route wires for missing edges greedily by ascending endpoint distance.
WiredEmbedding add_wires(const Graph& target, const Placement& p);

// All atoms: placed nodes first, then each wire's ancillas in order.
std::vector<Site> wired_sites(const WiredEmbedding& e);
Graph wired_physical_graph(const WiredEmbedding& e);

// Restrict a physical assignment to the placed nodes and drop one endpoint of every wire
// whose endpoints are both selected.
std::vector<int> decode_wired_solution(const WiredEmbedding& e, const std::vector<std::uint8_t>& physical);

json gage_to_json(const Graph& target, const WiredEmbedding& e);

}  // namespace ujc
