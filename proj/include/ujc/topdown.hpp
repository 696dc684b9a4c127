#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ujc/graph.hpp"
#include "ujc/io.hpp"
#include "ujc/lattice.hpp"
#include "ujc/solvers.hpp"

namespace ujc {

// ---------------------------------------------------------------------------
// Gadget library

// Crossing of a horizontal chain (pins at (+-2, 0)) and a vertical chain
// (pins at (0, +-2)). Interior sites are relative to the crossing centre.
struct GadgetTemplate {
    std::string name;
    bool interacting = false;
    std::vector<Site> interior;
    std::vector<double> weights;
};

const GadgetTemplate& gadget_template(bool interacting);

// Reduced alpha tensors of the gadget and of its abstract source (two 5-node
// paths crossing, plus the middle edge when interacting) agree up to a constant.
bool verify_gadget(const GadgetTemplate& g, std::string* why = nullptr);

// ---------------------------------------------------------------------------
// Schematic

enum class CrossingKind { Absent, NonInteracting, Interacting, Touch };

const char* crossing_name(CrossingKind k);

struct Crossing {
    int u = -1;  // logical nodes, u < v
    int v = -1;
    CrossingKind kind = CrossingKind::Absent;
};

struct ChainSchematic {
    Graph logical;
    bool generic = false;
    std::vector<int> order;     // position -> logical node
    std::vector<int> position;  // logical node -> position
    std::vector<int> lo, hi;    // per position: first/last partner position, -1 when isolated
    std::vector<Crossing> crossings;  // every pair whose chains meet
    std::vector<Edge> terminal_touches;

    int n() const { return logical.node_count(); }
    int gadget_count() const;
    int interacting_count() const;
    int estimated_qubits() const;
};

// Generic layout size: 8 n(n-1)/2 - m + 5n.
long generic_qubit_formula(int n, long m);

struct GenericEmbedding {
    ChainSchematic schematic;
    long formula_qubits = 0;
};

// Identity ordering, full-length chains, a gadget at every crossing.
GenericEmbedding generic_embedding(const Graph& g);

// Schematic for a given order with chains cut back to their first and last partners.
ChainSchematic shortened_schematic(const Graph& g, const std::vector<int>& order);

struct OrderingConfig {
    int restarts = 4;
    int steps = 20000;
    double t_final = 0.3;
};

// SA over orderings; merit is the gadget count, ties broken by estimated qubits.
ChainSchematic optimize_ordering(const Graph& g, const OrderingConfig& config, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Layout and embedding

enum class UnitKind { NonInteracting, Interacting, EndPass, MutualEnd, Terminal, Single };

struct UnitQubit {
    Site rel;
    int chain = -1;      // logical node, -1 for gadget interior
    bool port = false;   // chains may attach segments here
    int parity = 0;      // expected offset parity along its chain
    double weight = 1.0;
};

// Rigid template instance: a crossing gadget, a touch, or a lone chain end.
struct Unit {
    UnitKind kind = UnitKind::Terminal;
    Site origin;
    std::vector<UnitQubit> qubits;
    int chain_a = -1;
    int chain_b = -1;

    Site site(int i) const { return {origin.x + qubits[i].rel.x, origin.y + qubits[i].rel.y}; }
};

enum class LinkKind { Adjacent, Virtual, Segment };

struct ChainStop {
    int unit = -1;
    int qubit = -1;
};

struct ChainLink {
    LinkKind kind = LinkKind::Segment;
    std::vector<Site> path;  // free qubits of a segment; empty with coincident stops
};

struct LayoutChain {
    int node = -1;
    std::vector<ChainStop> stops;
    std::vector<ChainLink> links;  // links[i] joins stops[i] and stops[i + 1]
};

struct Layout {
    int width = 0;
    int height = 0;
    std::vector<Unit> units;
    std::vector<LayoutChain> chains;  // indexed by logical node

    Site stop_site(const ChainStop& s) const { return units[s.unit].site(s.qubit); }
};

struct EmbeddedQubit {
    Site site;
    double weight = 1.0;
    int chain = -1;   // logical node
    int gadget = -1;  // gadget index for interior qubits
};

struct GadgetRecord {
    bool interacting = false;
    int u = -1;
    int v = -1;
    std::vector<int> qubits;
};

struct Embedding {
    Graph logical;
    LatticeConfig lattice;
    std::vector<EmbeddedQubit> qubits;
    std::vector<int> logical_map;  // chain id -> logical node
    std::vector<std::vector<std::pair<int, int>>> chain_qubits;  // chain -> (qubit, offset), in order
    std::vector<int> chain_length;  // offsets spanned + 1, gadget interiors counted virtually
    std::vector<GadgetRecord> gadgets;
    std::vector<Edge> terminal_touches;
    Layout layout;

    int qubit_count() const { return static_cast<int>(qubits.size()); }
    std::vector<Site> sites() const;
    std::vector<double> weights() const;
    Graph physical_graph() const;
};

// Cells at pitch 4; pair (p < q) meets in cell (q, p). Throws StageFailure.
Embedding realize_qubits(const ChainSchematic& s);

// Rebuild qubits, chains and gadgets from a layout. Throws StageFailure when an
// invariant fails (overlap, stray adjacency, parity, area).
Embedding materialize(const Graph& logical, const Layout& layout, const std::vector<Edge>& touches);

// Empty string when every embedding invariant holds.
std::string check_embedding(const Embedding& e);

struct CompactionConfig {
    int steps = 4000;
    double t_initial = 2.0;
    double t_final = 0.05;  // zero or negative means greedy
};

struct CompactionStats {
    int proposed = 0;
    int accepted = 0;
    int initial_qubits = 0;
    int final_qubits = 0;
};

// Metropolis over unit translations with segment rerouting by biased BFS.
Embedding compact_placement(const Embedding& e, const CompactionConfig& config, std::uint64_t seed,
                            CompactionStats* stats = nullptr);

// Chain readout: logical 1 iff every even-offset qubit of the chain is occupied. Conflicts
// left by broken encodings are repaired by an exact search over the decoded set.
Assignment decode_embedded_solution(const Embedding& e, const Assignment& physical);

// Exact MWIS over lattice sites by a sweep in (x, y) order. forced: -1 free, 0 out, 1 in.
struct LatticeMwis {
    double weight = 0.0;
    Assignment x;
    bool feasible = true;
};
LatticeMwis lattice_mwis(const std::vector<Site>& sites, const std::vector<double>& weights, int max_dist2,
                         const std::vector<int>* forced = nullptr, std::uint64_t seed = 0,
                         std::size_t max_states = 4'000'000);

struct CorrespondenceReport {
    bool ok = true;
    std::string detail;
    double base_weight = 0.0;
    double optimum = 0.0;
};

// W(P) with clean chain encodings equals W(0) + |P| exactly for independent P and falls short
// otherwise; the unconstrained optimum is W(0) + MIS; sampled optima decode to a MIS.
CorrespondenceReport check_correspondence(const Embedding& e, int samples = 4, std::uint64_t seed = 1);

json embedding_to_json(const Embedding& e);
json schematic_to_json(const ChainSchematic& s);

}  // namespace ujc
