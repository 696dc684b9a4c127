#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "ujc/graph.hpp"
#include "ujc/lattice.hpp"

namespace ujc {

enum class Family { UJ, RG, ER, BA };

const char* family_name(Family f);
Family parse_family(const std::string& s);

// n = round(filling * Lx * Ly) sites sampled without replacement.
std::pair<Graph, Placement> generate_uj(const LatticeConfig& config, std::uint64_t seed);
// Exactly n atoms on the given lattice.
std::pair<Graph, Placement> generate_uj_n(const LatticeConfig& config, int n, std::uint64_t seed);

enum class ErMode { Probability, EdgesPerNode };

struct RandomParams {
    double radius = 0.1;          // RG connection distance in the unit box
    double probability = 0.1;     // ER G(n,p)
    double edges_per_node = 0.0;  // ER G(n,m) with m = round(edges_per_node * n)
    ErMode er_mode = ErMode::Probability;
    int attachments = 2;          // BA edges per new node
    double filling = 0.8;         // UJ filling on a near-square lattice
};

Graph generate_rg(int n, double radius, std::uint64_t seed);
Graph generate_er(int n, double probability, std::uint64_t seed);
Graph generate_er_m(int n, std::size_t m, std::uint64_t seed);
Graph generate_ba(int n, int attachments, std::uint64_t seed);

// Dispatch on family. UJ places exactly n atoms on an L x L lattice with
// L = ceil(sqrt(n / filling)).
Graph generate_random(Family family, int n, const RandomParams& params, std::uint64_t seed);

}  // namespace ujc
