#pragma once

#include <compare>
#include <cstdint>
#include <vector>

#include "ujc/graph.hpp"

namespace ujc {

struct Site {
    int x = 0;
    int y = 0;
    auto operator<=>(const Site&) const = default;
};

inline int dist2(Site a, Site b) {
    int dx = a.x - b.x, dy = a.y - b.y;
    return dx * dx + dy * dy;
}

struct LatticeConfig {
    int width = 1;             // Lx
    int height = 1;            // Ly
    double spacing_um = 4.5;   // a
    double radius_ratio = 1.5; // r = R_b / a
    double filling = 1.0;      // rho

    int site_count() const { return width * height; }
    bool contains(Site s) const { return s.x >= 0 && s.y >= 0 && s.x < width && s.y < height; }
    int index(Site s) const { return s.x + s.y * width; }
    Site site(int index) const { return {index % width, index / width}; }

    // Largest integer squared distance that still counts as an edge.
    // Integer d2 compared against floor(r^2) keeps r = sqrt(2) unambiguous.
    int max_dist2() const;
    bool adjacent(Site a, Site b) const { return a != b && dist2(a, b) <= max_dist2(); }
    bool is_union_jack() const;

    // Throws InvalidArgument. require_uj adds the sqrt(2) <= r < 2 check.
    void validate(bool require_uj) const;
};

// The square-lattice UJ configuration used throughout: r = 1.5.
LatticeConfig uj_lattice(int width, int height, double filling = 1.0);

struct Placement {
    LatticeConfig lattice;
    std::vector<Site> sites;  // node -> site

    int node_count() const { return static_cast<int>(sites.size()); }
    // Throws InvalidArgument on out-of-bounds or doubly occupied sites.
    void validate() const;
};

// Atoms are nodes; edges between atoms within r lattice units.
Graph induced_physical_graph(const Placement& p);
Graph unit_disk_graph(const std::vector<Site>& sites, int max_dist2);

}  // namespace ujc
