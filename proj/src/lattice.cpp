#include "ujc/lattice.hpp"

#include <cmath>
#include <unordered_map>

#include "ujc/errors.hpp"

namespace ujc {

int LatticeConfig::max_dist2() const {
    return static_cast<int>(std::floor(radius_ratio * radius_ratio + 1e-9));
}

bool LatticeConfig::is_union_jack() const {
    return max_dist2() >= 2 && max_dist2() < 4;
}

void LatticeConfig::validate(bool require_uj) const {
    if (width < 1 || height < 1) throw InvalidArgument("lattice dimensions must be positive");
    if (!(filling > 0.0 && filling <= 1.0)) throw InvalidArgument("filling must lie in (0, 1]");
    if (!(spacing_um > 0.0)) throw InvalidArgument("spacing must be positive");
    if (!(radius_ratio > 0.0)) throw InvalidArgument("radius ratio must be positive");
    if (require_uj && !(radius_ratio * radius_ratio >= 2.0 - 1e-9 && radius_ratio < 2.0))
        throw InvalidArgument("Union-Jack connectivity requires sqrt(2) <= r < 2");
}

LatticeConfig uj_lattice(int width, int height, double filling) {
    LatticeConfig c;
    c.width = width;
    c.height = height;
    c.filling = filling;
    return c;
}

void Placement::validate() const {
    std::vector<char> used(static_cast<std::size_t>(lattice.site_count()), 0);
    for (Site s : sites) {
        if (!lattice.contains(s))
            throw InvalidArgument("site (" + std::to_string(s.x) + "," + std::to_string(s.y) + ") out of bounds");
        auto& u = used[lattice.index(s)];
        if (u) throw InvalidArgument("site (" + std::to_string(s.x) + "," + std::to_string(s.y) + ") occupied twice");
        u = 1;
    }
}

namespace {

std::uint64_t key(int x, int y) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(x)) << 32) | static_cast<std::uint32_t>(y);
}

}  // namespace

Graph unit_disk_graph(const std::vector<Site>& sites, int max_d2) {
    std::unordered_map<std::uint64_t, int> at;
    at.reserve(sites.size() * 2);
    for (std::size_t i = 0; i < sites.size(); ++i)
        if (!at.emplace(key(sites[i].x, sites[i].y), static_cast<int>(i)).second)
            throw InvalidArgument("overlapping placement");
    int reach = 0;
    while ((reach + 1) * (reach + 1) <= max_d2) ++reach;
    std::vector<Edge> es;
    for (std::size_t i = 0; i < sites.size(); ++i) {
        Site s = sites[i];
        for (int dx = -reach; dx <= reach; ++dx)
            for (int dy = -reach; dy <= reach; ++dy) {
                if ((dx == 0 && dy == 0) || dx * dx + dy * dy > max_d2) continue;
                auto it = at.find(key(s.x + dx, s.y + dy));
                if (it != at.end() && it->second > static_cast<int>(i)) es.emplace_back(static_cast<int>(i), it->second);
            }
    }
    return Graph::from_edges(static_cast<int>(sites.size()), es);
}

Graph induced_physical_graph(const Placement& p) {
    p.validate();
    return unit_disk_graph(p.sites, p.lattice.max_dist2());
}

}  // namespace ujc
