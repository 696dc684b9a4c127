#include "ujc/checker.hpp"

#include <algorithm>

#include "ujc/errors.hpp"
#include "ujc/lattice.hpp"

namespace ujc {

namespace {

void enumerate(const std::vector<Site>& hood, std::array<std::set<int>, 9>& out) {
    const int k = static_cast<int>(hood.size());
    for (unsigned mask = 0; mask < (1u << k); ++mask) {
        int d = 0, tri = 0;
        for (int i = 0; i < k; ++i) {
            if (!(mask >> i & 1u)) continue;
            ++d;
            for (int j = i + 1; j < k; ++j)
                if ((mask >> j & 1u) && dist2(hood[i], hood[j]) <= 2) ++tri;
        }
        out[d].insert(tri);
    }
}

}  // namespace

AdmissibilityTable build_admissibility_table() {
    AdmissibilityTable t;
    std::vector<Site> interior, boundary, corner;
    for (int dx = -1; dx <= 1; ++dx)
        for (int dy = -1; dy <= 1; ++dy) {
            if (dx == 0 && dy == 0) continue;
            interior.push_back({dx, dy});
            if (dy >= 0) boundary.push_back({dx, dy});
            if (dx >= 0 && dy >= 0) corner.push_back({dx, dy});
        }
    enumerate(interior, t.interior);
    enumerate(boundary, t.boundary);
    enumerate(corner, t.corner);
    return t;
}

const AdmissibilityTable& admissibility_table() {
    static const AdmissibilityTable table = build_admissibility_table();
    return table;
}

int node_triangle_count(const Graph& g, int v) {
    if (v < 0 || v >= g.node_count()) throw InvalidArgument("node out of range");
    auto nv = g.neighbors(v);
    int count = 0;
    for (int u : nv) {
        // Sorted-list intersection, counting each pair once.
        auto nu = g.neighbors(u);
        auto a = std::upper_bound(nv.begin(), nv.end(), u);
        auto b = std::upper_bound(nu.begin(), nu.end(), u);
        while (a != nv.end() && b != nu.end()) {
            if (*a < *b) ++a;
            else if (*b < *a) ++b;
            else {
                ++count;
                ++a;
                ++b;
            }
        }
    }
    return count;
}

CompatibilityReport check_graph(const Graph& g, int depth) {
    if (depth < 1) throw InvalidArgument("check depth must be at least 1");
    const auto& table = admissibility_table();
    CompatibilityReport r;
    r.checks_run.push_back("max-degree");
    if (depth >= 2) r.checks_run.push_back("degree-triangle");
    for (int v = 0; v < g.node_count(); ++v) {
        int d = g.degree(v);
        if (d > 8) {
            r.failing_nodes.push_back({v, d, depth >= 2 ? node_triangle_count(g, v) : 0, "degree exceeds 8"});
            continue;
        }
        if (depth >= 2) {
            int tri = node_triangle_count(g, v);
            if (!table.admissible(d, tri))
                r.failing_nodes.push_back({v, d, tri, "triangle count not achievable at this degree"});
        }
    }
    r.compatible_candidate = r.failing_nodes.empty();
    return r;
}

json report_to_json(const CompatibilityReport& r) {
    json j;
    j["compatible"] = r.compatible_candidate;
    json f = json::array();
    for (const auto& n : r.failing_nodes)
        f.push_back({{"node", n.node}, {"degree", n.degree}, {"triangles", n.triangles}, {"reason", n.reason}});
    j["failing"] = std::move(f);
    j["checks"] = r.checks_run;
    return j;
}

}  // namespace ujc
