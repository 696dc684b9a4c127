#include "ujc/generators.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "ujc/errors.hpp"
#include "ujc/rng.hpp"

namespace ujc {

const char* family_name(Family f) {
    switch (f) {
        case Family::UJ: return "UJ";
        case Family::RG: return "RG";
        case Family::ER: return "ER";
        case Family::BA: return "BA";
    }
    return "?";
}

Family parse_family(const std::string& s) {
    std::string u;
    for (char c : s) u.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    if (u == "UJ") return Family::UJ;
    if (u == "RG") return Family::RG;
    if (u == "ER") return Family::ER;
    if (u == "BA") return Family::BA;
    throw InvalidArgument("unknown graph family '" + s + "'");
}

std::pair<Graph, Placement> generate_uj_n(const LatticeConfig& config, int n, std::uint64_t seed) {
    config.validate(true);
    const int sites = config.site_count();
    if (n < 0 || n > sites) throw InvalidArgument("more atoms than lattice sites");
    Rng rng(seed);
    std::vector<int> idx(sites);
    for (int i = 0; i < sites; ++i) idx[i] = i;
    for (int i = 0; i < n; ++i) {
        int j = i + rng.below_int(sites - i);
        std::swap(idx[i], idx[j]);
    }
    idx.resize(n);
    std::sort(idx.begin(), idx.end());
    Placement p;
    p.lattice = config;
    p.sites.reserve(n);
    for (int i : idx) p.sites.push_back(config.site(i));
    Graph g = induced_physical_graph(p);
    return {std::move(g), std::move(p)};
}

std::pair<Graph, Placement> generate_uj(const LatticeConfig& config, std::uint64_t seed) {
    config.validate(true);
    int n = static_cast<int>(std::lround(config.filling * config.site_count()));
    return generate_uj_n(config, n, seed);
}

Graph generate_rg(int n, double radius, std::uint64_t seed) {
    if (n < 1) throw InvalidArgument("RG needs n >= 1");
    if (!(radius >= 0.0)) throw InvalidArgument("RG radius must be non-negative");
    Rng rng(seed);
    std::vector<double> xs(n), ys(n);
    for (int i = 0; i < n; ++i) {
        xs[i] = rng.uniform();
        ys[i] = rng.uniform();
    }
    // Bucket grid with cell side >= radius; scan the 3x3 block around each point.
    int cells = radius > 0.0 ? std::clamp(static_cast<int>(1.0 / radius), 1, 4096) : 1;
    auto cell_of = [&](double c) { return std::min(cells - 1, static_cast<int>(c * cells)); };
    std::vector<std::vector<int>> bucket(static_cast<std::size_t>(cells) * cells);
    for (int i = 0; i < n; ++i) bucket[cell_of(xs[i]) + cell_of(ys[i]) * cells].push_back(i);
    const double r2 = radius * radius;
    std::vector<Edge> es;
    for (int i = 0; i < n; ++i) {
        int cx = cell_of(xs[i]), cy = cell_of(ys[i]);
        for (int gx = std::max(0, cx - 1); gx <= std::min(cells - 1, cx + 1); ++gx)
            for (int gy = std::max(0, cy - 1); gy <= std::min(cells - 1, cy + 1); ++gy)
                for (int j : bucket[gx + gy * cells]) {
                    if (j <= i) continue;
                    double dx = xs[i] - xs[j], dy = ys[i] - ys[j];
                    if (dx * dx + dy * dy <= r2) es.emplace_back(i, j);
                }
    }
    return Graph::from_edges(n, es);
}

Graph generate_er(int n, double probability, std::uint64_t seed) {
    if (n < 1) throw InvalidArgument("ER needs n >= 1");
    if (!(probability >= 0.0 && probability <= 1.0)) throw InvalidArgument("ER probability must lie in [0, 1]");
    Rng rng(seed);
    std::vector<Edge> es;
    if (probability <= 0.0) return Graph(n);
    if (probability >= 1.0) {
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v) es.emplace_back(u, v);
        return Graph::from_edges(n, es);
    }
    // Geometric skipping over the lower triangle, O(n + m).
    const double lq = std::log(1.0 - probability);
    long long v = 1, w = -1;
    while (v < n) {
        double r = rng.uniform();
        w += 1 + static_cast<long long>(std::floor(std::log(1.0 - r) / lq));
        while (w >= v && v < n) {
            w -= v;
            ++v;
        }
        if (v < n) es.emplace_back(static_cast<int>(w), static_cast<int>(v));
    }
    return Graph::from_edges(n, es);
}

Graph generate_er_m(int n, std::size_t m, std::uint64_t seed) {
    if (n < 1) throw InvalidArgument("ER needs n >= 1");
    const std::size_t total = static_cast<std::size_t>(n) * (n - 1) / 2;
    if (m > total) throw InvalidArgument("ER edge count exceeds n(n-1)/2");
    Rng rng(seed);
    std::unordered_set<std::uint64_t> seen;
    std::vector<Edge> es;
    es.reserve(m);
    while (es.size() < m) {
        int u = rng.below_int(n), v = rng.below_int(n);
        if (u == v) continue;
        if (u > v) std::swap(u, v);
        std::uint64_t k = static_cast<std::uint64_t>(u) * static_cast<std::uint64_t>(n) + v;
        if (seen.insert(k).second) es.emplace_back(u, v);
    }
    return Graph::from_edges(n, es);
}

Graph generate_ba(int n, int attachments, std::uint64_t seed) {
    const int m = attachments;
    if (m < 1 || m >= n) throw InvalidArgument("BA needs 1 <= attachments < n");
    Rng rng(seed);
    // Initial star on m+1 nodes, then preferential attachment by degree list.
    std::vector<Edge> es;
    std::vector<int> repeated;
    for (int v = 1; v <= m; ++v) {
        es.emplace_back(0, v);
        repeated.push_back(0);
        repeated.push_back(v);
    }
    std::vector<int> targets;
    std::vector<char> picked(n, 0);
    for (int src = m + 1; src < n; ++src) {
        targets.clear();
        while (static_cast<int>(targets.size()) < m) {
            int t = repeated[rng.below(repeated.size())];
            if (!picked[t]) {
                picked[t] = 1;
                targets.push_back(t);
            }
        }
        for (int t : targets) {
            picked[t] = 0;
            es.emplace_back(src, t);
            repeated.push_back(t);
            repeated.push_back(src);
        }
    }
    return Graph::from_edges(n, es);
}

Graph generate_random(Family family, int n, const RandomParams& params, std::uint64_t seed) {
    switch (family) {
        case Family::RG: return generate_rg(n, params.radius, seed);
        case Family::ER:
            if (params.er_mode == ErMode::EdgesPerNode) {
                if (!(params.edges_per_node >= 0.0)) throw InvalidArgument("edges per node must be non-negative");
                return generate_er_m(n, static_cast<std::size_t>(std::llround(params.edges_per_node * n)), seed);
            }
            return generate_er(n, params.probability, seed);
        case Family::BA: return generate_ba(n, params.attachments, seed);
        case Family::UJ: {
            if (!(params.filling > 0.0 && params.filling <= 1.0)) throw InvalidArgument("filling must lie in (0, 1]");
            int side = std::max(1, static_cast<int>(std::ceil(std::sqrt(n / params.filling) - 1e-9)));
            return generate_uj_n(uj_lattice(side, side, params.filling), n, seed).first;
        }
    }
    throw InvalidArgument("unknown family");
}

}  // namespace ujc
