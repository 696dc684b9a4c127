#include "ujc/gage.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <map>
#include <numeric>

#include "ujc/errors.hpp"
#include "ujc/rng.hpp"

namespace ujc {

std::vector<int> argsort_keys(const std::vector<double>& keys) {
    std::vector<int> idx(keys.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return keys[a] < keys[b]; });
    return idx;
}

int edit_distance(const Graph& target, const Graph& physical) {
    if (target.node_count() != physical.node_count()) throw InvalidArgument("edit distance needs equal node counts");
    EdgeDiff d = edge_diff(target, physical);
    return static_cast<int>(d.missing.size() + d.spurious.size());
}

EdgeDiff edge_diff(const Graph& target, const Graph& physical) {
    if (target.node_count() != physical.node_count()) throw InvalidArgument("edge diff needs equal node counts");
    EdgeDiff d;
    for (auto e : target.edges())
        if (!physical.has_edge(e.first, e.second)) d.missing.push_back(e);
    for (auto e : physical.edges())
        if (!target.has_edge(e.first, e.second)) d.spurious.push_back(e);
    return d;
}

DecodeResult decode(const std::vector<double>& keys, const Graph& target, const LatticeConfig& lattice) {
    const int n = target.node_count();
    if (static_cast<int>(keys.size()) != lattice.site_count())
        throw InvalidArgument("random-key vector length must equal the site count");
    if (n > lattice.site_count()) throw InvalidArgument("more nodes than lattice sites");
    for (double k : keys)
        if (!(k >= 0.0 && k < 1.0)) throw InvalidArgument("random keys must lie in [0, 1)");
    auto order = argsort_keys(keys);
    DecodeResult r;
    r.placement.lattice = lattice;
    for (int i = 0; i < n; ++i) r.placement.sites.push_back(lattice.site(order[i]));
    r.physical = induced_physical_graph(r.placement);
    r.d_edit = edit_distance(target, r.physical);
    return r;
}

namespace {

// Dense adjacency for fast repeated cost evaluation.
struct Scorer {
    int n;
    std::vector<char> adj;
    LatticeConfig lattice;

    Scorer(const Graph& g, const LatticeConfig& l) : n(g.node_count()), adj(static_cast<std::size_t>(n) * n, 0), lattice(l) {
        for (auto [u, v] : g.edges()) adj[u * n + v] = adj[v * n + u] = 1;
    }

    int cost(const std::vector<int>& site_index) const {
        int c = 0;
        for (int i = 0; i < n; ++i) {
            Site a = lattice.site(site_index[i]);
            for (int j = i + 1; j < n; ++j) {
                bool phys = lattice.adjacent(a, lattice.site(site_index[j]));
                c += phys != static_cast<bool>(adj[i * n + j]);
            }
        }
        return c;
    }
};

std::vector<int> first_n(const std::vector<double>& keys, int n) {
    auto order = argsort_keys(keys);
    order.resize(n);
    return order;
}

GageResult finalize(const Graph& target, const LatticeConfig& lattice, const std::vector<int>& sites) {
    GageResult r;
    r.placement.lattice = lattice;
    for (int s : sites) r.placement.sites.push_back(lattice.site(s));
    Graph phys = induced_physical_graph(r.placement);
    r.diff = edge_diff(target, phys);
    r.d_edit = static_cast<int>(r.diff.missing.size() + r.diff.spurious.size());
    return r;
}

}  // namespace

GageResult gage_optimize(const Graph& target, const LatticeConfig& lattice, const GageConfig& config, std::uint64_t seed) {
    const int n = target.node_count();
    const int D = lattice.site_count();
    if (n > D) throw InvalidArgument("more nodes than lattice sites");
    if (config.restarts < 1 || config.max_evaluations < 1) throw InvalidArgument("invalid GAGE configuration");
    Scorer score(target, lattice);
    int best_cost = INT_MAX;
    std::vector<int> best_sites;
    std::vector<double> best_keys;
    long evals = 0, evals_to_best = 0;
    const long per_restart = std::max<long>(1, config.max_evaluations / config.restarts);

    auto consider = [&](int c, const std::vector<int>& sites, const std::vector<double>& keys) {
        if (c < best_cost || (c == best_cost && sites < best_sites)) {
            if (c < best_cost) evals_to_best = evals;
            best_cost = c;
            best_sites = sites;
            best_keys = keys;
        }
    };

    for (int r = 0; r < config.restarts && best_cost > 0 && evals < config.max_evaluations; ++r) {
        Rng rng(mix_seed(seed, r));
        std::vector<double> keys(D);
        for (double& k : keys) k = rng.uniform();
        auto sites = first_n(keys, n);
        int cur = score.cost(sites);
        ++evals;
        consider(cur, sites, keys);
        for (long it = 1; it < per_restart && best_cost > 0 && evals < config.max_evaluations; ++it) {
            double frac = per_restart > 1 ? static_cast<double>(it) / (per_restart - 1) : 1.0;
            double t = config.t_initial * std::pow(config.t_final / config.t_initial, frac);
            int idx = rng.below_int(D);
            double old = keys[idx];
            keys[idx] = rng.uniform();
            auto cand = first_n(keys, n);
            int c = score.cost(cand);
            ++evals;
            if (c <= cur || rng.uniform() < std::exp(-(c - cur) / t)) {
                cur = c;
                consider(c, cand, keys);
            } else {
                keys[idx] = old;
            }
        }
    }
    GageResult res = finalize(target, lattice, best_sites);
    res.keys = best_keys;
    res.evaluations = evals;
    res.evaluations_to_best = evals_to_best;
    return res;
}

GageResult gage_exhaustive(const Graph& target, const LatticeConfig& lattice, std::uint64_t max_nodes) {
    const int n = target.node_count();
    const int D = lattice.site_count();
    if (n > D) throw InvalidArgument("more nodes than lattice sites");
    Scorer score(target, lattice);
    std::vector<int> cur(n), best;
    std::vector<char> used(D, 0);
    int best_cost = INT_MAX;
    std::uint64_t visited = 0;
    auto rec = [&](auto&& self, int i, int partial) -> void {
        if (++visited > max_nodes) throw OracleLimit("exhaustive placement search cap exceeded");
        if (partial >= best_cost) return;
        if (i == n) {
            best_cost = partial;
            best = cur;
            return;
        }
        for (int s = 0; s < D; ++s) {
            if (used[s]) continue;
            Site a = lattice.site(s);
            int add = 0;
            for (int j = 0; j < i; ++j)
                add += lattice.adjacent(a, lattice.site(cur[j])) != static_cast<bool>(score.adj[i * n + j]);
            used[s] = 1;
            cur[i] = s;
            self(self, i + 1, partial + add);
            used[s] = 0;
        }
    };
    rec(rec, 0, 0);
    GageResult r = finalize(target, lattice, best);
    r.evaluations = static_cast<long>(visited);
    return r;
}

std::optional<Placement> native_placement(const Graph& g, std::uint64_t max_nodes) {
    const int n = g.node_count();
    std::vector<Site> pos(n);
    std::uint64_t visited = 0;
    int x_offset = 0;
    for (const auto& comp : component_nodes(g)) {
        // BFS order so every node after the first has a placed neighbour.
        std::vector<int> order{comp.front()}, parent(n, -1);
        std::vector<char> seen(n, 0);
        seen[comp.front()] = 1;
        for (std::size_t h = 0; h < order.size(); ++h)
            for (int w : g.neighbors(order[h]))
                if (!seen[w]) {
                    seen[w] = 1;
                    parent[w] = order[h];
                    order.push_back(w);
                }
        std::map<Site, int> at;
        auto rec = [&](auto&& self, std::size_t i) -> bool {
            if (++visited > max_nodes) throw OracleLimit("native placement search cap exceeded");
            if (i == order.size()) return true;
            int v = order[i];
            Site base = pos[parent[v]];
            for (int dx = -1; dx <= 1; ++dx)
                for (int dy = -1; dy <= 1; ++dy) {
                    Site s{base.x + dx, base.y + dy};
                    if ((dx == 0 && dy == 0) || at.count(s)) continue;
                    bool ok = true;
                    for (std::size_t j = 0; j < i && ok; ++j) {
                        int u = order[j];
                        ok = (dist2(s, pos[u]) <= 2) == g.has_edge(u, v);
                    }
                    if (!ok) continue;
                    pos[v] = s;
                    at[s] = v;
                    if (self(self, i + 1)) return true;
                    at.erase(s);
                }
            return false;
        };
        pos[order[0]] = {0, 0};
        at[{0, 0}] = order[0];
        if (!rec(rec, 1)) return std::nullopt;
        int minx = INT_MAX, maxx = INT_MIN, miny = INT_MAX;
        for (int v : comp) {
            minx = std::min(minx, pos[v].x);
            maxx = std::max(maxx, pos[v].x);
            miny = std::min(miny, pos[v].y);
        }
        for (int v : comp) pos[v] = {pos[v].x - minx + x_offset, pos[v].y - miny};
        x_offset += maxx - minx + 3;
    }
    Placement p;
    p.sites = pos;
    int w = 1, h = 1;
    for (Site s : pos) {
        w = std::max(w, s.x + 1);
        h = std::max(h, s.y + 1);
    }
    p.lattice = uj_lattice(w, h);
    return p;
}

namespace {

struct Occupancy {
    const LatticeConfig& lattice;
    std::vector<int> at;  // site index -> atom id or -1

    Occupancy(const LatticeConfig& l, const std::vector<Site>& atoms) : lattice(l), at(l.site_count(), -1) {
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            if (!l.contains(atoms[i])) throw InvalidArgument("atom outside the lattice");
            at[l.index(atoms[i])] = static_cast<int>(i);
        }
    }

    int get(Site s) const { return lattice.contains(s) ? at[lattice.index(s)] : -1; }

    // Atoms adjacent to s, excluding s itself.
    template <class F>
    void for_adjacent(Site s, F&& f) const {
        const int md = lattice.max_dist2();
        int reach = 1;
        while ((reach + 1) * (reach + 1) <= md) ++reach;
        for (int dx = -reach; dx <= reach; ++dx)
            for (int dy = -reach; dy <= reach; ++dy) {
                if ((dx == 0 && dy == 0) || dx * dx + dy * dy > md) continue;
                int a = get({s.x + dx, s.y + dy});
                if (a >= 0) f(a);
            }
    }
};

constexpr int kDx[8] = {1, 1, 0, -1, -1, -1, 0, 1};
constexpr int kDy[8] = {0, 1, 1, 1, 0, -1, -1, -1};

int direction_of(Site from, Site to) {
    for (int d = 0; d < 8; ++d)
        if (from.x + kDx[d] == to.x && from.y + kDy[d] == to.y) return d;
    return -1;
}

}  // namespace

std::vector<std::vector<Site>> find_qw_openings(const Placement& p, const std::vector<Site>& extra) {
    std::vector<Site> atoms = p.sites;
    atoms.insert(atoms.end(), extra.begin(), extra.end());
    Occupancy occ(p.lattice, atoms);
    std::vector<std::vector<Site>> out(p.sites.size());
    for (std::size_t u = 0; u < p.sites.size(); ++u) {
        Site su = p.sites[u];
        for (int d = 0; d < 8; ++d) {
            Site s{su.x + kDx[d], su.y + kDy[d]};
            if (!p.lattice.contains(s) || occ.get(s) >= 0 || !p.lattice.adjacent(s, su)) continue;
            bool lonely = true;
            occ.for_adjacent(s, [&](int a) { lonely = lonely && a == static_cast<int>(u); });
            if (lonely) out[u].push_back(s);
        }
        std::sort(out[u].begin(), out[u].end(), [&](Site a, Site b) { return p.lattice.index(a) < p.lattice.index(b); });
    }
    return out;
}

QuantumWire route_quantum_wire(const Placement& p, int u, int v, const std::vector<Site>& extra) {
    const int n = p.node_count();
    if (u < 0 || v < 0 || u >= n || v >= n || u == v) throw InvalidArgument("wire endpoints out of range");
    if (p.lattice.adjacent(p.sites[u], p.sites[v])) throw InvalidArgument("edge is already physical");
    std::vector<Site> atoms = p.sites;
    atoms.insert(atoms.end(), extra.begin(), extra.end());
    Occupancy occ(p.lattice, atoms);
    auto openings = find_qw_openings(p, extra);
    const auto& L = p.lattice;
    const int D = L.site_count();
    auto state = [&](Site s, int dir, int parity) { return (L.index(s) * 8 + dir) * 2 + parity; };
    std::vector<int> parent(static_cast<std::size_t>(D) * 16, -2);
    std::vector<Site> state_site(static_cast<std::size_t>(D) * 16);
    std::vector<int> queue;
    for (Site s : openings[u]) {
        int st = state(s, direction_of(p.sites[u], s), 1);
        parent[st] = -1;
        state_site[st] = s;
        queue.push_back(st);
    }
    auto path_of = [&](int st) {
        std::vector<Site> path;
        for (; st >= 0; st = parent[st]) path.push_back(state_site[st]);
        std::reverse(path.begin(), path.end());
        return path;
    };
    for (std::size_t head = 0; head < queue.size(); ++head) {
        int st = queue[head];
        Site s = state_site[st];
        int dir = (st / 2) % 8, parity = st % 2;
        auto path = path_of(st);
        for (int turn : {0, 1, -1, 2, -2, 3, -3}) {
            int nd = (dir + turn + 8) % 8;
            Site t{s.x + kDx[nd], s.y + kDy[nd]};
            if (!L.contains(t) || occ.get(t) >= 0 || !L.adjacent(s, t)) continue;
            // Only the immediate predecessor may touch t.
            bool clash = false;
            for (std::size_t k = 0; k + 1 < path.size() && !clash; ++k)
                clash = path[k] == t || L.adjacent(path[k], t);
            if (clash) continue;
            bool touches_v = false, touches_other = false;
            occ.for_adjacent(t, [&](int a) {
                if (a == v) touches_v = true;
                else touches_other = true;
            });
            if (touches_other) continue;
            int np = parity ^ 1;
            if (touches_v) {
                if (np != 0) continue;
                path.push_back(t);
                return QuantumWire{u, v, path};
            }
            int ns = state(t, nd, np);
            if (parent[ns] != -2) continue;
            parent[ns] = st;
            state_site[ns] = t;
            queue.push_back(ns);
        }
    }
    throw StageFailure("no admissible wire between " + std::to_string(u) + " and " + std::to_string(v));
}

WiredEmbedding add_wires(const Graph& target, const Placement& p) {
    WiredEmbedding e;
    e.placement = p;
    Graph phys = induced_physical_graph(p);
    e.diff = edge_diff(target, phys);
    e.d_edit = static_cast<int>(e.diff.missing.size() + e.diff.spurious.size());
    std::vector<Edge> order = e.diff.missing;
    std::stable_sort(order.begin(), order.end(), [&](Edge a, Edge b) {
        return dist2(p.sites[a.first], p.sites[a.second]) < dist2(p.sites[b.first], p.sites[b.second]);
    });
    std::vector<Site> extra;
    for (auto [a, b] : order) {
        try {
            QuantumWire w = route_quantum_wire(p, a, b, extra);
            extra.insert(extra.end(), w.ancillas.begin(), w.ancillas.end());
            e.wires.push_back(std::move(w));
        } catch (const StageFailure&) {
            e.unrouted.emplace_back(a, b);
        }
    }
    e.effective_d_edit = e.d_edit - static_cast<int>(e.wires.size());
    return e;
}

std::vector<Site> wired_sites(const WiredEmbedding& e) {
    std::vector<Site> s = e.placement.sites;
    for (const auto& w : e.wires) s.insert(s.end(), w.ancillas.begin(), w.ancillas.end());
    return s;
}

Graph wired_physical_graph(const WiredEmbedding& e) {
    return unit_disk_graph(wired_sites(e), e.placement.lattice.max_dist2());
}

std::vector<int> decode_wired_solution(const WiredEmbedding& e, const std::vector<std::uint8_t>& physical) {
    const int n = e.placement.node_count();
    std::vector<std::uint8_t> x(physical.begin(), physical.begin() + n);
    for (const auto& w : e.wires)
        if (x[w.u] && x[w.v]) x[w.v] = 0;
    std::vector<int> out;
    for (int i = 0; i < n; ++i)
        if (x[i]) out.push_back(i);
    return out;
}

json gage_to_json(const Graph& target, const WiredEmbedding& e) {
    json j;
    const auto& L = e.placement.lattice;
    j["lattice"] = {{"Lx", L.width}, {"Ly", L.height}, {"a", L.spacing_um}, {"r", L.radius_ratio}};
    json nodes = json::object();
    for (int i = 0; i < e.placement.node_count(); ++i)
        nodes[target.label(i)] = {e.placement.sites[i].x, e.placement.sites[i].y};
    j["nodes"] = std::move(nodes);
    json wires = json::array();
    for (const auto& w : e.wires) {
        json anc = json::array();
        for (Site s : w.ancillas) anc.push_back({s.x, s.y});
        wires.push_back({{"u", target.label(w.u)}, {"v", target.label(w.v)}, {"ancillas", std::move(anc)}});
    }
    j["wires"] = std::move(wires);
    j["d_edit"] = e.d_edit;
    j["effective_d_edit"] = e.effective_d_edit;
    auto edges = [&](const std::vector<Edge>& es) {
        json a = json::array();
        for (auto [x, y] : es) a.push_back({target.label(x), target.label(y)});
        return a;
    };
    j["missing_edges"] = edges(e.diff.missing);
    j["spurious_edges"] = edges(e.diff.spurious);
    j["unrouted_edges"] = edges(e.unrouted);
    return j;
}

}  // namespace ujc
