#include "ujc/topdown.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "ujc/errors.hpp"
#include "ujc/rng.hpp"

namespace ujc {

namespace {

constexpr int kMaxD2 = 2;  // UJ lattice, r = 1.5
constexpr double kEps = 1e-9;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

const Site kNb[8] = {{1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}};

Site add(Site a, Site b) { return {a.x + b.x, a.y + b.y}; }
Site scale(Site a, int k) { return {a.x * k, a.y * k}; }
Site neg(Site a) { return {-a.x, -a.y}; }
bool near(Site a, Site b) { return a != b && dist2(a, b) <= kMaxD2; }

GadgetTemplate make_gadget(bool interacting) {
    GadgetTemplate g;
    g.interacting = interacting;
    g.name = interacting ? "cross-interacting" : "cross";
    g.interior = {{-1, -1}, {0, -1}, {-1, 0}, {0, 0}, {1, 0}, {-1, 1}, {0, 1}};
    if (interacting) g.interior.erase(g.interior.begin() + 3);
    g.weights.assign(g.interior.size(), 1.0);
    return g;
}

// Max weight of an independent set of the non-pin nodes (indices >= 4) given which pins are in.
std::vector<double> alpha_tensor(int n, const std::vector<std::vector<char>>& adj, const std::vector<double>& w) {
    std::vector<double> out(16, kNegInf);
    const int free_n = n - 4;
    for (int pins = 0; pins < 16; ++pins) {
        bool ok = true;
        for (int a = 0; a < 4 && ok; ++a)
            for (int b = a + 1; b < 4; ++b)
                if ((pins >> a & 1) && (pins >> b & 1) && adj[a][b]) ok = false;
        if (!ok) continue;
        double base = 0;
        for (int a = 0; a < 4; ++a)
            if (pins >> a & 1) base += w[a];
        double best = kNegInf;
        for (int s = 0; s < (1 << free_n); ++s) {
            bool ind = true;
            double sum = base;
            for (int i = 0; i < free_n && ind; ++i) {
                if (!(s >> i & 1)) continue;
                sum += w[4 + i];
                for (int a = 0; a < 4; ++a)
                    if ((pins >> a & 1) && adj[a][4 + i]) ind = false;
                for (int j = i + 1; j < free_n; ++j)
                    if ((s >> j & 1) && adj[4 + i][4 + j]) ind = false;
            }
            if (ind) best = std::max(best, sum);
        }
        out[pins] = best;
    }
    return out;
}

// Entries that are not dominated by a strict pin subset; -inf elsewhere.
std::vector<double> reduce_tensor(const std::vector<double>& a) {
    std::vector<double> r(a.size(), kNegInf);
    for (int p = 0; p < 16; ++p) {
        if (a[p] == kNegInf) continue;
        bool dominated = false;
        for (int q = (p - 1) & p; !dominated; q = (q - 1) & p) {
            if (q != p && a[q] >= a[p] - kEps) dominated = true;
            if (q == 0) break;
        }
        if (!dominated) r[p] = a[p];
    }
    return r;
}

}  // namespace

const GadgetTemplate& gadget_template(bool interacting) {
    static const GadgetTemplate plain = make_gadget(false);
    static const GadgetTemplate inter = make_gadget(true);
    return interacting ? inter : plain;
}

bool verify_gadget(const GadgetTemplate& g, std::string* why) {
    // pins L, R, T, B come first in both graphs
    const std::vector<Site> pins = {{-2, 0}, {2, 0}, {0, 2}, {0, -2}};

    // source: L-a-b-c-R and T-d-e-f-B, plus b-e when interacting
    const int ns = 10;
    std::vector<std::vector<char>> sadj(ns, std::vector<char>(ns, 0));
    auto link = [&](int a, int b) { sadj[a][b] = sadj[b][a] = 1; };
    link(0, 4), link(4, 5), link(5, 6), link(6, 1);
    link(2, 7), link(7, 8), link(8, 9), link(9, 3);
    if (g.interacting) link(5, 8);
    std::vector<double> sw(ns, 1.0);

    std::vector<Site> sites = pins;
    sites.insert(sites.end(), g.interior.begin(), g.interior.end());
    const int nm = static_cast<int>(sites.size());
    std::vector<std::vector<char>> madj(nm, std::vector<char>(nm, 0));
    for (int i = 0; i < nm; ++i)
        for (int j = 0; j < nm; ++j) madj[i][j] = near(sites[i], sites[j]);
    std::vector<double> mw(4, 1.0);
    mw.insert(mw.end(), g.weights.begin(), g.weights.end());

    auto rs = reduce_tensor(alpha_tensor(ns, sadj, sw));
    auto rm = reduce_tensor(alpha_tensor(nm, madj, mw));
    double shift = std::numeric_limits<double>::quiet_NaN();
    for (int p = 0; p < 16; ++p) {
        if ((rs[p] == kNegInf) != (rm[p] == kNegInf)) {
            if (why) *why = "reduced tensors differ in support at pin pattern " + std::to_string(p);
            return false;
        }
        if (rs[p] == kNegInf) continue;
        double d = rm[p] - rs[p];
        if (std::isnan(shift)) shift = d;
        if (std::abs(d - shift) > kEps) {
            if (why) *why = "non-constant offset at pin pattern " + std::to_string(p);
            return false;
        }
    }
    return true;
}

const char* crossing_name(CrossingKind k) {
    switch (k) {
        case CrossingKind::Absent: return "absent";
        case CrossingKind::NonInteracting: return "non-interacting";
        case CrossingKind::Interacting: return "interacting";
        case CrossingKind::Touch: return "touch";
    }
    return "?";
}

int ChainSchematic::gadget_count() const {
    int c = 0;
    for (const auto& x : crossings)
        if (x.kind == CrossingKind::NonInteracting || x.kind == CrossingKind::Interacting) ++c;
    return c;
}

int ChainSchematic::interacting_count() const {
    int c = 0;
    for (const auto& x : crossings) c += x.kind == CrossingKind::Interacting;
    return c;
}

int ChainSchematic::estimated_qubits() const {
    int total = 0;
    const int nn = n();
    for (int p = 0; p < nn; ++p) {
        int a = generic ? 0 : lo[p], b = generic ? nn - 1 : hi[p];
        if (a < 0) {
            total += 1;
            continue;
        }
        total += 4 * (b - a) + 1;
        if (a <= p && p <= b) total -= 2;  // corner is a diagonal
    }
    for (const auto& x : crossings) {
        if (x.kind == CrossingKind::NonInteracting) total += static_cast<int>(gadget_template(false).interior.size()) - 3;
        if (x.kind == CrossingKind::Interacting) total += static_cast<int>(gadget_template(true).interior.size()) - 3;
        if (x.kind == CrossingKind::Touch) total += 1;
    }
    return total;
}

long generic_qubit_formula(int n, long m) { return 8L * n * (n - 1) / 2 - m + 5L * n; }

namespace {

struct OrderEval {
    int gadgets = 0;
    int qubits = 0;
};

// Ranges and crossing kinds for an order. adj is a dense matrix over logical nodes.
void fill_schematic(ChainSchematic& s) {
    const int n = s.n();
    s.position.assign(n, -1);
    for (int p = 0; p < n; ++p) s.position[s.order[p]] = p;
    s.lo.assign(n, -1);
    s.hi.assign(n, -1);
    for (int p = 0; p < n; ++p)
        for (int u : s.logical.neighbors(s.order[p])) {
            int q = s.position[u];
            if (s.lo[p] < 0 || q < s.lo[p]) s.lo[p] = q;
            if (s.hi[p] < 0 || q > s.hi[p]) s.hi[p] = q;
        }
    s.crossings.clear();
    s.terminal_touches.clear();
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            bool ch = s.generic || (s.lo[a] >= 0 && s.lo[a] <= b && b <= s.hi[a]);
            bool cv = s.generic || (s.lo[b] >= 0 && s.lo[b] <= a && a <= s.hi[b]);
            if (!ch || !cv) continue;
            int u = s.order[a], v = s.order[b];
            Crossing c{std::min(u, v), std::max(u, v), CrossingKind::NonInteracting};
            if (s.logical.has_edge(u, v)) {
                bool ends = b == s.lo[a] || b == s.hi[a] || a == s.lo[b] || a == s.hi[b];
                c.kind = (!s.generic && ends) ? CrossingKind::Touch : CrossingKind::Interacting;
                if (c.kind == CrossingKind::Touch) s.terminal_touches.emplace_back(c.u, c.v);
            }
            s.crossings.push_back(c);
        }
}

}  // namespace

GenericEmbedding generic_embedding(const Graph& g) {
    GenericEmbedding out;
    out.schematic.logical = g;
    out.schematic.generic = true;
    out.schematic.order.resize(g.node_count());
    for (int i = 0; i < g.node_count(); ++i) out.schematic.order[i] = i;
    fill_schematic(out.schematic);
    out.formula_qubits = generic_qubit_formula(g.node_count(), static_cast<long>(g.edge_count()));
    return out;
}

ChainSchematic shortened_schematic(const Graph& g, const std::vector<int>& order) {
    if (static_cast<int>(order.size()) != g.node_count()) throw InvalidArgument("order length differs from node count");
    std::vector<char> seen(g.node_count(), 0);
    for (int v : order) {
        if (v < 0 || v >= g.node_count() || seen[v]) throw InvalidArgument("order is not a permutation");
        seen[v] = 1;
    }
    ChainSchematic s;
    s.logical = g;
    s.order = order;
    fill_schematic(s);
    return s;
}

namespace {

// Cheap evaluation of (gadgets, estimated qubits) for the SA inner loop.
OrderEval evaluate_order(const std::vector<std::vector<char>>& adj, const std::vector<int>& order,
                         std::vector<int>& lo, std::vector<int>& hi) {
    const int n = static_cast<int>(order.size());
    for (int p = 0; p < n; ++p) {
        lo[p] = hi[p] = -1;
        const auto& row = adj[order[p]];
        for (int q = 0; q < n; ++q)
            if (row[order[q]]) {
                if (lo[p] < 0) lo[p] = q;
                hi[p] = q;
            }
    }
    OrderEval e;
    for (int p = 0; p < n; ++p) {
        if (lo[p] < 0) {
            e.qubits += 1;
            continue;
        }
        e.qubits += 4 * (hi[p] - lo[p]) + 1;
        if (lo[p] < p && p < hi[p]) e.qubits -= 2;
    }
    for (int a = 0; a < n; ++a) {
        if (lo[a] < 0) continue;
        for (int b = std::max(a + 1, lo[a]); b <= hi[a]; ++b) {
            if (lo[b] < 0 || lo[b] > a || a > hi[b]) continue;
            if (adj[order[a]][order[b]]) {
                bool ends = b == lo[a] || b == hi[a] || a == lo[b] || a == hi[b];
                if (ends) {
                    e.qubits += 1;
                } else {
                    ++e.gadgets;
                    e.qubits += 3;
                }
            } else {
                ++e.gadgets;
                e.qubits += 4;
            }
        }
    }
    return e;
}

}  // namespace

ChainSchematic optimize_ordering(const Graph& g, const OrderingConfig& config, std::uint64_t seed) {
    const int n = g.node_count();
    std::vector<int> best(n);
    for (int i = 0; i < n; ++i) best[i] = i;
    if (n <= 2) return shortened_schematic(g, best);

    std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
    for (auto [u, v] : g.edges()) adj[u][v] = adj[v][u] = 1;
    std::vector<int> lo(n), hi(n);
    const double big = 16.0 * n * n + 16.0;
    auto energy = [&](const OrderEval& e) { return e.gadgets * big + e.qubits; };

    double best_e = energy(evaluate_order(adj, best, lo, hi));
    const int steps = std::max(1, config.steps);
    for (int r = 0; r < std::max(1, config.restarts); ++r) {
        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(r)));
        std::vector<int> cur(n);
        for (int i = 0; i < n; ++i) cur[i] = i;
        if (r > 0) rng.shuffle(cur);
        double cur_e = energy(evaluate_order(adj, cur, lo, hi));
        const double t0 = big, t1 = std::max(1e-3, config.t_final);
        for (int step = 0; step < steps; ++step) {
            double t = t0 * std::pow(t1 / t0, static_cast<double>(step) / steps);
            std::vector<int> next = cur;
            int i = rng.below_int(n), j = rng.below_int(n - 1);
            if (j >= i) ++j;
            if (rng.coin(0.5)) {
                std::swap(next[i], next[j]);
            } else {
                int v = next[i];
                next.erase(next.begin() + i);
                next.insert(next.begin() + j, v);
            }
            double e = energy(evaluate_order(adj, next, lo, hi));
            if (e <= cur_e || rng.uniform() < std::exp((cur_e - e) / t)) {
                cur.swap(next);
                cur_e = e;
                if (cur_e < best_e) {
                    best_e = cur_e;
                    best = cur;
                }
            }
        }
    }
    return shortened_schematic(g, best);
}

// ---------------------------------------------------------------------------
// Realisation

std::vector<Site> Embedding::sites() const {
    std::vector<Site> out;
    out.reserve(qubits.size());
    for (const auto& q : qubits) out.push_back(q.site);
    return out;
}

std::vector<double> Embedding::weights() const {
    std::vector<double> out;
    out.reserve(qubits.size());
    for (const auto& q : qubits) out.push_back(q.weight);
    return out;
}

Graph Embedding::physical_graph() const { return unit_disk_graph(sites(), lattice.max_dist2()); }

namespace {

bool is_gadget(UnitKind k) { return k == UnitKind::NonInteracting || k == UnitKind::Interacting; }

Site cell_centre(int col, int row) { return {4 * col + 2, 4 * row + 2}; }

struct UnitBuild {
    std::vector<int> h_stops;  // chain_a (horizontal) qubit indices in chain order
    std::vector<int> v_stops;  // chain_b (vertical)
};

struct SeqEntry {
    Site site;
    std::vector<ChainStop> owners;
};

// Direction along which a chain continues away from the cell of partner slot s.
Site continuation(int lo, int hi, int s, Site forward) {
    if (lo == hi) return forward;
    return s == lo ? forward : neg(forward);
}

}  // namespace

Embedding realize_qubits(const ChainSchematic& s) {
    const int n = s.n();
    Layout L;
    L.width = 4 * n + 4;
    L.height = 4 * n + 3;
    L.chains.resize(n);

    std::vector<int> unit_of(static_cast<std::size_t>(n) * n, -1);
    std::vector<UnitBuild> builds;
    for (const auto& c : s.crossings) {
        int pa = s.position[c.u], pb = s.position[c.v];
        if (pa > pb) std::swap(pa, pb);
        const int hnode = s.order[pa], vnode = s.order[pb];
        const Site ctr = cell_centre(pb, pa);
        const Site x{1, 0}, y{0, 1};
        Unit u;
        u.origin = ctr;
        u.chain_a = hnode;
        u.chain_b = vnode;
        UnitBuild b;
        auto put = [&](Site rel, int chain, bool port, int parity) {
            u.qubits.push_back({rel, chain, port, parity, 1.0});
            return static_cast<int>(u.qubits.size()) - 1;
        };
        if (c.kind != CrossingKind::Touch) {
            const auto& t = gadget_template(c.kind == CrossingKind::Interacting);
            u.kind = t.interacting ? UnitKind::Interacting : UnitKind::NonInteracting;
            b.h_stops = {put(scale(x, -2), hnode, true, 0), put(scale(x, 2), hnode, true, 0)};
            b.v_stops = {put(scale(y, -2), vnode, true, 0), put(scale(y, 2), vnode, true, 0)};
            for (std::size_t i = 0; i < t.interior.size(); ++i) u.qubits.push_back({t.interior[i], -1, false, 0, t.weights[i]});
        } else {
            const bool ends_h = pb == s.lo[pa] || pb == s.hi[pa];
            const bool ends_v = pa == s.lo[pb] || pa == s.hi[pb];
            const Site dh = continuation(s.lo[pa], s.hi[pa], pb, x);
            const Site dv = continuation(s.lo[pb], s.hi[pb], pa, y);
            if (ends_h && ends_v) {
                u.kind = UnitKind::MutualEnd;
                b.v_stops = {put(scale(dv, 2), vnode, true, 0)};
                int e = put(dv, hnode, s.lo[pa] == s.hi[pa], 0);
                if (s.lo[pa] == s.hi[pa]) {
                    b.h_stops = {e};
                } else {
                    int m = put(dh, hnode, false, 1);
                    int p = put(scale(dh, 2), hnode, true, 0);
                    b.h_stops = pb == s.lo[pa] ? std::vector<int>{e, m, p} : std::vector<int>{p, m, e};
                }
            } else {
                // one chain ends against the other, which bumps toward it
                u.kind = UnitKind::EndPass;
                const bool a_is_h = ends_h;
                const int anode = a_is_h ? hnode : vnode, bnode = a_is_h ? vnode : hnode;
                const Site a = a_is_h ? dh : dv, bd = a_is_h ? y : x;
                std::vector<int> bs = {put(scale(bd, -2), bnode, true, 0), put(neg(bd), bnode, false, 1),
                                       put(a, bnode, false, 0), put(bd, bnode, false, 1),
                                       put(scale(bd, 2), bnode, true, 0)};
                std::vector<int> as = {put(scale(a, 2), anode, true, 0)};
                if (a_is_h) {
                    b.h_stops = as;
                    b.v_stops = bs;
                } else {
                    b.h_stops = bs;
                    b.v_stops = as;
                }
            }
        }
        unit_of[static_cast<std::size_t>(pa) * n + pb] = static_cast<int>(L.units.size());
        L.units.push_back(std::move(u));
        builds.push_back(std::move(b));
    }

    auto new_unit = [&](UnitKind kind, Site at, int node) {
        Unit u;
        u.kind = kind;
        u.origin = at;
        u.chain_a = node;
        u.qubits.push_back({{0, 0}, node, true, 0, 1.0});
        L.units.push_back(std::move(u));
        return ChainStop{static_cast<int>(L.units.size()) - 1, 0};
    };

    for (int p = 0; p < n; ++p) {
        const int node = s.order[p];
        LayoutChain& ch = L.chains[node];
        ch.node = node;
        if (!s.generic && s.lo[p] < 0) {
            ch.stops.push_back(new_unit(UnitKind::Single, cell_centre(p, p), node));
            continue;
        }
        const int from = s.generic ? 0 : s.lo[p], to = s.generic ? n - 1 : s.hi[p];
        std::vector<SeqEntry> seq;
        auto push = [&](Site at, const ChainStop* owner) {
            if (!seq.empty() && seq.back().site == at) {
                if (owner) seq.back().owners.push_back(*owner);
                return;
            }
            SeqEntry e{at, {}};
            if (owner) e.owners.push_back(*owner);
            seq.push_back(std::move(e));
        };
        for (int k = from; k <= to; ++k) {
            if (k == p) {
                Site c = cell_centre(p, p);
                push({c.x, c.y - 2}, nullptr);
                push({c.x + 1, c.y - 1}, nullptr);
                push({c.x + 2, c.y}, nullptr);
                continue;
            }
            const int a = std::min(k, p), b = std::max(k, p);
            const int uid = unit_of[static_cast<std::size_t>(a) * n + b];
            if (uid >= 0) {
                const auto& list = p == a ? builds[uid].h_stops : builds[uid].v_stops;
                for (int qi : list) {
                    ChainStop st{uid, qi};
                    push(L.units[uid].site(qi), &st);
                }
                continue;
            }
            const Site c = cell_centre(b, a);
            const Site f = p == a ? Site{1, 0} : Site{0, 1};
            for (int t = -2; t <= 2; ++t) push(add(c, scale(f, t)), nullptr);
        }
        if (seq.front().owners.empty()) {
            ChainStop st = new_unit(UnitKind::Terminal, seq.front().site, node);
            seq.front().owners.push_back(st);
        }
        if (seq.back().owners.empty()) {
            ChainStop st = new_unit(UnitKind::Terminal, seq.back().site, node);
            seq.back().owners.push_back(st);
        }

        std::vector<Site> pending;
        for (const auto& e : seq) {
            if (e.owners.empty()) {
                pending.push_back(e.site);
                continue;
            }
            for (const auto& o : e.owners) {
                if (!ch.stops.empty()) {
                    const ChainStop& last = ch.stops.back();
                    ChainLink link;
                    if (last.unit == o.unit && pending.empty())
                        link.kind = is_gadget(L.units[o.unit].kind) ? LinkKind::Virtual : LinkKind::Adjacent;
                    else
                        link.path = pending;
                    ch.links.push_back(std::move(link));
                }
                pending.clear();
                ch.stops.push_back(o);
            }
        }
    }
    return materialize(s.logical, L, s.terminal_touches);
}

namespace {

struct Built {
    Embedding e;
    std::vector<std::pair<int, int>> intended;  // u < v
};

// Assemble qubits and chain offsets; returns an error description or empty.
std::string assemble(const Graph& logical, const Layout& L, const std::vector<Edge>& touches, Built& out) {
    Embedding& e = out.e;
    e.logical = logical;
    e.lattice = uj_lattice(std::max(1, L.width), std::max(1, L.height));
    e.layout = L;
    e.terminal_touches = touches;
    const int n = logical.node_count();
    e.logical_map.resize(n);
    for (int i = 0; i < n; ++i) e.logical_map[i] = i;
    if (static_cast<int>(L.chains.size()) != n) return "chain count differs from logical node count";

    std::map<Site, int> at;
    auto fail_site = [](const char* what, Site s) {
        return std::string(what) + " at (" + std::to_string(s.x) + "," + std::to_string(s.y) + ")";
    };
    // unit qubit -> physical qubit
    std::vector<std::vector<int>> uq(L.units.size());
    for (std::size_t u = 0; u < L.units.size(); ++u) {
        const Unit& U = L.units[u];
        int gid = -1;
        if (is_gadget(U.kind)) {
            gid = static_cast<int>(e.gadgets.size());
            e.gadgets.push_back({U.kind == UnitKind::Interacting, U.chain_a, U.chain_b, {}});
        }
        for (std::size_t i = 0; i < U.qubits.size(); ++i) {
            const UnitQubit& q = U.qubits[i];
            Site s = U.site(static_cast<int>(i));
            if (!e.lattice.contains(s)) return fail_site("qubit outside the area", s);
            auto it = at.find(s);
            if (it != at.end()) {
                const auto& other = e.qubits[it->second];
                if (!q.port || q.chain < 0 || other.chain != q.chain) return fail_site("overlapping qubits", s);
                uq[u].push_back(it->second);
                continue;
            }
            int id = static_cast<int>(e.qubits.size());
            at.emplace(s, id);
            e.qubits.push_back({s, q.weight, q.chain, q.chain < 0 ? gid : -1});
            if (gid >= 0 && q.chain < 0) e.gadgets[gid].qubits.push_back(id);
            uq[u].push_back(id);
        }
        // template adjacency is intended
        for (std::size_t i = 0; i < U.qubits.size(); ++i)
            for (std::size_t j = i + 1; j < U.qubits.size(); ++j)
                if (near(U.site(static_cast<int>(i)), U.site(static_cast<int>(j)))) {
                    int a = uq[u][i], b = uq[u][j];
                    if (a != b) out.intended.emplace_back(std::min(a, b), std::max(a, b));
                }
    }

    e.chain_qubits.assign(n, {});
    e.chain_length.assign(n, 0);
    for (int c = 0; c < n; ++c) {
        const LayoutChain& ch = L.chains[c];
        if (ch.stops.empty()) return "chain " + std::to_string(c) + " has no qubits";
        if (ch.links.size() + 1 != ch.stops.size()) return "chain " + std::to_string(c) + " link count mismatch";
        auto& cq = e.chain_qubits[c];
        int offset = 0;
        auto stop_qubit = [&](const ChainStop& st) { return uq[st.unit][st.qubit]; };
        auto check_stop = [&](const ChainStop& st) -> std::string {
            const UnitQubit& q = L.units[st.unit].qubits[st.qubit];
            if (q.chain != c) return "stop on chain " + std::to_string(c) + " belongs to another chain";
            if ((offset & 1) != q.parity) return "parity broken on chain " + std::to_string(c);
            return {};
        };
        if (auto m = check_stop(ch.stops[0]); !m.empty()) return m;
        cq.emplace_back(stop_qubit(ch.stops[0]), 0);
        for (std::size_t i = 0; i < ch.links.size(); ++i) {
            const ChainLink& lk = ch.links[i];
            const ChainStop& b = ch.stops[i + 1];
            int prev = cq.back().first;
            if (lk.kind == LinkKind::Adjacent) {
                offset += 1;
            } else if (lk.kind == LinkKind::Virtual) {
                offset += 4;
            } else {
                for (Site s : lk.path) {
                    if (!e.lattice.contains(s)) return fail_site("wire qubit outside the area", s);
                    if (at.count(s)) return fail_site("wire overlaps a qubit", s);
                    int id = static_cast<int>(e.qubits.size());
                    at.emplace(s, id);
                    e.qubits.push_back({s, 1.0, c, -1});
                    out.intended.emplace_back(std::min(prev, id), std::max(prev, id));
                    ++offset;
                    cq.emplace_back(id, offset);
                    prev = id;
                }
                int bq = stop_qubit(b);
                if (bq != prev) {
                    ++offset;
                    out.intended.emplace_back(std::min(prev, bq), std::max(prev, bq));
                } else if (!lk.path.empty()) {
                    return "wire returns onto its own start";
                }
            }
            if (auto m = check_stop(b); !m.empty()) return m;
            if (stop_qubit(b) != cq.back().first) cq.emplace_back(stop_qubit(b), offset);
        }
        e.chain_length[c] = offset + 1;
    }
    std::sort(out.intended.begin(), out.intended.end());
    out.intended.erase(std::unique(out.intended.begin(), out.intended.end()), out.intended.end());

    // every physical adjacency must be intended and vice versa
    std::vector<std::pair<int, int>> actual;
    for (std::size_t i = 0; i < e.qubits.size(); ++i)
        for (const Site& d : kNb) {
            auto it = at.find(add(e.qubits[i].site, d));
            if (it != at.end() && it->second > static_cast<int>(i)) actual.emplace_back(static_cast<int>(i), it->second);
        }
    std::sort(actual.begin(), actual.end());
    if (actual != out.intended) {
        std::vector<std::pair<int, int>> extra;
        std::set_difference(actual.begin(), actual.end(), out.intended.begin(), out.intended.end(),
                            std::back_inserter(extra));
        if (!extra.empty()) return fail_site("stray adjacency", e.qubits[extra[0].first].site);
        return "intended adjacency missing";
    }
    return {};
}

}  // namespace

Embedding materialize(const Graph& logical, const Layout& layout, const std::vector<Edge>& touches) {
    Built b;
    if (auto m = assemble(logical, layout, touches, b); !m.empty()) throw StageFailure("embedding invalid: " + m);
    return std::move(b.e);
}

std::string check_embedding(const Embedding& e) {
    Built b;
    auto m = assemble(e.logical, e.layout, e.terminal_touches, b);
    if (!m.empty()) return m;
    for (std::size_t c = 0; c < b.e.chain_length.size(); ++c)
        if (b.e.chain_length[c] % 2 == 0) return "chain " + std::to_string(c) + " has even length";
    if (b.e.qubits.size() != e.qubits.size()) return "qubit list out of date";
    // chains meet exactly on logical edges: gadgets or touches
    for (const auto& [u, v] : e.terminal_touches)
        if (!e.logical.has_edge(u, v)) return "touch between non-adjacent chains";
    return {};
}

// ---------------------------------------------------------------------------
// Compaction

namespace {

struct Occupancy {
    int w = 0, h = 0;
    std::vector<int> count;

    Occupancy(int width, int height) : w(width), h(height), count(static_cast<std::size_t>(width) * height, 0) {}
    bool inside(Site s) const { return s.x >= 0 && s.y >= 0 && s.x < w && s.y < h; }
    int& at(Site s) { return count[static_cast<std::size_t>(s.y) * w + s.x]; }
    int get(Site s) const { return inside(s) ? count[static_cast<std::size_t>(s.y) * w + s.x] : 0; }
    void add(Site s, int d) {
        if (inside(s)) at(s) += d;
    }
};

Occupancy occupancy_of(const Layout& L) {
    Occupancy occ(L.width, L.height);
    std::set<Site> seen;
    for (const auto& u : L.units)
        for (int i = 0; i < static_cast<int>(u.qubits.size()); ++i)
            if (seen.insert(u.site(i)).second) occ.add(u.site(i), 1);
    for (const auto& ch : L.chains)
        for (const auto& lk : ch.links)
            for (Site s : lk.path) occ.add(s, 1);
    return occ;
}

// Shortest free path a -> q1 .. qk -> b with k odd that touches nothing else.
// Straight continuation is tried first, then the gentlest turns.
bool route_segment(Site a, Site b, const Occupancy& occ, std::vector<Site>& path) {
    path.clear();
    if (a == b) return true;
    if (near(a, b)) return false;
    const int margin = 8;
    const int x0 = std::max(0, std::min(a.x, b.x) - margin), x1 = std::min(occ.w - 1, std::max(a.x, b.x) + margin);
    const int y0 = std::max(0, std::min(a.y, b.y) - margin), y1 = std::min(occ.h - 1, std::max(a.y, b.y) + margin);
    const int bw = x1 - x0 + 1, bh = y1 - y0 + 1;
    auto in_box = [&](Site s) { return s.x >= x0 && s.x <= x1 && s.y >= y0 && s.y <= y1; };

    // 0 unusable, 1 clean, 2 touches b only
    auto classify = [&](Site q) {
        if (!in_box(q) || occ.get(q) != 0) return 0;
        bool nb = false;
        for (const Site& d : kNb) {
            Site s = add(q, d);
            if (occ.get(s) == 0 || s == a) continue;
            if (s == b) {
                nb = true;
                continue;
            }
            return 0;
        }
        return nb ? 2 : 1;
    };

    struct Node {
        Site s;
        int parent;
    };
    std::vector<Node> nodes;
    std::vector<char> seen(static_cast<std::size_t>(bw) * bh * 16, 0);
    auto key = [&](Site s, int par, int dir) {
        return ((static_cast<std::size_t>(s.y - y0) * bw + (s.x - x0)) * 2 + par) * 8 + dir;
    };
    std::vector<std::pair<int, int>> queue;  // node index, dir
    auto finish = [&](int idx) {
        for (int i = idx; i >= 0; i = nodes[i].parent) path.push_back(nodes[i].s);
        std::reverse(path.begin(), path.end());
        return true;
    };
    for (int d = 0; d < 8; ++d) {
        Site q = add(a, kNb[d]);
        int c = classify(q);
        if (c == 0) continue;
        nodes.push_back({q, -1});
        if (c == 2) return finish(static_cast<int>(nodes.size()) - 1);
        seen[key(q, 1, d)] = 1;
        queue.emplace_back(static_cast<int>(nodes.size()) - 1, d);
    }
    static const int turn[8] = {0, 1, -1, 2, -2, 3, -3, 4};
    std::vector<int> par(nodes.size(), 1);
    for (std::size_t head = 0; head < queue.size(); ++head) {
        auto [idx, d] = queue[head];
        const Site q = nodes[idx].s;
        const int p = par[idx];
        for (int t : turn) {
            int nd = ((d + t) % 8 + 8) % 8;
            Site r = add(q, kNb[nd]);
            if (near(r, a)) continue;
            int c = classify(r);
            if (c == 0) continue;
            // keep the path induced a few steps back
            bool clash = false;
            int back = nodes[idx].parent;
            for (int k = 0; k < 4 && back >= 0 && !clash; ++k, back = nodes[back].parent)
                if (dist2(nodes[back].s, r) <= kMaxD2) clash = true;
            if (clash) continue;
            const int np = p ^ 1;
            if (c == 2) {
                if (np != 1) continue;
                nodes.push_back({r, idx});
                par.push_back(np);
                return finish(static_cast<int>(nodes.size()) - 1);
            }
            auto k = key(r, np, nd);
            if (seen[k]) continue;
            seen[k] = 1;
            nodes.push_back({r, idx});
            par.push_back(np);
            queue.emplace_back(static_cast<int>(nodes.size()) - 1, nd);
        }
    }
    return false;
}

}  // namespace

Embedding compact_placement(const Embedding& e, const CompactionConfig& config, std::uint64_t seed,
                            CompactionStats* stats) {
    Layout cur = e.layout;
    int cur_n = e.qubit_count();
    Layout best = cur;
    int best_n = cur_n;
    CompactionStats st;
    st.initial_qubits = cur_n;
    Rng rng(seed);

    // links per unit: (chain, link index)
    auto attached = [](const Layout& L, int unit) {
        std::vector<std::pair<int, int>> out;
        for (int c = 0; c < static_cast<int>(L.chains.size()); ++c) {
            const auto& ch = L.chains[c];
            for (int i = 0; i < static_cast<int>(ch.links.size()); ++i)
                if (ch.links[i].kind == LinkKind::Segment && (ch.stops[i].unit == unit || ch.stops[i + 1].unit == unit))
                    out.emplace_back(c, i);
        }
        return out;
    };
    std::vector<std::pair<int, int>> segments;
    for (int c = 0; c < static_cast<int>(cur.chains.size()); ++c)
        for (int i = 0; i < static_cast<int>(cur.chains[c].links.size()); ++i)
            if (cur.chains[c].links[i].kind == LinkKind::Segment) segments.emplace_back(c, i);
    if (cur.units.empty()) {
        if (stats) *stats = st;
        return e;
    }

    const int steps = std::max(0, config.steps);
    const bool greedy = config.t_final <= 0;
    for (int step = 0; step < steps; ++step) {
        const double t = greedy ? 0.0
                                : config.t_initial *
                                      std::pow(config.t_final / config.t_initial, static_cast<double>(step) / steps);
        Layout next = cur;
        std::vector<std::pair<int, int>> rip;
        if (segments.empty() || rng.coin(0.75)) {
            const int u = rng.below_int(static_cast<int>(next.units.size()));
            Site d{rng.below_int(5) - 2, rng.below_int(5) - 2};
            if (d == Site{0, 0}) continue;
            next.units[u].origin = add(next.units[u].origin, d);
            rip = attached(next, u);
        } else {
            rip.push_back(segments[rng.below(segments.size())]);
        }
        ++st.proposed;
        for (auto [c, i] : rip) next.chains[c].links[i].path.clear();
        Occupancy occ = occupancy_of(next);
        rng.shuffle(rip);
        bool ok = true;
        for (auto [c, i] : rip) {
            auto& ch = next.chains[c];
            Site a = next.stop_site(ch.stops[i]), b = next.stop_site(ch.stops[i + 1]);
            // stale occupancy at the ends is fine: route_segment ignores a and b
            if (!route_segment(a, b, occ, ch.links[i].path)) {
                ok = false;
                break;
            }
            for (Site s : ch.links[i].path) occ.add(s, 1);
        }
        if (!ok) continue;
        Built built;
        if (!assemble(e.logical, next, e.terminal_touches, built).empty()) continue;
        const int n_next = built.e.qubit_count();
        const int delta = n_next - cur_n;
        if (delta <= 0 || (!greedy && rng.uniform() < std::exp(-delta / std::max(t, 1e-9)))) {
            cur = std::move(next);
            cur_n = n_next;
            ++st.accepted;
            if (cur_n < best_n) {
                best = cur;
                best_n = cur_n;
            }
        }
    }
    st.final_qubits = best_n;
    if (stats) *stats = st;
    return materialize(e.logical, best, e.terminal_touches);
}

// ---------------------------------------------------------------------------
// Readout

Assignment decode_embedded_solution(const Embedding& e, const Assignment& physical) {
    if (physical.size() != e.qubits.size()) throw InvalidArgument("assignment length differs from qubit count");
    const int n = e.logical.node_count();
    Assignment x(n, 0);
    for (int c = 0; c < n; ++c) {
        bool all = true, any = false;
        for (auto [q, off] : e.chain_qubits[c]) {
            if (off % 2) continue;
            any = true;
            if (!physical[q]) all = false;
        }
        x[e.logical_map[c]] = any && all;
    }
    if (!is_feasible(e.logical, x)) {
        // keep a maximum independent subset of what was read out
        std::vector<int> sel = selected_nodes(x);
        Graph sub = e.logical.induced(sel);
        Assignment keep;
        try {
            keep = brute_force_mis(sub).witness;
        } catch (const OracleLimit&) {
            keep = greedy_repair(sub, Assignment(sub.node_count(), 1));
        }
        std::fill(x.begin(), x.end(), 0);
        for (std::size_t i = 0; i < sel.size(); ++i)
            if (keep[i]) x[sel[i]] = 1;
    }
    for (int v = 0; v < n; ++v) {
        if (x[v]) continue;
        bool free = true;
        for (int u : e.logical.neighbors(v))
            if (x[u]) free = false;
        if (free) x[v] = 1;
    }
    return x;
}

LatticeMwis lattice_mwis(const std::vector<Site>& sites, const std::vector<double>& weights, int max_dist2,
                         const std::vector<int>* forced, std::uint64_t seed, std::size_t max_states) {
    const int n = static_cast<int>(sites.size());
    LatticeMwis out;
    out.x.assign(n, 0);
    if (n == 0) return out;
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return std::make_pair(sites[a].x, sites[a].y) < std::make_pair(sites[b].x, sites[b].y);
    });
    std::vector<int> rank(n);
    for (int i = 0; i < n; ++i) rank[order[i]] = i;
    Graph g = unit_disk_graph(sites, max_dist2);
    std::vector<int> last(n);
    for (int t = 0; t < n; ++t) {
        last[t] = t;
        for (int u : g.neighbors(order[t])) last[t] = std::max(last[t], rank[u]);
    }

    struct State {
        std::uint64_t mask;
        double w;
    };
    struct Back {
        int prev;
        std::uint8_t take;
    };
    std::vector<std::vector<Back>> backs(n);
    std::vector<State> states{{0, 0.0}};
    std::vector<int> frontier;  // ranks tracked by the mask, bit i = frontier[i]
    Rng rng(seed);

    for (int t = 0; t < n; ++t) {
        const int v = order[t];
        const int f = forced ? (*forced)[v] : -1;
        std::uint64_t conflict = 0;
        for (std::size_t i = 0; i < frontier.size(); ++i)
            if (g.has_edge(v, order[frontier[i]])) conflict |= std::uint64_t{1} << i;
        const bool track = last[t] > t;
        const int bit = static_cast<int>(frontier.size());
        if (track && bit >= 64) throw OracleLimit("lattice sweep frontier exceeds 64 sites");
        // drop members whose last neighbour is t, then remap bits
        std::vector<int> keep_bits;
        std::vector<int> nf;
        for (std::size_t i = 0; i < frontier.size(); ++i)
            if (last[frontier[i]] > t) {
                keep_bits.push_back(static_cast<int>(i));
                nf.push_back(frontier[i]);
            }
        if (track) {
            keep_bits.push_back(bit);
            nf.push_back(t);
        }
        auto remap = [&](std::uint64_t m) {
            std::uint64_t r = 0;
            for (std::size_t j = 0; j < keep_bits.size(); ++j)
                if (m >> keep_bits[j] & 1) r |= std::uint64_t{1} << j;
            return r;
        };
        std::unordered_map<std::uint64_t, int> index;
        std::vector<State> next;
        std::vector<int> ties;
        auto& back = backs[t];
        auto offer = [&](std::uint64_t m, double w, int prev, std::uint8_t take) {
            auto [it, fresh] = index.emplace(m, static_cast<int>(next.size()));
            if (fresh) {
                next.push_back({m, w});
                back.push_back({prev, take});
                ties.push_back(1);
                return;
            }
            int k = it->second;
            if (w > next[k].w + kEps) {
                next[k].w = w;
                back[k] = {prev, take};
                ties[k] = 1;
            } else if (w > next[k].w - kEps) {
                if (rng.below(static_cast<std::uint64_t>(++ties[k])) == 0) back[k] = {prev, take};
            }
        };
        for (int s = 0; s < static_cast<int>(states.size()); ++s) {
            const State& st = states[s];
            if (f != 1) offer(remap(st.mask), st.w, s, 0);
            if (f != 0 && !(st.mask & conflict)) offer(remap(st.mask | (std::uint64_t{1} << bit)), st.w + weights[v], s, 1);
        }
        if (next.size() > max_states) throw OracleLimit("lattice sweep state cap reached");
        states.swap(next);
        frontier.swap(nf);
        if (states.empty()) {
            out.feasible = false;
            out.weight = kNegInf;
            return out;
        }
    }
    int best = 0, ties = 1;
    for (int s = 1; s < static_cast<int>(states.size()); ++s) {
        if (states[s].w > states[best].w + kEps) {
            best = s;
            ties = 1;
        } else if (states[s].w > states[best].w - kEps && rng.below(static_cast<std::uint64_t>(++ties)) == 0) {
            best = s;
        }
    }
    out.weight = states[best].w;
    for (int t = n - 1, s = best; t >= 0; --t) {
        out.x[order[t]] = backs[t][s].take;
        s = backs[t][s].prev;
    }
    return out;
}

CorrespondenceReport check_correspondence(const Embedding& e, int samples, std::uint64_t seed) {
    CorrespondenceReport rep;
    const int n = e.logical.node_count();
    const auto sites = e.sites();
    const auto w = e.weights();
    const int d2 = e.lattice.max_dist2();
    auto forced_for = [&](const Assignment& in) {
        std::vector<int> f(e.qubits.size(), -1);
        for (int c = 0; c < n; ++c)
            for (auto [q, off] : e.chain_qubits[c]) f[q] = in[e.logical_map[c]] ? (off % 2 == 0) : (off % 2 == 1);
        return f;
    };
    auto fail = [&](std::string why) {
        rep.ok = false;
        rep.detail = std::move(why);
        return rep;
    };

    Assignment none(n, 0);
    auto f0 = forced_for(none);
    auto base = lattice_mwis(sites, w, d2, &f0, seed);
    if (!base.feasible) return fail("clean all-zero encoding is infeasible");
    rep.base_weight = base.weight;

    std::vector<Assignment> probes;
    if (n <= 10) {
        for (std::uint32_t m = 1; m < (1u << n); ++m) {
            Assignment p(n, 0);
            for (int i = 0; i < n; ++i) p[i] = m >> i & 1;
            probes.push_back(p);
        }
    } else {
        for (int v = 0; v < n; ++v) probes.push_back(to_assignment(n, {v}));
        for (auto [u, v] : e.logical.edges()) probes.push_back(to_assignment(n, {u, v}));
    }
    for (const auto& p : probes) {
        auto f = forced_for(p);
        auto r = lattice_mwis(sites, w, d2, &f, seed);
        int k = static_cast<int>(selected_nodes(p).size());
        double expect = base.weight + k;
        if (is_feasible(e.logical, p)) {
            if (!r.feasible || std::abs(r.weight - expect) > 1e-6)
                return fail("independent pattern of size " + std::to_string(k) + " scores " +
                            std::to_string(r.weight) + ", expected " + std::to_string(expect));
        } else if (r.feasible && r.weight > expect - 1e-6) {
            return fail("dependent pattern scores as high as an independent one");
        }
    }

    const int mis = brute_force_mis(e.logical).size;
    auto opt = lattice_mwis(sites, w, d2, nullptr, seed);
    rep.optimum = opt.weight;
    if (std::abs(opt.weight - (base.weight + mis)) > 1e-6)
        return fail("optimum " + std::to_string(opt.weight) + " differs from base + MIS");
    for (int s = 0; s < samples; ++s) {
        auto r = s == 0 ? opt : lattice_mwis(sites, w, d2, nullptr, mix_seed(seed, static_cast<std::uint64_t>(s)));
        Assignment x = decode_embedded_solution(e, r.x);
        if (!is_feasible(e.logical, x) || static_cast<int>(selected_nodes(x).size()) != mis)
            return fail("an optimal physical state decodes to a non-maximum set");
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Serialisation

json schematic_to_json(const ChainSchematic& s) {
    json j;
    j["generic"] = s.generic;
    json order = json::array();
    for (int v : s.order) order.push_back(s.logical.label(v));
    j["order"] = order;
    json chains = json::array();
    for (int p = 0; p < s.n(); ++p)
        chains.push_back({{"node", s.logical.label(s.order[p])}, {"first", s.lo[p]}, {"last", s.hi[p]}});
    j["chains"] = chains;
    json cr = json::array();
    for (const auto& c : s.crossings)
        cr.push_back({{"u", s.logical.label(c.u)}, {"v", s.logical.label(c.v)}, {"kind", crossing_name(c.kind)}});
    j["crossings"] = cr;
    j["gadgets"] = s.gadget_count();
    j["interacting_gadgets"] = s.interacting_count();
    j["terminal_touches"] = s.terminal_touches.size();
    return j;
}

json embedding_to_json(const Embedding& e) {
    json j;
    j["lattice"] = {{"width", e.lattice.width},
                    {"height", e.lattice.height},
                    {"spacing_um", e.lattice.spacing_um},
                    {"radius_ratio", e.lattice.radius_ratio}};
    json qs = json::array();
    for (const auto& q : e.qubits) {
        json o = {{"x", q.site.x}, {"y", q.site.y}, {"weight", q.weight}};
        if (q.chain >= 0) o["chain"] = e.logical.label(q.chain);
        if (q.gadget >= 0) o["gadget"] = q.gadget;
        qs.push_back(o);
    }
    j["qubits"] = qs;
    json chains = json::array();
    for (std::size_t c = 0; c < e.chain_qubits.size(); ++c) {
        json list = json::array();
        for (auto [q, off] : e.chain_qubits[c]) list.push_back({q, off});
        chains.push_back({{"node", e.logical.label(static_cast<int>(c))}, {"length", e.chain_length[c]}, {"qubits", list}});
    }
    j["chains"] = chains;
    json gs = json::array();
    for (const auto& g : e.gadgets)
        gs.push_back({{"interacting", g.interacting},
                      {"u", e.logical.label(g.u)},
                      {"v", e.logical.label(g.v)},
                      {"qubits", g.qubits}});
    j["gadgets"] = gs;
    json ts = json::array();
    for (auto [u, v] : e.terminal_touches) ts.push_back({e.logical.label(u), e.logical.label(v)});
    j["terminal_touches"] = ts;
    j["qubit_count"] = e.qubit_count();
    return j;
}

}  // namespace ujc
