#include "ujc/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>

#include "bits.hpp"
#include "ujc/errors.hpp"
#include "ujc/rng.hpp"

namespace ujc {

using detail::Bits;

Assignment to_assignment(int n, const std::vector<int>& nodes) {
    Assignment x(n, 0);
    for (int v : nodes) x.at(v) = 1;
    return x;
}

std::vector<int> selected_nodes(const Assignment& x) {
    std::vector<int> out;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i]) out.push_back(static_cast<int>(i));
    return out;
}

bool is_feasible(const Graph& g, const Assignment& x) {
    if (static_cast<int>(x.size()) != g.node_count()) return false;
    for (auto [u, v] : g.edges())
        if (x[u] && x[v]) return false;
    return true;
}

namespace {

template <int W>
struct Exact {
    std::vector<Bits<W>> adj;
    const OracleLimits& limits;
    std::uint64_t branches = 0;
    bool enumerate = false;
    int best = -1;
    Bits<W> best_set;
    std::vector<Bits<W>> optima;

    Exact(const Graph& g, const std::vector<int>& nodes, const OracleLimits& lim) : limits(lim) {
        std::vector<int> local(g.node_count(), -1);
        for (std::size_t i = 0; i < nodes.size(); ++i) local[nodes[i]] = static_cast<int>(i);
        adj.resize(nodes.size());
        for (std::size_t i = 0; i < nodes.size(); ++i)
            for (int w : g.neighbors(nodes[i]))
                if (local[w] >= 0) adj[i].set(local[w]);
    }

    void tick() {
        if (++branches > limits.max_branches) throw OracleLimit("exact solver branch cap exceeded");
    }

    int clique_cover(Bits<W> r) const {
        int k = 0;
        while (r.any()) {
            int v = r.lowest();
            r.reset(v);
            Bits<W> c = r & adj[v];
            while (c.any()) {
                int u = c.lowest();
                r.reset(u);
                c &= adj[u];
            }
            ++k;
        }
        return k;
    }

    void record(int size, const Bits<W>& chosen) {
        if (size > best) {
            best = size;
            best_set = chosen;
            optima.clear();
        }
        if (enumerate && size == best) {
            if (optima.size() >= limits.max_optima) throw OracleLimit("too many optimal solutions to enumerate");
            optima.push_back(chosen);
        }
    }

    void search(Bits<W> p, int size, Bits<W> chosen) {
        tick();
        // Isolated vertices belong to every maximum set; degree-1 vertices to some.
        for (bool changed = true; changed && p.any();) {
            changed = false;
            Bits<W> scan = p;
            scan.for_each([&](int v) {
                if (!p.test(v)) return;
                int d = p.count_and(adj[v]);
                if (d == 0 || (d == 1 && !enumerate)) {
                    chosen.set(v);
                    ++size;
                    p.reset(v);
                    p = p.without(adj[v]);
                    changed = true;
                }
            });
        }
        if (!p.any()) {
            record(size, chosen);
            return;
        }
        int bound = size + clique_cover(p);
        if (enumerate ? bound < best : bound <= best) return;
        int v = -1, dv = -1;
        p.for_each([&](int u) {
            int d = p.count_and(adj[u]);
            if (d > dv) {
                dv = d;
                v = u;
            }
        });
        Bits<W> inc = p.without(adj[v]);
        inc.reset(v);
        Bits<W> with = chosen;
        with.set(v);
        search(inc, size + 1, with);
        Bits<W> exc = p;
        exc.reset(v);
        search(exc, size, chosen);
    }

    void run(int n, bool all) {
        enumerate = all;
        Bits<W> p;
        for (int i = 0; i < n; ++i) p.set(i);
        search(p, 0, Bits<W>{});
    }

    static std::uint64_t add(std::uint64_t a, std::uint64_t b) {
        if (a > std::numeric_limits<std::uint64_t>::max() - b) throw OracleLimit("independent set count overflow");
        return a + b;
    }

    std::vector<std::uint64_t> poly(const Bits<W>& p) {
        tick();
        int v = -1, dv = -1;
        p.for_each([&](int u) {
            int d = p.count_and(adj[u]);
            if (d > dv) {
                dv = d;
                v = u;
            }
        });
        if (v < 0) return {1};
        if (dv == 0) {
            // Edgeless: binomial coefficients.
            int k = p.count();
            std::vector<std::uint64_t> c(k + 1, 0);
            c[0] = 1;
            for (int i = 1; i <= k; ++i)
                for (int j = i; j >= 1; --j) c[j] = add(c[j], c[j - 1]);
            return c;
        }
        Bits<W> exc = p;
        exc.reset(v);
        Bits<W> inc = p.without(adj[v]);
        inc.reset(v);
        auto a = poly(exc);
        auto b = poly(inc);
        if (a.size() < b.size() + 1) a.resize(b.size() + 1, 0);
        for (std::size_t i = 0; i < b.size(); ++i) a[i + 1] = add(a[i + 1], b[i]);
        return a;
    }
};

struct ComponentResult {
    int size = 0;
    std::vector<std::vector<int>> optima;  // original node ids
    std::vector<int> witness;
};

template <int W>
ComponentResult solve_component(const Graph& g, const std::vector<int>& nodes, bool all, const OracleLimits& lim) {
    Exact<W> ex(g, nodes, lim);
    ex.run(static_cast<int>(nodes.size()), all);
    ComponentResult r;
    r.size = ex.best;
    ex.best_set.for_each([&](int i) { r.witness.push_back(nodes[i]); });
    for (const auto& s : ex.optima) {
        std::vector<int> o;
        s.for_each([&](int i) { o.push_back(nodes[i]); });
        r.optima.push_back(std::move(o));
    }
    return r;
}

ComponentResult dispatch_component(const Graph& g, const std::vector<int>& nodes, bool all, const OracleLimits& lim) {
    const std::size_t n = nodes.size();
    if (static_cast<int>(n) > lim.max_component)
        throw OracleLimit("component with " + std::to_string(n) + " nodes exceeds the exact solver cap");
    if (n <= 64) return solve_component<1>(g, nodes, all, lim);
    if (n <= 128) return solve_component<2>(g, nodes, all, lim);
    if (n <= 256) return solve_component<4>(g, nodes, all, lim);
    if (n <= 512) return solve_component<8>(g, nodes, all, lim);
    throw OracleLimit("component too large for the exact solver");
}

template <int W>
std::vector<std::uint64_t> poly_component(const Graph& g, const std::vector<int>& nodes, const OracleLimits& lim) {
    Exact<W> ex(g, nodes, lim);
    Bits<W> p;
    for (std::size_t i = 0; i < nodes.size(); ++i) p.set(static_cast<int>(i));
    return ex.poly(p);
}

}  // namespace

MisResult brute_force_mis(const Graph& g, bool enumerate_all, const OracleLimits& limits) {
    const int n = g.node_count();
    MisResult res;
    res.exact = true;
    res.witness.assign(n, 0);
    std::vector<std::vector<std::vector<int>>> per_comp;
    for (const auto& nodes : component_nodes(g)) {
        ComponentResult c = dispatch_component(g, nodes, enumerate_all, limits);
        res.size += c.size;
        for (int v : c.witness) res.witness[v] = 1;
        if (enumerate_all) per_comp.push_back(std::move(c.optima));
    }
    res.weight = res.size;
    if (enumerate_all) {
        std::size_t total = 1;
        for (const auto& opts : per_comp) {
            if (opts.empty()) continue;
            if (total > limits.max_optima / opts.size()) throw OracleLimit("too many optimal solutions to enumerate");
            total *= opts.size();
        }
        res.all_optima.reserve(total);
        res.all_optima.push_back(Assignment(n, 0));
        for (const auto& opts : per_comp) {
            std::vector<Assignment> next;
            next.reserve(res.all_optima.size() * opts.size());
            for (const auto& base : res.all_optima)
                for (const auto& o : opts) {
                    Assignment x = base;
                    for (int v : o) x[v] = 1;
                    next.push_back(std::move(x));
                }
            res.all_optima = std::move(next);
        }
        std::sort(res.all_optima.begin(), res.all_optima.end(), std::greater<>());
    }
    return res;
}

std::vector<std::uint64_t> independence_polynomial(const Graph& g, const OracleLimits& limits) {
    std::vector<std::uint64_t> total{1};
    for (const auto& nodes : component_nodes(g)) {
        const std::size_t n = nodes.size();
        std::vector<std::uint64_t> c;
        if (static_cast<int>(n) > limits.max_component) throw OracleLimit("component exceeds the counting cap");
        if (n <= 64) c = poly_component<1>(g, nodes, limits);
        else if (n <= 128) c = poly_component<2>(g, nodes, limits);
        else if (n <= 256) c = poly_component<4>(g, nodes, limits);
        else c = poly_component<8>(g, nodes, limits);
        std::vector<std::uint64_t> prod(total.size() + c.size() - 1, 0);
        for (std::size_t i = 0; i < total.size(); ++i)
            for (std::size_t j = 0; j < c.size(); ++j) {
                unsigned __int128 t = static_cast<unsigned __int128>(total[i]) * c[j] + prod[i + j];
                if (t > std::numeric_limits<std::uint64_t>::max()) throw OracleLimit("independent set count overflow");
                prod[i + j] = static_cast<std::uint64_t>(t);
            }
        total = std::move(prod);
    }
    return total;
}

std::uint64_t count_independent_sets(const Graph& g, int alpha, const OracleLimits& limits) {
    if (alpha < 0) throw InvalidArgument("alpha must be non-negative");
    auto p = independence_polynomial(g, limits);
    return alpha < static_cast<int>(p.size()) ? p[alpha] : 0;
}

HardnessRecord hardness_parameter(const Graph& g, const OracleLimits& limits) {
    auto p = independence_polynomial(g, limits);
    HardnessRecord h;
    h.mis = static_cast<int>(p.size()) - 1;
    h.d_mis = p.back();
    h.d_mis_minus_1 = h.mis >= 1 ? p[h.mis - 1] : 0;
    h.hardness = h.mis > 0 ? static_cast<double>(h.d_mis_minus_1) / (h.mis * static_cast<double>(h.d_mis)) : 0.0;
    return h;
}

double cost(const Graph& g, const Assignment& x, double penalty) {
    if (static_cast<int>(x.size()) != g.node_count()) throw InvalidArgument("assignment length does not match graph");
    if (!(penalty > 0.0)) throw InvalidArgument("penalty must be positive");
    double h = 0.0;
    for (auto b : x) h -= b;
    for (auto [u, v] : g.edges())
        if (x[u] && x[v]) h += penalty;
    return h;
}

Assignment greedy_repair(const Graph& g, Assignment x, const std::vector<double>* weights) {
    const int n = g.node_count();
    auto w = [&](int v) { return weights ? (*weights)[v] : 1.0; };
    std::vector<int> conflicts(n, 0);
    for (auto [u, v] : g.edges())
        if (x[u] && x[v]) {
            conflicts[u]++;
            conflicts[v]++;
        }
    for (;;) {
        int worst = -1;
        for (int v = 0; v < n; ++v) {
            if (!x[v] || conflicts[v] == 0) continue;
            if (worst < 0 || conflicts[v] > conflicts[worst] ||
                (conflicts[v] == conflicts[worst] && w(v) < w(worst)))
                worst = v;
        }
        if (worst < 0) break;
        x[worst] = 0;
        for (int u : g.neighbors(worst))
            if (x[u]) conflicts[u]--;
        conflicts[worst] = 0;
    }
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (w(a) != w(b)) return w(a) > w(b);
        return g.degree(a) < g.degree(b);
    });
    for (int v : order) {
        if (x[v]) continue;
        bool free = true;
        for (int u : g.neighbors(v))
            if (x[u]) {
                free = false;
                break;
            }
        if (free) x[v] = 1;
    }
    return x;
}

namespace {

MisResult anneal_once(const Graph& g, const AnnealSchedule& s, std::uint64_t seed, const std::vector<double>* weights) {
    const int n = g.node_count();
    Rng rng(seed);
    auto w = [&](int v) { return weights ? (*weights)[v] : 1.0; };
    Assignment x(n, 0);
    // field[v] = penalty energy v would pay if selected.
    std::vector<double> field(n, 0.0);
    double energy = 0.0, best_energy = 0.0;
    Assignment best = x;
    const double ratio = s.steps > 1 ? std::pow(s.t_final / s.t_initial, 1.0 / (s.steps - 1)) : 1.0;
    double t = s.t_initial;
    for (int step = 0; step < s.steps; ++step, t *= ratio) {
        for (int k = 0; k < n; ++k) {
            int v = rng.below_int(n);
            double delta = x[v] ? (w(v) - field[v]) : (-w(v) + field[v]);
            if (delta <= 0.0 || rng.uniform() < std::exp(-delta / t)) {
                x[v] ^= 1;
                energy += delta;
                const double sign = x[v] ? 1.0 : -1.0;
                for (int u : g.neighbors(v)) field[u] += sign * s.penalty * std::max(w(u), w(v));
                if (energy < best_energy) {
                    best_energy = energy;
                    best = x;
                }
            }
        }
    }
    MisResult r;
    r.witness = greedy_repair(g, best, weights);
    r.size = 0;
    for (int v = 0; v < n; ++v)
        if (r.witness[v]) {
            r.size++;
            r.weight += w(v);
        }
    return r;
}

}  // namespace

MisResult anneal_mis(const Graph& g, const AnnealSchedule& s, std::uint64_t seed, const std::vector<double>* weights) {
    if (!(s.t_initial > 0.0 && s.t_final > 0.0) || s.steps < 1 || s.restarts < 1 || !(s.penalty > 1.0))
        throw InvalidArgument("invalid annealing schedule");
    if (weights && static_cast<int>(weights->size()) != g.node_count())
        throw InvalidArgument("weight vector length does not match graph");
    std::vector<MisResult> runs(s.restarts);
    if (s.threads > 1) {
        std::vector<std::future<MisResult>> fs;
        for (int r = 0; r < s.restarts; ++r)
            fs.push_back(std::async(std::launch::async, anneal_once, std::cref(g), std::cref(s), mix_seed(seed, r), weights));
        for (int r = 0; r < s.restarts; ++r) runs[r] = fs[r].get();
    } else {
        for (int r = 0; r < s.restarts; ++r) runs[r] = anneal_once(g, s, mix_seed(seed, r), weights);
    }
    // Merge by best weight; earliest restart wins ties so the result is thread-count independent.
    std::size_t best = 0;
    for (std::size_t r = 1; r < runs.size(); ++r)
        if (runs[r].weight > runs[best].weight) best = r;
    MisResult out = std::move(runs[best]);
    out.exact = false;
    return out;
}

std::vector<Assignment> local_search_swaps(const Graph& g, const Assignment& mis, const SwapOptions& options) {
    const Graph& cg = options.candidate_graph ? *options.candidate_graph : g;
    const int n = g.node_count();
    if (cg.node_count() != n || static_cast<int>(mis.size()) != n)
        throw InvalidArgument("assignment length does not match graph");
    if (!is_feasible(cg, mis)) throw Infeasible("swap search needs a feasible independent set");
    std::vector<std::pair<int, int>> cand;  // (out, in)
    for (int t = 0; t < n; ++t) {
        if (mis[t]) continue;
        int only = -1, count = 0;
        for (int u : cg.neighbors(t))
            if (mis[u]) {
                only = u;
                ++count;
            }
        if (count == 1) cand.emplace_back(only, t);
    }
    std::sort(cand.begin(), cand.end());
    const int k = static_cast<int>(cand.size());
    const int depth = options.depth < 0 ? k : std::min(options.depth, k);
    std::vector<Assignment> out;
    if (k == 0 || depth == 0) return out;
    std::size_t tried = 0;
    std::vector<int> pick;
    // Depth-first over index subsets with distinct outgoing and incoming nodes.
    auto rec = [&](auto&& self, int from, Assignment& x) -> void {
        if (!pick.empty()) {
            if (++tried > options.max_combinations) return;
            if (is_feasible(g, x) && x != mis) out.push_back(x);
        }
        if (static_cast<int>(pick.size()) == depth) return;
        for (int i = from; i < k; ++i) {
            auto [s, t] = cand[i];
            if (!x[s] || x[t]) continue;
            x[s] = 0;
            x[t] = 1;
            pick.push_back(i);
            self(self, i + 1, x);
            pick.pop_back();
            x[s] = 1;
            x[t] = 0;
        }
    };
    Assignment x = mis;
    rec(rec, 0, x);
    std::sort(out.begin(), out.end(), std::greater<>());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace ujc
