#include "ujc/reducer.hpp"

#include <algorithm>
#include <numeric>
#include <cstdint>

#include "ujc/errors.hpp"
#include "ujc/rng.hpp"

namespace ujc {

std::vector<int> ReductionTrace::selections() const {
    std::vector<int> s;
    s.reserve(steps.size());
    for (const auto& st : steps) s.push_back(st.selected);
    return s;
}

bool is_exposed(const Graph& g, int v) {
    auto nb = g.neighbors(v);
    for (std::size_t i = 0; i < nb.size(); ++i)
        for (std::size_t j = i + 1; j < nb.size(); ++j)
            if (!g.has_edge(nb[i], nb[j])) return false;
    return true;
}

std::vector<int> find_exposed_nodes(const Graph& g) {
    std::vector<int> out;
    for (int v = 0; v < g.node_count(); ++v)
        if (is_exposed(g, v)) out.push_back(v);
    return out;
}

namespace {

class Reducer {
public:
    Reducer(const Graph& g, std::vector<int> rank)
        : g_(g), rank_(std::move(rank)), alive_(g.node_count(), 1), deg_(g.node_count()),
          stamp_(g.node_count(), 0), pos_(g.node_count(), -1) {
        heap_.reserve(g.node_count());
        for (int v = 0; v < g.node_count(); ++v) {
            deg_[v] = g.degree(v);
            push(v);
        }
    }

    ReductionTrace run() {
        ReductionTrace t;
        t.original_n = g_.node_count();
        while (!heap_.empty()) {
            int v = pop();
            if (!alive_[v] || !exposed(v)) continue;  // re-queued only if its neighbourhood shrinks
            ReductionStep st;
            st.selected = v;
            for (int u : g_.neighbors(v))
                if (alive_[u]) st.removed.push_back(u);
            st.clique_size = 1 + static_cast<int>(st.removed.size());
            kill(v);
            for (int u : st.removed) kill(u);
            t.steps.push_back(std::move(st));
        }
        for (int v = 0; v < g_.node_count(); ++v)
            if (alive_[v]) t.kernel_node_map.push_back(v);
        t.kernel = g_.induced(t.kernel_node_map);
        return t;
    }

private:
    // Candidates ordered by (current degree, rank). One slot per node; a degree drop is a decrease-key.
    std::uint64_t key(int v) const {
        return static_cast<std::uint64_t>(deg_[v]) << 32 | static_cast<std::uint32_t>(rank_[v]);
    }

    void place(std::size_t i, int v) {
        heap_[i] = v;
        pos_[v] = static_cast<int>(i);
    }

    void sift_up(std::size_t i) {
        const int v = heap_[i];
        const std::uint64_t k = key(v);
        while (i > 0) {
            std::size_t parent = (i - 1) / 2;
            if (key(heap_[parent]) <= k) break;
            place(i, heap_[parent]);
            i = parent;
        }
        place(i, v);
    }

    void sift_down(std::size_t i) {
        const int v = heap_[i];
        const std::uint64_t k = key(v);
        const std::size_t n = heap_.size();
        while (true) {
            std::size_t c = 2 * i + 1;
            if (c >= n) break;
            if (c + 1 < n && key(heap_[c + 1]) < key(heap_[c])) ++c;
            if (key(heap_[c]) >= k) break;
            place(i, heap_[c]);
            i = c;
        }
        place(i, v);
    }

    void push(int v) {
        if (pos_[v] < 0) {
            heap_.push_back(v);
            pos_[v] = static_cast<int>(heap_.size() - 1);
        }
        sift_up(static_cast<std::size_t>(pos_[v]));
    }

    int pop() {
        const int v = heap_.front();
        pos_[v] = -1;
        const int last = heap_.back();
        heap_.pop_back();
        if (!heap_.empty() && last != v) {
            place(0, last);
            sift_down(0);
        }
        return v;
    }

    bool exposed(int v) {
        ++epoch_;
        for (int u : g_.neighbors(v))
            if (alive_[u]) stamp_[u] = epoch_;
        const int need = deg_[v] - 1;
        for (int u : g_.neighbors(v)) {
            if (!alive_[u]) continue;
            int seen = 0;
            for (int w : g_.neighbors(u))
                if (alive_[w] && stamp_[w] == epoch_) ++seen;
            if (seen < need) return false;
        }
        return true;
    }

    void kill(int v) {
        if (!alive_[v]) return;
        alive_[v] = 0;
        for (int u : g_.neighbors(v))
            if (alive_[u]) {
                --deg_[u];
                push(u);
            }
    }

    const Graph& g_;
    std::vector<int> rank_;
    std::vector<char> alive_;
    std::vector<int> deg_;
    std::vector<unsigned> stamp_;
    unsigned epoch_ = 0;
    std::vector<int> pos_;
    std::vector<int> heap_;
};

}  // namespace

ReductionTrace reduce(const Graph& g, std::optional<std::uint64_t> relabel_seed) {
    std::vector<int> rank(g.node_count());
    std::iota(rank.begin(), rank.end(), 0);
    if (relabel_seed) {
        Rng rng(*relabel_seed);
        rng.shuffle(rank);
    }
    return Reducer(g, std::move(rank)).run();
}

Assignment expand_solution(const ReductionTrace& trace, const Assignment& kernel_mis) {
    if (static_cast<int>(kernel_mis.size()) != trace.kernel.node_count())
        throw InvalidArgument("kernel solution length does not match kernel");
    if (!is_feasible(trace.kernel, kernel_mis)) throw Infeasible("kernel solution is not independent");
    Assignment x(trace.original_n, 0);
    for (const auto& st : trace.steps) x[st.selected] = 1;
    for (std::size_t i = 0; i < kernel_mis.size(); ++i)
        if (kernel_mis[i]) x[trace.kernel_node_map[i]] = 1;
    return x;
}

double reduction_factor(const ReductionTrace& trace) {
    if (trace.original_n == 0) return 1.0;
    return static_cast<double>(trace.original_n - trace.kernel.node_count()) / trace.original_n;
}

std::vector<std::vector<int>> kernel_components(const ReductionTrace& trace) {
    return component_nodes(trace.kernel);
}

json trace_to_json(const ReductionTrace& trace) {
    json j;
    j["original_n"] = trace.original_n;
    json steps = json::array();
    for (const auto& st : trace.steps)
        steps.push_back({{"selected", st.selected}, {"removed", st.removed}, {"clique_size", st.clique_size}});
    j["steps"] = std::move(steps);
    j["kernel"] = graph_to_json(trace.kernel);
    j["kernel_node_map"] = trace.kernel_node_map;
    j["xi"] = reduction_factor(trace);
    return j;
}

ReductionTrace trace_from_json(const json& j) {
    try {
        ReductionTrace t;
        t.original_n = j.at("original_n").get<int>();
        for (const auto& s : j.at("steps")) {
            ReductionStep st;
            st.selected = s.at("selected").get<int>();
            st.removed = s.at("removed").get<std::vector<int>>();
            st.clique_size = s.value("clique_size", 1 + static_cast<int>(st.removed.size()));
            t.steps.push_back(std::move(st));
        }
        t.kernel = graph_from_json(j.at("kernel"));
        t.kernel_node_map = j.at("kernel_node_map").get<std::vector<int>>();
        if (static_cast<int>(t.kernel_node_map.size()) != t.kernel.node_count())
            throw ParseError("kernel_node_map length does not match kernel");
        return t;
    } catch (const json::exception& e) {
        throw ParseError(std::string("trace JSON: ") + e.what());
    }
}

namespace {

struct Splitter {
    const Graph& g;
    const std::vector<int>& requested;
    const SplitOptions& opt;
    SplitResult best;
    bool have_best = false;
    int branches = 0, pruned = 0;

    struct State {
        std::vector<char> alive;
        std::vector<int> chosen;
        std::vector<int> pattern;
        std::vector<std::pair<int, int>> decisions;
        int reduced = 0;
    };

    int alive_count(const State& s) const {
        return static_cast<int>(std::count(s.alive.begin(), s.alive.end(), 1));
    }

    bool beats_best(int bound) const { return !have_best || bound > best.size; }

    void finish(const State& s) {
        int size = static_cast<int>(s.chosen.size());
        if (!beats_best(size)) return;
        best.size = size;
        best.solution = to_assignment(g.node_count(), s.chosen);
        best.pattern = s.pattern;
        best.decisions = s.decisions;
        best.reduced_selections = s.reduced;
        have_best = true;
    }

    void include(State& s, int v) {
        s.chosen.push_back(v);
        s.alive[v] = 0;
        for (int u : g.neighbors(v)) s.alive[u] = 0;
    }

    // Apply the requested split pattern node by node, include first.
    void requested_branch(State s, std::size_t i, int budget) {
        if (i == requested.size()) {
            reduce_branch(std::move(s), budget);
            return;
        }
        int v = requested[i];
        if (s.alive[v]) {
            State inc = s;
            include(inc, v);
            inc.pattern.push_back(1);
            inc.decisions.emplace_back(v, 1);
            requested_branch(std::move(inc), i + 1, budget);
        } else {
            ++pruned;  // a neighbour is already included
        }
        State exc = std::move(s);
        exc.alive[v] = 0;
        exc.pattern.push_back(0);
        exc.decisions.emplace_back(v, 0);
        requested_branch(std::move(exc), i + 1, budget);
    }

    void reduce_branch(State s, int budget) {
        ++branches;
        std::vector<int> nodes;
        for (int v = 0; v < g.node_count(); ++v)
            if (s.alive[v]) nodes.push_back(v);
        Graph residual = g.induced(nodes);
        ReductionTrace t = reduce(residual);
        for (int sel : t.selections()) s.chosen.push_back(nodes[sel]);
        s.reduced += static_cast<int>(t.steps.size());
        std::fill(s.alive.begin(), s.alive.end(), 0);
        for (int k : t.kernel_node_map) s.alive[nodes[k]] = 1;
        const int kernel_n = t.kernel.node_count();
        if (!beats_best(static_cast<int>(s.chosen.size()) + kernel_n)) {
            ++pruned;
            return;
        }
        if (kernel_n == 0) {
            finish(s);
            return;
        }
        if (budget <= 0) {
            MisResult r = brute_force_mis(t.kernel, false, opt.limits);
            for (int k = 0; k < kernel_n; ++k)
                if (r.witness[k]) s.chosen.push_back(nodes[t.kernel_node_map[k]]);
            finish(s);
            return;
        }
        int v = -1, dv = -1;
        for (int k = 0; k < kernel_n; ++k)
            if (t.kernel.degree(k) > dv) {
                dv = t.kernel.degree(k);
                v = nodes[t.kernel_node_map[k]];
            }
        State inc = s;
        include(inc, v);
        inc.decisions.emplace_back(v, 1);
        reduce_branch(std::move(inc), budget - 1);
        s.alive[v] = 0;
        s.decisions.emplace_back(v, 0);
        reduce_branch(std::move(s), budget - 1);
    }
};

}  // namespace

SplitResult split_and_reduce(const Graph& g, const std::vector<int>& split_nodes, int budget,
                             const SplitOptions& options) {
    if (budget < 0 || budget > std::max(options.cap, 0))
        throw InvalidArgument("split budget must lie in [0, " + std::to_string(options.cap) + "]");
    if (static_cast<int>(split_nodes.size()) > budget) throw InvalidArgument("more split nodes than the budget K");
    std::vector<char> seen(g.node_count(), 0);
    for (int v : split_nodes) {
        if (v < 0 || v >= g.node_count()) throw InvalidArgument("split node out of range");
        if (seen[v]++) throw InvalidArgument("duplicate split node");
    }
    Splitter sp{g, split_nodes, options, {}, false, 0, 0};
    Splitter::State s;
    s.alive.assign(g.node_count(), 1);
    sp.requested_branch(std::move(s), 0, budget - static_cast<int>(split_nodes.size()));
    SplitResult r = std::move(sp.best);
    r.branches = sp.branches;
    r.pruned = sp.pruned;
    if (r.solution.empty()) r.solution.assign(g.node_count(), 0);
    return r;
}

}  // namespace ujc
