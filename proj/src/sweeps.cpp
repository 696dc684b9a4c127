#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

#include "ujc/errors.hpp"
#include "ujc/pipeline.hpp"
#include "ujc/rng.hpp"

namespace ujc {

namespace {

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

template <class F>
void parallel_for(std::size_t count, int threads, F&& body) {
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i = next++; i < count; i = next++) body(i);
    };
    const int t = std::max(1, std::min<int>(threads, static_cast<int>(count)));
    std::vector<std::thread> pool;
    for (int k = 1; k < t; ++k) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
}

std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

Graph sample_graph(Family family, int n, double density, std::uint64_t seed) {
    if (n < 0) throw InvalidArgument("negative node count");
    RandomParams p;
    switch (family) {
        case Family::UJ:
            if (!(density > 0 && density <= 1)) throw InvalidArgument("UJ filling must lie in (0, 1]");
            p.filling = density;
            break;
        case Family::RG:
            p.radius = n > 1 ? std::sqrt(density / ((n - 1) * M_PI)) : 0.0;
            break;
        case Family::ER:
            p.probability = n > 1 ? std::min(1.0, density / (n - 1)) : 0.0;
            break;
        case Family::BA:
            p.attachments = std::max(1, static_cast<int>(std::lround(density / 2)));
            break;
    }
    return generate_random(family, n, p, seed);
}

std::vector<ReductionRecord> sweep_reduction(const std::vector<SweepCell>& cells, int seeds, std::uint64_t seed,
                                             int threads) {
    if (cells.empty() || seeds <= 0) throw InvalidArgument("sweep grid is empty");
    std::vector<ReductionRecord> out(cells.size() * static_cast<std::size_t>(seeds));
    parallel_for(out.size(), threads, [&](std::size_t i) {
        const SweepCell& c = cells[i / seeds];
        ReductionRecord& r = out[i];
        r.family = c.family;
        r.n = c.n;
        r.density = c.density;
        r.seed = mix_seed(seed, i);
        Graph g = sample_graph(c.family, c.n, c.density, r.seed);
        auto t0 = std::chrono::steady_clock::now();
        ReductionTrace t = reduce(g);
        r.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        r.xi = reduction_factor(t);
        r.kernel_n = t.kernel.node_count();
        r.kernel_m = t.kernel.edge_count();
        r.components = static_cast<int>(kernel_components(t).size());
    });
    return out;
}

Quantiles quantiles(std::vector<double> v) {
    if (v.empty()) throw InvalidArgument("quantiles of an empty sample");
    std::sort(v.begin(), v.end());
    auto at = [&](double q) {
        double pos = q * (v.size() - 1);
        std::size_t lo = static_cast<std::size_t>(std::floor(pos));
        std::size_t hi = std::min(lo + 1, v.size() - 1);
        return v[lo] + (pos - lo) * (v[hi] - v[lo]);
    };
    return {v.front(), at(0.25), at(0.5), at(0.75), v.back()};
}

std::vector<CellSummary> summarize(const std::vector<ReductionRecord>& records) {
    std::vector<CellSummary> out;
    std::vector<std::vector<double>> xs, ts;
    for (const auto& r : records) {
        std::size_t k = 0;
        while (k < out.size() && !(out[k].cell.family == r.family && out[k].cell.n == r.n &&
                                   out[k].cell.density == r.density))
            ++k;
        if (k == out.size()) {
            out.push_back({{r.family, r.n, r.density}, 0, {}, {}});
            xs.emplace_back();
            ts.emplace_back();
        }
        ++out[k].count;
        xs[k].push_back(r.xi);
        ts[k].push_back(r.runtime_s);
    }
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k].xi = quantiles(xs[k]);
        out[k].runtime_s = quantiles(ts[k]);
    }
    return out;
}

PowerFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("power-law fit needs at least two points");
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0) || !(y[i] > 0)) throw InvalidArgument("power-law fit needs positive data");
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(y[i]));
    }
    const double k = static_cast<double>(lx.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) mx += lx[i], my += ly[i];
    mx /= k, my /= k;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (sxx == 0) throw InvalidArgument("power-law fit needs distinct x values");
    PowerFit f;
    f.exponent = sxy / sxx;
    const double b = my - f.exponent * mx;
    f.prefactor = std::exp(b);
    if (lx.size() > 2) {
        double sse = 0;
        for (std::size_t i = 0; i < lx.size(); ++i) {
            double e = ly[i] - (b + f.exponent * lx[i]);
            sse += e * e;
        }
        f.exponent_stderr = std::sqrt(sse / (k - 2) / sxx);
    }
    return f;
}

std::string reduction_csv(const std::vector<ReductionRecord>& records) {
    std::ostringstream os;
    os << "family,n,density,seed,xi,runtime_s,kernel_n,kernel_m,components\n";
    for (const auto& r : records)
        os << family_name(r.family) << ',' << r.n << ',' << num(r.density) << ',' << r.seed << ',' << num(r.xi) << ','
           << num(r.runtime_s) << ',' << r.kernel_n << ',' << r.kernel_m << ',' << r.components << '\n';
    return os.str();
}

std::vector<ReductionRecord> parse_reduction_csv(const std::string& text) {
    Table t = parse_csv(text);
    const int cf = t.column("family"), cn = t.column("n"), cd = t.column("density"), cs = t.column("seed"),
              cx = t.column("xi"), cr = t.column("runtime_s"), ckn = t.column("kernel_n"), ckm = t.column("kernel_m"),
              cc = t.column("components");
    std::vector<ReductionRecord> out;
    int line = 1;
    for (const auto& row : t.rows) {
        ++line;
        try {
            ReductionRecord r;
            r.family = parse_family(row[cf]);
            r.n = std::stoi(row[cn]);
            r.density = std::stod(row[cd]);
            r.seed = std::stoull(row[cs]);
            r.xi = std::stod(row[cx]);
            r.runtime_s = std::stod(row[cr]);
            r.kernel_n = std::stoi(row[ckn]);
            r.kernel_m = std::stoull(row[ckm]);
            r.components = std::stoi(row[cc]);
            out.push_back(r);
        } catch (const std::logic_error&) {
            throw ParseError("bad numeric field", line);
        }
    }
    return out;
}

double fit_quadratic_prefactor(const std::vector<int>& n, const std::vector<double>& count) {
    if (n.empty() || n.size() != count.size()) throw InvalidArgument("overhead ensemble is empty");
    double num_ = 0, den = 0;
    for (std::size_t i = 0; i < n.size(); ++i) {
        double n2 = static_cast<double>(n[i]) * n[i];
        num_ += count[i] * n2;
        den += n2 * n2;
    }
    if (den == 0) throw InvalidArgument("overhead ensemble has no nodes");
    return num_ / den;
}

std::vector<OverheadRecord> sweep_overhead(const OverheadOptions& o, std::uint64_t seed) {
    if (o.kernels <= 0) throw InvalidArgument("overhead ensemble is empty");
    struct Candidate {
        OverheadRecord rec;
        Graph kernel;
    };
    std::vector<Candidate> cands;
    Rng rng(seed);
    for (long attempt = 0; attempt < o.max_attempts && static_cast<int>(cands.size()) < o.kernels; ++attempt) {
        const int n0 = 20 + rng.below_int(140);
        const std::uint64_t s = mix_seed(seed, static_cast<std::uint64_t>(attempt));
        Graph g = generate_er_m(n0, static_cast<std::size_t>(std::lround(o.edges_per_node * n0)), s);
        ReductionTrace t = reduce(g);
        auto comps = kernel_components(t);
        if (comps.empty()) continue;
        auto largest = std::max_element(comps.begin(), comps.end(),
                                        [](const auto& a, const auto& b) { return a.size() < b.size(); });
        const int k = static_cast<int>(largest->size());
        if (k < o.min_kernel_n || k > o.max_kernel_n) continue;
        Candidate c;
        c.rec.seed = s;
        c.rec.source_n = n0;
        c.kernel = t.kernel.induced(*largest);
        c.rec.n = k;
        c.rec.m = c.kernel.edge_count();
        cands.push_back(std::move(c));
    }
    if (cands.empty()) throw InvalidArgument("overhead ensemble is empty");
    std::vector<OverheadRecord> out(cands.size());
    parallel_for(cands.size(), o.threads, [&](std::size_t i) {
        OverheadRecord r = cands[i].rec;
        const Graph& g = cands[i].kernel;
        auto gen = generic_embedding(g);
        r.generic_formula = gen.formula_qubits;
        r.generic_realized = realize_qubits(gen.schematic).qubit_count();
        ChainSchematic s = optimize_ordering(g, o.ordering, mix_seed(r.seed, 1));
        r.gadgets = s.gadget_count();
        Embedding e = realize_qubits(s);
        r.optimized_uncompacted = e.qubit_count();
        r.optimized = compact_placement(e, o.compaction, mix_seed(r.seed, 2)).qubit_count();
        out[i] = r;
    });
    return out;
}

std::string overhead_csv(const std::vector<OverheadRecord>& records) {
    std::ostringstream os;
    os << "seed,source_n,n,m,generic_formula,generic_realized,optimized_uncompacted,optimized,gadgets\n";
    for (const auto& r : records)
        os << r.seed << ',' << r.source_n << ',' << r.n << ',' << r.m << ',' << r.generic_formula << ','
           << r.generic_realized << ',' << r.optimized_uncompacted << ',' << r.optimized << ',' << r.gadgets << '\n';
    return os.str();
}

int Table::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    throw InvalidArgument("no column '" + name + "'");
}

Table parse_csv(const std::string& text) {
    Table t;
    std::istringstream is(text);
    std::string line;
    int no = 0;
    while (std::getline(is, line)) {
        ++no;
        if (line.empty() || line == "\r") continue;
        auto cells = split_commas(line);
        if (t.header.empty()) {
            t.header = cells;
            continue;
        }
        if (cells.size() != t.header.size()) throw ParseError("expected " + std::to_string(t.header.size()) + " fields", no);
        t.rows.push_back(std::move(cells));
    }
    if (t.header.empty()) throw ParseError("empty CSV document");
    return t;
}

}  // namespace ujc
