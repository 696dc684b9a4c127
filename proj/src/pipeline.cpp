#include "ujc/pipeline.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <set>
#include <thread>

#include "ujc/errors.hpp"
#include "ujc/rng.hpp"

namespace ujc {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct StageTimes {
    double check = 0, embed = 0, solve = 0;
};

MisResult solve_logical(const Graph& g, const CompileOptions& o, std::uint64_t seed, std::string& solver) {
    if (g.node_count() <= o.oracle_threshold) {
        solver = "oracle";
        return brute_force_mis(g);
    }
    solver = "anneal";
    return anneal_mis(g, o.anneal, seed);
}

MisResult solve_physical(const Graph& p, const std::vector<double>& w, const CompileOptions& o, std::uint64_t seed) {
    bool unit = std::all_of(w.begin(), w.end(), [](double x) { return x == 1.0; });
    if (unit && p.node_count() <= o.oracle_threshold) return brute_force_mis(p);
    return anneal_mis(p, o.anneal, seed, unit ? nullptr : &w);
}

void process_component(ComponentResult& c, const CompileOptions& o, std::uint64_t seed, StageTimes& times) {
    const int n = c.graph.node_count();
    auto t0 = Clock::now();
    c.report = check_graph(c.graph, o.check_depth);
    times.check += seconds_since(t0);

    t0 = Clock::now();
    if (o.embed && c.graph.edge_count() > 0) {
        try {
            if (n <= o.gage_max_nodes) {
                const int side = static_cast<int>(std::ceil(std::sqrt(1.5 * n))) + 1;
                GageResult gr = gage_optimize(c.graph, uj_lattice(side, side), o.gage, mix_seed(seed, 1));
                // pad the lattice so wires can leave the placement box
                const int pad = 4;
                Placement padded = gr.placement;
                padded.lattice = uj_lattice(side + 2 * pad, side + 2 * pad);
                for (auto& s : padded.sites) s = {s.x + pad, s.y + pad};
                WiredEmbedding w = add_wires(c.graph, padded);
                if (w.effective_d_edit == 0) {
                    c.mode = EmbedMode::Gage;
                    c.physical_qubits = static_cast<int>(wired_sites(w).size());
                    c.gage = std::move(w);
                }
            }
            if (c.mode == EmbedMode::None && n <= o.topdown_max_nodes) {
                Embedding e = realize_qubits(optimize_ordering(c.graph, o.ordering, mix_seed(seed, 2)));
                e = compact_placement(e, o.compaction, mix_seed(seed, 3));
                c.mode = EmbedMode::Topdown;
                c.physical_qubits = e.qubit_count();
                c.topdown = std::move(e);
            }
        } catch (const Error& ex) {
            c.error = std::string("embed: ") + ex.what();
        }
    }
    times.embed += seconds_since(t0);

    t0 = Clock::now();
    try {
        MisResult r = solve_logical(c.graph, o, mix_seed(seed, 4), c.solver);
        c.solution = r.witness;
    } catch (const OracleLimit& ex) {
        c.error += (c.error.empty() ? "" : "; ") + std::string("solve: ") + ex.what();
        c.solver = "anneal";
        c.solution = anneal_mis(c.graph, o.anneal, mix_seed(seed, 5)).witness;
    }
    // solve the physical problem too and keep its read-out when it is at least as large
    try {
        Assignment decoded;
        if (c.mode == EmbedMode::Gage) {
            Graph p = wired_physical_graph(*c.gage);
            MisResult r = solve_physical(p, std::vector<double>(p.node_count(), 1.0), o, mix_seed(seed, 6));
            decoded = to_assignment(n, decode_wired_solution(*c.gage, r.witness));
        } else if (c.mode == EmbedMode::Topdown) {
            Graph p = c.topdown->physical_graph();
            MisResult r = solve_physical(p, c.topdown->weights(), o, mix_seed(seed, 6));
            decoded = decode_embedded_solution(*c.topdown, r.witness);
        }
        if (!decoded.empty()) {
            if (!is_feasible(c.graph, decoded)) decoded = greedy_repair(c.graph, decoded);
            c.physical_mis = static_cast<int>(selected_nodes(decoded).size());
            if (c.physical_mis > static_cast<int>(selected_nodes(c.solution).size())) c.solution = decoded;
        }
    } catch (const Error& ex) {
        c.error += (c.error.empty() ? "" : "; ") + std::string("physical solve: ") + ex.what();
    }
    if (!is_feasible(c.graph, c.solution)) c.solution = greedy_repair(c.graph, c.solution);
    c.size = static_cast<int>(selected_nodes(c.solution).size());
    times.solve += seconds_since(t0);
}

}  // namespace

const char* embed_mode_name(EmbedMode m) {
    switch (m) {
        case EmbedMode::None: return "none";
        case EmbedMode::Gage: return "gage";
        case EmbedMode::Topdown: return "topdown";
    }
    return "?";
}

bool CompilationResult::has_errors() const {
    for (const auto& c : components)
        if (!c.error.empty()) return true;
    return false;
}

CompilationResult compile(const Graph& g, const CompileOptions& o) {
    CompilationResult r;
    r.input = graph_stats(g);
    auto t0 = Clock::now();
    r.trace = reduce(g);
    r.xi = reduction_factor(r.trace);
    r.timings["reduce"] = seconds_since(t0);

    auto comps = kernel_components(r.trace);
    r.components.resize(comps.size());
    std::vector<StageTimes> times(comps.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i = next++; i < comps.size(); i = next++) {
            auto& c = r.components[i];
            c.kernel_nodes = comps[i];
            c.graph = r.trace.kernel.induced(comps[i]);
            process_component(c, o, mix_seed(o.seed, i), times[i]);
        }
    };
    const int threads = std::max(1, std::min<int>(o.threads, static_cast<int>(comps.size())));
    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (const auto& t : times) {
        r.timings["check"] += t.check;
        r.timings["embed"] += t.embed;
        r.timings["solve"] += t.solve;
    }

    t0 = Clock::now();
    Assignment kernel(r.trace.kernel.node_count(), 0);
    for (const auto& c : r.components)
        for (std::size_t i = 0; i < c.kernel_nodes.size(); ++i) kernel[c.kernel_nodes[i]] = c.solution[i];
    r.solution = expand_solution(r.trace, kernel);
    if (!is_feasible(g, r.solution)) throw StageFailure("expanded solution is infeasible");
    r.mis_size = static_cast<int>(selected_nodes(r.solution).size());
    r.timings["expand"] = seconds_since(t0);
    return r;
}

json compilation_to_json(const Graph& g, const CompilationResult& r, bool include_embeddings) {
    json j;
    j["input"] = {{"n", r.input.n},
                  {"m", r.input.m},
                  {"avg_degree", r.input.avg_degree},
                  {"max_degree", r.input.max_degree},
                  {"components", r.input.components}};
    j["xi"] = r.xi;
    j["kernel"] = {{"n", r.trace.kernel.node_count()},
                   {"m", r.trace.kernel.edge_count()},
                   {"components", r.components.size()}};
    j["reduction_selections"] = r.trace.steps.size();
    json comps = json::array();
    for (const auto& c : r.components) {
        json cj;
        json nodes = json::array();
        for (int k : c.kernel_nodes) nodes.push_back(g.label(r.trace.kernel_node_map[k]));
        cj["nodes"] = nodes;
        cj["n"] = c.graph.node_count();
        cj["m"] = c.graph.edge_count();
        cj["compatible_candidate"] = c.report.compatible_candidate;
        cj["embedding"] = embed_mode_name(c.mode);
        cj["physical_qubits"] = c.physical_qubits;
        if (c.physical_mis >= 0) cj["physical_mis"] = c.physical_mis;
        cj["solver"] = c.solver;
        cj["mis"] = c.size;
        if (!c.error.empty()) cj["error"] = c.error;
        if (include_embeddings) {
            if (c.gage) cj["gage"] = gage_to_json(c.graph, *c.gage);
            if (c.topdown) cj["topdown"] = embedding_to_json(*c.topdown);
        }
        comps.push_back(cj);
    }
    j["components"] = comps;
    json sel = json::array();
    for (int v : selected_nodes(r.solution)) sel.push_back(g.label(v));
    j["mis"] = sel;
    j["mis_size"] = r.mis_size;
    j["timings_s"] = r.timings;
    return j;
}

// ---------------------------------------------------------------------------
// Analog programs

AhsProfile default_profile() { return {}; }

AhsProfile hardware_profile() {
    AhsProfile p;
    p.name = "hardware";
    p.omega_max_mhz = 2.5;
    p.spacing_um = 4.8;
    return p;
}

AhsProfile profile_by_name(const std::string& name) {
    if (name == "default") return default_profile();
    if (name == "hardware") return hardware_profile();
    throw InvalidArgument("unknown profile '" + name + "'");
}

double blockade_radius_um(const AhsProfile& p) {
    const double omega = 2.0 * M_PI * p.omega_max_mhz;
    return std::pow(p.c6 / omega, 1.0 / 6.0);
}

double blockade_ratio(const AhsProfile& p) { return blockade_radius_um(p) / p.spacing_um; }

void validate_program(const AnalogProgram& p) {
    if (!(p.profile.duration_us > 0)) throw InvalidArgument("program duration must be positive");
    if (!(p.profile.spacing_um > 0)) throw InvalidArgument("lattice spacing must be positive");
    const std::size_t k = p.times_us.size();
    if (k < 2 || p.omega_mhz.size() != k || p.delta_mhz.size() != k || p.phase_rad.size() != k)
        throw InvalidArgument("schedules must share one time grid");
    if (p.times_us.front() != 0.0 || p.times_us.back() != p.profile.duration_us)
        throw InvalidArgument("time grid must span [0, tau]");
    for (std::size_t i = 1; i < k; ++i)
        if (!(p.times_us[i] > p.times_us[i - 1])) throw InvalidArgument("time grid must increase");
    for (double w : p.omega_mhz)
        if (w < 0) throw InvalidArgument("Rabi frequency must be non-negative");
    std::set<std::pair<double, double>> seen;
    for (const auto& a : p.atoms_um)
        if (!seen.insert(a).second) throw InvalidArgument("overlapping atom coordinates");
    if (!p.weights.empty() && p.weights.size() != p.atoms_um.size())
        throw InvalidArgument("weights must match atoms");
    if (p.profile.shots <= 0) throw InvalidArgument("shots must be positive");
}

AnalogProgram make_program(const std::vector<Site>& sites, const AhsProfile& profile, const std::vector<double>& weights) {
    AnalogProgram p;
    p.profile = profile;
    for (Site s : sites) p.atoms_um.emplace_back(s.x * profile.spacing_um, s.y * profile.spacing_um);
    p.weights = weights;
    const double tau = profile.duration_us, edge = profile.ramp_fraction * tau;
    p.times_us = {0.0, edge, tau - edge, tau};
    p.omega_mhz = {0.0, profile.omega_max_mhz, profile.omega_max_mhz, 0.0};
    p.delta_mhz = {profile.delta_min_mhz, profile.delta_min_mhz, profile.delta_max_mhz, profile.delta_max_mhz};
    p.phase_rad = std::vector<double>(4, profile.phase);
    validate_program(p);
    return p;
}

json program_to_json(const AnalogProgram& p) {
    const AhsProfile& f = p.profile;
    json j;
    j["profile"] = {{"name", f.name},
                    {"omega_max_mhz", f.omega_max_mhz},
                    {"delta_min_mhz", f.delta_min_mhz},
                    {"delta_max_mhz", f.delta_max_mhz},
                    {"phase_rad", f.phase},
                    {"duration_us", f.duration_us},
                    {"spacing_um", f.spacing_um},
                    {"ramp_fraction", f.ramp_fraction},
                    {"c6_rad_per_us_um6", f.c6}};
    json atoms = json::array();
    for (auto [x, y] : p.atoms_um) atoms.push_back({x, y});
    j["register"] = {{"sites_um", atoms}, {"weights", p.weights}};
    j["hamiltonian"] = {{"units", "MHz means value / 2pi; times in us"},
                        {"times_us", p.times_us},
                        {"omega_mhz", p.omega_mhz},
                        {"delta_mhz", p.delta_mhz},
                        {"phase_rad", p.phase_rad}};
    j["shots"] = f.shots;
    j["blockade_radius_um"] = blockade_radius_um(f);
    j["blockade_ratio"] = blockade_ratio(f);
    return j;
}

AnalogProgram program_from_json(const json& j) {
    try {
        AnalogProgram p;
        const json& f = j.at("profile");
        p.profile.name = f.at("name").get<std::string>();
        p.profile.omega_max_mhz = f.at("omega_max_mhz").get<double>();
        p.profile.delta_min_mhz = f.at("delta_min_mhz").get<double>();
        p.profile.delta_max_mhz = f.at("delta_max_mhz").get<double>();
        p.profile.phase = f.at("phase_rad").get<double>();
        p.profile.duration_us = f.at("duration_us").get<double>();
        p.profile.spacing_um = f.at("spacing_um").get<double>();
        p.profile.ramp_fraction = f.at("ramp_fraction").get<double>();
        p.profile.c6 = f.at("c6_rad_per_us_um6").get<double>();
        p.profile.shots = j.at("shots").get<int>();
        for (const auto& a : j.at("register").at("sites_um")) p.atoms_um.emplace_back(a.at(0).get<double>(), a.at(1).get<double>());
        p.weights = j.at("register").at("weights").get<std::vector<double>>();
        const json& h = j.at("hamiltonian");
        p.times_us = h.at("times_us").get<std::vector<double>>();
        p.omega_mhz = h.at("omega_mhz").get<std::vector<double>>();
        p.delta_mhz = h.at("delta_mhz").get<std::vector<double>>();
        p.phase_rad = h.at("phase_rad").get<std::vector<double>>();
        validate_program(p);
        return p;
    } catch (const json::exception& e) {
        throw ParseError(std::string("program document: ") + e.what());
    }
}

std::string serialize_program(const AnalogProgram& p) { return program_to_json(p).dump(2) + "\n"; }

}  // namespace ujc
