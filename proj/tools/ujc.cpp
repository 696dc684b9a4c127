// Command-line front end. Exit codes: 0 ok, 2 invalid input or infeasible,
// 3 stage failure, 4 exact-solver limit.
#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <set>
#include <sstream>

#include "ujc/errors.hpp"
#include "ujc/io.hpp"
#include "ujc/pipeline.hpp"

using namespace ujc;

namespace {

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-")
        std::cout << text;
    else
        write_file(path, text);
}

void emit_json(const std::string& path, const json& j) { emit(path, j.dump(2) + "\n"); }

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

// Atom sites and weights from an embedding, a wired placement, or a bare placement document.
std::pair<std::vector<Site>, std::vector<double>> sites_from_document(const json& j) {
    std::vector<Site> sites;
    std::vector<double> weights;
    try {
        if (j.contains("qubits")) {
            for (const auto& q : j.at("qubits")) {
                sites.push_back({q.at("x").get<int>(), q.at("y").get<int>()});
                weights.push_back(q.value("weight", 1.0));
            }
        } else if (j.contains("nodes")) {
            for (const auto& [k, v] : j.at("nodes").items()) sites.push_back({v.at(0).get<int>(), v.at(1).get<int>()});
            for (const auto& w : j.at("wires"))
                for (const auto& a : w.at("ancillas")) sites.push_back({a.at(0).get<int>(), a.at(1).get<int>()});
        } else {
            sites = placement_from_json(j).sites;
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("layout document: ") + e.what());
    }
    if (!weights.empty() && std::all_of(weights.begin(), weights.end(), [](double w) { return w == 1.0; })) weights.clear();
    return {sites, weights};
}

int run(int argc, char** argv) {
    CLI::App app{"ujc: reduce, embed and solve maximum independent set instances for Rydberg atom arrays"};
    app.require_subcommand(1);

    std::string in, out;
    std::uint64_t seed = 1;

    auto* reduce_cmd = app.add_subcommand("reduce", "Clique reduction; writes the reduction trace");
    reduce_cmd->add_option("--in", in, "Edge list or graph JSON")->required();
    reduce_cmd->add_option("--out", out, "Trace JSON (default stdout)");
    bool shuffle = false;
    reduce_cmd->add_flag("--shuffle", shuffle, "Random tie-break labelling seeded by --seed");
    reduce_cmd->add_option("--seed", seed);

    auto* check_cmd = app.add_subcommand("check", "Necessary UJ compatibility conditions");
    int depth = 2;
    check_cmd->add_option("--in", in)->required();
    check_cmd->add_option("--depth", depth, "1: degree bound, 2: degree and triangles");
    check_cmd->add_option("--out", out);

    auto* embed_cmd = app.add_subcommand("embed", "Embed a (kernel) graph");
    embed_cmd->require_subcommand(1);
    auto* gage_cmd = embed_cmd->add_subcommand("gage", "Random-key placement search plus quantum wires");
    int width = 0, height = 0;
    long evaluations = 10000;
    bool no_wires = false;
    gage_cmd->add_option("--in", in)->required();
    gage_cmd->add_option("--width", width, "Lattice width (default fits the graph)");
    gage_cmd->add_option("--height", height);
    gage_cmd->add_option("--evaluations", evaluations);
    gage_cmd->add_flag("--no-wires", no_wires);
    gage_cmd->add_option("--seed", seed);
    gage_cmd->add_option("--out", out);
    auto* td_cmd = embed_cmd->add_subcommand("topdown", "Chain layout with crossing gadgets");
    std::string mode = "optimized";
    int compact_steps = 4000, order_steps = 20000;
    td_cmd->add_option("--in", in)->required();
    td_cmd->add_option("--mode", mode)->check(CLI::IsMember({"generic", "optimized"}));
    td_cmd->add_option("--seed", seed);
    td_cmd->add_option("--order-steps", order_steps);
    td_cmd->add_option("--compact-steps", compact_steps);
    td_cmd->add_option("--out", out);

    auto* solve_cmd = app.add_subcommand("solve", "Solve MIS directly");
    int threshold = 22;
    solve_cmd->add_option("--in", in)->required();
    solve_cmd->add_option("--oracle-threshold", threshold, "Largest component solved exactly");
    solve_cmd->add_option("--seed", seed);
    solve_cmd->add_option("--out", out);

    auto* compile_cmd = app.add_subcommand("compile", "Full pipeline");
    int threads = 1;
    bool with_embeddings = false;
    compile_cmd->add_option("--in", in)->required();
    compile_cmd->add_option("--seed", seed);
    compile_cmd->add_option("--threads", threads);
    compile_cmd->add_option("--oracle-threshold", threshold);
    compile_cmd->add_flag("--embeddings", with_embeddings, "Include layouts in the output");
    compile_cmd->add_option("--out", out);

    auto* export_cmd = app.add_subcommand("export-ahs", "Analog program document for a layout");
    std::string profile = "default";
    double duration = -1;
    int shots = -1;
    export_cmd->add_option("--in", in, "Embedding, wired placement or placement JSON")->required();
    export_cmd->add_option("--profile", profile)->check(CLI::IsMember({"default", "hardware"}));
    export_cmd->add_option("--duration", duration, "Total time in us");
    export_cmd->add_option("--shots", shots);
    export_cmd->add_option("--out", out);

    auto* sweep_cmd = app.add_subcommand("sweep", "Experiment sweeps to CSV");
    sweep_cmd->require_subcommand(1);
    auto* sred = sweep_cmd->add_subcommand("reduction", "Reduction factor and runtime over a grid");
    std::string family = "UJ", sizes = "1000", densities = "0.8";
    int seeds = 20;
    sred->add_option("--family", family);
    sred->add_option("--n", sizes, "Comma separated sizes");
    sred->add_option("--density", densities, "Comma separated: UJ filling, else average degree");
    sred->add_option("--seeds", seeds);
    sred->add_option("--seed", seed);
    sred->add_option("--threads", threads);
    sred->add_option("--out", out);
    auto* sover = sweep_cmd->add_subcommand("overhead", "Qubit overhead of chain layouts on ER kernels");
    int kernels = 50, max_kernel = 25;
    sover->add_option("--kernels", kernels);
    sover->add_option("--max-n", max_kernel);
    sover->add_option("--seed", seed);
    sover->add_option("--threads", threads);
    sover->add_option("--out", out);

    auto* plot_cmd = app.add_subcommand("plot", "SVG figure from a CSV");
    std::string kind = "box", xcol, ycol, title;
    bool linear = false;
    plot_cmd->add_option("--in", in)->required();
    plot_cmd->add_option("--kind", kind)->check(CLI::IsMember({"box", "violin", "scatter-fit"}));
    plot_cmd->add_option("--x", xcol)->required();
    plot_cmd->add_option("--y", ycol)->required();
    plot_cmd->add_option("--title", title);
    plot_cmd->add_flag("--linear", linear, "Linear axes for scatter-fit");
    plot_cmd->add_option("--out", out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (*reduce_cmd) {
        Graph g = load_graph_file(in);
        ReductionTrace t = shuffle ? reduce(g, seed) : reduce(g);
        json j = trace_to_json(t);
        j["xi"] = reduction_factor(t);
        j["components"] = kernel_components(t).size();
        emit_json(out, j);
        std::cerr << "n=" << g.node_count() << " kernel=" << t.kernel.node_count() << "/" << t.kernel.edge_count()
                  << " xi=" << reduction_factor(t) << "\n";
    } else if (*check_cmd) {
        emit_json(out, report_to_json(check_graph(load_graph_file(in), depth)));
    } else if (*gage_cmd) {
        Graph g = load_graph_file(in);
        if (width <= 0) width = static_cast<int>(std::ceil(std::sqrt(1.5 * g.node_count()))) + 1;
        if (height <= 0) height = width;
        GageConfig cfg;
        cfg.max_evaluations = evaluations;
        GageResult r = gage_optimize(g, uj_lattice(width, height), cfg, seed);
        WiredEmbedding w;
        if (no_wires) {
            w.placement = r.placement;
            w.diff = r.diff;
            w.d_edit = w.effective_d_edit = r.d_edit;
        } else {
            Placement padded = r.placement;
            padded.lattice = uj_lattice(width + 8, height + 8);
            for (auto& s : padded.sites) s = {s.x + 4, s.y + 4};
            w = add_wires(g, padded);
        }
        json j = gage_to_json(g, w);
        j["evaluations"] = r.evaluations;
        emit_json(out, j);
    } else if (*td_cmd) {
        Graph g = load_graph_file(in);
        json j;
        Embedding e;
        if (mode == "generic") {
            auto gen = generic_embedding(g);
            e = realize_qubits(gen.schematic);
            j["formula_qubits"] = gen.formula_qubits;
            j["schematic"] = schematic_to_json(gen.schematic);
        } else {
            ChainSchematic s = optimize_ordering(g, {4, order_steps, 0.3}, seed);
            e = realize_qubits(s);
            j["uncompacted_qubits"] = e.qubit_count();
            e = compact_placement(e, {compact_steps, 2.0, 0.05}, seed);
            j["schematic"] = schematic_to_json(s);
        }
        j["embedding"] = embedding_to_json(e);
        // flat keys so the document doubles as an export-ahs input
        j["qubits"] = j["embedding"]["qubits"];
        emit_json(out, j);
    } else if (*solve_cmd) {
        Graph g = load_graph_file(in);
        Assignment x(g.node_count(), 0);
        bool exact = true;
        for (const auto& comp : component_nodes(g)) {
            Graph sub = g.induced(comp);
            MisResult r;
            if (sub.node_count() <= threshold) {
                r = brute_force_mis(sub);
            } else {
                r = anneal_mis(sub, {}, seed);
                exact = false;
            }
            for (std::size_t i = 0; i < comp.size(); ++i) x[comp[i]] = r.witness[i];
        }
        json j;
        json sel = json::array();
        for (int v : selected_nodes(x)) sel.push_back(g.label(v));
        j["mis"] = sel;
        j["size"] = sel.size();
        j["exact"] = exact;
        emit_json(out, j);
    } else if (*compile_cmd) {
        Graph g = load_graph_file(in);
        CompileOptions o;
        o.seed = seed;
        o.threads = threads;
        o.oracle_threshold = threshold;
        CompilationResult r = compile(g, o);
        emit_json(out, compilation_to_json(g, r, with_embeddings));
        if (r.has_errors()) {
            for (const auto& c : r.components)
                if (!c.error.empty()) std::cerr << "component error: " << c.error << "\n";
            return 3;
        }
    } else if (*export_cmd) {
        json doc = json::parse(read_file(in), nullptr, false);
        if (doc.is_discarded()) throw ParseError("layout document is not JSON");
        auto [sites, weights] = sites_from_document(doc);
        AhsProfile p = profile_by_name(profile);
        if (duration >= 0) p.duration_us = duration;
        if (shots > 0) p.shots = shots;
        emit(out, serialize_program(make_program(sites, p, weights)));
    } else if (*sred) {
        std::vector<SweepCell> cells;
        Family f = parse_family(family);
        for (const auto& n : split_list(sizes))
            for (const auto& d : split_list(densities)) cells.push_back({f, std::stoi(n), std::stod(d)});
        auto recs = sweep_reduction(cells, seeds, seed, threads);
        emit(out, reduction_csv(recs));
        std::vector<double> ns, ts;
        for (const auto& r : recs)
            if (r.runtime_s > 0) ns.push_back(r.n), ts.push_back(r.runtime_s);
        for (const auto& s : summarize(recs))
            std::cerr << family_name(s.cell.family) << " n=" << s.cell.n << " density=" << s.cell.density
                      << " median xi=" << s.xi.median << " median runtime=" << s.runtime_s.median << "s\n";
        if (std::set<double>(ns.begin(), ns.end()).size() > 1)
            std::cerr << "runtime exponent " << fit_power_law(ns, ts).exponent << "\n";
    } else if (*sover) {
        OverheadOptions o;
        o.kernels = kernels;
        o.max_kernel_n = max_kernel;
        o.threads = threads;
        auto recs = sweep_overhead(o, seed);
        emit(out, overhead_csv(recs));
        std::vector<int> n;
        std::vector<double> gen, opt;
        for (const auto& r : recs) {
            n.push_back(r.n);
            gen.push_back(static_cast<double>(r.generic_formula));
            opt.push_back(r.optimized);
        }
        std::cerr << "c_generic=" << fit_quadratic_prefactor(n, gen) << " c_optimized=" << fit_quadratic_prefactor(n, opt)
                  << "\n";
    } else if (*plot_cmd) {
        Table t = parse_csv(read_file(in));
        emit(out, render_plot(t, {parse_plot_kind(kind), xcol, ycol, title.empty() ? ycol + " by " + xcol : title, !linear}));
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const OracleLimit& e) {
        std::cerr << "oracle limit: " << e.what() << "\n";
        return 4;
    } catch (const StageFailure& e) {
        std::cerr << "stage failure: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: bad number: " << e.what() << "\n";
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
