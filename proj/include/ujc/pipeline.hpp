#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ujc/checker.hpp"
#include "ujc/gage.hpp"
#include "ujc/generators.hpp"
#include "ujc/reducer.hpp"
#include "ujc/solvers.hpp"
#include "ujc/topdown.hpp"

namespace ujc {

// ---------------------------------------------------------------------------
// End-to-end compilation

enum class EmbedMode { None, Gage, Topdown };

const char* embed_mode_name(EmbedMode m);

struct CompileOptions {
    int check_depth = 2;
    int oracle_threshold = 22;     // components up to this size are solved exactly
    int gage_max_nodes = 30;       // larger components skip the placement search
    int topdown_max_nodes = 40;    // and the chain layout beyond this
    bool embed = true;
    GageConfig gage;
    OrderingConfig ordering{2, 5000, 0.3};
    CompactionConfig compaction{1500, 2.0, 0.05};
    AnnealSchedule anneal;
    std::uint64_t seed = 1;
    int threads = 1;
};

struct ComponentResult {
    std::vector<int> kernel_nodes;  // kernel ids, ascending
    Graph graph;                    // induced on kernel_nodes
    CompatibilityReport report;
    EmbedMode mode = EmbedMode::None;
    std::optional<WiredEmbedding> gage;
    std::optional<Embedding> topdown;
    int physical_qubits = 0;
    int physical_mis = -1;  // decoded size of the physical solve, -1 when not run
    std::string solver;     // "oracle" or "anneal"
    Assignment solution;    // on graph
    int size = 0;
    std::string error;      // stage error, empty when none
};

struct CompilationResult {
    GraphStats input;
    ReductionTrace trace;
    double xi = 0.0;
    std::vector<ComponentResult> components;
    Assignment solution;  // on the input graph
    int mis_size = 0;
    std::map<std::string, double> timings;  // seconds per stage

    bool has_errors() const;
};

// reduce -> check -> embed (placement search with wires, else chain layout) -> solve -> expand.
// Component errors are recorded and the component falls back to a direct logical solve.
CompilationResult compile(const Graph& g, const CompileOptions& options = {});

json compilation_to_json(const Graph& g, const CompilationResult& r, bool include_embeddings = false);

// ---------------------------------------------------------------------------
// Analog program export

struct AhsProfile {
    std::string name = "default";
    double omega_max_mhz = 3.5;   // Omega_max / 2 pi
    double delta_min_mhz = -9.0;  // Delta_min / 2 pi
    double delta_max_mhz = 7.0;   // Delta_max / 2 pi
    double phase = 0.0;           // rad
    double duration_us = 4.0;
    double spacing_um = 4.5;
    double ramp_fraction = 0.1;   // Omega rise/fall and detuning sweep edges, as a share of tau
    int shots = 1000;
    double c6 = 5.42e6;           // rad/us um^6, 87Rb 70S
};

AhsProfile default_profile();
AhsProfile hardware_profile();  // Omega_max / 2 pi = 2.5 MHz, a = 4.8 um
AhsProfile profile_by_name(const std::string& name);

// R_b = (C6 / Omega_max)^(1/6) with Omega_max in rad/us; result in um.
double blockade_radius_um(const AhsProfile& p);
double blockade_ratio(const AhsProfile& p);

struct AnalogProgram {
    AhsProfile profile;
    std::vector<std::pair<double, double>> atoms_um;
    std::vector<double> times_us;  // shared grid
    std::vector<double> omega_mhz;
    std::vector<double> delta_mhz;
    std::vector<double> phase_rad;
    std::vector<double> weights;   // per atom, informational for weighted layouts
};

// Throws InvalidArgument on a non-positive duration or coinciding atoms.
AnalogProgram make_program(const std::vector<Site>& sites, const AhsProfile& profile,
                           const std::vector<double>& weights = {});
void validate_program(const AnalogProgram& p);
json program_to_json(const AnalogProgram& p);
AnalogProgram program_from_json(const json& j);
std::string serialize_program(const AnalogProgram& p);

// ---------------------------------------------------------------------------
// Sweeps

struct ReductionRecord {
    Family family = Family::UJ;
    int n = 0;
    double density = 0.0;  // UJ filling, else average degree
    std::uint64_t seed = 0;
    double xi = 0.0;
    double runtime_s = 0.0;
    int kernel_n = 0;
    std::size_t kernel_m = 0;
    int components = 0;
};

struct SweepCell {
    Family family = Family::UJ;
    int n = 0;
    double density = 0.0;
};

// density: UJ filling fraction; RG, ER, BA: target average degree.
Graph sample_graph(Family family, int n, double density, std::uint64_t seed);

// Throws InvalidArgument on an empty grid.
std::vector<ReductionRecord> sweep_reduction(const std::vector<SweepCell>& cells, int seeds, std::uint64_t seed,
                                             int threads = 1);

struct Quantiles {
    double min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
};
Quantiles quantiles(std::vector<double> v);

struct CellSummary {
    SweepCell cell;
    int count = 0;
    Quantiles xi;
    Quantiles runtime_s;
};
std::vector<CellSummary> summarize(const std::vector<ReductionRecord>& records);

// Least-squares slope and intercept of log(y) against log(x).
struct PowerFit {
    double exponent = 0.0;
    double prefactor = 0.0;
    double exponent_stderr = 0.0;
};
PowerFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y);

std::string reduction_csv(const std::vector<ReductionRecord>& records);
std::vector<ReductionRecord> parse_reduction_csv(const std::string& text);

struct OverheadRecord {
    std::uint64_t seed = 0;
    int source_n = 0;
    int n = 0;
    std::size_t m = 0;
    long generic_formula = 0;
    int generic_realized = 0;
    int optimized = 0;          // after compaction
    int optimized_uncompacted = 0;
    int gadgets = 0;
};

struct OverheadOptions {
    int kernels = 50;
    int max_kernel_n = 25;
    int min_kernel_n = 4;
    double edges_per_node = 1.7;
    OrderingConfig ordering{4, 20000, 0.3};
    CompactionConfig compaction;
    int threads = 1;
    long max_attempts = 100000;
};

// Largest kernel components of reduced ER graphs, embedded both ways.
std::vector<OverheadRecord> sweep_overhead(const OverheadOptions& options, std::uint64_t seed);

// N = c n^2 by least squares: c = sum N n^2 / sum n^4. Throws InvalidArgument when empty.
double fit_quadratic_prefactor(const std::vector<int>& n, const std::vector<double>& count);

std::string overhead_csv(const std::vector<OverheadRecord>& records);

// ---------------------------------------------------------------------------
// Plots

enum class PlotKind { Box, Violin, ScatterFit };
PlotKind parse_plot_kind(const std::string& s);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    int column(const std::string& name) const;  // throws InvalidArgument when absent
};

// Comma separated with a header row. Throws ParseError on ragged rows or an empty document.
Table parse_csv(const std::string& text);

struct PlotSpec {
    PlotKind kind = PlotKind::Box;
    std::string x;  // grouping column for box/violin
    std::string y;
    std::string title;
    bool log_axes = true;  // scatter-fit only
};

// Deterministic SVG. Throws InvalidArgument when there is nothing to draw.
std::string render_plot(const Table& t, const PlotSpec& spec);

}  // namespace ujc
