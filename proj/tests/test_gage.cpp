#include <doctest.h>

#include "fixtures.hpp"
#include "ujc/errors.hpp"
#include "ujc/gage.hpp"
#include "ujc/generators.hpp"
#include "ujc/rng.hpp"
#include "ujc/solvers.hpp"

using namespace ujc;

TEST_CASE("decoding the worked random-key examples") {
    Graph target = fixtures::rk5();
    LatticeConfig l = uj_lattice(3, 3);
    CHECK(argsort_keys(fixtures::kChiSpurious) == std::vector<int>{3, 7, 4, 2, 1, 5, 8, 6, 0});
    DecodeResult a = decode(fixtures::kChiSpurious, target, l);
    CHECK(a.d_edit == 1);
    EdgeDiff da = edge_diff(target, a.physical);
    CHECK(da.missing.empty());
    REQUIRE(da.spurious.size() == 1);
    CHECK(da.spurious[0] == Edge{2, 4});
    // Both optima of the approximate embedding are optima of the target.
    auto phys = brute_force_mis(a.physical, true);
    CHECK(phys.size == brute_force_mis(target).size);

    DecodeResult b = decode(fixtures::kChiPerfect, target, l);
    CHECK(b.d_edit == 0);
    CHECK(b.physical.edge_count() == 6);

    DecodeResult c = decode({0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8}, Graph(3), l);
    CHECK(c.placement.sites == std::vector<Site>{{0, 0}, {1, 0}, {2, 0}});

    CHECK_THROWS_AS(decode({0.1, 0.2}, target, l), InvalidArgument);
    CHECK_THROWS_AS(decode(std::vector<double>(9, 1.0), target, l), InvalidArgument);
}

TEST_CASE("decoder injectivity with tied keys") {
    Rng rng(1);
    LatticeConfig l = uj_lattice(4, 4);
    for (int t = 0; t < 200; ++t) {
        std::vector<double> keys(16);
        for (double& k : keys) k = static_cast<double>(rng.below_int(4)) / 4.0;
        DecodeResult r = decode(keys, Graph(10), l);
        CHECK_NOTHROW(r.placement.validate());
        CHECK(r.placement.node_count() == 10);
    }
}

TEST_CASE("edit distance") {
    Graph k3 = fixtures::complete(3);
    CHECK(edit_distance(k3, k3) == 0);
    CHECK(edit_distance(k3, Graph(3)) == 3);
    CHECK_THROWS_AS(edit_distance(k3, Graph(4)), InvalidArgument);
}

TEST_CASE("optimiser") {
    Graph target = fixtures::rk5();
    LatticeConfig l = uj_lattice(3, 3);
    int solved = 0;
    for (int seed = 0; seed < 100; ++seed) {
        GageResult r = gage_optimize(target, l, {}, seed);
        CHECK(r.evaluations <= 10000);
        if (r.d_edit == 0) ++solved;
    }
    CHECK(solved >= 95);
    CHECK(gage_optimize(Graph(1), uj_lattice(4, 4), {}, 3).d_edit == 0);
    GageResult a = gage_optimize(target, uj_lattice(4, 4), {}, 77);
    GageResult b = gage_optimize(target, uj_lattice(4, 4), {}, 77);
    CHECK(a.placement.sites == b.placement.sites);
}

TEST_CASE("optimiser never beats the exhaustive minimum") {
    Rng rng(5);
    LatticeConfig l = uj_lattice(3, 3);
    for (int t = 0; t < 40; ++t) {
        int n = 2 + rng.below_int(5);
        Graph g = generate_er(n, rng.uniform(), rng.next());
        GageResult ex = gage_exhaustive(g, l);
        GageConfig cfg;
        cfg.max_evaluations = 3000;
        GageResult opt = gage_optimize(g, l, cfg, t);
        CHECK(opt.d_edit >= ex.d_edit);
    }
}

TEST_CASE("openings") {
    Placement one{uj_lattice(5, 5), {{2, 2}}};
    CHECK(find_qw_openings(one)[0].size() == 8);
    auto [g, full] = generate_uj(uj_lattice(4, 4, 1.0), 1);
    for (const auto& o : find_qw_openings(full)) CHECK(o.empty());
}

TEST_CASE("wires") {
    Placement p{uj_lattice(9, 5), {{0, 2}, {8, 2}}};
    QuantumWire w = route_quantum_wire(p, 0, 1);
    CHECK(w.ancillas.size() % 2 == 0);
    CHECK(w.ancillas.size() == 8);  // seven sites fit in a straight line; parity forces a detour
    Placement adj{uj_lattice(3, 3), {{0, 0}, {1, 1}}};
    CHECK_THROWS_AS(route_quantum_wire(adj, 0, 1), InvalidArgument);
    // A wall of atoms seals the right half.
    Placement sealed{uj_lattice(7, 3), {{0, 1}, {6, 1}, {3, 0}, {3, 1}, {3, 2}}};
    CHECK_THROWS_AS(route_quantum_wire(sealed, 0, 1), StageFailure);
}

TEST_CASE("wire semantics by brute force") {
    Rng rng(31);
    int checked = 0;
    for (int t = 0; t < 400 && checked < 60; ++t) {
        int n = 2 + rng.below_int(4);
        auto [g, p] = generate_uj_n(uj_lattice(6, 5), n, rng.next());
        int u = rng.below_int(n), v = rng.below_int(n);
        if (u == v || g.has_edge(u, v)) continue;
        WiredEmbedding e;
        e.placement = p;
        try {
            e.wires.push_back(route_quantum_wire(p, u, v));
        } catch (const StageFailure&) {
            continue;
        }
        if (wired_sites(e).size() > 18) continue;
        ++checked;
        auto es = g.edges();
        es.emplace_back(u, v);
        Graph aug = Graph::from_edges(n, es);
        Graph phys = wired_physical_graph(e);
        int k = static_cast<int>(e.wires[0].ancillas.size()) / 2;
        MisResult all = brute_force_mis(phys, true);
        CHECK(all.size == brute_force_mis(aug).size + k);
        for (const auto& x : all.all_optima) {
            auto d = decode_wired_solution(e, x);
            CHECK(is_independent(aug, d));
            CHECK(static_cast<int>(d.size()) == brute_force_mis(aug).size);
        }
    }
    CHECK(checked >= 30);
}

TEST_CASE("greedy wiring") {
    Graph target = Graph::from_edges(3, {{0, 1}, {1, 2}, {0, 2}});
    Placement p{uj_lattice(10, 5), {{1, 2}, {2, 2}, {8, 2}}};
    WiredEmbedding e = add_wires(target, p);
    CHECK(e.d_edit == 2);
    CHECK(e.wires.size() + e.unrouted.size() == 2);
    CHECK(e.effective_d_edit == e.d_edit - static_cast<int>(e.wires.size()));
    json j = gage_to_json(target, e);
    CHECK(j["d_edit"] == 2);
}
