#include <doctest.h>

#include <set>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "ujc/errors.hpp"
#include "ujc/generators.hpp"
#include "ujc/rng.hpp"
#include "ujc/topdown.hpp"

using namespace ujc;

namespace {

Graph graph_from_mask(int n, std::uint32_t mask) {
    std::vector<Edge> e;
    int bit = 0;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v, ++bit)
            if (mask >> bit & 1) e.emplace_back(u, v);
    return Graph::from_edges(n, e);
}

void require_sound(const Embedding& e) {
    INFO(check_embedding(e));
    REQUIRE(check_embedding(e).empty());
    auto rep = check_correspondence(e, 3, 7);
    INFO(rep.detail);
    REQUIRE(rep.ok);
}

}  // namespace

TEST_CASE("both crossing gadgets reproduce their source tensors") {
    for (bool inter : {false, true}) {
        std::string why;
        CHECK_MESSAGE(verify_gadget(gadget_template(inter), &why), why);
    }
    // dropping a site breaks the non-interacting gadget
    GadgetTemplate broken = gadget_template(false);
    broken.interior.pop_back();
    broken.weights.pop_back();
    CHECK_FALSE(verify_gadget(broken));
}

TEST_CASE("sweep MWIS agrees with subset enumeration") {
    Rng rng(3);
    for (int trial = 0; trial < 60; ++trial) {
        std::set<Site> pick;
        int k = 4 + rng.below_int(14);
        while (static_cast<int>(pick.size()) < k) pick.insert({rng.below_int(6), rng.below_int(5)});
        std::vector<Site> sites(pick.begin(), pick.end());
        Graph g = unit_disk_graph(sites, 2);
        auto r = lattice_mwis(sites, std::vector<double>(sites.size(), 1.0), 2, nullptr, trial);
        CHECK(static_cast<int>(r.weight) == oracle::subset_mis(g));
        CHECK(is_feasible(g, r.x));
        CHECK(static_cast<int>(selected_nodes(r.x).size()) == oracle::subset_mis(g));
    }
}

TEST_CASE("generic layout of two chains") {
    for (std::uint32_t mask : {0u, 1u}) {
        Graph g = graph_from_mask(2, mask);
        auto gen = generic_embedding(g);
        CHECK(gen.schematic.gadget_count() == 1);
        CHECK(gen.formula_qubits == 8 - static_cast<long>(mask) + 10);
        Embedding e = realize_qubits(gen.schematic);
        require_sound(e);
    }
}

TEST_CASE("a single edge becomes one terminal touch") {
    Graph g = Graph::from_edges(2, {{0, 1}});
    auto s = shortened_schematic(g, {0, 1});
    CHECK(s.gadget_count() == 0);
    REQUIRE(s.terminal_touches.size() == 1);
    Embedding e = realize_qubits(s);
    CHECK(e.qubit_count() == 2);
    require_sound(e);
}

TEST_CASE("every labelled graph up to four nodes embeds soundly") {
    for (int n = 1; n <= 4; ++n) {
        const int pairs = n * (n - 1) / 2;
        for (std::uint32_t mask = 0; mask < (1u << pairs); ++mask) {
            Graph g = graph_from_mask(n, mask);
            CAPTURE(n);
            CAPTURE(mask);
            Embedding gen = realize_qubits(generic_embedding(g).schematic);
            require_sound(gen);
            Embedding opt = realize_qubits(optimize_ordering(g, {2, 400, 0.3}, mask));
            require_sound(opt);
        }
    }
}

TEST_CASE("random five-node graphs embed soundly") {
    Rng rng(11);
    for (int trial = 0; trial < 12; ++trial) {
        Graph g = graph_from_mask(5, static_cast<std::uint32_t>(rng.below(1024)));
        CAPTURE(trial);
        require_sound(realize_qubits(generic_embedding(g).schematic));
        require_sound(realize_qubits(optimize_ordering(g, {}, trial)));
    }
}

TEST_CASE("chains are odd and the layout fits its area") {
    Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 3 + rng.below_int(8);
        Graph g = generate_er(n, 0.4, mix_seed(9, trial));
        for (bool generic : {true, false}) {
            auto s = generic ? generic_embedding(g).schematic : optimize_ordering(g, {1, 2000, 0.3}, trial);
            Embedding e = realize_qubits(s);
            CHECK(check_embedding(e).empty());
            for (int len : e.chain_length) CHECK(len % 2 == 1);
            CHECK(e.lattice.width <= 4 * n + 4);
            CHECK(e.lattice.height <= 4 * n + 3);
            for (const auto& q : e.qubits) CHECK(e.lattice.contains(q.site));
            if (generic) {
                long formula = generic_qubit_formula(n, static_cast<long>(g.edge_count()));
                CHECK(std::abs(e.qubit_count() - formula) <= n * n);
            }
        }
    }
}

TEST_CASE("triangle and edgeless graphs") {
    Graph k3 = fixtures::complete(3);
    auto s = optimize_ordering(k3, {}, 1);
    CHECK(s.gadget_count() == 0);
    require_sound(realize_qubits(s));

    Graph empty(4);
    auto se = optimize_ordering(empty, {}, 1);
    CHECK(se.gadget_count() == 0);
    Embedding e = realize_qubits(se);
    CHECK(e.qubit_count() == 4);
    require_sound(e);
}

TEST_CASE("ordering search removes gadgets from a path") {
    Graph g = fixtures::path(8);
    auto s = optimize_ordering(g, {}, 3);
    CHECK(s.gadget_count() == 0);
    auto gen = generic_embedding(g);
    CHECK(gen.schematic.gadget_count() == 28);
}

TEST_CASE("compaction keeps the embedding valid and never grows it") {
    Rng rng(2);
    for (int trial = 0; trial < 6; ++trial) {
        Graph g = graph_from_mask(5, static_cast<std::uint32_t>(rng.below(1024)));
        Embedding e = realize_qubits(optimize_ordering(g, {}, trial));
        CompactionStats st;
        Embedding c = compact_placement(e, {800, 2.0, 0.05}, trial, &st);
        CHECK(c.qubit_count() <= e.qubit_count());
        CHECK(st.final_qubits == c.qubit_count());
        require_sound(c);
    }
}

TEST_CASE("compacting a generic layout shortens its corners") {
    Graph g = fixtures::cycle(6);
    Embedding e = realize_qubits(optimize_ordering(g, {}, 4));
    Embedding c = compact_placement(e, {3000, 2.0, 0.05}, 4);
    CHECK(c.qubit_count() < e.qubit_count());
    CHECK(check_embedding(c).empty());
}

TEST_CASE("decode reads intact chains and repairs conflicts") {
    Graph g = Graph::from_edges(3, {{0, 1}, {1, 2}});
    Embedding e = realize_qubits(generic_embedding(g).schematic);
    Assignment phys(e.qubit_count(), 0);
    // clean ones on every chain: conflicting logical read-out
    for (int c = 0; c < 3; ++c)
        for (auto [q, off] : e.chain_qubits[c]) phys[q] = off % 2 == 0;
    Assignment x = decode_embedded_solution(e, phys);
    CHECK(is_feasible(g, x));
    CHECK(x == Assignment{1, 0, 1});
}

TEST_CASE("embedding json carries every qubit") {
    Graph g = fixtures::cycle(4);
    Embedding e = realize_qubits(optimize_ordering(g, {}, 1));
    auto j = embedding_to_json(e);
    CHECK(j["qubits"].size() == static_cast<std::size_t>(e.qubit_count()));
    CHECK(j["chains"].size() == 4);
}
