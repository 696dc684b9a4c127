#include <doctest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "ujc/errors.hpp"
#include "ujc/generators.hpp"
#include "ujc/rng.hpp"
#include "ujc/solvers.hpp"

using namespace ujc;

TEST_CASE("exact MIS on small fixtures") {
    MisResult k3 = brute_force_mis(fixtures::complete(3), true);
    CHECK(k3.size == 1);
    CHECK(k3.all_optima.size() == 3);
    CHECK(k3.exact);

    CHECK(brute_force_mis(fixtures::walkthrough13()).size == 7);
    CHECK(brute_force_mis(Graph(4)).size == 4);
    CHECK(brute_force_mis(Graph(0)).size == 0);
}

TEST_CASE("exact MIS agrees with subset enumeration") {
    Rng rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        int n = 1 + rng.below_int(16);
        Graph g = generate_er(n, 0.05 + 0.6 * rng.uniform(), rng.next());
        MisResult r = brute_force_mis(g, true);
        CHECK(r.size == oracle::subset_mis(g));
        CHECK(is_feasible(g, r.witness));
        CHECK(r.all_optima.size() == oracle::subset_optima(g).size());
        for (const auto& x : r.all_optima) {
            CHECK(is_feasible(g, x));
            CHECK(static_cast<int>(selected_nodes(x).size()) == r.size);
        }
    }
}

TEST_CASE("exact MIS on larger components") {
    for (int seed = 0; seed < 5; ++seed) {
        Graph g = generate_uj_n(uj_lattice(12, 12), 100, seed).first;
        MisResult r = brute_force_mis(g);
        CHECK(is_feasible(g, r.witness));
        AnnealSchedule s;
        s.steps = 2000;
        CHECK(anneal_mis(g, s, seed).size <= r.size);
    }
}

TEST_CASE("oracle limit is explicit") {
    OracleLimits tiny;
    tiny.max_branches = 3;
    CHECK_THROWS_AS(brute_force_mis(generate_er(40, 0.2, 1), false, tiny), OracleLimit);
    OracleLimits small_comp;
    small_comp.max_component = 10;
    CHECK_THROWS_AS(brute_force_mis(fixtures::path(11), false, small_comp), OracleLimit);
}

TEST_CASE("independent set counts") {
    CHECK(count_independent_sets(fixtures::complete(3), 1) == 3);
    CHECK(count_independent_sets(fixtures::path(3), 2) == 1);
    CHECK(count_independent_sets(generate_er(9, 0.3, 2), 0) == 1);
    Rng rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        int n = rng.below_int(16) + 1;
        Graph g = generate_er(n, rng.uniform() * 0.7, rng.next());
        auto p = independence_polynomial(g);
        CHECK(p == oracle::subset_counts(g));
    }
}

TEST_CASE("hardness parameter") {
    HardnessRecord one = hardness_parameter(Graph(1));
    CHECK(one.mis == 1);
    CHECK(one.d_mis == 1);
    CHECK(one.d_mis_minus_1 == 1);
    CHECK(one.hardness == doctest::Approx(1.0));

    HardnessRecord p3 = hardness_parameter(fixtures::path(3));
    CHECK(p3.mis == 2);
    CHECK(p3.d_mis == 1);
    CHECK(p3.d_mis_minus_1 == 3);
    CHECK(p3.hardness == doctest::Approx(1.5));

    HardnessRecord k3 = hardness_parameter(fixtures::complete(3));
    CHECK(k3.hardness == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("cost function") {
    Graph g = fixtures::path(4);
    CHECK(cost(g, {0, 0, 0, 0}) == 0.0);
    CHECK(cost(g, {1, 0, 1, 0}) == -2.0);
    CHECK(cost(g, {1, 1, 0, 0}, 2.0) == 0.0);
    CHECK_THROWS_AS(cost(g, {1, 0}), InvalidArgument);

    // For U > 1 the minimisers are exactly the maximum independent sets.
    Rng rng(17);
    for (int trial = 0; trial < 60; ++trial) {
        int n = 1 + rng.below_int(12);
        Graph h = generate_er(n, rng.uniform() * 0.6, rng.next());
        double best = 1e9;
        for (std::uint32_t m = 0; m < (1u << n); ++m) {
            Assignment x(n);
            for (int i = 0; i < n; ++i) x[i] = m >> i & 1u;
            best = std::min(best, cost(h, x, 1.5));
        }
        CHECK(best == -static_cast<double>(oracle::subset_mis(h)));
        for (std::uint32_t m = 0; m < (1u << n); ++m) {
            Assignment x(n);
            for (int i = 0; i < n; ++i) x[i] = m >> i & 1u;
            if (cost(h, x, 1.5) == best) CHECK(is_feasible(h, x));
        }
    }
}

TEST_CASE("annealing") {
    AnnealSchedule s;
    s.steps = 300;
    CHECK(anneal_mis(Graph(7), s, 1).size == 7);
    CHECK(anneal_mis(fixtures::complete(9), s, 1).size == 1);
    Rng rng(23);
    for (int trial = 0; trial < 60; ++trial) {
        int n = 2 + rng.below_int(19);
        Graph g = generate_er(n, 0.1 + 0.4 * rng.uniform(), rng.next());
        MisResult r = anneal_mis(g, s, trial);
        CHECK(is_feasible(g, r.witness));
        CHECK(!r.exact);
        CHECK(r.size == brute_force_mis(g).size);
    }
    Graph g = generate_er(30, 0.2, 5);
    CHECK(anneal_mis(g, s, 9).witness == anneal_mis(g, s, 9).witness);
    AnnealSchedule threaded = s;
    threaded.threads = 4;
    CHECK(anneal_mis(g, threaded, 9).witness == anneal_mis(g, s, 9).witness);
    AnnealSchedule bad = s;
    bad.penalty = 1.0;
    CHECK_THROWS_AS(anneal_mis(g, bad, 1), InvalidArgument);
}

TEST_CASE("swap search") {
    Graph g = fixtures::walkthrough13();
    Assignment mis = to_assignment(13, {0, 1, 3, 7, 8, 10, 12});
    auto alts = local_search_swaps(g, mis);
    bool found = false;
    for (const auto& x : alts) {
        CHECK(is_feasible(g, x));
        CHECK(selected_nodes(x).size() == 7);
        if (fixtures::one_based(selected_nodes(x)) == std::vector<int>{1, 2, 5, 8, 9, 11, 13}) found = true;
    }
    CHECK(found);

    CHECK(local_search_swaps(Graph(3), {1, 1, 1}).empty());
    CHECK_THROWS_AS(local_search_swaps(fixtures::path(2), {1, 1}), Infeasible);

    // Three disjoint swap candidates give 2^3 - 1 combinations.
    Graph pairs = Graph::from_edges(6, {{0, 1}, {2, 3}, {4, 5}});
    CHECK(local_search_swaps(pairs, {1, 0, 1, 0, 1, 0}).size() == 7);
    SwapOptions one;
    one.depth = 1;
    CHECK(local_search_swaps(pairs, {1, 0, 1, 0, 1, 0}, one).size() == 3);

    // Candidates proposed on a relaxed graph, feasibility judged on the full one.
    Graph full = Graph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
    Graph relaxed = Graph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}});
    SwapOptions opt;
    opt.candidate_graph = &relaxed;
    auto fixed = local_search_swaps(full, {1, 0, 0, 1}, opt);
    REQUIRE(!fixed.empty());
    for (const auto& x : fixed) CHECK(is_feasible(full, x));
}
