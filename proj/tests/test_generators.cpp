#include "blockfw/generators.hpp"

#include "blockfw/ipm.hpp"

#include "doctest.h"

#include <cmath>

using namespace blockfw;

namespace {

Graph cycle(int n) {
    Graph g;
    g.n_nodes = n;
    for (int i = 0; i < n; ++i) g.edges.emplace_back(std::min(i, (i + 1) % n),
                                                     std::max(i, (i + 1) % n));
    std::sort(g.edges.begin(), g.edges.end());
    return g;
}

Graph complete(int n) {
    Graph g;
    g.n_nodes = n;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) g.edges.emplace_back(i, j);
    return g;
}

Graph empty_graph(int n) {
    Graph g;
    g.n_nodes = n;
    return g;
}

} // namespace

TEST_CASE("pencil generator shape and determinism") {
    const SdpProblem p = gen_pencil_sdp(10, 42);
    CHECK(p.n == 10);
    CHECK(p.m == 2);
    CHECK(p.b(0) == 1.0);
    CHECK((p.C.dense() - Eigen::MatrixXd::Identity(10, 10)).norm() == 0.0);
    CHECK(p.objective_flipped);

    const SdpProblem q = gen_pencil_sdp(10, 42);
    CHECK((p.A[0].dense() - q.A[0].dense()).norm() == 0.0);
    CHECK((p.A[1].dense() - q.A[1].dense()).norm() == 0.0);

    const SdpProblem r = gen_pencil_sdp(10, 43);
    CHECK((p.A[0].dense() - r.A[0].dense()).norm() > 0.0);
}

TEST_CASE("degenerate pencil data is reported, not solved") {
    // A = B = 0: the primal is infeasible / the pencil objective unbounded.
    SdpProblem p;
    p.n = 4;
    p.m = 2;
    p.C = SymMatrix::identity(4);
    p.A = {SymMatrix(4), SymMatrix(4)};
    p.b = Eigen::VectorXd::Ones(2);
    const SolveReport rep = solve_full(p);
    CHECK((rep.status == SolveStatus::Infeasible || rep.status == SolveStatus::Unbounded));
}

TEST_CASE("feasibility of the pencil origin") {
    // y = (0,0) leaves Z = I psd, so the outer iteration always starts.
    const SdpProblem p = gen_pencil_sdp(8, 9);
    RunConfig cfg{Partition::uniform(8, 2), 1, 1e-9, {}};
    const OuterRun run = run_outer(p, cfg);
    CHECK(run.best_lower >= -1e-9);
}

TEST_CASE("erdos-renyi limits") {
    CHECK(gen_erdos_renyi(12, 0.0, 1).edges.empty());
    CHECK(gen_erdos_renyi(12, 1.0, 1).edges.size() == 66);

    // binomial 6-sigma band for n=30, p=0.2: mean 87, sigma ~ 8.34
    const Graph g = gen_erdos_renyi(30, 0.2, 7);
    CHECK(g.edges.size() >= 40);
    CHECK(g.edges.size() <= 140);

    const Graph h = gen_erdos_renyi(30, 0.2, 7);
    CHECK(g.edges == h.edges);
}

TEST_CASE("theta of the complete graph is one") {
    const SolveReport rep = solve_full(lovasz_theta_sdp(complete(4)));
    REQUIRE(rep.status == SolveStatus::Optimal);
    CHECK(-rep.primal_value == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("theta of the empty graph is the node count") {
    const SolveReport rep = solve_full(lovasz_theta_sdp(empty_graph(6)));
    REQUIRE(rep.status == SolveStatus::Optimal);
    CHECK(-rep.primal_value == doctest::Approx(6.0).epsilon(1e-6));
}

TEST_CASE("theta of the 5-cycle is sqrt(5)") {
    const SolveReport rep = solve_full(lovasz_theta_sdp(cycle(5)));
    REQUIRE(rep.status == SolveStatus::Optimal);
    CHECK(-rep.primal_value == doctest::Approx(std::sqrt(5.0)).epsilon(1e-6));
}

TEST_CASE("stable set brute force") {
    CHECK(stable_set_brute(complete(4)) == 1);
    CHECK(stable_set_brute(empty_graph(6)) == 6);
    CHECK(stable_set_brute(cycle(5)) == 2);
    Graph big;
    big.n_nodes = 31;
    CHECK_THROWS_AS(stable_set_brute(big), TooLarge);
}

TEST_CASE("theta upper-bounds the stability number") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        const Graph g = gen_erdos_renyi(12, 0.3, seed);
        const int alpha = stable_set_brute(g);
        const SolveReport rep = solve_full(lovasz_theta_sdp(g));
        REQUIRE(rep.status == SolveStatus::Optimal);
        CHECK(static_cast<double>(alpha) <= -rep.primal_value + 1e-6);
    }
}

TEST_CASE("bqo relaxation exact cases") {
    const SolveReport id3 = solve_full(bqo_relax_sdp(SymMatrix::identity(3)));
    REQUIRE(id3.status == SolveStatus::Optimal);
    CHECK(id3.primal_value == doctest::Approx(3.0).epsilon(1e-7));
    CHECK(bqo_brute(SymMatrix::identity(3)) == doctest::Approx(3.0));

    SymMatrix offdiag(2);
    offdiag.set(0, 1, 1.0);
    CHECK(bqo_brute(offdiag) == doctest::Approx(-2.0));
    const SolveReport rep = solve_full(bqo_relax_sdp(offdiag));
    REQUIRE(rep.status == SolveStatus::Optimal);
    CHECK(rep.primal_value == doctest::Approx(-2.0).epsilon(1e-6));
}

TEST_CASE("bqo relaxation lower-bounds the brute optimum") {
    const SymMatrix q = gen_bqo_cost(12, 4);
    const double exact = bqo_brute(q);
    const SolveReport rep = solve_full(bqo_relax_sdp(q));
    REQUIRE(rep.status == SolveStatus::Optimal);
    CHECK(rep.primal_value <= exact + 1e-6);

    SymMatrix large(21);
    CHECK_THROWS_AS(bqo_brute(large), TooLarge);
}

TEST_CASE("bqo brute agrees with direct enumeration on small n") {
    const SymMatrix q = gen_bqo_cost(8, 11);
    double direct = 1e300;
    for (int mask = 0; mask < 256; ++mask) {
        Eigen::VectorXd x(8);
        for (int i = 0; i < 8; ++i) x(i) = (mask >> i & 1) ? 1.0 : -1.0;
        direct = std::min(direct, x.dot(q.dense() * x));
    }
    CHECK(bqo_brute(q) == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("success rate experiment basics") {
    std::vector<Graph> graphs;
    for (std::uint64_t s : {21ull, 22ull, 23ull, 24ull}) graphs.push_back(gen_erdos_renyi(10, 0.4, s));
    RunConfig cfg{Partition::uniform(10, 2), 3, 1e-9, {}};

    // threshold zero accepts any bound immediately
    const SuccessRates rz = success_rate_experiment(graphs, cfg, 0.0, {1});
    CHECK(rz.at(1) == doctest::Approx(1.0));

    // complete graphs succeed at once
    const SuccessRates rc =
        success_rate_experiment({complete(8)}, RunConfig{Partition::uniform(8, 2), 1, 1e-9, {}},
                                0.99, {1});
    CHECK(rc.at(1) == doctest::Approx(1.0));

    // rates never decrease with t
    const SuccessRates rr = success_rate_experiment(graphs, cfg, 0.99, {1, 2, 3});
    CHECK(rr.at(1) <= rr.at(2) + 1e-12);
    CHECK(rr.at(2) <= rr.at(3) + 1e-12);
}
