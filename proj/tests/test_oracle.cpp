// SPDX-License-Identifier: MIT
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "sdot/entropic.hpp"
#include "sdot/oracle.hpp"
#include "sdot/solver.hpp"

using namespace sdot;

namespace {
const QuadratureSpec kSpec;
}

TEST_CASE("uniform grid masses are equal") {
    DiscreteProblem dp =
        discretize(Density::uniform(-1.0, 1.0), 4, atoms_1d({-1.0, 1.0}, {0.5, 0.5}), 8.0, kSpec);
    REQUIRE(dp.mu.size() == 4);
    for (double m : dp.mu) CHECK(m == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(dp.grid[0] == doctest::Approx(-0.75).epsilon(1e-14));
    CHECK(dp.grid[3] == doctest::Approx(0.75).epsilon(1e-14));
}

TEST_CASE("gaussian two-cell split is half and half") {
    DiscreteProblem dp =
        discretize(Density::gaussian(0.0, 1.0), 2, atoms_1d({-1.0, 1.0}, {0.5, 0.5}), 8.0, kSpec);
    CHECK(dp.mu[0] == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(dp.mu[1] == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("cost entries are squared distances") {
    DiscreteProblem dp =
        discretize(Density::uniform(-1.0, 1.0), 4, atoms_1d({-1.0, 1.0}, {0.5, 0.5}), 8.0, kSpec);
    CHECK(dp.cost_entry(0, 0) == doctest::Approx(0.0625).epsilon(1e-14));
    CHECK(dp.cost_entry(0, 1) == doctest::Approx(3.0625).epsilon(1e-14));
}

TEST_CASE("dense sinkhorn trivial cases") {
    // N = 1, n = 1: everything at one point
    DiscreteProblem dp;
    dp.grid = {0.3};
    dp.mu = {1.0};
    dp.atoms = Atoms{{{0.7, 0.0}}, {1.0}};
    dp.eta = 8.0;
    OracleResult r = dense_sinkhorn(dp, 1e-12);
    CHECK(r.cost == doctest::Approx(0.16).epsilon(1e-12));
    CHECK(std::fabs(r.kl_rho) <= 1e-10);
    CHECK(r.g[0] == doctest::Approx(0.0));
}

TEST_CASE("symmetric discretization gives g = 0") {
    DiscreteProblem dp = discretize(Density::uniform(-1.0, 1.0), 100,
                                    atoms_1d({-1.0, 1.0}, {0.5, 0.5}), 8.0, kSpec);
    OracleResult r = dense_sinkhorn(dp, 1e-12);
    CHECK(std::fabs(r.g[0]) <= 1e-11);
    CHECK(std::fabs(r.g[1]) <= 1e-11);
}

TEST_CASE("refinement convergence: cost gaps shrink as N doubles") {
    // gaussian density: the midpoint-cell masses carry a genuine O(N^-2) error
    // (the uniform case is exact by symmetry and only shows roundoff)
    Problem pb{Density::gaussian(0.0, 1.0), atoms_1d({-1.0, 1.0}, {0.3, 0.7})};
    double eta = 8.0;
    std::vector<double> costs;
    for (int N : {250, 500, 1000, 2000}) {
        DiscreteProblem dp = discretize(pb.density, N, pb.atoms, eta, kSpec);
        costs.push_back(dense_sinkhorn(dp, 1e-11).cost);
    }
    double gap1 = std::fabs(costs[1] - costs[0]);
    double gap2 = std::fabs(costs[2] - costs[1]);
    double gap3 = std::fabs(costs[3] - costs[2]);
    CHECK(gap2 < gap1);
    CHECK(gap3 < gap2);
}

TEST_CASE("oracle agrees with the semi-discrete pipeline at eta = 8") {
    Problem pb{Density::uniform(-1.0, 1.0), atoms_1d({-1.0, 1.0}, {0.5, 0.5})};
    DualSolution dual = solve_unregularized(pb, 1e-10, kSpec);
    EntropicSolution es = sinkhorn_solve(pb, dual, 8.0, 1e-10, kSpec);
    double sd_cost = entropic_transport_cost(pb, dual, es, kSpec);

    DiscreteProblem dp = discretize(pb.density, 2000, pb.atoms, 8.0, kSpec);
    OracleResult r = dense_sinkhorn(dp, 1e-10);
    CHECK(std::fabs(r.cost - sd_cost) <= 1e-3 * std::fabs(sd_cost));
    for (int j = 0; j < 2; ++j) CHECK(std::fabs(r.g[j] - es.g[j]) <= 1e-3);
}

TEST_CASE("discretize validates inputs") {
    Atoms atoms = atoms_1d({-1.0, 1.0}, {0.5, 0.5});
    CHECK_THROWS_AS(discretize(Density::uniform(-1.0, 1.0), 1, atoms, 8.0, kSpec), InputError);
    Polygon square{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    CHECK_THROWS_AS(discretize(Density::uniform2d(square), 100, atoms, 8.0, kSpec), InputError);
}
