// SPDX-License-Identifier: MIT
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>
#include <string>

#include "sdot/scenario.hpp"

using namespace sdot;

namespace {

const char* kGaussianScenario = R"({
  "density": {"family": "gaussian", "mean": 0.0, "sigma": 1.0},
  "atoms": {"positions": [-1.0, 1.0], "weights": [0.5, 0.5]},
  "eta": [4, 8, 16]
})";

}  // namespace

TEST_CASE("valid scenario parses") {
    Scenario sc = parse_scenario(kGaussianScenario);
    CHECK(sc.atoms.n() == 2);
    CHECK(sc.etas == std::vector<double>{4.0, 8.0, 16.0});
    CHECK(sc.tol == 1e-10);
    CHECK(sc.density.dim() == 1);
}

TEST_CASE("2D scenario parses with looser defaults") {
    Scenario sc = parse_scenario(R"({
      "density": {"family": "uniform2d",
                  "polygon": [[0,0],[1,0],[1,1],[0,1]]},
      "atoms": {"positions": [[0.25,0.5],[0.75,0.5]], "weights": [0.5,0.5]},
      "eta": [4, 8]
    })");
    CHECK(sc.density.dim() == 2);
    CHECK(sc.tol == 1e-8);
    CHECK(sc.atoms.positions[0].x == 0.25);
}

TEST_CASE("unknown keys are rejected with the offending path") {
    std::string bad = R"({
      "density": {"family": "gaussian", "mean": 0.0, "sigma": 1.0, "sgima": 2.0},
      "atoms": {"positions": [-1.0, 1.0], "weights": [0.5, 0.5]},
      "eta": [4]
    })";
    try {
        parse_scenario(bad);
        FAIL("expected InputError");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).find("density.sgima") != std::string::npos);
    }
}

TEST_CASE("duplicate atoms and bad weights are rejected") {
    CHECK_THROWS_AS(parse_scenario(R"({
      "density": {"family": "uniform", "support": [-1, 1]},
      "atoms": {"positions": [0.5, 0.5], "weights": [0.5, 0.5]},
      "eta": [4]
    })"),
                    InputError);
    CHECK_THROWS_AS(parse_scenario(R"({
      "density": {"family": "uniform", "support": [-1, 1]},
      "atoms": {"positions": [-1.0, 1.0], "weights": [0.3, 0.3]},
      "eta": [4]
    })"),
                    InputError);
}

TEST_CASE("eta list must be positive and non-empty") {
    CHECK_THROWS_AS(parse_scenario(R"({
      "density": {"family": "uniform", "support": [-1, 1]},
      "atoms": {"positions": [-1.0, 1.0], "weights": [0.5, 0.5]},
      "eta": []
    })"),
                    InputError);
    CHECK_THROWS_AS(parse_scenario(R"({
      "density": {"family": "uniform", "support": [-1, 1]},
      "atoms": {"positions": [-1.0, 1.0], "weights": [0.5, 0.5]},
      "eta": [-4]
    })"),
                    InputError);
}

TEST_CASE("malformed JSON gives a parse error") {
    CHECK_THROWS_AS(parse_scenario("{"), InputError);
    CHECK_THROWS_AS(parse_scenario("[1,2]"), InputError);
}

TEST_CASE("CSV rows round-trip at 17 significant digits") {
    std::vector<DiagnosticsRow> rows(1);
    rows[0].eta = 8.0;
    rows[0].cost = 1.0 / 3.0;
    rows[0].w2_squared = 0.1 + 0.2;  // deliberately non-representable
    rows[0].suboptimality = 3.2127618493113103e-03;
    rows[0].phi = 2.5702094794503146e-02;
    std::ostringstream ss;
    write_csv(ss, rows);
    std::istringstream in(ss.str());
    std::string header, line;
    std::getline(in, header);
    CHECK(header == kCsvHeader);
    std::getline(in, line);
    // reparse a few fields and demand bit-identical doubles
    std::istringstream fields(line);
    std::string tok;
    std::getline(fields, tok, ',');
    CHECK(std::stod(tok) == rows[0].eta);
    std::getline(fields, tok, ',');
    CHECK(std::stod(tok) == rows[0].cost);
    std::getline(fields, tok, ',');
    CHECK(std::stod(tok) == rows[0].w2_squared);
    std::getline(fields, tok, ',');
    CHECK(std::stod(tok) == rows[0].suboptimality);
}

TEST_CASE("CSV output is deterministic") {
    std::vector<DiagnosticsRow> rows(2);
    rows[0].eta = 4.0;
    rows[1].eta = 8.0;
    rows[1].suboptimality = 1.2345678901234567e-05;
    std::ostringstream a, b;
    write_csv(a, rows);
    write_csv(b, rows);
    CHECK(a.str() == b.str());
}
