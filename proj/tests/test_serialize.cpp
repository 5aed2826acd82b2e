#include <doctest.h>

#include <complex>
#include <random>

#include <json.hpp>

#include "psig/graph.hpp"
#include "psig/monotones.hpp"
#include "psig/reflect.hpp"
#include "psig/rng.hpp"
#include "psig/serialize.hpp"
#include "psig/tensor.hpp"

using namespace psig;

TEST_CASE("graph round trip") {
  const PsiGraph g = cartesian_product(build_cycle(1, true), build_cycle(3));
  const PsiGraph back = graph_from_json(graph_to_json(g));
  CHECK(back.party_count == g.party_count);
  CHECK(back.parity == g.parity);
  REQUIRE(back.edges.size() == g.edges.size());
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    CHECK(back.edges[i].u == g.edges[i].u);
    CHECK(back.edges[i].v == g.edges[i].v);
    CHECK(back.edges[i].label == g.edges[i].label);
  }
}

TEST_CASE("graph loader rejects malformed input") {
  nlohmann::json j = graph_to_json(build_cycle(2));
  SUBCASE("missing field") {
    j.erase("edges");
    CHECK_THROWS_AS(graph_from_json(j), std::invalid_argument);
  }
  SUBCASE("duplicate vertex id") {
    j["vertices"][1]["id"] = 0;
    CHECK_THROWS_AS(graph_from_json(j), std::invalid_argument);
  }
  SUBCASE("bad parity string") {
    j["vertices"][0]["parity"] = "neither";
    CHECK_THROWS_AS(graph_from_json(j), std::invalid_argument);
  }
}

TEST_CASE("state round trip preserves amplitudes") {
  std::mt19937_64 rng(8);
  const PureState s = random_state_vector({2, 3}, rng);
  const PureState back = state_from_json(state_to_json(s));
  CHECK(back.dims == s.dims);
  REQUIRE(back.amps.size() == s.amps.size());
  for (int i = 0; i < s.amps.size(); ++i) CHECK(back.amps(i) == s.amps(i));
}

TEST_CASE("state loader rejects shape mismatches") {
  nlohmann::json j;
  j["dims"] = {2, 2};
  j["amps"] = {{1.0, 0.0}, {0.0, 0.0}};  // 2 amps for a 4-dim space
  CHECK_THROWS_AS(state_from_json(j), std::invalid_argument);
}

TEST_CASE("certificate round trip re-verifies") {
  const PsiGraph g = build_hypercube(3);
  const ConvexityCertificate cert = hypercube_certificate_symmetric(3);
  REQUIRE(verify_certificate(g, cert).pass);

  SUBCASE("with an embedded graph") {
    const nlohmann::json j = certificate_to_json(cert, &g);
    const LoadedCertificate loaded = certificate_from_json(j);
    REQUIRE(loaded.graph.has_value());
    CHECK(verify_certificate(*loaded.graph, loaded.cert).pass);
  }
  SUBCASE("standalone, sides recomputed against a caller graph") {
    const nlohmann::json j = certificate_to_json(cert);
    LoadedCertificate loaded = certificate_from_json(j);
    CHECK_FALSE(loaded.graph.has_value());
    recompute_cut_sides(g, loaded.cert);
    CHECK(verify_certificate(g, loaded.cert).pass);
  }
  SUBCASE("vertex kind survives the trip") {
    const PsiGraph c2 = build_cycle(2);
    const ConvexityCertificate vcert = vertex_certificate(c2, certificate_for_cycle(c2, 0));
    const LoadedCertificate loaded = certificate_from_json(certificate_to_json(vcert, &c2));
    CHECK(loaded.cert.kind == ConvexityCertificate::Kind::vertex);
    CHECK(verify_certificate(c2, loaded.cert).pass);
  }
}

TEST_CASE("fuzz spec files") {
  SUBCASE("vidal") {
    const nlohmann::json j{{"kind", "vidal"}, {"party", 1}, {"k", 2}, {"dims", {3, 3}}};
    const FuzzSpecFile file = fuzz_spec_from_json(j);
    CHECK(file.spec.kind == MonotoneSpec::Kind::vidal);
    CHECK(file.spec.party_a == 1);
    CHECK(file.spec.k == 2);
    CHECK(file.dims == std::vector<int>{3, 3});
  }
  SUBCASE("cycle family") {
    const nlohmann::json j{{"kind", "cycle_family"}, {"n", 3}};
    const FuzzSpecFile file = fuzz_spec_from_json(j);
    CHECK(file.spec.graph.party_count == 3);
    CHECK(file.spec.exponent_den == 6);
    CHECK(file.dims.empty());
  }
  SUBCASE("graph with a custom exponent is marked nonstandard") {
    const nlohmann::json j{{"kind", "graph"},
                           {"graph", graph_to_json(build_cycle(3))},
                           {"exponent_num", 1},
                           {"exponent_den", 6},
                           {"dims", {2, 2}}};
    const FuzzSpecFile file = fuzz_spec_from_json(j);
    CHECK(file.spec.exponent_num == 1);
    CHECK(file.spec.exponent_den == 6);
    CHECK_FALSE(file.spec.standard_exponent);
  }
  SUBCASE("multirenyi") {
    const nlohmann::json j{{"kind", "multirenyi"}, {"q", 3}};
    const FuzzSpecFile file = fuzz_spec_from_json(j);
    CHECK(file.spec.kind == MonotoneSpec::Kind::multi_renyi);
    CHECK(file.spec.graph.vertex_count() == 8);
  }
  SUBCASE("bl") {
    const nlohmann::json j{{"kind", "bl"}, {"ranks", {1, 1, 1}}, {"restarts", 2}};
    const FuzzSpecFile file = fuzz_spec_from_json(j);
    CHECK(file.spec.kind == MonotoneSpec::Kind::bl);
    CHECK(file.spec.ranks == std::vector<int>{1, 1, 1});
    CHECK(file.spec.restarts == 2);
  }
  SUBCASE("unknown kind") {
    const nlohmann::json j{{"kind", "nonsense"}};
    CHECK_THROWS_AS(fuzz_spec_from_json(j), std::invalid_argument);
  }
}

TEST_CASE("file helpers name the offending path") {
  CHECK_THROWS_WITH_AS(load_json_file("/nonexistent/q.json"),
                       doctest::Contains("/nonexistent/q.json"), std::invalid_argument);
}
