// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <memory>
#include <string>
#include <vector>

#include "coarse_forest/coarse_forest.h"
#include "doctest.h"
#include "json.hpp"

using nlohmann::json;

namespace {

const std::string kData = CF_TEST_DATA;

struct SpaceFree {
  void operator()(cf_space* z) const { cf_space_free(z); }
};
struct GraphFree {
  void operator()(cf_graph* g) const { cf_graph_free(g); }
};
using Space = std::unique_ptr<cf_space, SpaceFree>;
using GraphPtr = std::unique_ptr<cf_graph, GraphFree>;

json take(char* text) {
  REQUIRE(text != nullptr);
  json out = json::parse(text);
  cf_string_free(text);
  return out;
}

Space load_space(const std::string& name) {
  cf_space* z = nullptr;
  REQUIRE(cf_space_load((kData + "/" + name).c_str(), &z) == CF_OK);
  return Space(z);
}

GraphPtr load_graph(const std::string& name) {
  cf_graph* g = nullptr;
  REQUIRE(cf_graph_load((kData + "/" + name).c_str(), &g) == CF_OK);
  return GraphPtr(g);
}

}  // namespace

TEST_CASE("spaces through the C interface") {
  const double dist[] = {0, 1, 3, 1, 0, 2, 3, 2, 0};
  const char* ids[] = {"a", "b", "c"};
  cf_space* raw = nullptr;
  REQUIRE(cf_space_from_matrix(dist, 3, ids, &raw) == CF_OK);
  Space z(raw);
  CHECK(cf_space_size(z.get()) == 3);
  CHECK(cf_space_distance(z.get(), 0, 2) == 3.0);
  CHECK(cf_space_distance(z.get(), 0, 7) == -1.0);

  const double bad[] = {0, 1, 5, 1, 0, 1, 5, 1, 0};
  cf_space* rejected = nullptr;
  CHECK(cf_space_from_matrix(bad, 3, nullptr, &rejected) == CF_METRIC);
  CHECK(rejected == nullptr);
  CHECK(std::string(cf_last_error()).find("TriangleViolation") != std::string::npos);
  CHECK(cf_space_from_text("0,1\n1\n", &rejected) == CF_PARSE);
  CHECK(cf_space_load("/nonexistent/space.csv", &rejected) == CF_IO);
  CHECK(cf_space_from_matrix(dist, 3, nullptr, nullptr) == CF_INVALID_ARGUMENT);
  CHECK(std::string(cf_status_name(CF_NOT_A_TREE)) == "not a tree");
}

TEST_CASE("graphs through the C interface") {
  auto path = load_graph("path9.json");
  CHECK(cf_graph_vertex_count(path.get()) == 9);
  CHECK(cf_graph_edge_count(path.get()) == 8);
  char* text = nullptr;
  REQUIRE(cf_graph_to_json(path.get(), &text) == CF_OK);
  const json doc = take(text);
  CHECK(doc.at("vertices").size() == 9);
  cf_graph* again = nullptr;
  REQUIRE(cf_graph_from_json(doc.dump().c_str(), &again) == CF_OK);
  GraphPtr copy(again);
  CHECK(cf_graph_edge_count(copy.get()) == 8);
  REQUIRE(cf_graph_to_dot(path.get(), &text) == CF_OK);
  CHECK(std::string(text).rfind("graph", 0) == 0);
  cf_string_free(text);
  cf_graph* broken = nullptr;
  CHECK(cf_graph_from_json("{\"vertices\": [", &broken) == CF_PARSE);
}

TEST_CASE("builders through the C interface") {
  auto ult = load_space("ult4.json");
  int lo = 0, hi = 0;
  REQUIRE(cf_analyzable_levels(ult.get(), "1/6", &lo, &hi) == CF_OK);
  CHECK(lo == 1);
  CHECK(hi == 2);
  cf_graph* raw = nullptr;
  REQUIRE(cf_build_h(ult.get(), "1/6", 0, 2, 0, &raw) == CF_OK);
  GraphPtr h(raw);
  CHECK(cf_graph_vertex_count(h.get()) == 4);
  CHECK(cf_graph_edge_count(h.get()) == 3);
  REQUIRE(cf_build_rh(ult.get(), "1/6", 1, 2, &raw) == CF_OK);
  GraphPtr rh(raw);
  CHECK(cf_graph_vertex_count(rh.get()) == 8);
  CHECK(cf_build_rh(ult.get(), "1/2", 1, 2, &raw) == CF_INVALID_ARGUMENT);

  auto line = load_space("line3.csv");
  REQUIRE(cf_build_rips(line.get(), 1.0, &raw) == CF_OK);
  GraphPtr rips(raw);
  CHECK(cf_graph_edge_count(rips.get()) == 1);

  auto path = load_graph("path9.json");
  REQUIRE(cf_build_gamma_graph(path.get(), 2.0, &raw) == CF_OK);
  GraphPtr gamma(raw);
  CHECK(cf_graph_vertex_count(gamma.get()) == 5);
  REQUIRE(cf_build_gamma_space(line.get(), 1.0, &raw) == CF_OK);
  GraphPtr gamma_space(raw);
  CHECK(cf_graph_vertex_count(gamma_space.get()) == 3);
}

TEST_CASE("analyses through the C interface") {
  auto c8 = load_graph("c8.json");
  char* text = nullptr;
  REQUIRE(cf_analyze_graph(c8.get(), "delta", nullptr, &text) == CF_OK);
  CHECK(take(text).at("fourPointDelta") == 2.0);
  REQUIRE(cf_analyze_graph(c8.get(), "bottleneck", nullptr, &text) == CF_OK);
  CHECK(take(text).at("bottleneckDelta") == 2.0);
  REQUIRE(cf_analyze_graph(c8.get(), "gamma", R"({"R": 1})", &text) == CF_OK);
  CHECK(take(text).at("ok") == true);
  CHECK(cf_analyze_graph(c8.get(), "gamma", nullptr, &text) == CF_INVALID_ARGUMENT);
  CHECK(cf_analyze_graph(c8.get(), "nonsense", nullptr, &text) == CF_INVALID_ARGUMENT);

  auto ladder = load_graph("ladder8.json");
  REQUIRE(cf_analyze_graph(ladder.get(), "properness", R"({"fAttribute": "rung"})", &text) == CF_OK);
  CHECK(take(text).at("M") == 3);

  auto unif = load_space("unif64.csv");
  REQUIRE(cf_analyze_space(unif.get(), "pq", R"({"r": "1/7", "D": 4})", &text) == CF_OK);
  CHECK(take(text).at("verdict") == "growing");
  auto line = load_space("line3.csv");
  REQUIRE(cf_analyze_space(line.get(), "ultrametric", nullptr, &text) == CF_OK);
  const json u = take(text);
  CHECK(u.at("ultrametric") == false);
  CHECK(u.at("witness") == json::array({0, 2, 1}));
  REQUIRE(cf_analyze_space(line.get(), "distortion", R"({"r": "1/6", "levels": [-2, 1]})", &text) == CF_OK);
  CHECK(take(text).at("maxAdditive").get<int>() <= 5);
  REQUIRE(cf_analyze_space(line.get(), "levels", R"({"r": "1/6", "flavor": "h"})", &text) == CF_OK);
  CHECK(take(text).contains("bands"));
}

TEST_CASE("treeify through the C interface") {
  auto path = load_graph("path9.json");
  cf_graph* tree = nullptr;
  char* manifest = nullptr;
  REQUIRE(cf_treeify(path.get(), R"({"fAttribute": "x"})", &tree, &manifest) == CF_OK);
  GraphPtr t(tree);
  CHECK(cf_graph_vertex_count(t.get()) == 2);
  CHECK(take(manifest).at("L") == 0);

  auto disconnected = load_graph("disconnected.json");
  CHECK(cf_treeify(disconnected.get(), R"({"f": [0, 1, 2, 3]})", &tree, &manifest) == CF_DISCONNECTED);
  CHECK(cf_treeify(path.get(), R"({"f": [0, 1]})", &tree, &manifest) == CF_INVALID_ARGUMENT);
  CHECK(cf_treeify(path.get(), R"({"fAttribute": "x", "pairBudget": 3})", &tree, &manifest) == CF_BUDGET);

  auto line = load_space("line3.csv");
  REQUIRE(cf_treeify_space(line.get(), R"({"R": 1, "f": [0, 1, 3]})", &tree, &manifest) == CF_OK);
  GraphPtr ts(tree);
  CHECK(cf_graph_vertex_count(ts.get()) >= 1);
  take(manifest);
  CHECK(cf_treeify_space(line.get(), R"({"f": [0, 1, 3]})", &tree, &manifest) == CF_INVALID_ARGUMENT);
}

TEST_CASE("file validation reports") {
  char* text = nullptr;
  REQUIRE(cf_validate_file((kData + "/line3.csv").c_str(), &text) == CF_OK);
  CHECK(take(text).at("valid") == true);
  CHECK(cf_validate_file((kData + "/triangle_violation.csv").c_str(), &text) == CF_METRIC);
  const json bad = take(text);
  CHECK(bad.at("valid") == false);
  CHECK(bad.at("error") == "TriangleViolation");
  CHECK(bad.at("witness") == json::array({0, 1, 2}));
  CHECK(cf_validate_file((kData + "/ragged.csv").c_str(), &text) == CF_PARSE);
  take(text);
  REQUIRE(cf_validate_file((kData + "/c8.json").c_str(), &text) == CF_OK);
  CHECK(take(text).at("kind") == "graph");
  CHECK(cf_validate_file((kData + "/c8.json").c_str(), nullptr) == CF_INVALID_ARGUMENT);
}
