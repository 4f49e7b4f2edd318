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
#ifndef COARSE_FOREST_SRC_IO_HPP
#define COARSE_FOREST_SRC_IO_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coarse_forest/gamma.hpp"
#include "coarse_forest/graph.hpp"
#include "coarse_forest/metric.hpp"
#include "coarse_forest/rips.hpp"
#include "coarse_forest/treeify.hpp"
#include "json.hpp"

namespace cforest::io {

using Json = nlohmann::ordered_json;

std::string read_file(const std::string& path);

// Distance matrix as CSV (optional header row of ids; blank lines and lines
// starting with '#' are skipped) or JSON {"ids", "dist"} / {"points",
// "metric"}. The first non-blank character decides the format.
FiniteMetricSpace parse_space(std::string_view text);
FiniteMetricSpace parse_space_csv(std::string_view text);
FiniteMetricSpace space_from_json(const Json& doc);
FiniteMetricSpace load_space(const std::string& path);

// A graph with optional per-vertex levels, balls and extra attributes, as read
// from or written to graph JSON.
struct GraphDocument {
  Graph graph;
  std::vector<std::optional<int>> level;
  std::vector<EdgeKind> kind;
  std::vector<std::vector<std::string>> ball;
  std::vector<Json> attributes;  // per vertex, an object
  Json meta = Json::object();

  bool has_levels() const;
};

GraphDocument graph_from_json(const Json& doc);
GraphDocument load_graph(const std::string& path);
Json to_json(const GraphDocument& doc);
// Vertices of one level share a rank when levels are present.
std::string to_dot(const GraphDocument& doc);

GraphDocument document(const Graph& g);
GraphDocument document(const LeveledGraph& x, const FiniteMetricSpace& z);
GraphDocument document(const GammaGraph& gamma, const std::vector<std::string>& source_ids);
GraphDocument document(const TreeifyResult& result, const Graph& x);

// Numeric vertex attribute "name" of every vertex.
std::vector<double> attribute_values(const GraphDocument& doc, const std::string& name);

Json to_json(const PQReport& report);
Json to_json(const std::vector<BandConnectivityRow>& rows);
Json to_json(const FourPointResult& result);
Json to_json(const BottleneckResult& result);
Json to_json(const ExpansionProfile& profile);
Json to_json(const PropernessProfile& profile);
Json to_json(const QIReport& report);
Json to_json(const DistortionReport& report);
Json to_json(const GammaCheck& check);
// Constants, counts and timings of a pipeline run.
Json manifest(const TreeifyResult& result);

}  // namespace cforest::io

#endif  // COARSE_FOREST_SRC_IO_HPP
