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
#include "io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include "coarse_forest/error.hpp"

namespace cforest::io {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::optional<double> parse_number(std::string_view cell) {
  cell = trim(cell);
  if (cell.empty()) return std::nullopt;
  const std::string copy(cell);
  char* end = nullptr;
  const double value = std::strtod(copy.c_str(), &end);
  if (end != copy.c_str() + copy.size()) return std::nullopt;
  return value;
}

std::vector<std::string_view> split_cells(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

Error parse_error(const std::string& what) { return Error(ErrorCode::Parse, what); }

std::vector<std::string> json_ids(const Json& doc, std::size_t n) {
  std::vector<std::string> ids;
  if (!doc.contains("ids")) return ids;
  for (const auto& id : doc.at("ids")) ids.push_back(id.is_string() ? id.get<std::string>() : id.dump());
  if (ids.size() != n) throw parse_error("\"ids\" has " + std::to_string(ids.size()) +
                                         " entries for " + std::to_string(n) + " points");
  return ids;
}

Json witness_json(std::pair<std::size_t, std::size_t> w) { return Json::array({w.first, w.second}); }

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

FiniteMetricSpace parse_space(std::string_view text) {
  const std::string_view body = trim(text);
  if (!body.empty() && body.front() == '{') {
    Json doc;
    try {
      doc = Json::parse(body);
    } catch (const Json::parse_error& e) {
      throw parse_error(e.what());
    }
    return space_from_json(doc);
  }
  return parse_space_csv(text);
}

FiniteMetricSpace parse_space_csv(std::string_view text) {
  std::vector<std::string> ids;
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = trim(text.substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto cells = split_cells(line);
    std::vector<double> row;
    bool numeric = true;
    for (auto cell : cells) {
      const auto value = parse_number(cell);
      if (!value) {
        numeric = false;
        break;
      }
      row.push_back(*value);
    }
    if (!numeric) {
      if (!rows.empty() || !ids.empty())
        throw parse_error("line " + std::to_string(line_no) + ": non-numeric cell");
      for (auto cell : cells) ids.emplace_back(cell);
      continue;
    }
    const std::size_t width = ids.empty() ? (rows.empty() ? row.size() : rows.front().size()) : ids.size();
    if (row.size() != width)
      throw parse_error("line " + std::to_string(line_no) + ": expected " + std::to_string(width) +
                        " cells, found " + std::to_string(row.size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw parse_error("no distance rows");
  return FiniteMetricSpace::validate(rows, std::move(ids));
}

FiniteMetricSpace space_from_json(const Json& doc) {
  try {
    if (doc.contains("dist")) {
      const auto rows = doc.at("dist").get<std::vector<std::vector<double>>>();
      return FiniteMetricSpace::validate(rows, json_ids(doc, rows.size()));
    }
    if (doc.contains("points")) {
      const auto points = doc.at("points").get<std::vector<std::vector<double>>>();
      const std::string name = doc.value("metric", std::string("euclidean"));
      PointMetric metric;
      if (name == "euclidean") metric = PointMetric::Euclidean;
      else if (name == "chebyshev") metric = PointMetric::Chebyshev;
      else throw parse_error("unknown metric \"" + name + "\"");
      return from_points(points, metric, json_ids(doc, points.size()));
    }
  } catch (const Json::exception& e) {
    throw parse_error(e.what());
  }
  throw parse_error("expected \"dist\" or \"points\"");
}

FiniteMetricSpace load_space(const std::string& path) { return parse_space(read_file(path)); }

bool GraphDocument::has_levels() const {
  return !level.empty() && std::all_of(level.begin(), level.end(), [](const auto& l) { return l.has_value(); });
}

GraphDocument graph_from_json(const Json& doc) {
  GraphDocument out;
  try {
    if (!doc.is_object() || !doc.contains("vertices")) throw parse_error("expected \"vertices\"");
    std::unordered_map<std::string, std::size_t> index;
    for (const auto& vertex : doc.at("vertices")) {
      std::string id;
      Json extra = Json::object();
      std::optional<int> level;
      std::vector<std::string> ball;
      if (vertex.is_object()) {
        const auto& raw = vertex.at("id");
        id = raw.is_string() ? raw.get<std::string>() : raw.dump();
        for (const auto& [key, value] : vertex.items()) {
          if (key == "id") continue;
          if (key == "level") level = value.get<int>();
          else if (key == "ball")
            for (const auto& p : value) ball.push_back(p.is_string() ? p.get<std::string>() : p.dump());
          else extra[key] = value;
        }
      } else {
        id = vertex.is_string() ? vertex.get<std::string>() : vertex.dump();
      }
      if (!index.emplace(id, out.graph.vertex_count()).second)
        throw parse_error("duplicate vertex id \"" + id + "\"");
      out.graph.add_vertex(id);
      out.level.push_back(level);
      out.ball.push_back(std::move(ball));
      out.attributes.push_back(std::move(extra));
    }
    auto endpoint = [&](const Json& ref) -> std::size_t {
      if (ref.is_number_unsigned() || ref.is_number_integer()) {
        const auto i = ref.get<std::int64_t>();
        if (i < 0 || static_cast<std::size_t>(i) >= out.graph.vertex_count())
          throw parse_error("edge endpoint " + std::to_string(i) + " out of range");
        return static_cast<std::size_t>(i);
      }
      const auto it = index.find(ref.get<std::string>());
      if (it == index.end()) throw parse_error("unknown vertex " + ref.dump());
      return it->second;
    };
    if (doc.contains("edges"))
      for (const auto& e : doc.at("edges")) {
        const std::size_t u = endpoint(e.at("u")), v = endpoint(e.at("v"));
        try {
          out.graph.add_edge(u, v, e.value("len", 1.0));
        } catch (const Error& err) {
          throw parse_error(std::string("edge ") + e.dump() + ": " + err.what());
        }
        const std::string kind = e.value("kind", std::string("plain"));
        if (kind == "plain") out.kind.push_back(EdgeKind::Plain);
        else if (kind == "horizontal") out.kind.push_back(EdgeKind::Horizontal);
        else if (kind == "radial") out.kind.push_back(EdgeKind::Radial);
        else throw parse_error("unknown edge kind \"" + kind + "\"");
      }
    if (doc.contains("meta")) out.meta = doc.at("meta");
  } catch (const Json::exception& e) {
    throw parse_error(e.what());
  }
  return out;
}

GraphDocument load_graph(const std::string& path) {
  Json doc;
  try {
    doc = Json::parse(read_file(path));
  } catch (const Json::parse_error& e) {
    throw parse_error(path + ": " + e.what());
  }
  return graph_from_json(doc);
}

Json to_json(const GraphDocument& doc) {
  Json vertices = Json::array();
  for (std::size_t v = 0; v < doc.graph.vertex_count(); ++v) {
    Json vertex = {{"id", doc.graph.id(v)}};
    if (v < doc.level.size() && doc.level[v]) vertex["level"] = *doc.level[v];
    if (v < doc.ball.size() && !doc.ball[v].empty()) vertex["ball"] = doc.ball[v];
    if (v < doc.attributes.size())
      for (const auto& [key, value] : doc.attributes[v].items()) vertex[key] = value;
    vertices.push_back(std::move(vertex));
  }
  Json edges = Json::array();
  for (std::size_t e = 0; e < doc.graph.edge_count(); ++e) {
    const auto& edge = doc.graph.edge(e);
    Json item = {{"u", doc.graph.id(edge.u)}, {"v", doc.graph.id(edge.v)}, {"len", edge.length}};
    const EdgeKind kind = e < doc.kind.size() ? doc.kind[e] : EdgeKind::Plain;
    if (kind != EdgeKind::Plain) item["kind"] = to_string(kind);
    edges.push_back(std::move(item));
  }
  Json out;
  out["vertices"] = std::move(vertices);
  out["edges"] = std::move(edges);
  out["meta"] = doc.meta;
  return out;
}

std::string to_dot(const GraphDocument& doc) {
  auto quote = [](const std::string& s) {
    std::string q = "\"";
    for (char c : s) {
      if (c == '"' || c == '\\') q += '\\';
      q += c;
    }
    return q + "\"";
  };
  std::ostringstream out;
  out << "graph G {\n  node [shape=circle];\n";
  if (doc.has_levels()) {
    std::map<int, std::vector<std::size_t>> ranks;
    for (std::size_t v = 0; v < doc.graph.vertex_count(); ++v) ranks[*doc.level[v]].push_back(v);
    for (const auto& [level, members] : ranks) {
      out << "  { rank=same;";
      for (std::size_t v : members) out << ' ' << quote(doc.graph.id(v)) << ';';
      out << " }  // level " << level << '\n';
    }
  } else {
    for (std::size_t v = 0; v < doc.graph.vertex_count(); ++v) out << "  " << quote(doc.graph.id(v)) << ";\n";
  }
  for (std::size_t e = 0; e < doc.graph.edge_count(); ++e) {
    const auto& edge = doc.graph.edge(e);
    out << "  " << quote(doc.graph.id(edge.u)) << " -- " << quote(doc.graph.id(edge.v));
    std::vector<std::string> attrs;
    if (edge.length != 1.0) {
      std::ostringstream len;
      len << edge.length;
      attrs.push_back("label=\"" + len.str() + "\"");
    }
    if (e < doc.kind.size() && doc.kind[e] == EdgeKind::Horizontal) attrs.emplace_back("style=dashed");
    if (!attrs.empty()) {
      out << " [";
      for (std::size_t i = 0; i < attrs.size(); ++i) out << (i ? ", " : "") << attrs[i];
      out << ']';
    }
    out << ";\n";
  }
  out << "}\n";
  return out.str();
}

GraphDocument document(const Graph& g) {
  GraphDocument out;
  out.graph = g;
  out.level.assign(g.vertex_count(), std::nullopt);
  out.kind.assign(g.edge_count(), EdgeKind::Plain);
  out.ball.assign(g.vertex_count(), {});
  out.attributes.assign(g.vertex_count(), Json::object());
  return out;
}

GraphDocument document(const LeveledGraph& x, const FiniteMetricSpace& z) {
  GraphDocument out = document(x.graph);
  out.kind = x.kind;
  for (std::size_t v = 0; v < x.graph.vertex_count(); ++v) {
    out.level[v] = x.level[v];
    out.attributes[v]["point"] = z.ids()[x.anchor[v]];
    if (v < x.ball.size())
      for (std::size_t p : x.ball[v]) out.ball[v].push_back(z.ids()[p]);
  }
  out.meta = {{"flavor", to_string(x.flavor)},
              {"r", x.r.str()},
              {"levels", Json::array({x.k_min, x.k_max})},
              {"window", Json::array({x.window.lo, x.window.hi})},
              {"points", x.point_count}};
  if (x.flavor == Flavor::H) out.meta["ballMode"] = to_string(x.ball_mode);
  return out;
}

GraphDocument document(const GammaGraph& gamma, const std::vector<std::string>& source_ids) {
  GraphDocument out = document(gamma.graph);
  Json centers = Json::array();
  for (std::size_t a : gamma.centers) centers.push_back(source_ids[a]);
  for (std::size_t v = 0; v < gamma.graph.vertex_count(); ++v) {
    out.attributes[v]["j"] = source_ids[gamma.j[v]];
    for (std::size_t p : gamma.ball[v]) out.ball[v].push_back(source_ids[p]);
  }
  out.meta = {{"flavor", "gamma"}, {"R", gamma.R}, {"centers", std::move(centers)}};
  return out;
}

GraphDocument document(const TreeifyResult& result, const Graph& x) {
  const auto& q = result.quotient;
  GraphDocument out = document(q.tree);
  Graph named;
  for (std::size_t t = 0; t < q.tree.vertex_count(); ++t) named.add_vertex("t" + std::to_string(t));
  for (const auto& e : q.tree.edges()) named.add_edge(e.u, e.v, e.length);
  out.graph = std::move(named);
  const Graph& y = result.coned.y;
  for (std::size_t t = 0; t < q.tree.vertex_count(); ++t) {
    const auto& rep = q.vertex_rep[t];
    if (rep.vertex) {
      out.attributes[t]["rep"] = y.id(*rep.vertex);
    } else {
      const auto& e = y.edge(rep.edge);
      out.attributes[t]["rep"] = Json{{"edge", Json::array({y.id(e.u), y.id(e.v)})}, {"segment", rep.segment}};
    }
  }
  Json pi = Json::object();
  for (std::size_t v = 0; v < x.vertex_count(); ++v) pi[x.id(v)] = "t" + std::to_string(q.pi[v]);
  out.meta = {{"kind", "quotient-tree"}, {"pi", std::move(pi)}};
  return out;
}

std::vector<double> attribute_values(const GraphDocument& doc, const std::string& name) {
  std::vector<double> out;
  for (std::size_t v = 0; v < doc.graph.vertex_count(); ++v) {
    const Json& attrs = doc.attributes[v];
    if (!attrs.contains(name) || !attrs.at(name).is_number())
      throw Error(ErrorCode::InvalidArgument,
                  "vertex \"" + doc.graph.id(v) + "\" has no numeric attribute \"" + name + "\"");
    out.push_back(attrs.at(name).get<double>());
  }
  return out;
}

Json to_json(const PQReport& report) {
  Json levels = Json::array();
  for (const auto& row : report.rows)
    levels.push_back({{"k", row.k},
                      {"components", row.components},
                      {"maxHopDiameter", row.max_hop_diameter},
                      {"analyzable", row.analyzable}});
  Json out = {{"r", report.r.str()}, {"levels", std::move(levels)}, {"verdict", to_string(report.verdict)},
              {"D", report.D}, {"window", Json::array({report.window.lo, report.window.hi})}};
  if (report.bound > 0) out["bound"] = report.bound;
  if (report.informational) out["informational"] = true;
  return out;
}

Json to_json(const std::vector<BandConnectivityRow>& rows) {
  Json out = Json::array();
  for (const auto& row : rows)
    out.push_back({{"k", row.k},
                   {"levelComponents", row.level_components},
                   {"bandComponents", row.band_components},
                   {"agree", row.agree}});
  return out;
}

Json to_json(const FourPointResult& result) {
  return {{"fourPointDelta", result.delta},
          {"exhaustive", result.exhaustive},
          {"samples", result.samples},
          {"seed", result.seed},
          {"witness", result.witness}};
}

Json to_json(const BottleneckResult& result) {
  return {{"bottleneckDelta", result.delta},
          {"exhaustive", result.exhaustive},
          {"pairs", result.pairs},
          {"seed", result.seed},
          {"witness", witness_json(result.witness)}};
}

Json to_json(const ExpansionProfile& profile) {
  Json samples = Json::array();
  for (const auto& [t, value] : profile.samples) samples.push_back({{"t", t}, {"rho", value}});
  return {{"samples", std::move(samples)}, {"bornologous", profile.bornologous}};
}

Json to_json(const PropernessProfile& profile) {
  Json rows = Json::array();
  for (const auto& row : profile.rows)
    rows.push_back({{"center", row.center},
                    {"component", row.component},
                    {"vertices", row.vertices},
                    {"hopDiameter", row.hop_diameter}});
  return {{"N", profile.half_width},
          {"step", profile.step},
          {"bands", profile.mode == BandMode::Closed ? "closed" : "open"},
          {"rows", std::move(rows)},
          {"M", profile.max_diameter}};
}

Json to_json(const QIReport& report) {
  return {{"lambda", report.lambda},
          {"C", report.additive},
          {"codensity", report.codensity},
          {"pairs", report.pairs},
          {"exhaustive", report.exhaustive},
          {"seed", report.seed},
          {"degenerate", report.degenerate},
          {"worstUpper", witness_json(report.worst_upper)},
          {"worstLower", witness_json(report.worst_lower)}};
}

Json to_json(const DistortionReport& report) {
  return {{"maxAdditive", report.max_additive},
          {"pairs", report.pairs},
          {"interiorPairs", report.interior_pairs},
          {"witness", witness_json(report.witness)},
          {"codensity", report.codensity},
          {"ballMode", to_string(report.ball_mode)}};
}

Json to_json(const GammaCheck& check) {
  Json violating = Json::array();
  for (const auto& w : check.violating) violating.push_back(witness_json(w));
  return {{"pairs", check.pairs},
          {"upperViolations", check.upper_violations},
          {"lowerViolations", check.lower_violations},
          {"violating", std::move(violating)},
          {"codensity", check.codensity},
          {"codensityOk", check.codensity_ok},
          {"qi", to_json(check.qi)},
          {"ok", check.ok()}};
}

Json manifest(const TreeifyResult& result) {
  Json timings = Json::array();
  for (const auto& t : result.timings) timings.push_back({{"stage", t.stage}, {"seconds", t.seconds}});
  Json out = {{"L", result.L},
              {"c", result.scaled.factor},
              {"rhoL", result.scaled.expansion},
              {"R", result.coned.R},
              {"centers", result.coned.centers.size()},
              {"coneTriangles", result.coned.triangles.size()},
              {"crossings", result.tracks.crossings.size()},
              {"tracks", result.tracks.track_count},
              {"regions", result.tracks.region_count},
              {"treeVertices", result.quotient.tree.vertex_count()},
              {"treeEdges", result.quotient.tree.edge_count()},
              {"qi", to_json(result.qi)},
              {"expansion", to_json(result.expansion)},
              {"properness", to_json(result.properness)},
              {"timings", std::move(timings)}};
  if (result.gamma)
    out["gamma"] = {{"R", result.gamma->R}, {"vertices", result.gamma->graph.vertex_count()}};
  return out;
}

}  // namespace cforest::io
