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
#include "coarse_forest/coarse_forest.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "coarse_forest/error.hpp"
#include "coarse_forest/gamma.hpp"
#include "coarse_forest/rips.hpp"
#include "coarse_forest/scale.hpp"
#include "coarse_forest/treeify.hpp"
#include "io.hpp"

struct cf_space {
  cforest::FiniteMetricSpace z;
};

struct cf_graph {
  cforest::io::GraphDocument doc;
};

namespace {

using cforest::Error;
using cforest::ErrorCode;
using cforest::io::Json;

std::string& last_error() {
  thread_local std::string message;
  return message;
}

struct Failure {
  std::string code;
  std::vector<std::size_t> witness;
};

Failure& last_failure() {
  thread_local Failure failure;
  return failure;
}

cf_status status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return CF_INVALID_ARGUMENT;
    case ErrorCode::Parse: return CF_PARSE;
    case ErrorCode::NotSquare:
    case ErrorCode::NonFinite:
    case ErrorCode::Asymmetric:
    case ErrorCode::NonzeroDiagonal:
    case ErrorCode::NegativeEntry:
    case ErrorCode::TriangleViolation:
    case ErrorCode::DuplicatePoint:
    case ErrorCode::DegenerateTriple: return CF_METRIC;
    case ErrorCode::Disconnected: return CF_DISCONNECTED;
    case ErrorCode::NotATree: return CF_NOT_A_TREE;
    case ErrorCode::RangeExhausted: return CF_RANGE_EXHAUSTED;
    case ErrorCode::BudgetExceeded: return CF_BUDGET;
    case ErrorCode::Io: return CF_IO;
  }
  return CF_INTERNAL;
}

template <typename Body>
cf_status guard(Body&& body) {
  last_error().clear();
  last_failure() = {};
  try {
    body();
    return CF_OK;
  } catch (const Error& e) {
    last_error() = std::string(cforest::to_string(e.code())) + ": " + e.what();
    last_failure() = {cforest::to_string(e.code()), e.witness()};
    return status_of(e.code());
  } catch (const nlohmann::json::exception& e) {
    last_error() = std::string("ParseError: ") + e.what();
    return CF_PARSE;
  } catch (const std::bad_alloc&) {
    last_error() = "BudgetExceeded: out of memory";
    return CF_BUDGET;
  } catch (const std::exception& e) {
    last_error() = std::string("InternalError: ") + e.what();
    return CF_INTERNAL;
  }
}

void require(const void* p, const char* name) {
  if (p == nullptr) throw Error(ErrorCode::InvalidArgument, std::string(name) + " must not be null");
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

Json parse_params(const char* text) {
  if (text == nullptr || *text == '\0') return Json::object();
  Json params = Json::parse(text);
  if (!params.is_object()) throw Error(ErrorCode::InvalidArgument, "parameters must be a JSON object");
  return params;
}

cforest::Ratio ratio_param(const Json& params) {
  if (!params.contains("r")) throw Error(ErrorCode::InvalidArgument, "parameter \"r\" is required");
  const Json& r = params.at("r");
  return r.is_string() ? cforest::Ratio::parse(r.get<std::string>())
                       : cforest::Ratio::from_double(r.get<double>());
}

cforest::LevelWindow levels_param(const Json& params, const cforest::FiniteMetricSpace& z,
                                  const cforest::Ratio& r) {
  if (!params.contains("levels")) return cforest::analyzable_levels(z, r);
  const auto levels = params.at("levels").get<std::vector<int>>();
  if (levels.size() != 2) throw Error(ErrorCode::InvalidArgument, "\"levels\" must be [k_min, k_max]");
  return {levels[0], levels[1]};
}

cforest::BallMode ball_mode_param(const Json& params) {
  const std::string mode = params.value("ballMode", std::string("subset"));
  if (mode == "subset") return cforest::BallMode::Subset;
  if (mode == "metric") return cforest::BallMode::Metric;
  throw Error(ErrorCode::InvalidArgument, "unknown ball mode \"" + mode + "\"");
}

std::vector<double> function_param(const Json& params, const cforest::io::GraphDocument& doc) {
  if (params.contains("f")) {
    auto f = params.at("f").get<std::vector<double>>();
    if (f.size() != doc.graph.vertex_count())
      throw Error(ErrorCode::InvalidArgument, "f has " + std::to_string(f.size()) + " values for " +
                                                  std::to_string(doc.graph.vertex_count()) + " vertices");
    return f;
  }
  if (params.contains("fAttribute"))
    return cforest::io::attribute_values(doc, params.at("fAttribute").get<std::string>());
  throw Error(ErrorCode::InvalidArgument, "a function is required (\"f\" or \"fAttribute\")");
}

cforest::TreeifyOptions treeify_options(const Json& params) {
  cforest::TreeifyOptions options;
  if (params.contains("L")) options.L = params.at("L").get<std::size_t>();
  options.properness_half_width = params.value("N", 1.0);
  options.pair_budget = params.value("pairBudget", cforest::kDefaultPairBudget);
  options.seed = params.value("seed", cforest::kDefaultSeed);
  return options;
}

cf_graph* wrap(cforest::io::GraphDocument doc) { return new cf_graph{std::move(doc)}; }

}  // namespace

extern "C" {

const char* cf_last_error(void) { return last_error().c_str(); }

const char* cf_status_name(cf_status status) {
  switch (status) {
    case CF_OK: return "ok";
    case CF_INVALID_ARGUMENT: return "invalid argument";
    case CF_PARSE: return "parse error";
    case CF_METRIC: return "metric violation";
    case CF_DISCONNECTED: return "disconnected";
    case CF_NOT_A_TREE: return "not a tree";
    case CF_RANGE_EXHAUSTED: return "range exhausted";
    case CF_BUDGET: return "budget exceeded";
    case CF_IO: return "i/o error";
    case CF_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void cf_string_free(char* s) { std::free(s); }

cf_status cf_space_from_matrix(const double* dist, size_t n, const char* const* ids, cf_space** out) {
  return guard([&] {
    require(out, "out");
    require(dist, "dist");
    std::vector<std::string> names;
    if (ids != nullptr)
      for (size_t i = 0; i < n; ++i) {
        require(ids[i], "ids[i]");
        names.emplace_back(ids[i]);
      }
    auto z = cforest::FiniteMetricSpace::validate(std::vector<double>(dist, dist + n * n), n, std::move(names));
    *out = new cf_space{std::move(z)};
  });
}

cf_status cf_space_load(const char* path, cf_space** out) {
  return guard([&] {
    require(out, "out");
    require(path, "path");
    *out = new cf_space{cforest::io::load_space(path)};
  });
}

cf_status cf_space_from_text(const char* text, cf_space** out) {
  return guard([&] {
    require(out, "out");
    require(text, "text");
    *out = new cf_space{cforest::io::parse_space(text)};
  });
}

size_t cf_space_size(const cf_space* z) { return z == nullptr ? 0 : z->z.size(); }

double cf_space_distance(const cf_space* z, size_t i, size_t j) {
  if (z == nullptr || i >= z->z.size() || j >= z->z.size()) return -1.0;
  return z->z(i, j);
}

void cf_space_free(cf_space* z) { delete z; }

cf_status cf_graph_load(const char* path, cf_graph** out) {
  return guard([&] {
    require(out, "out");
    require(path, "path");
    *out = wrap(cforest::io::load_graph(path));
  });
}

cf_status cf_graph_from_json(const char* text, cf_graph** out) {
  return guard([&] {
    require(out, "out");
    require(text, "text");
    Json doc;
    try {
      doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
      throw Error(ErrorCode::Parse, e.what());
    }
    *out = wrap(cforest::io::graph_from_json(doc));
  });
}

size_t cf_graph_vertex_count(const cf_graph* g) { return g == nullptr ? 0 : g->doc.graph.vertex_count(); }

size_t cf_graph_edge_count(const cf_graph* g) { return g == nullptr ? 0 : g->doc.graph.edge_count(); }

void cf_graph_free(cf_graph* g) { delete g; }

cf_status cf_graph_to_json(const cf_graph* g, char** out) {
  return guard([&] {
    require(g, "graph");
    require(out, "out");
    *out = copy_string(dump(cforest::io::to_json(g->doc)));
  });
}

cf_status cf_graph_to_dot(const cf_graph* g, char** out) {
  return guard([&] {
    require(g, "graph");
    require(out, "out");
    *out = copy_string(cforest::io::to_dot(g->doc));
  });
}

cf_status cf_analyzable_levels(const cf_space* z, const char* r, int* lo, int* hi) {
  return guard([&] {
    require(z, "space");
    require(r, "r");
    require(lo, "lo");
    require(hi, "hi");
    const auto window = cforest::analyzable_levels(z->z, cforest::Ratio::parse(r));
    *lo = window.lo;
    *hi = window.hi;
  });
}

cf_status cf_build_rips(const cf_space* z, double t, cf_graph** out) {
  return guard([&] {
    require(z, "space");
    require(out, "out");
    auto doc = cforest::io::document(cforest::rips_graph(z->z, t));
    doc.meta = {{"flavor", "rips"}, {"t", t}};
    *out = wrap(std::move(doc));
  });
}

cf_status cf_build_rh(const cf_space* z, const char* r, int k_min, int k_max, cf_graph** out) {
  return guard([&] {
    require(z, "space");
    require(r, "r");
    require(out, "out");
    const auto x = cforest::build_rh(z->z, cforest::Ratio::parse(r), k_min, k_max);
    *out = wrap(cforest::io::document(x, z->z));
  });
}

cf_status cf_build_h(const cf_space* z, const char* r, int k_min, int k_max, int metric_balls,
                     cf_graph** out) {
  return guard([&] {
    require(z, "space");
    require(r, "r");
    require(out, "out");
    const auto mode = metric_balls ? cforest::BallMode::Metric : cforest::BallMode::Subset;
    const auto x = cforest::build_h(z->z, cforest::Ratio::parse(r), k_min, k_max, mode);
    *out = wrap(cforest::io::document(x, z->z));
  });
}

cf_status cf_build_gamma_graph(const cf_graph* x, double R, cf_graph** out) {
  return guard([&] {
    require(x, "graph");
    require(out, "out");
    *out = wrap(cforest::io::document(cforest::build_gamma(x->doc.graph, R), x->doc.graph.ids()));
  });
}

cf_status cf_build_gamma_space(const cf_space* z, double R, cf_graph** out) {
  return guard([&] {
    require(z, "space");
    require(out, "out");
    *out = wrap(cforest::io::document(cforest::build_gamma(z->z, R), z->z.ids()));
  });
}

cf_status cf_analyze_graph(const cf_graph* g, const char* op, const char* params_json, char** report) {
  return guard([&] {
    require(g, "graph");
    require(op, "op");
    require(report, "report");
    const Json params = parse_params(params_json);
    const auto& graph = g->doc.graph;
    const std::string name = op;
    const std::uint64_t seed = params.value("seed", cforest::kDefaultSeed);
    Json out;
    if (name == "delta") {
      out = cforest::io::to_json(cforest::four_point_delta(
          graph, params.value("budget", cforest::kDefaultQuadrupleBudget), seed));
    } else if (name == "bottleneck") {
      out = cforest::io::to_json(
          cforest::bottleneck_delta(graph, params.value("budget", cforest::kDefaultPairBudget), seed));
    } else if (name == "properness") {
      const auto f = function_param(params, g->doc);
      const std::string bands = params.value("bands", std::string("closed"));
      if (bands != "closed" && bands != "open")
        throw Error(ErrorCode::InvalidArgument, "bands must be \"closed\" or \"open\"");
      out = cforest::io::to_json(cforest::properness_profile(
          graph, f, params.value("N", 1.0), params.value("step", 1.0),
          bands == "open" ? cforest::BandMode::Open : cforest::BandMode::Closed));
    } else if (name == "expansion") {
      const auto f = function_param(params, g->doc);
      const auto thresholds =
          params.value("thresholds", std::vector<double>{1.0, 2.0, 4.0, 8.0});
      out = cforest::io::to_json(cforest::expansion_profile(graph, f, thresholds));
    } else if (name == "gamma") {
      if (!params.contains("R")) throw Error(ErrorCode::InvalidArgument, "parameter \"R\" is required");
      out = cforest::io::to_json(cforest::verify_gamma_qi(cforest::build_gamma(graph, params.at("R").get<double>())));
    } else {
      throw Error(ErrorCode::InvalidArgument, "unknown graph analysis \"" + name + "\"");
    }
    out["op"] = name;
    *report = copy_string(dump(out));
  });
}

cf_status cf_analyze_space(const cf_space* z, const char* op, const char* params_json, char** report) {
  return guard([&] {
    require(z, "space");
    require(op, "op");
    require(report, "report");
    const Json params = parse_params(params_json);
    const std::string name = op;
    Json out;
    if (name == "levels") {
      const auto r = ratio_param(params);
      const auto window = levels_param(params, z->z, r);
      const std::string flavor = params.value("flavor", std::string("rh"));
      cforest::LeveledGraph x;
      if (flavor == "rh") x = cforest::build_rh(z->z, r, window.lo, window.hi);
      else if (flavor == "h") x = cforest::build_h(z->z, r, window.lo, window.hi, ball_mode_param(params));
      else throw Error(ErrorCode::InvalidArgument, "flavor must be \"rh\" or \"h\"");
      out = cforest::io::to_json(cforest::level_component_analysis(x));
      out["bands"] = cforest::io::to_json(cforest::level_band_connectivity(x));
    } else if (name == "pq") {
      const auto r = ratio_param(params);
      out = cforest::io::to_json(cforest::pq_detector(z->z, r, params.value("D", std::size_t{1})));
    } else if (name == "distortion") {
      const auto r = ratio_param(params);
      const auto window = levels_param(params, z->z, r);
      out = cforest::io::to_json(
          cforest::rh_to_h_distortion(z->z, r, window.lo, window.hi, ball_mode_param(params)));
    } else if (name == "ultrametric") {
      const auto check = cforest::is_ultrametric(z->z);
      out["ultrametric"] = check.ultrametric;
      if (check.witness) out["witness"] = *check.witness;
    } else {
      throw Error(ErrorCode::InvalidArgument, "unknown space analysis \"" + name + "\"");
    }
    out["op"] = name;
    *report = copy_string(dump(out));
  });
}

cf_status cf_treeify(const cf_graph* x, const char* params_json, cf_graph** tree, char** manifest) {
  return guard([&] {
    require(x, "graph");
    require(tree, "tree");
    require(manifest, "manifest");
    const Json params = parse_params(params_json);
    const auto f = function_param(params, x->doc);
    const auto result = cforest::treeify(x->doc.graph, f, treeify_options(params));
    auto doc = cforest::io::document(result, x->doc.graph);
    char* text = copy_string(dump(cforest::io::manifest(result)));
    *tree = wrap(std::move(doc));
    *manifest = text;
  });
}

cf_status cf_treeify_space(const cf_space* z, const char* params_json, cf_graph** tree, char** manifest) {
  return guard([&] {
    require(z, "space");
    require(tree, "tree");
    require(manifest, "manifest");
    const Json params = parse_params(params_json);
    if (!params.contains("R")) throw Error(ErrorCode::InvalidArgument, "parameter \"R\" is required");
    if (!params.contains("f")) throw Error(ErrorCode::InvalidArgument, "parameter \"f\" is required");
    const auto f = params.at("f").get<std::vector<double>>();
    if (f.size() != z->z.size())
      throw Error(ErrorCode::InvalidArgument, "f must have one value per point");
    const auto result = cforest::treeify(z->z, f, params.at("R").get<double>(), treeify_options(params));
    auto doc = cforest::io::document(result, result.gamma->graph);
    char* text = copy_string(dump(cforest::io::manifest(result)));
    *tree = wrap(std::move(doc));
    *manifest = text;
  });
}

cf_status cf_validate_file(const char* path, char** report) {
  if (report == nullptr) {
    last_error() = "InvalidArgument: report must not be null";
    return CF_INVALID_ARGUMENT;
  }
  *report = nullptr;
  Json out;
  const cf_status status = guard([&] {
    require(path, "path");
    const std::string text = cforest::io::read_file(path);
    const auto first = text.find_first_not_of(" \t\r\n");
    bool graph = false;
    if (first != std::string::npos && text[first] == '{') {
      Json doc;
      try {
        doc = Json::parse(text);
      } catch (const Json::parse_error& e) {
        throw Error(ErrorCode::Parse, e.what());
      }
      graph = doc.contains("vertices");
      if (graph) {
        const auto g = cforest::io::graph_from_json(doc);
        out = {{"valid", true},
               {"kind", "graph"},
               {"vertices", g.graph.vertex_count()},
               {"edges", g.graph.edge_count()},
               {"connected", g.graph.vertex_count() > 0 && cforest::is_connected(g.graph)},
               {"tree", cforest::is_tree(g.graph)}};
      } else {
        const auto z = cforest::io::space_from_json(doc);
        out = {{"valid", true}, {"kind", "metric"}, {"points", z.size()}, {"diameter", z.diameter()},
               {"ultrametric", cforest::is_ultrametric(z).ultrametric}};
      }
    } else {
      const auto z = cforest::io::parse_space_csv(text);
      out = {{"valid", true}, {"kind", "metric"}, {"points", z.size()}, {"diameter", z.diameter()},
             {"ultrametric", cforest::is_ultrametric(z).ultrametric}};
    }
  });
  if (status != CF_OK && status != CF_IO && status != CF_INVALID_ARGUMENT) {
    out = {{"valid", false}, {"error", last_failure().code.empty() ? "ParseError" : last_failure().code},
           {"message", last_error()}, {"witness", last_failure().witness}};
  }
  if (!out.is_null()) {
    try {
      *report = copy_string(dump(out));
    } catch (...) {
      return CF_INTERNAL;
    }
  }
  return status;
}

}  // extern "C"
