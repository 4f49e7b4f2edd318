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
// coarse-forest: builds hyperbolic approximations, checks coarse properties
// and runs the tree quotient on metric spaces and graphs.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "CLI11.hpp"
#include "coarse_forest/coarse_forest.h"
#include "json.hpp"

namespace {

using Json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitProperty = 3;
constexpr int kExitBudget = 4;
constexpr int kExitInternal = 1;

int exit_code(cf_status status) {
  switch (status) {
    case CF_OK: return kExitOk;
    case CF_INVALID_ARGUMENT:
    case CF_PARSE:
    case CF_METRIC:
    case CF_DISCONNECTED:
    case CF_IO: return kExitInput;
    case CF_NOT_A_TREE:
    case CF_RANGE_EXHAUSTED: return kExitProperty;
    case CF_BUDGET: return kExitBudget;
    case CF_INTERNAL: return kExitInternal;
  }
  return kExitInternal;
}

// Carries a failed status out of a command.
struct Failure {
  cf_status status;
};

void check(cf_status status) {
  if (status != CF_OK) {
    std::cerr << "coarse-forest: " << cf_last_error() << '\n';
    throw Failure{status};
  }
}

void fail(const std::string& message) {
  std::cerr << "coarse-forest: " << message << '\n';
  throw Failure{CF_INVALID_ARGUMENT};
}

struct SpaceDeleter {
  void operator()(cf_space* z) const { cf_space_free(z); }
};
struct GraphDeleter {
  void operator()(cf_graph* g) const { cf_graph_free(g); }
};
struct StringDeleter {
  void operator()(char* s) const { cf_string_free(s); }
};
using SpacePtr = std::unique_ptr<cf_space, SpaceDeleter>;
using GraphPtr = std::unique_ptr<cf_graph, GraphDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "coarse-forest: cannot open " << path << '\n';
    throw Failure{CF_IO};
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) {
    std::cerr << "coarse-forest: cannot write " << path << '\n';
    throw Failure{CF_IO};
  }
}

std::string fnv1a(const std::string& bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buffer[17];
  std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(hash));
  return buffer;
}

// Graph JSON is recognized by its "vertices" member; anything else is read as
// a metric space.
bool is_graph_text(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos || text[first] != '{') return false;
  const Json doc = Json::parse(text, nullptr, false);
  return !doc.is_discarded() && doc.is_object() && doc.contains("vertices");
}

struct Input {
  std::string path;
  std::string text;
  SpacePtr space;
  GraphPtr graph;
};

Input load_input(const std::string& path) {
  Input in;
  in.path = path;
  in.text = read_text(path);
  if (is_graph_text(in.text)) {
    cf_graph* g = nullptr;
    check(cf_graph_from_json(in.text.c_str(), &g));
    in.graph.reset(g);
  } else {
    cf_space* z = nullptr;
    check(cf_space_from_text(in.text.c_str(), &z));
    in.space.reset(z);
  }
  return in;
}

std::pair<int, int> parse_levels(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) fail("--levels expects a..b, got \"" + text + "\"");
  try {
    return {std::stoi(text.substr(0, dots)), std::stoi(text.substr(dots + 2))};
  } catch (const std::exception&) {
    fail("--levels expects integers, got \"" + text + "\"");
  }
  return {0, 0};
}

// f as "index", "constant", a file (JSON array, JSON object id -> value, or
// whitespace-separated numbers), or else a numeric vertex attribute name.
// Writes "f" or "fAttribute" into params.
void resolve_function(const std::string& spec, std::size_t n, const std::vector<std::string>& ids,
                      Json& params) {
  if (spec == "index" || spec == "constant") {
    std::vector<double> f(n, 0.0);
    if (spec == "index")
      for (std::size_t i = 0; i < n; ++i) f[i] = static_cast<double>(i);
    params["f"] = f;
    return;
  }
  std::ifstream probe(spec);
  if (!probe) {
    params["fAttribute"] = spec;
    return;
  }
  const std::string text = read_text(spec);
  const Json doc = Json::parse(text, nullptr, false);
  std::vector<double> f;
  if (!doc.is_discarded() && doc.is_array()) {
    f = doc.get<std::vector<double>>();
  } else if (!doc.is_discarded() && doc.is_object()) {
    for (const auto& id : ids) {
      if (!doc.contains(id)) fail("f file has no value for \"" + id + "\"");
      f.push_back(doc.at(id).get<double>());
    }
  } else {
    std::istringstream in(text);
    double value;
    while (in >> value) f.push_back(value);
    if (!in.eof()) fail("f file " + spec + " is not a list of numbers");
  }
  if (f.size() != n) fail("f has " + std::to_string(f.size()) + " values for " + std::to_string(n) + " vertices");
  params["f"] = f;
}

std::vector<std::string> graph_ids(cf_graph* g) {
  char* text = nullptr;
  check(cf_graph_to_json(g, &text));
  StringPtr owned(text);
  std::vector<std::string> ids;
  for (const auto& v : Json::parse(text).at("vertices")) ids.push_back(v.at("id").get<std::string>());
  return ids;
}

Json manifest_base(const std::string& command, const Input& in, const Json& parameters) {
  return {{"command", command},
          {"input", in.path},
          {"inputDigest", "fnv1a64:" + fnv1a(in.text)},
          {"parameters", parameters},
          {"outputs", Json::array()}};
}

void write_manifest(const std::string& path, const Json& manifest) {
  if (!path.empty()) write_text(path, manifest.dump(2) + "\n");
}

struct ValidateArgs {
  std::string input;
};

int run_validate(const ValidateArgs& args) {
  char* report = nullptr;
  const cf_status status = cf_validate_file(args.input.c_str(), &report);
  StringPtr owned(report);
  if (report != nullptr) std::cout << report;
  if (status != CF_OK) std::cerr << "coarse-forest: " << cf_last_error() << '\n';
  return exit_code(status);
}

struct BuildArgs {
  std::string input;
  std::string flavor = "h";
  std::string r = "1/6";
  double t = 1.0;
  double R = 1.0;
  std::string levels;
  std::string ball_mode = "subset";
  std::string out;
  std::string dot;
  std::string manifest;
};

int run_build(const BuildArgs& args) {
  Input in = load_input(args.input);
  Json parameters = {{"flavor", args.flavor}};
  cf_graph* result = nullptr;
  if (args.flavor == "gamma") {
    parameters["R"] = args.R;
    if (in.graph) check(cf_build_gamma_graph(in.graph.get(), args.R, &result));
    else check(cf_build_gamma_space(in.space.get(), args.R, &result));
  } else {
    if (!in.space) fail("--flavor " + args.flavor + " needs a metric space input");
    if (args.flavor == "rips") {
      parameters["t"] = args.t;
      check(cf_build_rips(in.space.get(), args.t, &result));
    } else if (args.flavor == "rh" || args.flavor == "h") {
      int lo = 0, hi = 0;
      if (args.levels.empty()) check(cf_analyzable_levels(in.space.get(), args.r.c_str(), &lo, &hi));
      else std::tie(lo, hi) = parse_levels(args.levels);
      parameters["r"] = args.r;
      parameters["levels"] = {lo, hi};
      if (args.flavor == "rh") {
        check(cf_build_rh(in.space.get(), args.r.c_str(), lo, hi, &result));
      } else {
        if (args.ball_mode != "subset" && args.ball_mode != "metric") fail("--ball-mode must be subset or metric");
        parameters["ballMode"] = args.ball_mode;
        check(cf_build_h(in.space.get(), args.r.c_str(), lo, hi, args.ball_mode == "metric", &result));
      }
    } else {
      fail("unknown flavor \"" + args.flavor + "\"");
    }
  }
  GraphPtr graph(result);
  Json manifest = manifest_base("build", in, parameters);
  char* json = nullptr;
  check(cf_graph_to_json(graph.get(), &json));
  StringPtr owned_json(json);
  write_text(args.out, json);
  if (!args.out.empty()) manifest["outputs"].push_back(args.out);
  if (!args.dot.empty()) {
    char* dot = nullptr;
    check(cf_graph_to_dot(graph.get(), &dot));
    StringPtr owned_dot(dot);
    write_text(args.dot, dot);
    manifest["outputs"].push_back(args.dot);
  }
  write_manifest(args.manifest, manifest);
  return kExitOk;
}

struct AnalyzeArgs {
  std::string input;
  std::string op;
  std::string r;
  std::size_t D = 1;
  std::string levels;
  std::string flavor = "rh";
  std::string ball_mode = "subset";
  double N = 1.0;
  double step = 1.0;
  std::string bands = "closed";
  std::vector<double> thresholds;
  std::string f;
  double R = 0.0;
  std::uint64_t seed = 0;
  std::size_t budget = 0;
  std::string out;
  std::string manifest;
};

int run_analyze(const AnalyzeArgs& args) {
  Input in = load_input(args.input);
  Json params = Json::object();
  if (!args.r.empty()) params["r"] = args.r;
  if (args.seed != 0) params["seed"] = args.seed;
  if (args.budget != 0) params["budget"] = args.budget;
  char* report = nullptr;
  const std::string& op = args.op;
  if (op == "levels" || op == "pq" || op == "distortion" || op == "ultrametric") {
    if (!in.space) fail("--op " + op + " needs a metric space input");
    if (op != "ultrametric" && args.r.empty()) fail("--op " + op + " needs --r");
    if (!args.levels.empty()) {
      const auto [lo, hi] = parse_levels(args.levels);
      params["levels"] = {lo, hi};
    }
    if (op == "pq") params["D"] = args.D;
    if (op == "levels") params["flavor"] = args.flavor;
    if (op == "levels" || op == "distortion") params["ballMode"] = args.ball_mode;
    check(cf_analyze_space(in.space.get(), op.c_str(), params.dump().c_str(), &report));
  } else {
    if (!in.graph) fail("--op " + op + " needs a graph JSON input");
    if (op == "properness" || op == "expansion") {
      if (args.f.empty()) fail("--op " + op + " needs --f");
      resolve_function(args.f, cf_graph_vertex_count(in.graph.get()), graph_ids(in.graph.get()), params);
    }
    if (op == "properness") {
      params["N"] = args.N;
      params["step"] = args.step;
      params["bands"] = args.bands;
    }
    if (op == "expansion" && !args.thresholds.empty()) params["thresholds"] = args.thresholds;
    if (op == "gamma") params["R"] = args.R;
    check(cf_analyze_graph(in.graph.get(), op.c_str(), params.dump().c_str(), &report));
  }
  StringPtr owned(report);
  write_text(args.out, report);
  Json manifest = manifest_base("analyze", in, params);
  manifest["op"] = op;
  if (!args.out.empty()) manifest["outputs"].push_back(args.out);
  write_manifest(args.manifest, manifest);
  return kExitOk;
}

struct TreeifyArgs {
  std::string input;
  std::string f = "index";
  double R = 0.0;
  long L = -1;
  double N = 1.0;
  std::uint64_t seed = 0;
  std::size_t budget = 0;
  std::string out;
  std::string manifest;
};

int run_treeify(const TreeifyArgs& args) {
  Input in = load_input(args.input);
  Json params = Json::object();
  if (args.L >= 0) params["L"] = args.L;
  params["N"] = args.N;
  if (args.seed != 0) params["seed"] = args.seed;
  if (args.budget != 0) params["pairBudget"] = args.budget;
  cf_graph* tree = nullptr;
  char* run = nullptr;
  if (in.graph) {
    resolve_function(args.f, cf_graph_vertex_count(in.graph.get()), graph_ids(in.graph.get()), params);
    check(cf_treeify(in.graph.get(), params.dump().c_str(), &tree, &run));
  } else {
    if (!(args.R > 0.0)) fail("a metric space input needs --R");
    const std::size_t n = cf_space_size(in.space.get());
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < n; ++i) ids.push_back(std::to_string(i));
    resolve_function(args.f, n, ids, params);
    if (params.contains("fAttribute")) fail("--f must be index, constant or a file for a metric space");
    params["R"] = args.R;
    check(cf_treeify_space(in.space.get(), params.dump().c_str(), &tree, &run));
  }
  GraphPtr owned_tree(tree);
  StringPtr owned_run(run);
  char* json = nullptr;
  check(cf_graph_to_json(tree, &json));
  StringPtr owned_json(json);

  Json recorded = params;
  if (recorded.contains("f") && args.f != "index" && args.f != "constant") {
    recorded.erase("f");
    recorded["fFile"] = args.f;
  } else if (recorded.contains("f")) {
    recorded.erase("f");
    recorded["f"] = args.f;
  }
  Json manifest = manifest_base("treeify", in, recorded);
  manifest["run"] = Json::parse(run);
  if (args.out.empty()) {
    std::cout << Json{{"tree", Json::parse(json)}, {"manifest", manifest}}.dump(2) << '\n';
    return kExitOk;
  }
  write_text(args.out, json);
  manifest["outputs"].push_back(args.out);
  const std::string manifest_path = args.manifest.empty() ? args.out + ".manifest.json" : args.manifest;
  manifest["outputs"].push_back(manifest_path);
  write_manifest(manifest_path, manifest);
  const auto& qi = manifest["run"]["qi"];
  std::cout << "tree: " << manifest["run"]["treeVertices"] << " vertices, " << manifest["run"]["treeEdges"]
            << " edges; lambda " << qi["lambda"] << ", C " << qi["C"] << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coarse geometry of finite metric spaces and graphs"};
  app.require_subcommand(1);

  ValidateArgs validate;
  auto* validate_cmd = app.add_subcommand("validate", "Check a distance matrix or graph file");
  validate_cmd->add_option("input", validate.input, "CSV or JSON input")->required();

  BuildArgs build;
  auto* build_cmd = app.add_subcommand("build", "Build an approximating graph");
  build_cmd->add_option("input", build.input, "metric space or graph JSON")->required();
  build_cmd->add_option("--flavor", build.flavor, "h, rh, rips or gamma")
      ->check(CLI::IsMember({"h", "rh", "rips", "gamma"}));
  build_cmd->add_option("--r", build.r, "parameter r, as p/q or a decimal");
  build_cmd->add_option("--t", build.t, "Rips scale");
  build_cmd->add_option("--R", build.R, "discretization scale");
  build_cmd->add_option("--levels", build.levels, "level range a..b (default: analyzable window)");
  build_cmd->add_option("--ball-mode", build.ball_mode, "subset or metric");
  build_cmd->add_option("--out", build.out, "graph JSON output (default stdout)");
  build_cmd->add_option("--dot", build.dot, "DOT output");
  build_cmd->add_option("--manifest", build.manifest, "run manifest output");

  AnalyzeArgs analyze;
  auto* analyze_cmd = app.add_subcommand("analyze", "Report a coarse invariant");
  analyze_cmd->add_option("input", analyze.input, "metric space or graph JSON")->required();
  analyze_cmd->add_option("--op", analyze.op, "analysis")
      ->required()
      ->check(CLI::IsMember({"delta", "bottleneck", "levels", "pq", "properness", "expansion", "distortion",
                             "gamma", "ultrametric"}));
  analyze_cmd->add_option("--r", analyze.r, "parameter r, as p/q or a decimal");
  analyze_cmd->add_option("--D", analyze.D, "hop bound for the pq detector");
  analyze_cmd->add_option("--levels", analyze.levels, "level range a..b");
  analyze_cmd->add_option("--flavor", analyze.flavor, "rh or h, for levels");
  analyze_cmd->add_option("--ball-mode", analyze.ball_mode, "subset or metric");
  analyze_cmd->add_option("--N", analyze.N, "band half width for properness");
  analyze_cmd->add_option("--step", analyze.step, "band center step for properness");
  analyze_cmd->add_option("--bands", analyze.bands, "closed or open");
  analyze_cmd->add_option("--thresholds", analyze.thresholds, "distances for the expansion profile");
  analyze_cmd->add_option("--f", analyze.f, "index, constant, a file, or a vertex attribute");
  analyze_cmd->add_option("--R", analyze.R, "discretization scale for gamma");
  analyze_cmd->add_option("--seed", analyze.seed, "sampling seed");
  analyze_cmd->add_option("--budget", analyze.budget, "sampling budget");
  analyze_cmd->add_option("--out", analyze.out, "report output (default stdout)");
  analyze_cmd->add_option("--manifest", analyze.manifest, "run manifest output");

  TreeifyArgs treeify;
  auto* treeify_cmd = app.add_subcommand("treeify", "Quotient a graph to a tree along a function");
  treeify_cmd->add_option("input", treeify.input, "graph JSON, or a metric space with --R")->required();
  treeify_cmd->add_option("--f", treeify.f, "index, constant, a file, or a vertex attribute");
  treeify_cmd->add_option("--R", treeify.R, "discretization scale for metric space input");
  treeify_cmd->add_option("--L", treeify.L, "trusted loop bound");
  treeify_cmd->add_option("--N", treeify.N, "band half width for the properness diagnostic");
  treeify_cmd->add_option("--seed", treeify.seed, "sampling seed");
  treeify_cmd->add_option("--budget", treeify.budget, "pair budget for the distortion estimate");
  treeify_cmd->add_option("--out", treeify.out, "tree JSON output");
  treeify_cmd->add_option("--manifest", treeify.manifest, "manifest output (default <out>.manifest.json)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*validate_cmd) return run_validate(validate);
    if (*build_cmd) return run_build(build);
    if (*analyze_cmd) return run_analyze(analyze);
    if (*treeify_cmd) return run_treeify(treeify);
  } catch (const Failure& f) {
    return exit_code(f.status);
  } catch (const std::exception& e) {
    std::cerr << "coarse-forest: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitOk;
}
