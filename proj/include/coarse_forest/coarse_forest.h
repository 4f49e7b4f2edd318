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
#ifndef COARSE_FOREST_COARSE_FOREST_H
#define COARSE_FOREST_COARSE_FOREST_H

#include <stddef.h>

#if defined(_WIN32)
#define CF_API __declspec(dllexport)
#else
#define CF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* A validated finite metric space. */
typedef struct cf_space cf_space;
/* A graph with optional levels, edge kinds, balls and vertex attributes. */
typedef struct cf_graph cf_graph;

typedef enum cf_status {
  CF_OK = 0,
  CF_INVALID_ARGUMENT = 1,
  CF_PARSE = 2,
  CF_METRIC = 3,        /* input violates a metric axiom */
  CF_DISCONNECTED = 4,
  CF_NOT_A_TREE = 5,
  CF_RANGE_EXHAUSTED = 6,
  CF_BUDGET = 7,
  CF_IO = 8,
  CF_INTERNAL = 9
} cf_status;

/* Message of the last failure on the calling thread; empty after success. */
CF_API const char* cf_last_error(void);
CF_API const char* cf_status_name(cf_status status);
/* Frees strings returned through char** out-parameters. */
CF_API void cf_string_free(char* s);

/* dist is n*n row-major; ids may be NULL (points are then named 0..n-1). */
CF_API cf_status cf_space_from_matrix(const double* dist, size_t n, const char* const* ids,
                                      cf_space** out);
/* CSV matrix or JSON {"ids","dist"} / {"points","metric"}. */
CF_API cf_status cf_space_load(const char* path, cf_space** out);
CF_API cf_status cf_space_from_text(const char* text, cf_space** out);
CF_API size_t cf_space_size(const cf_space* z);
CF_API double cf_space_distance(const cf_space* z, size_t i, size_t j);
CF_API void cf_space_free(cf_space* z);

CF_API cf_status cf_graph_load(const char* path, cf_graph** out);
CF_API cf_status cf_graph_from_json(const char* text, cf_graph** out);
CF_API size_t cf_graph_vertex_count(const cf_graph* g);
CF_API size_t cf_graph_edge_count(const cf_graph* g);
CF_API void cf_graph_free(cf_graph* g);
CF_API cf_status cf_graph_to_json(const cf_graph* g, char** out);
CF_API cf_status cf_graph_to_dot(const cf_graph* g, char** out);

/* Levels k with r^k in [min positive distance / 2, 2 diameter]. */
CF_API cf_status cf_analyzable_levels(const cf_space* z, const char* r, int* lo, int* hi);

CF_API cf_status cf_build_rips(const cf_space* z, double t, cf_graph** out);
CF_API cf_status cf_build_rh(const cf_space* z, const char* r, int k_min, int k_max,
                             cf_graph** out);
/* metric_balls != 0 decides ball relations from center distances. */
CF_API cf_status cf_build_h(const cf_space* z, const char* r, int k_min, int k_max,
                            int metric_balls, cf_graph** out);
CF_API cf_status cf_build_gamma_graph(const cf_graph* x, double R, cf_graph** out);
CF_API cf_status cf_build_gamma_space(const cf_space* z, double R, cf_graph** out);

/* op: "delta", "bottleneck", "properness", "expansion", "gamma".
   params_json may be NULL; the report is a JSON object. */
CF_API cf_status cf_analyze_graph(const cf_graph* g, const char* op, const char* params_json,
                                  char** report);
/* op: "levels", "pq", "distortion", "ultrametric". */
CF_API cf_status cf_analyze_space(const cf_space* z, const char* op, const char* params_json,
                                  char** report);

/* Runs the tree-quotient pipeline. params_json holds "f" (array) or
   "fAttribute" (vertex attribute name), and optionally "L", "N", "seed",
   "pairBudget". Returns the tree and a manifest JSON. */
CF_API cf_status cf_treeify(const cf_graph* x, const char* params_json, cf_graph** tree,
                            char** manifest);
/* Same over a metric space, discretized at scale "R" (required in params). */
CF_API cf_status cf_treeify_space(const cf_space* z, const char* params_json, cf_graph** tree,
                                  char** manifest);

/* Validates a metric or graph file. The report is written on success and on
   validation failure (with the violated axiom and witness indices). */
CF_API cf_status cf_validate_file(const char* path, char** report);

#ifdef __cplusplus
}  /* extern "C" */
#endif

#endif  /* COARSE_FOREST_COARSE_FOREST_H */
