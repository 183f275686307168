#ifndef WST_H
#define WST_H

/* C interface to the weighted-summation-tree library: opaque instance
 * handles, integer status codes, and serialized (CSV/JSON) reports for the
 * structured results. Strings returned through char** are heap-allocated;
 * release them with wst_string_free. */

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum wst_status {
  WST_OK = 0,
  WST_ERR_MALFORMED_TREE = 1,
  WST_ERR_MALFORMED_INPUT = 2,
  WST_ERR_UNKNOWN_NODE = 3,
  WST_ERR_NOT_COMPARABLE = 4,
  WST_ERR_SIZE_LIMIT = 5,
  WST_ERR_INFEASIBLE_NET = 6,
  WST_ERR_EMPTY_MEASURE = 7,
  WST_ERR_MISMATCHED_PARTITION = 8,
  WST_ERR_INVARIANT = 9,
  WST_ERR_USAGE = 10,
  WST_ERR_INTERNAL = 11
} wst_status;

typedef struct wst_instance wst_instance;

const char* wst_version(void);

/* Message for the most recent failing call on this thread. */
const char* wst_last_error(void);

/* Tree file: "<id> <parent-id-or-dash>" per line; weight file:
 * "<id> <alpha> <sigma>" per line; q in (1, 2]. */
wst_status wst_instance_load(const char* tree_path, const char* weights_path, double q,
                             wst_instance** out);

/* shape: "binary" (depth_or_size = truncation depth), "chain" or "random"
 * (depth_or_size = node count). profile: "corollary", "constant",
 * "random-levels", or "custom" with weights_path set. */
wst_status wst_instance_generate(const char* shape, int depth_or_size, const char* profile,
                                 const char* weights_path, double q, uint64_t seed,
                                 wst_instance** out);
void wst_instance_free(wst_instance* inst);

/* Rescales alpha by c0^{-(1-1/q)} (the covering-hypothesis scaling). */
wst_status wst_instance_normalize(const wst_instance* inst, double c0, wst_instance** out);

/* Smallest c0 >= 1 making the exact chain construction to `levels` feasible;
 * writes the rescaled instance and the constant used. */
wst_status wst_instance_auto_scale(const wst_instance* inst, int levels, wst_instance** out,
                                   double* c0_used);

wst_status wst_instance_save(const wst_instance* inst, const char* tree_path,
                             const char* weights_path);
int wst_instance_node_count(const wst_instance* inst);
wst_status wst_kappa(const wst_instance* inst, double* out);

/* metric: 0 = d (dyadic weights), 1 = d_I, 2 = d with the original sigma.
 * d_I of an incomparable pair reports as +inf. */
wst_status wst_distance(const wst_instance* inst, int t, int s, int metric, double* out);

/* CSV "t,s,d,d_I" over all pairs; fails with WST_ERR_SIZE_LIMIT when the
 * node count exceeds max_nodes. */
wst_status wst_dist_table_csv(const wst_instance* inst, int max_nodes, char** out_csv);

/* kind: 0 = ball covering number, 1 = order net. metric (order nets only):
 * 0 = d, 1 = d_I. mode: 0 = exact, 1 = greedy.
 * CSV "epsilon,value,exact,centers" with ';'-joined centers. */
wst_status wst_nets_csv(const wst_instance* inst, const double* eps, int eps_count, int kind,
                        int metric, int mode, int exact_cap, char** out_csv);

wst_status wst_epsilon_schedule(int m, double q, double* out);

/* Root chain, tree partitions and invariant checks as JSON.
 * mode: 0 = exact, 1 = greedy (greedy leaves property (4) unverified). */
wst_status wst_partitions_json(const wst_instance* inst, int levels, int mode,
                               int check_minimality, int include_members, char** out_json);

/* mu_spec: "random:<seed>" or a path to a file of "<node> <value>" lines. */
wst_status wst_decompose_json(const wst_instance* inst, const char* mu_spec, int n, int levels,
                              char** out_json);

/* op: "V", "W", "W1", "W2", "W3", "WL", "xL". Component operators need
 * mu_spec and decomp_n (the n the light partition is built for).
 * CSV "n,lower,upper,method_lower,method_upper,slope_fit". */
wst_status wst_entropy_csv(const wst_instance* inst, const int* n_grid, int n_count, int budget,
                           uint64_t seed, const char* op, const char* mu_spec, int decomp_n,
                           char** out_csv);

wst_status wst_verify_json(const wst_instance* inst, int chain_depth, int mu_count, uint64_t seed,
                           int* pass, char** out_json);

void wst_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* WST_H */
