#ifndef FAIR_KSET_H
#define FAIR_KSET_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Algorithm selector for [`fks_solve`].
typedef enum FksMethod {
  FKS_METHOD_AUTO = 0,
  FKS_METHOD_DELTA2 = 1,
  FKS_METHOD_LAMINAR = 2,
  FKS_METHOD_ORACLE = 3,
  FKS_METHOD_LLL = 4,
  FKS_METHOD_PIPAGE = 5,
  FKS_METHOD_INDEPENDENT = 6,
} FksMethod;

// Status code returned by every fallible function.
typedef enum FksStatus {
  FKS_STATUS_OK = 0,
  FKS_STATUS_NULL_POINTER = 1,
  FKS_STATUS_INVALID_INPUT = 2,
  FKS_STATUS_SOLVER_ERROR = 3,
  FKS_STATUS_BUFFER_TOO_SMALL = 4,
  FKS_STATUS_PANIC = 5,
} FksStatus;

// Opaque instance handle.
typedef struct FksInstance FksInstance;

// Opaque selection handle.
typedef struct FksSelection FksSelection;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null. The pointer
// stays valid until the next call into this library on the same thread.
const char *fks_last_error(void);

// Parses a NUL-terminated JSON instance.
//
// # Safety
// `json` must be a valid C string and `out` a valid pointer.
enum FksStatus fks_instance_from_json(const char *json, struct FksInstance **out);

// Builds an instance from compressed rows: agent `u` is adjacent to
// `indices[offsets[u] .. offsets[u + 1]]`. `weights` may be null for unit
// weights, otherwise it holds `n_candidates` entries.
//
// # Safety
// `offsets` must hold `n_agents + 1` entries, `indices` at least
// `offsets[n_agents]`, and `out` must be valid.
enum FksStatus fks_instance_from_csr(uintptr_t n_agents,
                                     uintptr_t n_candidates,
                                     const uintptr_t *offsets,
                                     const uintptr_t *indices,
                                     const double *weights,
                                     uintptr_t demand,
                                     struct FksInstance **out);

// # Safety
// `instance` must come from this library and not be freed twice.
void fks_instance_free(struct FksInstance *instance);

// Number of agents, or 0 for a null handle.
//
// # Safety
// `instance` must be null or a live handle.
uintptr_t fks_instance_n_agents(const struct FksInstance *instance);

// # Safety
// `instance` must be null or a live handle.
uintptr_t fks_instance_n_candidates(const struct FksInstance *instance);

// # Safety
// `instance` must be null or a live handle.
uintptr_t fks_instance_demand(const struct FksInstance *instance);

// Maximum disagreement of the candidates `ids[0 .. len]`.
//
// # Safety
// `instance` must be live, `ids` must hold `len` entries (or be null when
// `len` is 0), and `value` must be valid.
enum FksStatus fks_evaluate(const struct FksInstance *instance,
                            const uintptr_t *ids,
                            uintptr_t len,
                            double *value);

// Solves `instance` with `method`.
//
// # Safety
// `instance` must be live and `out` valid.
enum FksStatus fks_solve(const struct FksInstance *instance,
                         enum FksMethod method,
                         uint64_t seed,
                         struct FksSelection **out);

// Number of selected candidates, or 0 for a null handle.
//
// # Safety
// `selection` must be null or a live handle.
uintptr_t fks_selection_len(const struct FksSelection *selection);

// Objective value, or NaN for a null handle.
//
// # Safety
// `selection` must be null or a live handle.
double fks_selection_value(const struct FksSelection *selection);

// Copies the sorted candidate ids into `buf`, which holds `cap` entries.
//
// # Safety
// `selection` must be live and `buf` must hold `cap` entries.
enum FksStatus fks_selection_ids(const struct FksSelection *selection,
                                 uintptr_t *buf,
                                 uintptr_t cap);

// # Safety
// `selection` must come from this library and not be freed twice.
void fks_selection_free(struct FksSelection *selection);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FAIR_KSET_H */
