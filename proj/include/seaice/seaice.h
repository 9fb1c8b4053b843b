/* SPDX-License-Identifier: Apache-2.0 */
/*
 * C interface of the sea-ice solver library.
 *
 * Every fallible call returns a seaice_status; on failure the message of
 * the most recent error on the calling thread is available from
 * seaice_last_error(). Handles are opaque and owned by the caller, who
 * releases them with the matching *_free function (NULL is accepted).
 */
#ifndef SEAICE_H
#define SEAICE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SEAICE_API __declspec(dllexport)
#else
#define SEAICE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum seaice_status {
  SEAICE_OK = 0,
  SEAICE_ERR_INVALID_ARGUMENT = 1,
  SEAICE_ERR_PARSE = 2,
  SEAICE_ERR_VALIDATION = 3,
  SEAICE_ERR_IO = 4,
  SEAICE_ERR_CFL = 5,
  SEAICE_ERR_DEGENERATE_THICKNESS = 6,
  SEAICE_ERR_NO_CONVERGENCE = 7,
  SEAICE_ERR_NON_CONTRACTION = 8,
  SEAICE_ERR_BOUND_VIOLATION = 9,
  SEAICE_ERR_INTERNAL = 100
} seaice_status;

typedef struct seaice_config seaice_config;
typedef struct seaice_state seaice_state;

SEAICE_API const char* seaice_version(void);
SEAICE_API const char* seaice_status_string(seaice_status s);
/* Message of the last failed call on this thread, "" if none. */
SEAICE_API const char* seaice_last_error(void);

/* ---- configuration ---- */

SEAICE_API seaice_status seaice_config_load(const char* path, seaice_config** out);
/* base_dir resolves relative snapshot paths; NULL means ".". */
SEAICE_API seaice_status seaice_config_parse(const char* json_text, const char* base_dir, seaice_config** out);
SEAICE_API void seaice_config_free(seaice_config* cfg);
/* Writes the serialized config (with NUL); *needed gets the required
 * capacity including the terminator. buf == NULL with cap == 0 only queries
 * the size; a smaller buffer gives SEAICE_ERR_INVALID_ARGUMENT. */
SEAICE_API seaice_status seaice_config_serialize(const seaice_config* cfg, char* buf, size_t cap, size_t* needed);
SEAICE_API seaice_status seaice_config_save(const seaice_config* cfg, const char* path);

/* Overrides; each revalidates the config and leaves it untouched on failure. */
SEAICE_API seaice_status seaice_config_set_seed(seaice_config* cfg, uint64_t seed);
/* Sets nx = ny = n. */
SEAICE_API seaice_status seaice_config_set_grid_size(seaice_config* cfg, int n);
SEAICE_API seaice_status seaice_config_set_end_time(seaice_config* cfg, double T);
SEAICE_API seaice_status seaice_config_set_out_dir(seaice_config* cfg, const char* dir);
SEAICE_API seaice_status seaice_config_set_fail_fast(seaice_config* cfg, int on);
SEAICE_API seaice_status seaice_config_get_seed(const seaice_config* cfg, uint64_t* seed);
/* The pointer stays valid until the next override on cfg. */
SEAICE_API seaice_status seaice_config_get_out_dir(const seaice_config* cfg, const char** dir);

/* ---- states and snapshots ---- */

SEAICE_API seaice_status seaice_state_from_config(const seaice_config* cfg, seaice_state** out);
SEAICE_API seaice_status seaice_state_read(const char* manifest_path, seaice_state** out);
SEAICE_API seaice_status seaice_state_write(const seaice_state* st, const char* manifest_path);
SEAICE_API void seaice_state_free(seaice_state* st);
SEAICE_API seaice_status seaice_state_grid(const seaice_state* st, int* nx, int* ny, double* lx, double* ly);
SEAICE_API seaice_status seaice_state_time(const seaice_state* st, double* t);
/* name is one of "u_x", "u_y", "h", "A"; len must equal nx * ny. */
SEAICE_API seaice_status seaice_state_get_field(const seaice_state* st, const char* name, double* buf, size_t len);

/* ---- experiments ----
 * Each writes its artifacts (CSV tables, snapshots, the effective config)
 * below the configured output directory. */

typedef struct seaice_run_summary {
  double t_end;
  int records;
  int slabs;
  int violations;
  double mass_initial;
  double mass_final;
  double residual; /* largest assembled-step residual in velocity units */
} seaice_run_summary;

SEAICE_API seaice_status seaice_run(const seaice_config* cfg, seaice_run_summary* out);

typedef struct seaice_picard_summary {
  int slabs;              /* slab lengths tried */
  int located;            /* 1 if some slab showed three consecutive ratios <= target */
  double T_located;
  double target;
  int final_ratio_nonincreasing; /* last ratio never grows as the slab is halved */
} seaice_picard_summary;

SEAICE_API seaice_status seaice_picard_study(const seaice_config* cfg, seaice_picard_summary* out);

typedef struct seaice_continuation_summary {
  int differences;
  int strictly_decreasing;
  double d_first;
  double d_last;
} seaice_continuation_summary;

SEAICE_API seaice_status seaice_continuation_study(const seaice_config* cfg, seaice_continuation_summary* out);

typedef struct seaice_stability_summary {
  int count;
  double min_ratio;
  double max_ratio;
  int within_spread; /* max_ratio <= max_spread * min_ratio */
} seaice_stability_summary;

SEAICE_API seaice_status seaice_stability_study(const seaice_config* cfg, seaice_stability_summary* out);

typedef struct seaice_invariant_row {
  const char* suite;
  const char* check;
  int samples;
  double worst;
  double tolerance;
  int pass;
} seaice_invariant_row;

typedef void (*seaice_invariant_fn)(const seaice_invariant_row* row, void* user);

/* Runs the randomized invariant suite; rows are reported through cb as
 * they complete (cb may be NULL). *failures receives the failed count. */
SEAICE_API seaice_status seaice_check_invariants(uint64_t seed, seaice_invariant_fn cb, void* user, int* failures);

#ifdef __cplusplus
}
#endif

#endif /* SEAICE_H */
