// Copyright 2026 The tsteer Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TSTEER_TSTEER_H_
#define TSTEER_TSTEER_H_

/* C interface to the tsteer library.
 *
 * Every function returns a tsteer_status. On failure, tsteer_last_error()
 * returns a message for the calling thread, valid until its next call into
 * the library. Strings handed out through char** parameters are owned by the
 * caller and released with tsteer_string_free(). Handles are immutable after
 * creation and may be shared between threads. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(TSTEER_BUILDING)
#define TSTEER_API __declspec(dllexport)
#else
#define TSTEER_API __declspec(dllimport)
#endif
#else
#define TSTEER_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values double as process exit codes for the command-line tool. */
typedef enum tsteer_status {
  TSTEER_OK = 0,
  TSTEER_ERR_INPUT = 2,     /* malformed or out-of-range input */
  TSTEER_ERR_NUMERICAL = 3, /* SDP did not reach optimality */
  TSTEER_ERR_SELFTEST = 4,  /* selftest ran and at least one check failed */
  TSTEER_ERR_INTERNAL = 5
} tsteer_status;

typedef enum tsteer_mode {
  TSTEER_MODE_INDIVIDUAL = 0,
  TSTEER_MODE_UNCONDITIONAL = 1
} tsteer_mode;

typedef enum tsteer_format { TSTEER_FORMAT_JSON = 0, TSTEER_FORMAT_CSV = 1, TSTEER_FORMAT_TEXT = 2 } tsteer_format;

typedef enum tsteer_fault { TSTEER_FAULT_NONE = 0, TSTEER_FAULT_LOWER_BOUND_SIGN = 1 } tsteer_fault;

typedef struct tsteer_channel tsteer_channel;
typedef struct tsteer_assemblage tsteer_assemblage;

typedef struct tsteer_analysis_options {
  int n;              /* 2 or 3; ignored when bases is set */
  const int* bases;   /* optional explicit basis indices (1=x, 2=y, 3=z) */
  size_t bases_count;
  int mode;           /* tsteer_mode selecting the headline verdict */
  int has_q_override; /* unconditional-mode QBER threshold override */
  double q_override;
  double sdp_tol;     /* <= 0 selects the default */
} tsteer_analysis_options;

typedef struct tsteer_simulation_options {
  int n;          /* 0 keeps the config's protocol, 2 = BB84, 3 = B98 */
  int has_seed;
  uint64_t seed;
  int has_rounds;
  uint64_t rounds;
  int keep_records; /* -1 keeps the config's choice */
  unsigned threads; /* 0: hardware concurrency */
} tsteer_simulation_options;

TSTEER_API void tsteer_default_analysis_options(tsteer_analysis_options* options);
TSTEER_API void tsteer_default_simulation_options(tsteer_simulation_options* options);

TSTEER_API const char* tsteer_version(void);
TSTEER_API const char* tsteer_last_error(void);
TSTEER_API void tsteer_string_free(char* s);

TSTEER_API tsteer_status tsteer_channel_from_json(const char* json, tsteer_channel** out);
TSTEER_API tsteer_status tsteer_channel_to_json(const tsteer_channel* channel, char** out);
TSTEER_API void tsteer_channel_free(tsteer_channel* channel);

TSTEER_API tsteer_status tsteer_assemblage_from_json(const char* json, tsteer_assemblage** out);
/* Linear-inversion reconstruction from tomography counts (CSV i,a,j,b,count). */
TSTEER_API tsteer_status tsteer_assemblage_from_counts_csv(const char* csv, tsteer_assemblage** out);
TSTEER_API tsteer_status tsteer_assemblage_from_channel(const tsteer_channel* channel, const int* bases,
                                                        size_t bases_count, tsteer_assemblage** out);
TSTEER_API tsteer_status tsteer_assemblage_to_json(const tsteer_assemblage* assemblage, char** out);
TSTEER_API void tsteer_assemblage_free(tsteer_assemblage* assemblage);

/* Exact steering report for a channel (JSON). */
TSTEER_API tsteer_status tsteer_analyze(const tsteer_channel* channel, const tsteer_analysis_options* options,
                                        char** report_json);

/* Steerable weight report (JSON). With include_sdp nonzero the SDP problem and
 * solution dumps are embedded for external cross-checks. */
TSTEER_API tsteer_status tsteer_weight(const tsteer_assemblage* assemblage, double sdp_tol, int include_sdp,
                                       char** out_json);

/* Runs a QKD session. config_json (SessionConfig) and channel_json may each be
 * NULL, but not both; channel_json replaces the config's channel. records_csv
 * may be NULL; otherwise it receives the per-round CSV (empty when records
 * are not kept). */
TSTEER_API tsteer_status tsteer_simulate(const char* config_json, const char* channel_json,
                                         const tsteer_simulation_options* sim,
                                         const tsteer_analysis_options* analysis, char** result_json,
                                         char** records_csv);

/* Sweeps one named numeric parameter of channel_json over grid. */
TSTEER_API tsteer_status tsteer_sweep(const char* channel_json, const char* parameter, const double* grid,
                                      size_t grid_count, const tsteer_analysis_options* options, unsigned threads,
                                      int format, char** out);

/* Runs the invariant catalog; text receives the printed table and matrix.
 * Returns TSTEER_ERR_SELFTEST when any check fails. */
TSTEER_API tsteer_status tsteer_selftest(int fault, double sdp_tol, int format, char** out);

#ifdef __cplusplus
}
#endif

#endif /* TSTEER_TSTEER_H_ */
