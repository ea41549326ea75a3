#ifndef CIDK_CIDK_H
#define CIDK_CIDK_H

/* C interface to the proof kernel. Strings returned through `char**` are
 * owned by the caller and released with cidk_string_free. Functions never
 * throw; failures are reported through cidk_status and cidk_last_error. */

#include <stddef.h>

#if defined(_WIN32)
#  if defined(CIDK_BUILDING)
#    define CIDK_API __declspec(dllexport)
#  else
#    define CIDK_API __declspec(dllimport)
#  endif
#else
#  define CIDK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct cidk_proof cidk_proof;

typedef enum cidk_status {
  CIDK_OK = 0,
  CIDK_CHECK_FAILED = 1, /* diagnostics, progress failure, false root */
  CIDK_USAGE = 2,        /* bad arguments, unreadable or unparseable input */
  CIDK_BOUND_LIMITED = 3,
  CIDK_INTERNAL = 4
} cidk_status;

typedef enum cidk_mode {
  CIDK_MODE_AS_DECLARED = 0,
  CIDK_MODE_FINITARY = 1,
  CIDK_MODE_CYCLIC = 2
} cidk_mode;

CIDK_API const char* cidk_version(void);
/* Message of the last failing call on this thread, or "". */
CIDK_API const char* cidk_last_error(void);
CIDK_API void cidk_string_free(char* s);

CIDK_API cidk_status cidk_proof_parse(const char* text, cidk_proof** out);
CIDK_API cidk_status cidk_proof_load(const char* path, cidk_proof** out);
CIDK_API void cidk_proof_free(cidk_proof* p);
CIDK_API size_t cidk_proof_node_count(const cidk_proof* p);
/* 1 if the proof graph has a cycle. */
CIDK_API int cidk_proof_is_cyclic(const cidk_proof* p);
CIDK_API cidk_status cidk_proof_serialize(const cidk_proof* p, char** out);

/* Local checks plus, for cyclic proofs, the global trace condition. Progress
 * failure only affects the status when require_progress is set. */
CIDK_API cidk_status cidk_proof_check(const cidk_proof* p, cidk_mode mode, int require_progress,
                                      char** report);
/* Finitary proof to cyclic proof. CIDK_USAGE for cyclic input; CIDK_OK only
 * if the output checks and progresses. `out` is set whenever a translation
 * was produced. */
CIDK_API cidk_status cidk_proof_translate(const cidk_proof* in, cidk_proof** out, char** report);
/* Trace graphs of every edge, one block per edge. */
CIDK_API cidk_status cidk_proof_trace_graphs(const cidk_proof* p, char** out);

/* `assignment` is "x=1,y=2" or NULL. With strict_exact, an inexact verdict
 * yields CIDK_BOUND_LIMITED. `preds` is an optional proof file whose
 * predicate declarations become visible by name. */
CIDK_API cidk_status cidk_eval(const char* formula, unsigned bound, const char* assignment,
                               const cidk_proof* preds, int strict_exact, char** out);
/* Stage/entry table as TSV. */
CIDK_API cidk_status cidk_profile(const char* pred, unsigned bound, const cidk_proof* preds,
                                  char** out);
CIDK_API cidk_status cidk_countermodel(const cidk_proof* p, unsigned bound, const char* assignment,
                                       unsigned max_steps, char** out);

#ifdef __cplusplus
}
#endif

#endif
