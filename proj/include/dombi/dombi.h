#ifndef DOMBI_DOMBI_H
#define DOMBI_DOMBI_H

/* C interface to the automata pipeline. Every function returns a status;
 * results come back through out-parameters. Strings returned through char**
 * are owned by the caller and released with dombi_string_free. On failure
 * dombi_last_error() describes the error for the calling thread. */

#include <stddef.h>
#include <stdint.h>

#if defined(__GNUC__)
#define DOMBI_API __attribute__((visibility("default")))
#else
#define DOMBI_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dombi_status {
  DOMBI_OK = 0,
  DOMBI_ERR_ARGUMENT = 1,   /* bad argument or unknown name */
  DOMBI_ERR_PARSE = 2,      /* formula, session or serialized artifact */
  DOMBI_ERR_COMPILE = 3,
  DOMBI_ERR_ORBIT_BOUND = 4,
  DOMBI_ERR_DOMAIN = 5,     /* e.g. non-integer output while synthesizing */
  DOMBI_ERR_IO = 6,
  DOMBI_ERR_INTERNAL = 7
} dombi_status;

typedef struct dombi_session dombi_session;
typedef struct dombi_dfa dombi_dfa;
typedef struct dombi_linrep dombi_linrep;
typedef struct dombi_dfao dombi_dfao;
typedef struct dombi_pipeline dombi_pipeline;

DOMBI_API const char* dombi_last_error(void);
DOMBI_API const char* dombi_status_name(dombi_status status);
DOMBI_API void dombi_string_free(char* s);

/* Built-in session text (NUL-terminated, static). */
DOMBI_API const char* dombi_default_session(void);

/* ---- sessions and compilation ---------------------------------------- */

DOMBI_API dombi_status dombi_session_parse(const char* text, dombi_session** out);
DOMBI_API void dombi_session_free(dombi_session* s);

/* Automaton over the free variables of `formula`, tracks in name order. */
DOMBI_API dombi_status dombi_compile(const dombi_session* s, const char* formula, dombi_dfa** out);
DOMBI_API dombi_status dombi_session_predicate(const dombi_session* s, const char* name, dombi_dfa** out);
DOMBI_API void dombi_dfa_free(dombi_dfa* a);

DOMBI_API dombi_status dombi_dfa_states(const dombi_dfa* a, size_t* out);
DOMBI_API dombi_status dombi_dfa_tracks(const dombi_dfa* a, size_t* out);
DOMBI_API dombi_status dombi_dfa_track_name(const dombi_dfa* a, size_t track, char** out);
/* values[t] is the value on track t. */
DOMBI_API dombi_status dombi_dfa_accepts(const dombi_dfa* a, const uint64_t* values, size_t count, int* out);
DOMBI_API dombi_status dombi_dfa_text(const dombi_dfa* a, char** out);
DOMBI_API dombi_status dombi_dfa_dot(const dombi_dfa* a, char** out);

/* ---- linear representations -------------------------------------------- */

/* Counts accepted tuples with the variable `var` fixed to n. */
DOMBI_API dombi_status dombi_linrep_count(const dombi_dfa* a, const char* var, dombi_linrep** out);
DOMBI_API dombi_status dombi_linrep_from_text(const char* text, dombi_linrep** out);
DOMBI_API void dombi_linrep_free(dombi_linrep* r);

DOMBI_API dombi_status dombi_linrep_rank(const dombi_linrep* r, size_t* out);
/* n in decimal; result as a reduced rational "p" or "p/q". */
DOMBI_API dombi_status dombi_linrep_eval(const dombi_linrep* r, const char* n, char** out);
/* terms[i] weighted by coefficients[i], block-diagonal, unminimized. */
DOMBI_API dombi_status dombi_linrep_combine(const dombi_linrep* const* terms, const long* coefficients, size_t count, dombi_linrep** out);
DOMBI_API dombi_status dombi_linrep_minimize(const dombi_linrep* r, dombi_linrep** out);
DOMBI_API dombi_status dombi_linrep_text(const dombi_linrep* r, char** out);

/* ---- automata with output ---------------------------------------------- */

DOMBI_API dombi_status dombi_orbit(const dombi_linrep* r, size_t bound, dombi_dfao** out);
DOMBI_API void dombi_dfao_free(dombi_dfao* d);

DOMBI_API dombi_status dombi_dfao_states(const dombi_dfao* d, size_t* out);
DOMBI_API dombi_status dombi_dfao_value(const dombi_dfao* d, uint64_t n, int64_t* out);
/* Sorted distinct outputs of reachable states. Writes at most `capacity`
 * values and always sets *count to the full number. */
DOMBI_API dombi_status dombi_dfao_range(const dombi_dfao* d, int64_t* values, size_t capacity, size_t* count);
DOMBI_API dombi_status dombi_dfao_text(const dombi_dfao* d, char** out);
DOMBI_API dombi_status dombi_dfao_dot(const dombi_dfao* d, char** out);

/* ---- pipeline ---------------------------------------------------------- */

/* workspace may be NULL or "" (no caching); session NULL means the default. */
DOMBI_API dombi_status dombi_pipeline_open(const char* workspace, const char* session, dombi_pipeline** out);
DOMBI_API void dombi_pipeline_free(dombi_pipeline* p);

/* name: r3an, r3anm1, r3an4, r3an4m1 or f. */
DOMBI_API dombi_status dombi_pipeline_eval(const dombi_pipeline* p, const char* name, const char* n, char** out);
DOMBI_API dombi_status dombi_pipeline_rep(const dombi_pipeline* p, const char* name, dombi_linrep** out);
/* artifact: F, FF, G, M or reps; format: text or dot (reps: text only). */
DOMBI_API dombi_status dombi_pipeline_export(const dombi_pipeline* p, const char* artifact, const char* format, size_t orbit_bound,
                                   char** out);

typedef struct dombi_verify_options {
  uint64_t agreement;       /* 0 means 10000 */
  unsigned density_depth;   /* 0 means 10 */
  size_t orbit_bound;       /* 0 means 100000 */
  const char* workspace;    /* may be NULL */
  const char* session;      /* NULL means the default */
} dombi_verify_options;

/* JSON report in *report_json, human-readable table in *table (either may
 * be NULL), and 1/0 in *verdict. */
DOMBI_API dombi_status dombi_verify(const dombi_verify_options* options, char** report_json, char** table, int* verdict);

/* Density checkpoints for k = 1..depth as JSON; *pass is 1 iff all match. */
DOMBI_API dombi_status dombi_density(unsigned depth, char** json, int* pass);

/* Brute-force rows {n, r3, d, f} for start <= n < start + count as JSON. */
DOMBI_API dombi_status dombi_oracle(uint64_t start, uint64_t count, char** json);

#ifdef __cplusplus
}
#endif

#endif
