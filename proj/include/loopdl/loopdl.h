#ifndef LOOPDL_H
#define LOOPDL_H

/* C interface to the engine. Every entry point returns a status code and,
 * when given a non-null `out`, a result handle that owns its strings. Free
 * handles with loopdl_result_free. Results carry an error message when the
 * status is not LOOPDL_OK. */

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  LOOPDL_OK = 0,
  LOOPDL_ERR_PARSE = 1,    /* program or formula text */
  LOOPDL_ERR_CONFIG = 2,   /* problem file, option or argument */
  LOOPDL_ERR_INTERNAL = 3
} loopdl_status;

/* Verdict codes, equal to the command-line exit codes. */
typedef enum {
  LOOPDL_PROVED = 0,
  LOOPDL_REFUTED = 1,
  LOOPDL_UNKNOWN = 2
} loopdl_verdict;

typedef struct loopdl_result loopdl_result;

typedef struct {
  /* Default domain for variables the problem does not bound; used when
   * has_domain is non-zero. */
  int has_domain;
  long long domain_lo, domain_hi;
  int default_unwind;     /* 0: engine default */
  int do_to_while;        /* route unwound do loops through transformDoToWhile */
  long long node_limit;   /* 0: engine default */
} loopdl_prove_options;

typedef struct {
  long long domain_lo, domain_hi;
  unsigned long long seed;
  int programs;  /* per family, or pairs / loops for the fuzzers */
  long long budget;
} loopdl_check_options;

void loopdl_prove_options_init(loopdl_prove_options* opt);
void loopdl_check_options_init(loopdl_check_options* opt);

/* `state` is "x=3,b=true"; budget <= 0 means the default. With `plain` set,
 * attempt and halt statements are rejected. Result JSON:
 * {"reason": ..., "state": {...}}. */
loopdl_status loopdl_interpret(const char* source, const char* state, long long budget, int plain,
                               loopdl_result** out);

/* Proves a `.prob` file. The result has the report JSON (text), the proof
 * tree JSON (part "tree"), a human rendering (part "pretty") and a verdict. */
loopdl_status loopdl_prove_file(const char* path, const loopdl_prove_options* opt,
                                loopdl_result** out);

/* Unwinds the loop whose header is on `line` k times; the text is the
 * printed fragment. */
loopdl_status loopdl_unwind(const char* source, int line, int k, loopdl_result** out);

/* Axiom suites: fig1, fig2, fig3, fig4, thm1, thm2, conj1, all. The verdict
 * is LOOPDL_PROVED iff there is no mismatch. */
loopdl_status loopdl_check_axioms(const char* suite, const loopdl_check_options* opt,
                                  loopdl_result** out);
/* Invariant-rule soundness fuzzing and the do-loop route comparison. */
loopdl_status loopdl_fuzz(const loopdl_check_options* opt, loopdl_result** out);
loopdl_status loopdl_do_loops(const loopdl_check_options* opt, loopdl_result** out);

/* Rule catalog entry for `rule`, or the whole catalog when rule is null. */
loopdl_status loopdl_explain(const char* rule, loopdl_result** out);

const char* loopdl_result_text(const loopdl_result* r);
/* Named extra output, or null. */
const char* loopdl_result_part(const loopdl_result* r, const char* name);
const char* loopdl_result_error(const loopdl_result* r);
int loopdl_result_verdict(const loopdl_result* r);
void loopdl_result_free(loopdl_result* r);

const char* loopdl_version(void);

#ifdef __cplusplus
}
#endif

#endif
