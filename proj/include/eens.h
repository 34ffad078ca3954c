/* C interface to the epistemic ensemble toolkit.
 *
 * All functions return an eens_status; results are NUL-terminated strings
 * allocated by the library and released with eens_free(). Out-parameters are
 * only written on the paths their documentation names. A problem handle is
 * immutable after loading and may be shared between threads.
 */
#ifndef EENS_H
#define EENS_H

#ifdef __cplusplus
extern "C" {
#endif

typedef struct eens_problem eens_problem;

typedef enum eens_status {
  EENS_OK = 0,             /* command succeeded / property holds */
  EENS_PROPERTY_FALSE = 1, /* command ran, property does not hold */
  EENS_UNKNOWN = 2,        /* verdict depends on unexplored configurations */
  EENS_INPUT_ERROR = 3,    /* parse, signature, focus or usage fault */
  EENS_INCONCLUSIVE = 4,   /* prover hit its resource ceiling */
  EENS_INTERNAL_ERROR = 5
} eens_status;

const char* eens_version(void);
const char* eens_status_name(eens_status status);
void eens_free(char* s);

/* Loading. On failure *err carries a diagnostic with line:column. */
eens_status eens_load_string(const char* text, const char* name,
                             eens_problem** out, char** err);
eens_status eens_load_file(const char* path, eens_problem** out, char** err);
void eens_problem_free(eens_problem* p);

/* Exploration. mode is "syntactic", "semantic" or "symbolic"; json and dot
 * receive the graph in the documented schemas (either may be NULL). */
eens_status eens_explore(const eens_problem* p, const char* mode,
                         int max_nodes, char** json, char** dot, char** err);

/* Model checking. formula is a declared name or an inline formula; mode as
 * above (not "syntactic"). *verdict is 1/0 for true/false. */
eens_status eens_check(const eens_problem* p, const char* formula,
                       const char* mode, int max_nodes, int* verdict,
                       char** err);

/* Weakest liberal precondition of action_sym pointed at event for formula.
 * *out receives the computed formula text. */
eens_status eens_wlp(const eens_problem* p, const char* action_sym,
                     const char* event, const char* formula, char** out,
                     char** err);

/* Verifies the problem's representative table against computed
 * preconditions and wlps. *report receives a JSON report; status is
 * EENS_OK when clean, EENS_PROPERTY_FALSE when diagnostics exist. */
eens_status eens_verify_table(const eens_problem* p, char** report,
                              char** err);

/* Searches a Boolean-closure representative for wlp(action[event],
 * formula) with at most size_bound disjuncts. EENS_OK with the formula in
 * *out, or EENS_PROPERTY_FALSE when none exists within the bound. */
eens_status eens_search_repr(const eens_problem* p, const char* action_sym,
                             const char* event, const char* formula,
                             int size_bound, char** out, char** err);

/* Equivalence report between the semantic and symbolic initialisations:
 * root F-equivalence, mutual step simulation to closure, and differential
 * model checking of all declared formulas. */
eens_status eens_equiv(const eens_problem* p, int depth, int max_nodes,
                       char** report, char** err);

/* Satisfiability / validity over the problem's signature. want_valid != 0
 * asks for validity. *verdict is 1 when satisfiable (resp. valid). model
 * receives a witness structure in JSON for satisfiable queries (may be
 * NULL). */
eens_status eens_prove(const eens_problem* p, const char* formula,
                       int want_valid, int* verdict, char** model, char** err);

/* As eens_prove but over an inline signature given as comma-separated
 * agent and proposition lists, without a problem file. */
eens_status eens_prove_signature(const char* agents, const char* props,
                                 const char* formula, int want_valid,
                                 int* verdict, char** model, char** err);

/* Kripke structure JSON (schema eens-kripke-1) to DOT; auto_close != 0
 * closes the relations instead of rejecting non-equivalences. */
eens_status eens_kripke_dot(const char* kripke_json, int auto_close,
                            char** dot, char** err);

#ifdef __cplusplus
}
#endif

#endif /* EENS_H */
