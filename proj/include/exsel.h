/*
 * exsel - exploration well portfolio optimization under uncertainty.
 *
 * C interface of the shared library. All objects are opaque handles created
 * and destroyed through this API; functions return exsel_status and report
 * details through exsel_last_error(). Strings returned through out
 * parameters are heap-allocated and must be released with
 * exsel_string_free().
 */

#ifndef EXSEL_H
#define EXSEL_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define EXSEL_API __declspec(dllexport)
#else
#define EXSEL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum exsel_status {
  EXSEL_OK = 0,
  EXSEL_ERR_INVALID_ARGUMENT = 1,
  EXSEL_ERR_PARSE = 2,        /* unreadable catalog/spec document */
  EXSEL_ERR_VALIDATION = 3,   /* catalog invariants violated */
  EXSEL_ERR_IO = 4,           /* file system failure */
  EXSEL_ERR_SPEC = 5,         /* unusable experiment spec (exit code 2) */
  EXSEL_ERR_EMPTY_ARCHIVE = 6,/* search found no feasible portfolio (exit 3) */
  EXSEL_ERR_INTERNAL = 7
} exsel_status;

typedef struct exsel_catalog exsel_catalog;
typedef struct exsel_bank exsel_bank;

/* Library version string, static storage. */
EXSEL_API const char* exsel_version(void);

/* Message of the last error on this thread, static storage. */
EXSEL_API const char* exsel_last_error(void);

EXSEL_API void exsel_string_free(char* s);

/* ---- catalog ---------------------------------------------------------- */

EXSEL_API exsel_status exsel_catalog_load_file(const char* path,
                                               exsel_catalog** out);
EXSEL_API exsel_status exsel_catalog_parse(const char* json_text,
                                           exsel_catalog** out);
/* JSON array of {project, field, message}; empty array means valid. */
EXSEL_API exsel_status exsel_catalog_validate(const exsel_catalog* catalog,
                                              char** violations_json);
EXSEL_API exsel_status exsel_catalog_to_json(const exsel_catalog* catalog,
                                             char** json_text);
EXSEL_API void exsel_catalog_free(exsel_catalog* catalog);

/* ---- scenario banks --------------------------------------------------- */

EXSEL_API exsel_status exsel_bank_build(const exsel_catalog* catalog,
                                        uint64_t seed, int scenarios,
                                        int subscenarios, int threads,
                                        exsel_bank** out);
EXSEL_API exsel_status exsel_bank_save(const exsel_bank* bank,
                                       const char* path);
EXSEL_API exsel_status exsel_bank_load(const char* path, exsel_bank** out);
EXSEL_API void exsel_bank_free(exsel_bank* bank);

/* ---- evaluation and search -------------------------------------------- */

/*
 * Prices one first-stage portfolio (bit string of '0'/'1', one per
 * first-stage project, already repaired or repairable) against a bank.
 * options_json may be NULL or an object with any of:
 *   {"recourse": "exact"|"greedy"|"none", "posterior": "posterior"|"fixed",
 *    "theta_scale": number, "details": bool}
 * The report is returned as a flat JSON record.
 */
EXSEL_API exsel_status exsel_evaluate(const exsel_catalog* catalog,
                                      const exsel_bank* bank,
                                      const char* genome_bits,
                                      const char* options_json,
                                      char** report_json);

/*
 * NSGA-II portfolio search over the bank. config_json may be NULL or an
 * object with {"population", "generations", "crossover", "mutation",
 * "seed"}. Returns {"portfolios": [{genome, enpv, cvar_loss, viol, ...}]}.
 * An empty feasible archive yields EXSEL_ERR_EMPTY_ARCHIVE with the least
 * violating individual in the result.
 */
EXSEL_API exsel_status exsel_optimize(const exsel_catalog* catalog,
                                      const exsel_bank* bank,
                                      const char* config_json,
                                      char** archive_json);

/* ---- experiments ------------------------------------------------------ */

/*
 * Runs one experiment described by a spec document (see repository docs for
 * the schema); all outputs are written under the spec's out_dir.
 */
EXSEL_API exsel_status exsel_experiment_run(const char* spec_json);

#ifdef __cplusplus
}
#endif

#endif /* EXSEL_H */
