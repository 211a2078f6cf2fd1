/* C interface to the definability library.
 *
 * Every function returning deflat_status reports failures through the status
 * code; deflat_last_error() then describes the most recent failure on the
 * calling thread. Strings returned through char** are owned by the caller and
 * released with deflat_string_free. Handles are released with their _free
 * function; passing NULL to a _free function is a no-op.
 */
#ifndef DEFLAT_DEFLAT_H
#define DEFLAT_DEFLAT_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(DEFLAT_BUILDING)
#define DEFLAT_API __attribute__((visibility("default")))
#else
#define DEFLAT_API
#endif

typedef enum deflat_status {
  DEFLAT_OK = 0,
  DEFLAT_ERR_PARSE = 1,    /* formula or class text does not parse */
  DEFLAT_ERR_ARGUMENT = 2, /* bad argument: arity, structure mismatch, unknown name */
  DEFLAT_ERR_DOMAIN = 3,   /* input outside the supported semantics (e.g. unstable table) */
  DEFLAT_ERR_INTERNAL = 4
} deflat_status;

typedef enum deflat_structure { DEFLAT_Q = 0, DEFLAT_Z = 1 } deflat_structure;

typedef struct deflat_formula deflat_formula;
typedef struct deflat_class deflat_class;

DEFLAT_API const char* deflat_version(void);
DEFLAT_API const char* deflat_last_error(void);
/* Byte offset of the last parse error, or (size_t)-1. */
DEFLAT_API size_t deflat_last_error_position(void);
DEFLAT_API void deflat_string_free(char* s);

/* Formulas */
DEFLAT_API deflat_status deflat_formula_parse(deflat_structure s, const char* text, deflat_formula** out);
DEFLAT_API void deflat_formula_free(deflat_formula* f);
DEFLAT_API deflat_structure deflat_formula_structure(const deflat_formula* f);
DEFLAT_API deflat_status deflat_formula_render(const deflat_formula* f, char** out);
/* Comma-separated, first-occurrence order. */
DEFLAT_API deflat_status deflat_formula_free_vars(const deflat_formula* f, char** out);
DEFLAT_API deflat_status deflat_formula_nnf(const deflat_formula* f, deflat_formula** out);
DEFLAT_API deflat_status deflat_eliminate(const deflat_formula* f, deflat_formula** out);
/* Z only: width of the quantifier-free equivalent. */
DEFLAT_API deflat_status deflat_width(const deflat_formula* f, int64_t* out);

/* Classification. vars is a comma-separated argument order or NULL for the
 * free variables; window 0 means the formula width (Z only). */
DEFLAT_API deflat_status deflat_classify(const deflat_formula* f, const char* vars, int64_t window,
                                         deflat_class** out);
/* Class names: Q "order", "between", "cyclic", "separation", "true", "false",
 * "equality"; Z "A 3" (also "A3", "A(3)"), "B n", "C n", "equality", "true",
 * "false". */
DEFLAT_API deflat_status deflat_class_parse(deflat_structure s, const char* spec, deflat_class** out);
DEFLAT_API void deflat_class_free(deflat_class* c);
DEFLAT_API deflat_structure deflat_class_structure(const deflat_class* c);
/* Static string: order/between/cyclic/separation/trivial, or A/B/C/equality/trivial. */
DEFLAT_API const char* deflat_class_letter(const deflat_class* c);
/* Divisor of a lettered Z class, 0 otherwise. */
DEFLAT_API int64_t deflat_class_divisor(const deflat_class* c);
/* Trivial sub-tag: "true", "false", "equality", or "" for other classes. */
DEFLAT_API const char* deflat_class_sub(const deflat_class* c);
DEFLAT_API deflat_status deflat_class_canonical(const deflat_class* c, char** out);
/* JSON object describing the finite semantics the verdict came from. */
DEFLAT_API deflat_status deflat_class_details(const deflat_class* c, char** out);

/* Lattice */
DEFLAT_API deflat_status deflat_entails(const deflat_class* source, const deflat_class* target, int* holds,
                                        char** rule, char** reason);
DEFLAT_API deflat_status deflat_join(const deflat_class* const* classes, size_t n, deflat_class** out);
/* group: "shifts", "B", "C", "S"; sigma in one-line notation over 1..k. */
DEFLAT_API deflat_status deflat_realizes(const char* group, const int* sigma, size_t k, int* out);

/* Oracle */
DEFLAT_API deflat_status deflat_equiv_check(const deflat_formula* f, const deflat_formula* g, int* out);
/* kind: shift, B, C, S (Q) or shift, first, second, third (Z); step for Z kinds. */
DEFLAT_API deflat_status deflat_probe(const deflat_formula* f, const char* kind, int64_t step, uint64_t seed,
                                      size_t samples, int* violated, char** report);

#ifdef __cplusplus
}
#endif

#endif /* DEFLAT_DEFLAT_H */
