/* C interface to the fractop library.
 *
 * Handles are opaque and owned by the caller; release them with the matching
 * *_free function. Functions returning text allocate it; release it with
 * fractop_string_free. On failure a function returns a non-zero status and
 * fractop_last_error() describes the failure (per thread). */
#ifndef FRACTOP_H
#define FRACTOP_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  define FRACTOP_API __declspec(dllexport)
#else
#  define FRACTOP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fractop_status {
  FRACTOP_OK = 0,
  FRACTOP_ERR_INVALID_INPUT = 2,
  FRACTOP_ERR_RESOURCE_LIMIT = 3,
  FRACTOP_ERR_REFUSED = 4,
  FRACTOP_ERR_UNSUPPORTED = 5,
  FRACTOP_ERR_INTERNAL = 6
} fractop_status;

typedef enum fractop_format { FRACTOP_FORMAT_TEXT = 0, FRACTOP_FORMAT_JSON = 1 } fractop_format;

typedef struct fractop_ifs fractop_ifs;
typedef struct fractop_cellset fractop_cellset;

#define FRACTOP_DEFAULT_BUDGET UINT64_C(1000000)

FRACTOP_API const char* fractop_version(void);
FRACTOP_API const char* fractop_last_error(void);
FRACTOP_API void fractop_string_free(char* s);

/* IFS handles */
FRACTOP_API fractop_status fractop_ifs_preset(const char* name, fractop_ifs** out);
FRACTOP_API fractop_status fractop_ifs_parse(const char* text, fractop_ifs** out);
FRACTOP_API void fractop_ifs_free(fractop_ifs* ifs);
FRACTOP_API size_t fractop_ifs_map_count(const fractop_ifs* ifs);
FRACTOP_API size_t fractop_ifs_dimension(const fractop_ifs* ifs);
FRACTOP_API fractop_status fractop_ifs_format(const fractop_ifs* ifs, char** out);
/* Exact "num/den". */
FRACTOP_API fractop_status fractop_ifs_lipschitz_sum(const fractop_ifs* ifs, char** out);
FRACTOP_API fractop_status fractop_ifs_conditions(const fractop_ifs* ifs, int* injective, int* fixed_points_not_singleton,
                                                  int* sum_below_one);

/* Level-k approximation */
FRACTOP_API fractop_status fractop_attractor(const fractop_ifs* ifs, size_t depth, uint64_t budget,
                                             fractop_cellset** out);
FRACTOP_API void fractop_cellset_free(fractop_cellset* cells);
FRACTOP_API size_t fractop_cellset_size(const fractop_cellset* cells);
FRACTOP_API size_t fractop_cellset_level(const fractop_cellset* cells);
FRACTOP_API fractop_status fractop_cellset_export(const fractop_cellset* cells, char** out);
FRACTOP_API fractop_status fractop_cellset_import(const char* text, fractop_cellset** out);
FRACTOP_API fractop_status fractop_cellset_max_diameter_squared(const fractop_cellset* cells, char** out);
/* "cells: N", "max_cell_diameter_squared: a/b", "lipschitz_sum: a/b" lines. */
FRACTOP_API fractop_status fractop_cellset_summary(const fractop_cellset* cells, char** out);
FRACTOP_API fractop_status fractop_cellset_components(const fractop_cellset* cells, size_t* count);
FRACTOP_API fractop_status fractop_cellset_windows(const fractop_cellset* cells, size_t* count);
/* Points as "x" or "x,y" rationals. *found = 0 and *polyline = NULL when no
 * arc exists; otherwise one "x,y" vertex per line. */
FRACTOP_API fractop_status fractop_find_arc(const fractop_cellset* cells, const char* p, const char* q, int* found,
                                            char** polyline);
/* p and q may both be NULL for a plain drawing. */
FRACTOP_API fractop_status fractop_render_svg(const fractop_cellset* cells, const char* p, const char* q, char** svg);

/* Reports */
FRACTOP_API fractop_status fractop_analyze(const fractop_ifs* ifs, size_t depth, uint64_t budget,
                                           fractop_format format, char** report);
FRACTOP_API fractop_status fractop_summary(const fractop_ifs* ifs, size_t depth, uint64_t budget, char** out);
/* Collapse-quotient pipeline on the Cantor code space. y_prefix and q_word may
 * be NULL for the defaults ("1" and "11...1"). Connected inputs are refused
 * with FRACTOP_ERR_REFUSED. */
FRACTOP_API fractop_status fractop_quotient(const fractop_ifs* ifs, size_t depth, const char* y_prefix,
                                            const char* q_word, size_t iterations, fractop_format format,
                                            char** report, int* all_passed);

#ifdef __cplusplus
}
#endif

#endif /* FRACTOP_H */
