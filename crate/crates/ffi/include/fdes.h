#ifndef FDES_H
#define FDES_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum {
  FDES_MAP_PI = 0,
  FDES_MAP_SIGMA = 1,
  FDES_MAP_PARTIAL = 2,
} FdesMap;

typedef enum {
  FDES_SPACE_EISENSTEIN = 0,
  FDES_SPACE_ZETA = 1,
} FdesSpace;

typedef enum {
  FDES_STATUS_OK = 0,
  FDES_STATUS_NULL_POINTER = 1,
  FDES_STATUS_INVALID_UTF8 = 2,
  FDES_STATUS_PARSE = 3,
  FDES_STATUS_INVALID_ARGUMENT = 4,
  FDES_STATUS_WRONG_SPACE = 5,
  FDES_STATUS_IO = 6,
  FDES_STATUS_PANIC = 7,
} FdesStatus;

// A homogeneous element of a formal space.
typedef struct FdesElement FdesElement;

// A truncated q-series.
typedef struct FdesSeries FdesSeries;

// A reduced relation system of one weight.
typedef struct FdesSystem FdesSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static string.
const char *fdes_version(void);

// Copy of the last error message on this thread, or null if the last call succeeded.
// Release with `fdes_string_free`.
char *fdes_last_error(void);

// # Safety
// `s` must be null or a string returned by this library.
void fdes_string_free(char *s);

// Parses a linear combination such as `5/2*G(4;0) - P(2,2;0,0)`.
//
// # Safety
// `text` must be a nul-terminated string and `out` a valid pointer.
FdesStatus fdes_element_parse(const char *text, FdesElement **out);

// # Safety
// `e` must be null or a handle from this library, not yet freed.
void fdes_element_free(FdesElement *e);

// # Safety
// `e` must be a live handle and `out` a valid pointer.
FdesStatus fdes_element_to_string(const FdesElement *e, char **out);

// # Safety
// `e` must be a live handle; `weight` and `space` valid pointers.
FdesStatus fdes_element_info(const FdesElement *e, uint32_t *weight, FdesSpace *space);

// Builds the reduced relation system of one weight.
//
// # Safety
// `out` must be a valid pointer.
FdesStatus fdes_system_build(FdesSpace space, uint32_t weight, FdesSystem **out);

// # Safety
// `s` must be null or a handle from this library, not yet freed.
void fdes_system_free(FdesSystem *s);

// Number of generators, rank of the relations and dimension of the quotient.
//
// # Safety
// `s` must be a live handle; the outputs valid pointers.
FdesStatus fdes_system_sizes(const FdesSystem *s,
                             uintptr_t *generators,
                             uintptr_t *rank,
                             uintptr_t *dimension);

// # Safety
// `s`, `e` must be live handles and `out` a valid pointer.
FdesStatus fdes_system_normal_form(const FdesSystem *s, const FdesElement *e, FdesElement **out);

// # Safety
// `s`, `e` must be live handles and `out` a valid pointer.
FdesStatus fdes_system_is_zero(const FdesSystem *s, const FdesElement *e, bool *out);

// # Safety
// `e` must be a live handle and `out` a valid pointer.
FdesStatus fdes_map(FdesMap kind, const FdesElement *e, FdesElement **out);

// Kronecker realization of an Eisenstein-space element to q-order `order`.
//
// # Safety
// `e` must be a live handle and `out` a valid pointer.
FdesStatus fdes_realize(const FdesElement *e, uintptr_t order, FdesSeries **out);

// # Safety
// `s` must be null or a handle from this library, not yet freed.
void fdes_series_free(FdesSeries *s);

// # Safety
// `s` must be a live handle and `out` a valid pointer.
FdesStatus fdes_series_order(const FdesSeries *s, uintptr_t *out);

// The coefficient of `q^n` as `p/q` text; zero beyond the order is an error.
//
// # Safety
// `s` must be a live handle and `out` a valid pointer.
FdesStatus fdes_series_coeff(const FdesSeries *s, uintptr_t n, char **out);

// # Safety
// `s` must be a live handle and `out` a valid pointer.
FdesStatus fdes_series_to_string(const FdesSeries *s, char **out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* FDES_H */
