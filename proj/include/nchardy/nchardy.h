/* C interface to the nchardy library.
 *
 * Objects are opaque handles released with their *_free function. Functions
 * return NCH_OK or an error status; on error nch_last_error() describes the
 * failure (per thread, valid until the next call on that thread). Strings
 * returned through char** are owned by the caller and released with
 * nch_string_free. Reports are JSON unless a CSV format is requested.
 */
#ifndef NCHARDY_NCHARDY_H
#define NCHARDY_NCHARDY_H

#include <stddef.h>
#include <stdint.h>

#if defined(NCHARDY_BUILDING_LIBRARY)
#define NCH_API __attribute__((visibility("default")))
#else
#define NCH_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nch_status {
  NCH_OK = 0,
  NCH_E_INVALID_ARGUMENT = 1,
  NCH_E_ALPHABET_MISMATCH = 2,
  NCH_E_DOMAIN = 3,
  NCH_E_GRAM_SINGULAR = 4,
  NCH_E_UNSUPPORTED_MULTIPLICITY = 5,
  NCH_E_INDEX_OUT_OF_RANGE = 6,
  NCH_E_INCONCLUSIVE_TAIL = 7,
  NCH_E_STRUCTURE = 8,
  NCH_E_PARSE = 9,
  NCH_E_SINGULAR_MATRIX = 10,
  NCH_E_DIMENSION_MISMATCH = 11,
  NCH_E_INTERNAL = 99
} nch_status;

/* Usage-type errors (bad input) versus numeric preconditions. */
NCH_API int nch_status_is_usage(nch_status s);
NCH_API const char* nch_status_name(nch_status s);

typedef enum nch_geometry {
  NCH_POLYDISC = 0,
  NCH_BALL = 1,     /* block column of a unitary of size mN */
  NCH_BALL_ROW = 2  /* block row */
} nch_geometry;

typedef enum nch_engine { NCH_EXACT = 0, NCH_MC = 1, NCH_BOTH = 2 } nch_engine;

typedef enum nch_format { NCH_JSON = 0, NCH_CSV = 1 } nch_format;

typedef struct nch_series nch_series;
typedef struct nch_tuple nch_tuple;

typedef struct nch_config {
  nch_geometry geometry;
  int m;
  const int* n_grid;
  size_t n_count;
  const double* r_grid;
  size_t r_count;
  uint64_t samples;
  uint64_t seed;
  nch_engine engine;
  unsigned workers; /* 0: hardware concurrency */
  nch_format format;
} nch_config;

/* Defaults: polydisc, m=1, empty grids, 100000 samples, seed from
 * NC_HARDY_SEED or the built-in fallback, exact engine, JSON. */
NCH_API void nch_config_init(nch_config* cfg);
NCH_API uint64_t nch_default_seed(void);

NCH_API const char* nch_version(void);
NCH_API const char* nch_last_error(void);
NCH_API void nch_string_free(char* s);

/* Series: {"m":2,"terms":[{"word":[1,2],"re":1.0,"im":0.0},...]} */
NCH_API nch_status nch_series_new(int m, nch_series** out);
NCH_API nch_status nch_series_parse(const char* json, nch_series** out);
NCH_API nch_status nch_series_add(nch_series* s, const int* letters, size_t length, double re,
                                  double im);
NCH_API nch_status nch_series_to_json(const nch_series* s, char** out);
NCH_API int nch_series_alphabet(const nch_series* s);
NCH_API void nch_series_free(nch_series* s);

/* Tuples: {"m":..,"n":..,"matrices":[[[re,im],...],...]}, row-major. */
NCH_API nch_status nch_tuple_parse(const char* json, nch_tuple** out);
NCH_API nch_status nch_tuple_to_json(const nch_tuple* t, char** out);
NCH_API int nch_tuple_dim(const nch_tuple* t);
NCH_API void nch_tuple_free(nch_tuple* t);

/* Wg(N, sigma) for every cycle type of S_n, exact rationals and doubles. */
NCH_API nch_status nch_wg_table(int n, int N, char** out_json);
/* sigma given by its 1-based images. */
NCH_API nch_status nch_wg_value(const int* images, size_t n, int N, double* out);

/* int u_{i1 j1}..u_{in jn} conj(u_{i'1 j'1})..conj(u_{i'n j'n}) dU over U(N);
 * ups and conjs are flat 1-based (row, col) pairs. */
NCH_API nch_status nch_entry_moment(const int* ups, size_t n_ups, const int* conjs,
                                    size_t n_conjs, int N, char** out_json);

/* int Tr((X^w)^* X^v) over the boundary at level N, exact. */
NCH_API nch_status nch_pairing_word(const int* w, size_t w_len, const int* v, size_t v_len,
                                    nch_geometry geometry, int m, int N, char** out_json);

/* int (1/N) Tr(g(rX)^* f(rX)) on every (r, N) cell; JSON or CSV. */
NCH_API nch_status nch_pairing(const nch_series* f, const nch_series* g, const nch_config* cfg,
                               char** out);

/* f_w from boundary integrals at radius r over the N grid. */
NCH_API nch_status nch_recover(const nch_series* f, const int* w, size_t w_len, double r,
                               const nch_config* cfg, char** out);

/* H^2 inner product <f, g> of the polydisc (weight 1) or ball (weight m). */
NCH_API nch_status nch_inner(const nch_series* f, const nch_series* g, nch_geometry geometry,
                             double* re, double* im);

NCH_API nch_status nch_upsilon(const nch_tuple* x, double p, int max_degree, double threshold,
                               char** out_json);

/* K_p(X, Y) truncated at max_degree, with the tail bound when available. */
NCH_API nch_status nch_kernel(const nch_tuple* x, const nch_tuple* y, double p, int max_degree,
                              char** out_json);

/* e1, e2 as interleaved (re, im) arrays of length 2 * dim(Y). */
NCH_API nch_status nch_reproduce(const nch_series* f, const nch_tuple* y, const double* e1,
                                 const double* e2, double p, char** out_json);

/* Boundary norm profile over the grid with the S(f) grid estimate and the
 * coefficient-series prediction per r. */
NCH_API nch_status nch_profile(const nch_series* f, const nch_config* cfg, char** out);

/* Polydisc and ball radial profiles with their series predictions. */
NCH_API nch_status nch_radial_profiles(const nch_series* f, const nch_config* cfg, char** out);

/* Alternating product of centered factors, each "k:pow[@coef],pow[@coef],...". */
NCH_API nch_status nch_freeness(const char* const* factors, size_t n_factors,
                                const nch_config* cfg, char** out_json);

typedef void (*nch_selftest_callback)(int id, const char* name, int passed, const char* line,
                                      void* user);

/* Runs the acceptance suite; *all_passed is 1 iff every criterion passed.
 * corrupt_wg != 0 perturbs one cached Weingarten value first. */
NCH_API nch_status nch_selftest(uint64_t seed, int corrupt_wg, unsigned workers,
                                nch_selftest_callback callback, void* user, int* all_passed,
                                char** out_json);

#ifdef __cplusplus
}
#endif

#endif /* NCHARDY_NCHARDY_H */
