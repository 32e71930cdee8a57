#ifndef SOBC_SOBC_H
#define SOBC_SOBC_H

/* C interface to the second-order broadcast-channel library.
 *
 * Every function returning sobc_status leaves a description of the last
 * failure on the calling thread, readable with sobc_last_error(). Handles are
 * opaque and owned by the caller; destroy functions accept NULL. Rates are in
 * nats per channel use. */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define SOBC_API __declspec(dllexport)
#else
#define SOBC_API __attribute__((visibility("default")))
#endif

typedef enum {
  SOBC_OK = 0,
  SOBC_INVALID_ARGUMENT = 1, /* null pointer, bad enum, wrong length */
  SOBC_DOMAIN = 2,           /* value outside the mathematical domain */
  SOBC_INFEASIBLE = 3,
  SOBC_UNSUPPORTED = 4,      /* e.g. more than 6 users */
  SOBC_NUMERICAL = 5,
  SOBC_INTERNAL = 6
} sobc_status;

typedef enum { SOBC_GLOBAL = 0, SOBC_PER_USER = 1 } sobc_error_kind;

typedef enum { SOBC_SUP = 0, SOBC_SUPNORS = 1, SOBC_CCP = 2, SOBC_TDM = 3, SOBC_CONVERSE = 4 } sobc_scheme;

typedef enum {
  SOBC_LABEL_NONE = 0,
  SOBC_LABEL_SUPNORS = 1,
  SOBC_LABEL_SUP = 2,
  SOBC_LABEL_CCP = 3,
  SOBC_LABEL_SUP1 = 4,
  SOBC_LABEL_SUP2 = 5
} sobc_label;

/* Cloud-center choice for superposition boundaries. */
typedef enum { SOBC_CLOUD_AUTO = 0, SOBC_CLOUD_USER1 = 1, SOBC_CLOUD_USER2 = 2 } sobc_cloud;

typedef struct {
  size_t alpha_grid;
  size_t beta_interior;
  size_t eps_grid;
  size_t tdm_grid;
  size_t refinement_rounds;
  double tolerance;
  uint64_t seed;
  size_t threads;
} sobc_search_options;

typedef struct {
  double r2;
  double r1;
  int has_sup; /* superposition parameters below are valid */
  int cloud;   /* 1 or 2 */
  double alpha;
  double beta;
  double eps10;
  double eps11;
  double eps2;
  int has_tdm; /* time-division parameters below are valid */
  double tau2;
  double alpha1;
  double alpha2;
  double tdm_eps1;
  double tdm_eps2;
} sobc_boundary_point;

typedef struct sobc_scenario sobc_scenario;
typedef struct sobc_boundary sobc_boundary;
typedef struct sobc_map sobc_map;
typedef struct sobc_kuser sobc_kuser;

SOBC_API const char* sobc_version(void);
SOBC_API const char* sobc_last_error(void);
SOBC_API const char* sobc_status_name(sobc_status s);
SOBC_API const char* sobc_scheme_name(sobc_scheme s);
SOBC_API sobc_status sobc_scheme_from_name(const char* name, sobc_scheme* out);
SOBC_API const char* sobc_label_name(sobc_label l);
SOBC_API void sobc_default_options(sobc_search_options* out);

/* point-to-point quantities */
SOBC_API sobc_status sobc_q_inv(double eps, double* out);
SOBC_API sobc_status sobc_bvn_cdf(double h, double k, double rho, double* out);
SOBC_API sobc_status sobc_kappa(int64_t n, double snr, double eps, double* out);

/* two-user scenario; eps2 is ignored for SOBC_GLOBAL */
SOBC_API sobc_status sobc_scenario_create(double gamma1, double gamma2, int64_t n, sobc_error_kind kind,
                                          double eps1, double eps2, sobc_scenario** out);
SOBC_API void sobc_scenario_destroy(sobc_scenario* s);
SOBC_API sobc_status sobc_single_user_rate(const sobc_scenario* s, int user, double* out);
SOBC_API sobc_status sobc_ccp_sum_rate(const sobc_scenario* s, double* out);
SOBC_API sobc_status sobc_converse(const sobc_scenario* s, double* r1, double* r2, double* sum);
/* writes up to `points` values; `count` (may be NULL) receives how many */
SOBC_API sobc_status sobc_default_r2_grid(const sobc_scenario* s, size_t points, double* out, size_t* count);

/* Boundary on a strictly increasing R2 grid; only achievable points are kept.
 * `opts` may be NULL for defaults; `cloud` applies to SUP and SUPNORS. */
SOBC_API sobc_status sobc_boundary_trace(const sobc_scenario* s, sobc_scheme scheme, const double* r2_grid,
                                         size_t count, const sobc_search_options* opts, sobc_cloud cloud,
                                         sobc_boundary** out);
SOBC_API size_t sobc_boundary_size(const sobc_boundary* b);
SOBC_API sobc_status sobc_boundary_point_at(const sobc_boundary* b, size_t i, sobc_boundary_point* out);
SOBC_API void sobc_boundary_destroy(sobc_boundary* b);

/* Scheme map over a product grid, gamma1 outer. */
SOBC_API sobc_status sobc_classify(const double* gamma1, size_t n1, const double* gamma2, size_t n2, int64_t n,
                                   sobc_error_kind kind, double eps1, double eps2, size_t r2_points,
                                   double match_tolerance, const sobc_search_options* opts, sobc_map** out);
SOBC_API size_t sobc_map_size(const sobc_map* m);
SOBC_API int sobc_map_symmetric(const sobc_map* m);
SOBC_API sobc_status sobc_map_cell(const sobc_map* m, size_t i, double* gamma1, double* gamma2, sobc_label* label);
SOBC_API void sobc_map_destroy(sobc_map* m);

/* K-user superposition without splitting. `eps` holds one value (global) or
 * K values (per user); `order` (may be NULL) lists users from rank 0 up;
 * `eps_alloc` (may be NULL) overrides the default reliability split. */
SOBC_API sobc_status sobc_kuser_create(const double* gammas, size_t k, int64_t n, sobc_error_kind kind,
                                       const double* eps, const size_t* order, sobc_kuser** out);
SOBC_API void sobc_kuser_destroy(sobc_kuser* s);
SOBC_API sobc_status sobc_kuser_default_allocation(const sobc_kuser* s, double* out);
SOBC_API sobc_status sobc_kuser_evaluate(sobc_kuser* s, const double* alphas, const double* eps_alloc, uint64_t seed,
                                         int* feasible);
/* results of the last evaluate call */
SOBC_API sobc_status sobc_kuser_constraint_count(const sobc_kuser* s, size_t user, size_t* out);
/* mask has bit u set for each user u in the partial sum */
SOBC_API sobc_status sobc_kuser_constraint(const sobc_kuser* s, size_t user, size_t i, uint32_t* mask, double* rhs);
SOBC_API sobc_status sobc_kuser_shift(const sobc_kuser* s, size_t user, double* shift, double* std_error);
/* 2^K - 1 bounds ordered by mask; vacuous bounds are +inf */
SOBC_API sobc_status sobc_kuser_converse(const sobc_kuser* s, double* bounds, size_t capacity);

#ifdef __cplusplus
}
#endif

#endif
