#ifndef AXIBIE_AXIBIE_H
#define AXIBIE_AXIBIE_H

/* C interface to the axisymmetric boundary integral solver.
 *
 * Objects are opaque handles owned by the caller and released with the
 * matching *_free function. Every fallible call returns an axibie_status;
 * on failure a message is available from axibie_last_error() on the same
 * thread until the next failing call.
 *
 * Grid fields (boundary data, densities) are row-major arrays of
 * node_count x m_theta doubles: entry [i * m_theta + m] is the value at
 * curve node i and azimuth 2 pi m / m_theta. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define AXIBIE_API __declspec(dllexport)
#elif defined(__GNUC__)
#define AXIBIE_API __attribute__((visibility("default")))
#else
#define AXIBIE_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum axibie_status {
  AXIBIE_OK = 0,
  AXIBIE_ERR_CONFIG = 1,    /* invalid option, unreadable file, bad curve */
  AXIBIE_ERR_DOMAIN = 2,    /* argument outside an operation's domain */
  AXIBIE_ERR_NUMERICAL = 3, /* singular system, non-convergent integration */
  AXIBIE_ERR_ARGUMENT = 4,  /* null handle or pointer, short buffer */
  AXIBIE_ERR_INTERNAL = 5
} axibie_status;

typedef enum axibie_problem_type { AXIBIE_INTERIOR = 0, AXIBIE_EXTERIOR = 1 } axibie_problem_type;
typedef enum axibie_recursion { AXIBIE_RECURSION_AUTO = 0, AXIBIE_RECURSION_FORWARD = 1, AXIBIE_RECURSION_BACKWARD = 2 } axibie_recursion;
typedef enum axibie_kernel_path { AXIBIE_PATH_RECURSION = 0, AXIBIE_PATH_FFT = 1, AXIBIE_PATH_ORACLE = 2 } axibie_kernel_path;

typedef struct axibie_curve axibie_curve;
typedef struct axibie_problem axibie_problem;

typedef struct axibie_curve_point {
  double r, z;
  double nr, nz;
  double jacobian;
} axibie_curve_point;

typedef struct axibie_problem_options {
  int type;            /* axibie_problem_type */
  int n_panels;
  int n_f;             /* highest azimuthal mode */
  int m_theta;         /* 0: default grid for n_f */
  int recursion;       /* axibie_recursion */
  int far_path;        /* AXIBIE_PATH_RECURSION or AXIBIE_PATH_FFT */
  int near_path;       /* AXIBIE_PATH_RECURSION or AXIBIE_PATH_ORACLE */
  int fft_oversample;
  double oracle_tol;
  int explicit_inverse;
  int keep_matrices;   /* nonzero: keep A_n after factorization */
  double rcond_threshold;
  int completion;      /* exterior only: include the reference-point term */
  int has_x0;          /* exterior only: use x0_r, x0_z instead of the default */
  double x0_r, x0_z;
} axibie_problem_options;

typedef struct axibie_timings {
  double t_setup, t_mat, t_inv, t_fft, t_apply;
} axibie_timings;

typedef struct axibie_manufactured_options {
  int charges;
  unsigned seed;
  int targets;
} axibie_manufactured_options;

typedef struct axibie_manufactured_summary {
  double error;          /* relative l-infinity error at the targets */
  double min_clearance;  /* in panel lengths */
  int target_count;
} axibie_manufactured_summary;

typedef struct axibie_quad_residual {
  char rule[32];
  char integrand[32];
  double parameter;
  double rule_value;
  double reference;
  double relative_error;
} axibie_quad_residual;

AXIBIE_API const char* axibie_version(void);
AXIBIE_API const char* axibie_last_error(void);
AXIBIE_API const char* axibie_status_name(axibie_status status);
/* Thread count for assembly and evaluation; n <= 0 restores the default. */
AXIBIE_API void axibie_set_num_threads(int n);

/* Curves. Built-ins: "sphere", "torus", "starfish_torus", "wavy_block". */
AXIBIE_API axibie_status axibie_curve_builtin(const char* name, const double* params, size_t n_params,
                                              axibie_curve** out);
/* Plain-text (r, z) samples, one pair per line, fitted by a cubic spline. */
AXIBIE_API axibie_status axibie_curve_from_file(const char* path, axibie_curve** out);
AXIBIE_API axibie_status axibie_curve_from_samples(const double* r, const double* z, size_t count,
                                                   axibie_curve** out);
AXIBIE_API void axibie_curve_free(axibie_curve* curve);
AXIBIE_API axibie_status axibie_curve_length(const axibie_curve* curve, double* length);
AXIBIE_API axibie_status axibie_curve_is_closed(const axibie_curve* curve, int* closed);
AXIBIE_API axibie_status axibie_curve_eval(const axibie_curve* curve, double t, axibie_curve_point* out);

/* Problems. */
AXIBIE_API void axibie_problem_options_init(axibie_problem_options* options);
AXIBIE_API axibie_status axibie_problem_create(const axibie_curve* curve, const axibie_problem_options* options,
                                               axibie_problem** out);
AXIBIE_API void axibie_problem_free(axibie_problem* problem);
AXIBIE_API axibie_status axibie_problem_sizes(const axibie_problem* problem, int* node_count, int* m_theta,
                                              int* n_f);
/* Node data, each array of node_count entries; any pointer may be NULL. */
AXIBIE_API axibie_status axibie_problem_nodes(const axibie_problem* problem, double* r, double* z, double* weights);
AXIBIE_API axibie_status axibie_problem_reference_point(const axibie_problem* problem, double* r0, double* z0);
AXIBIE_API axibie_status axibie_problem_assemble(axibie_problem* problem);
AXIBIE_API axibie_status axibie_problem_factorize(axibie_problem* problem);
/* Density for Dirichlet data; both arrays node_count x m_theta. */
AXIBIE_API axibie_status axibie_problem_solve(axibie_problem* problem, const double* data, double* sigma);
/* Potential at count points xyz[3 k .. 3 k + 2]. */
AXIBIE_API axibie_status axibie_problem_potential(const axibie_problem* problem, const double* sigma,
                                                  const double* xyz, size_t count, double* u);
AXIBIE_API axibie_status axibie_problem_timings(const axibie_problem* problem, axibie_timings* out);
/* Extreme singular values of I + A_n for n = 0..n_f; arrays of capacity >= n_f + 1. */
AXIBIE_API axibie_status axibie_problem_conditioning(axibie_problem* problem, double* sigma_max, double* sigma_min,
                                                     size_t capacity);
/* Reciprocal condition estimates of the LU factors, n = 0..n_f. */
AXIBIE_API axibie_status axibie_problem_rcond(axibie_problem* problem, double* rcond, size_t capacity);

/* Point-charge test: builds data, solves and evaluates. The per-target
 * arrays (capacity target_count) and sigma (node_count x m_theta) may be NULL. */
AXIBIE_API void axibie_manufactured_options_init(axibie_manufactured_options* options);
AXIBIE_API axibie_status axibie_problem_manufactured(axibie_problem* problem,
                                                     const axibie_manufactured_options* options,
                                                     axibie_manufactured_summary* summary, double* targets_xyz,
                                                     double* u_num, double* u_exact, double* clearance,
                                                     double* sigma);

/* Smallest n_f whose relative L2 tail of the point-charge data on an
 * m_theta-point azimuthal grid is <= eps. *converged is 0 when the spectrum
 * has not decayed by the grid limit. */
AXIBIE_API axibie_status axibie_select_modes(const axibie_curve* curve, const axibie_problem_options* options,
                                             const axibie_manufactured_options* charges, double eps, int m_theta,
                                             int* n_f, double* tail, int* converged);

/* Quadrature exactness residuals; *count receives the number available. */
AXIBIE_API axibie_status axibie_quad_residuals(unsigned seed, axibie_quad_residual* out, size_t capacity,
                                               size_t* count);
AXIBIE_API uint64_t axibie_rule_table_checksum(void);

#ifdef __cplusplus
}
#endif

#endif
