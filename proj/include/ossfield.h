/* ossfield: operator self-similar random field numerics.
 *
 * C interface over the C++ core: opaque handles, integer status codes,
 * JSON strings for structured reports.  Every function that can fail
 * returns an ossf_status; on failure ossf_last_error() describes the
 * problem for the calling thread.  Strings and matrices returned through
 * out-parameters are owned by the caller (ossf_string_free /
 * ossf_matrix_free).
 */
#ifndef OSSFIELD_H
#define OSSFIELD_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ossf_status {
  OSSF_OK = 0,
  OSSF_ERR_VALIDATION = 1,   /* malformed input: NaN, dims, bad CSV */
  OSSF_ERR_DOMAIN = 2,       /* mathematical precondition violated */
  OSSF_ERR_NUMERIC = 3,      /* solver / quadrature / factorization failure */
  OSSF_ERR_CONDITIONING = 4, /* unresolvable eigenvalue clustering */
  OSSF_CHECK_FAILED = 5      /* a check ran cleanly and the property fails */
} ossf_status;

typedef struct ossf_matrix ossf_matrix;

/* Last error message on this thread; valid until the next failing call. */
const char* ossf_last_error(void);

/* ---- matrices (dense, row-major) ------------------------------------ */

ossf_matrix* ossf_matrix_create(int rows, int cols, const double* row_major);
/* Command-line literal "a,b;c,d"; a single row "a,b" is a vector. */
ossf_matrix* ossf_matrix_parse(const char* literal);
/* CSV text: one row per line, comma-separated. */
ossf_matrix* ossf_matrix_from_csv(const char* csv_text);
int ossf_matrix_rows(const ossf_matrix* m);
int ossf_matrix_cols(const ossf_matrix* m);
ossf_status ossf_matrix_data(const ossf_matrix* m, double* out_row_major);
char* ossf_matrix_to_csv(const ossf_matrix* m);
void ossf_matrix_free(ossf_matrix* m);
void ossf_string_free(char* s);

/* ---- matrix analysis ------------------------------------------------- */

ossf_status ossf_expm(const ossf_matrix* m, ossf_matrix** out);
ossf_status ossf_mat_power(const ossf_matrix* m, double c, ossf_matrix** out);
/* {"eigenvalues":[[re,im],...],"real_parts":[...],"min_real_part":..,
    "all_positive":..} */
ossf_status ossf_spectrum(const ossf_matrix* m, char** json_out);
/* tol <= 0 picks the default clustering tolerance. */
ossf_status ossf_sn_decompose(const ossf_matrix* m, double tol,
                              ossf_matrix** semisimple, ossf_matrix** nilpotent);
ossf_status ossf_spectral_split(const ossf_matrix* m, double zero_band,
                                ossf_matrix** conjugacy, ossf_matrix** block_zero,
                                ossf_matrix** block_positive);

/* ---- anisotropic polar coordinates ---------------------------------- */

/* x is a 1 x n or n x 1 matrix. */
ossf_status ossf_e_norm(const ossf_matrix* exponent, const ossf_matrix* x,
                        double* out);
ossf_status ossf_polar_decompose(const ossf_matrix* exponent,
                                 const ossf_matrix* x, double* tau,
                                 ossf_matrix** direction);
ossf_status ossf_polar_compose(const ossf_matrix* exponent, double r,
                               const ossf_matrix* theta, ossf_matrix** out);

/* ---- covariance models and checks ----------------------------------- */

/* model: "ofbf" (spectral-density quadrature) or "fbf" (closed form).
 * Grids are p x 2 matrices, one point per row.  Check functions return
 * OSSF_OK when the check passes, OSSF_CHECK_FAILED when it runs but the
 * property does not hold; the JSON report is produced either way. */
ossf_status ossf_cov_eval(const char* model, double gamma, const ossf_matrix* s,
                          const ossf_matrix* t, ossf_matrix** out);
ossf_status ossf_cov_oss_check(const char* model, double gamma,
                               const ossf_matrix* E, const ossf_matrix* H,
                               double c, const ossf_matrix* grid, double tol,
                               char** json_report);
/* side: "dom" checks Gamma(As,At)=Gamma(s,t); "ran" checks
   B Gamma B^T = Gamma. */
ossf_status ossf_sym_check(const char* model, double gamma, const char* side,
                           const ossf_matrix* A, const ossf_matrix* grid,
                           double tol, char** json_report);

/* ---- exponent sets --------------------------------------------------- */

/* group: "O:n", "SO:n", "trivial:n" (also "O2", "SO2", "O3", "SO3"). */
ossf_status ossf_tangent_basis(const char* group, char** json_out);
/* side: "range" or "domain"; JSON carries base + tangent basis. */
ossf_status ossf_exp_family(const char* group, const ossf_matrix* base,
                            const char* side, char** json_out);
ossf_status ossf_family_check(const char* group, const ossf_matrix* base,
                              const char* side, int samples, double tol,
                              char** json_report);
ossf_status ossf_haar_commuting_exponent(const char* group,
                                         const ossf_matrix* h,
                                         ossf_matrix** out);
/* OSSF_CHECK_FAILED when inadmissible; reasons in the JSON. */
ossf_status ossf_admissibility_check(const ossf_matrix* h, double tol,
                                     char** json_report);
ossf_status ossf_opposite_sign_check(const ossf_matrix* e, const ossf_matrix* h,
                                     double tol, char** json_report);
ossf_status ossf_invariant_gaussian(const ossf_matrix* h1, ossf_matrix** sigma);
/* Admissibility-guarded spectral split H = H1 (+) H2. */
ossf_status ossf_exp_split(const ossf_matrix* h, double tol,
                           ossf_matrix** conjugacy, ossf_matrix** block_zero,
                           ossf_matrix** block_positive);

/* ---- simulation ------------------------------------------------------ */

ossf_status ossf_sim_sample(const char* model, double gamma,
                            const ossf_matrix* grid, int n_samples,
                            uint64_t seed, ossf_matrix** samples);
ossf_status ossf_sim_verify(const char* model, double gamma,
                            const ossf_matrix* E, const ossf_matrix* H,
                            double c, const ossf_matrix* grid, int n_samples,
                            uint64_t seed, double k_sigma, char** json_report);

/* ---- semistable counterexample -------------------------------------- */

/* Lattice identity psi(b theta) = c0 psi(theta) over a uniform theta grid,
 * plus (when off_lattice_c > 0) the o.s.s. failure witness at that c. */
ossf_status ossf_semistable_check(double b, double c0, int truncation,
                                  double theta_min, double theta_max,
                                  int n_theta, double off_lattice_c,
                                  char** json_report);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* OSSFIELD_H */
