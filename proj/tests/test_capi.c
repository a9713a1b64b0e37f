/* Exercises the C interface from plain C. */
#include "cdqvi/cdqvi.h"

#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

static int failures = 0;

#define CHECK(cond)                                                   \
  do {                                                                \
    if (!(cond)) {                                                    \
      fprintf(stderr, "%s:%d: CHECK(%s) failed\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                     \
    }                                                                 \
  } while (0)

static cdqvi_instance* tiny(void) {
  const double fext[2] = {0.0, 1.0};
  cdqvi_contact_spec spec;
  cdqvi_contact_spec_default(&spec);
  spec.fext = fext;
  spec.fext_len = 2;
  cdqvi_instance* inst = NULL;
  CHECK(cdqvi_instance_generate(&spec, &inst) == CDQVI_OK);
  return inst;
}

static void test_instances(void) {
  cdqvi_instance* inst = tiny();
  size_t n = 0, m = 0;
  CHECK(cdqvi_instance_dims(inst, &n, &m) == CDQVI_OK);
  CHECK(n == 2 && m == 4);
  double phi = 0.0;
  CHECK(cdqvi_instance_phi(inst, &phi) == CDQVI_OK && phi == 1.0);

  /* Y at the known solution tau = 0, lambda = (0, 0, 1, 0) */
  const double tau[2] = {0.0, 0.0};
  const double lambda[4] = {0.0, 0.0, 1.0, 0.0};
  double y[6];
  CHECK(cdqvi_kkt_residual(inst, tau, lambda, y) == CDQVI_OK);
  for (int i = 0; i < 6; ++i) CHECK(fabs(y[i]) <= 1e-15);

  cdqvi_instance* other = NULL;
  CHECK(cdqvi_instance_with_phi(inst, 5.0, &other) == CDQVI_OK);
  CHECK(cdqvi_instance_phi(other, &phi) == CDQVI_OK && phi == 5.0);
  cdqvi_instance_free(other);

  const char* path = "cdqvi_capi_instance.json";
  CHECK(cdqvi_instance_set_meta(inst, "{\"k\":1}") == CDQVI_OK);
  CHECK(cdqvi_instance_set_meta(inst, "{bad") != CDQVI_OK);
  CHECK(cdqvi_instance_save(inst, path) == CDQVI_OK);
  cdqvi_instance* loaded = NULL;
  CHECK(cdqvi_instance_load(path, &loaded) == CDQVI_OK);
  double y2[6];
  CHECK(cdqvi_kkt_residual(loaded, tau, lambda, y2) == CDQVI_OK);
  CHECK(memcmp(y, y2, sizeof y) == 0);
  cdqvi_instance_free(loaded);
  remove(path);
  cdqvi_instance_free(inst);

  /* error paths */
  cdqvi_instance* none = NULL;
  CHECK(cdqvi_instance_load("does/not/exist.json", &none) == CDQVI_ERR_IO);
  CHECK(none == NULL);
  CHECK(strlen(cdqvi_last_error()) > 0);
  FILE* f = fopen("cdqvi_capi_bad.json", "w");
  fputs("{\"N\": 2,", f);
  fclose(f);
  CHECK(cdqvi_instance_load("cdqvi_capi_bad.json", &none) == CDQVI_ERR_PARSE);
  remove("cdqvi_capi_bad.json");

  cdqvi_contact_spec spec;
  cdqvi_contact_spec_default(&spec);
  spec.nodes = 0;
  CHECK(cdqvi_instance_generate(&spec, &none) == CDQVI_ERR_USAGE);
  cdqvi_contact_spec_default(&spec);
  const double short_load[1] = {1.0};
  spec.fext = short_load;
  spec.fext_len = 1;
  CHECK(cdqvi_instance_generate(&spec, &none) == CDQVI_ERR_USAGE);
  CHECK(cdqvi_instance_generate(NULL, &none) == CDQVI_ERR_USAGE);
  CHECK(cdqvi_instance_dims(NULL, NULL, NULL) == CDQVI_ERR_USAGE);
}

static void test_solve(void) {
  cdqvi_instance* inst = tiny();
  cdqvi_solver_params params;
  cdqvi_solver_params_default(&params);
  CHECK(params.eps0 == 1e-4 && params.delta0 == 0.1 && params.gamma == 0.1 && params.outer_tol == 1e-4);

  cdqvi_report* rep = NULL;
  CHECK(cdqvi_solve(inst, &params, NULL, "tiny", &rep) == CDQVI_OK);
  cdqvi_report_summary s;
  CHECK(cdqvi_report_get_summary(rep, &s) == CDQVI_OK);
  CHECK(s.status == CDQVI_SOLVED);
  CHECK(s.final_residual <= 1e-4);
  CHECK(s.outer_iterations >= 1);
  double tau[2], lambda[4], sigma[4];
  CHECK(cdqvi_report_get_solution(rep, tau, lambda, sigma) == CDQVI_OK);
  CHECK(fabs(tau[0]) <= 1e-4 && fabs(tau[1]) <= 1e-4);
  CHECK(fabs(lambda[2] - 1.0) <= 1e-4);

  size_t count = 0;
  CHECK(cdqvi_report_get_schedule(rep, &count, NULL, NULL) == CDQVI_OK);
  CHECK(count == (size_t)s.outer_iterations);
  double eps[32], delta[32];
  CHECK(count <= 32);
  CHECK(cdqvi_report_get_schedule(rep, &count, eps, delta) == CDQVI_OK);
  CHECK(eps[0] == 1e-4 && delta[0] == 0.1);

  char* text = NULL;
  const cdqvi_report* one[1] = {rep};
  CHECK(cdqvi_render_reports(one, 1, CDQVI_FORMAT_CSV, 0, &text) == CDQVI_OK);
  CHECK(strncmp(text, "problem,phi,status", 18) == 0);
  CHECK(strstr(text, "tiny,1,solved,") != NULL);
  CHECK(strstr(text, ",NA,") != NULL);
  cdqvi_string_free(text);

  /* start from the solution: no inner solve is needed */
  double start[10] = {0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  cdqvi_report* warm = NULL;
  CHECK(cdqvi_solve(inst, &params, start, "warm", &warm) == CDQVI_OK);
  CHECK(cdqvi_report_get_summary(warm, &s) == CDQVI_OK);
  CHECK(s.outer_iterations == 0 && s.status == CDQVI_SOLVED);
  cdqvi_report_free(warm);

  params.gamma = 2.0;
  cdqvi_report* bad = NULL;
  CHECK(cdqvi_solve(inst, &params, NULL, "bad", &bad) == CDQVI_ERR_USAGE);
  CHECK(bad == NULL);

  cdqvi_report_free(rep);
  cdqvi_instance_free(inst);
}

static void test_sweep(void) {
  cdqvi_contact_spec spec;
  cdqvi_contact_spec_default(&spec);
  spec.nodes = 3;
  spec.coupling = 0.3;
  cdqvi_instance* inst = NULL;
  CHECK(cdqvi_instance_generate(&spec, &inst) == CDQVI_OK);
  cdqvi_solver_params params;
  cdqvi_solver_params_default(&params);
  const double phis[3] = {0.01, 1.0, 10.0};
  cdqvi_report_list* a = NULL;
  cdqvi_report_list* b = NULL;
  CHECK(cdqvi_sweep(inst, phis, 3, &params, 1, "p3", &a) == CDQVI_OK);
  CHECK(cdqvi_sweep(inst, phis, 3, &params, 3, "p3", &b) == CDQVI_OK);
  CHECK(cdqvi_report_list_size(a) == 3);
  const cdqvi_report* ra[3];
  const cdqvi_report* rb[3];
  for (size_t i = 0; i < 3; ++i) {
    cdqvi_report_summary s;
    ra[i] = cdqvi_report_list_get(a, i);
    rb[i] = cdqvi_report_list_get(b, i);
    CHECK(cdqvi_report_get_summary(ra[i], &s) == CDQVI_OK);
    CHECK(s.phi == phis[i]);
  }
  CHECK(cdqvi_report_list_get(a, 3) == NULL);
  char* ta = NULL;
  char* tb = NULL;
  CHECK(cdqvi_render_reports(ra, 3, CDQVI_FORMAT_CSV, 0, &ta) == CDQVI_OK);
  CHECK(cdqvi_render_reports(rb, 3, CDQVI_FORMAT_CSV, 0, &tb) == CDQVI_OK);
  CHECK(strcmp(ta, tb) == 0);
  cdqvi_string_free(ta);
  cdqvi_string_free(tb);
  cdqvi_report_list_free(a);
  cdqvi_report_list_free(b);
  cdqvi_instance_free(inst);
}

static void test_oracle(void) {
  cdqvi_instance* inst = tiny();
  cdqvi_kkt_list* list = NULL;
  CHECK(cdqvi_oracle_enumerate(inst, 1e-9, &list) == CDQVI_OK);
  CHECK(cdqvi_kkt_list_size(list) == 1);
  double tau[2], lambda[4], residual = 1.0;
  uint32_t active = 0;
  CHECK(cdqvi_kkt_list_get(list, 0, tau, lambda, &active, &residual) == CDQVI_OK);
  CHECK(fabs(lambda[2] - 1.0) <= 1e-12 && residual <= 1e-12);
  CHECK(active == 4u);
  CHECK(cdqvi_kkt_list_get(list, 1, tau, lambda, &active, &residual) == CDQVI_ERR_USAGE);
  char* text = NULL;
  CHECK(cdqvi_kkt_list_render(list, CDQVI_FORMAT_JSON, &text) == CDQVI_OK);
  CHECK(text[0] == '[');
  cdqvi_string_free(text);
  cdqvi_kkt_list_free(list);
  cdqvi_instance_free(inst);

  cdqvi_instance* big = NULL;
  CHECK(cdqvi_instance_random(6, 1.0, 10.0, 1, &big) == CDQVI_OK);
  cdqvi_kkt_list* none = NULL;
  CHECK(cdqvi_oracle_enumerate(big, 1e-9, &none) == CDQVI_ERR_CAPABILITY);
  cdqvi_instance_free(big);
}

static void test_self_check(void) {
  int32_t failed = -1;
  char* text = NULL;
  CHECK(cdqvi_self_check(1, &failed, &text) == CDQVI_OK);
  CHECK(failed == 0);
  CHECK(text != NULL && strlen(text) > 0);
  cdqvi_string_free(text);
  CHECK(strlen(cdqvi_version()) > 0);
}

int main(void) {
  test_instances();
  test_solve();
  test_sweep();
  test_oracle();
  test_self_check();
  if (failures == 0) printf("capi: all checks passed\n");
  return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
