#include <stdio.h>
#include <string.h>
#include "hypq.h"

#define CHECK(cond)                                            \
    do {                                                       \
        if (!(cond)) {                                         \
            fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond); \
            return 1;                                          \
        }                                                      \
    } while (0)

int main(void) {
    double lhs = 0, rhs = 0;
    CHECK(hypq_lhs(HYPQ_CASE_PLUS_ONE, 1.0, 0.75, 0.3, NULL, &lhs) == HYPQ_STATUS_OK);
    CHECK(hypq_rhs(HYPQ_CASE_PLUS_ONE, 1.0, 0.75, 0.3, NULL, &rhs) == HYPQ_STATUS_OK);
    CHECK(lhs - rhs < 1e-13 && rhs - lhs < 1e-13);

    CHECK(hypq_lhs(HYPQ_CASE_GAUSS, 1.0, 0.75, -0.5, NULL, &lhs) == HYPQ_STATUS_DOMAIN_ERROR);
    CHECK(strstr(hypq_last_error(), "4x/(1+x)^2") != NULL);

    HypqCoeffs *rec = NULL, *closed = NULL;
    CHECK(hypq_coeffs_recurrence(HYPQ_CASE_MINUS_ONE, "2/7", "1/3", "4/3", 20, &rec) == HYPQ_STATUS_OK);
    CHECK(hypq_coeffs_closed_form(HYPQ_CASE_MINUS_ONE, HYPQ_BRANCH_SINGULAR, "2/7", "1/3", 20, &closed) == HYPQ_STATUS_OK);
    bool same = false;
    CHECK(hypq_coeffs_equal(rec, closed, &same) == HYPQ_STATUS_OK && same);
    char *s = NULL;
    CHECK(hypq_coeffs_lambda_string(rec, &s) == HYPQ_STATUS_OK && strcmp(s, "4/3") == 0);
    hypq_string_free(s);
    hypq_coeffs_free(rec);
    hypq_coeffs_free(closed);

    HypqCoeffs *bad = NULL;
    CHECK(hypq_coeffs_recurrence(HYPQ_CASE_MINUS_ONE, "1", "1", "0", 20, &bad) == HYPQ_STATUS_RESONANT_EXPONENT);
    CHECK(bad == NULL);

    HypqReport *rep = NULL;
    size_t n_pass = 0, n_fail = 1;
    CHECK(hypq_check_identity(HYPQ_CASE_GAUSS, 50, 42, 1e-10, NULL, &rep) == HYPQ_STATUS_OK);
    CHECK(hypq_report_counts(rep, &n_pass, &n_fail, NULL) == HYPQ_STATUS_OK);
    CHECK(n_pass == 50 && n_fail == 0);
    hypq_report_free(rep);

    double xs[] = {0.1, 0.2, 0.3, 0.4};
    HypqConnection k;
    CHECK(hypq_fit(HYPQ_CASE_GAUSS, 0.5, 0.25, xs, 4, NULL, &k) == HYPQ_STATUS_OK);
    CHECK(k.coef_a - 1.0 < 1e-8 && 1.0 - k.coef_a < 1e-8);

    printf("ok %s\n", hypq_version());
    return 0;
}
