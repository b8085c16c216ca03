#include <math.h>
#include <stdio.h>
#include <string.h>

#include "qcbound.h"

#define CHECK(cond)                                                   \
    do {                                                              \
        if (!(cond)) {                                                \
            fprintf(stderr, "%s:%d: check failed: %s\n", __FILE__,    \
                    __LINE__, #cond);                                 \
            return 1;                                                 \
        }                                                             \
    } while (0)

int main(void) {
    QcExpr *f = NULL;
    CHECK(qc_expr_parse("exp(t)", &f) == QC_STATUS_OK);

    double v = 0.0;
    CHECK(qc_expr_derivative(f, 1.0, 3, &v) == QC_STATUS_OK);
    CHECK(fabs(v - exp(1.0)) < 1e-14);

    QcProblem prob = {0.0, 1.0, 0.5, 2};
    double t31 = 0.0;
    CHECK(qc_bound(f, QC_THEOREM_T31, prob, NAN, 2.0, &t31) == QC_STATUS_OK);
    CHECK(fabs(t31 - exp(1.0) / 12.0) < 1e-15);

    QcBoundReport rows[QC_MAX_REPORTS];
    size_t len = 0;
    CHECK(qc_evaluate_all(f, prob, 2.0, 2.0, rows, QC_MAX_REPORTS, &len) == QC_STATUS_OK);
    CHECK(len == 7);
    for (size_t i = 0; i < len; i++) {
        CHECK(rows[i].holds && rows[i].hypothesis_ok);
    }
    CHECK(isnan(rows[4].x));

    QcIdentityReport id;
    CHECK(qc_check_trapezoid_identity(f, prob, 1e-8, &id) == QC_STATUS_OK);
    CHECK(id.pass && id.kind == QC_IDENTITY_TRAPEZOID);

    QcProblem n1 = {0.0, 1.0, 0.5, 1};
    CHECK(qc_bound(f, QC_THEOREM_T23, n1, 3.0, 1.5, &v) == QC_STATUS_KERNEL_DIVERGENT);
    CHECK(strstr(qc_last_error_message(), "validity") != NULL);
    qc_expr_free(f);

    QcExpr *bad = NULL;
    CHECK(qc_expr_parse("exp(", &bad) == QC_STATUS_PARSE);
    CHECK(bad == NULL);
    CHECK(strstr(qc_last_error_message(), "offset 4") != NULL);

    printf("ok %s\n", qc_version());
    return 0;
}
