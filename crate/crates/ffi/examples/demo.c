#include <stdio.h>
#include "overlap.h"

static int check(OlapStatus s, const char *what) {
    if (s != OLAP_STATUS_OK) {
        fprintf(stderr, "%s failed (%d): %s\n", what, (int)s, olap_last_error_message());
        return 1;
    }
    return 0;
}

int main(void) {
    OlapDensity *p0 = NULL, *p1 = NULL;
    OlapEstimate closed, quad, mc;
    OlapTrialConfig cfg = {100, 1.0, 0.05, 0.5, 0.0};
    OlapTrialDecision d;
    double c;

    if (check(olap_density_normal(0.0, 1.0, &p0), "p0")) return 1;
    if (check(olap_density_normal(0.164, 1.0, &p1), "p1")) return 1;
    if (check(olap_q_normal(0.164, 1.0, &closed), "closed form")) return 1;
    if (check(olap_om_quadrature(p0, p1, 401, &quad), "quadrature")) return 1;
    if (check(olap_om_monte_carlo(p0, p1, 20000, 7, &mc), "monte carlo")) return 1;
    if (check(olap_critical_value(&cfg, &c), "critical value")) return 1;
    if (check(olap_decide(0.164, &cfg, &d), "decide")) return 1;

    printf("closed_form %.6f\n", closed.value);
    printf("quadrature %.6f\n", quad.value);
    printf("monte_carlo %.6f %.6f\n", mc.value, mc.std_error);
    printf("critical_value %.6f\n", c);
    printf("reject_h0 %d q_rule_accepts_new %d\n", d.reject_h0, d.q_rule_accepts_new);

    if (olap_density_normal(0.0, -1.0, &p0) != OLAP_STATUS_INVALID_PARAMETER) return 2;
    printf("error %s\n", olap_last_error_message());

    olap_density_free(p0);
    olap_density_free(p1);
    return 0;
}
