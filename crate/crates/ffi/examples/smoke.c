#include <stdio.h>
#include "sphw.h"

int main(void) {
    const double a[] = {0.0, 0.0}, b[] = {3.0, 4.0}, w[] = {1.0};
    SphwMeasure *mu = NULL, *nu = NULL;
    double d = 0.0;
    if (sphw_measure_new(a, w, 1, 2, &mu) != SPHW_STATUS_OK) return 1;
    if (sphw_measure_new(b, w, 1, 2, &nu) != SPHW_STATUS_OK) return 1;
    if (sphw_wasserstein1(mu, nu, &d) != SPHW_STATUS_OK) return 1;
    sphw_measure_free(mu);
    sphw_measure_free(nu);

    const double bad[] = {0.5};
    if (sphw_measure_new(a, bad, 1, 1, &mu) != SPHW_STATUS_DOMAIN) return 2;
    char msg[128];
    sphw_last_error_message(msg, sizeof msg);
    printf("%s %.17g %s\n", sphw_version(), d, msg);
    return d == 5.0 ? 0 : 3;
}
