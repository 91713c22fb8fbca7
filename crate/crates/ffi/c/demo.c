#include <stdio.h>
#include "hexatope.h"

static void shift(const double *x, double *out, size_t dim, void *user) {
    (void)user;
    for (size_t i = 0; i < dim; i++)
        out[i] = 0.5 * x[i] + 0.2;
}

int main(void) {
    HxPosition *p = NULL;
    if (hx_position_new(3, 3, &p) != HX_STATUS_OK) {
        fprintf(stderr, "%s\n", hx_last_error());
        return 1;
    }
    HxPlayer w;
    size_t r, c;
    if (hx_position_solve(p, &w, &r, &c) != HX_STATUS_OK) {
        fprintf(stderr, "%s\n", hx_last_error());
        return 1;
    }
    printf("3x3: %s wins, first move (%zu,%zu)\n", w == HX_PLAYER_WHITE ? "White" : "Black", r, c);
    hx_position_free(p);

    double x[3], res;
    if (hx_brouwer_fixed_point(3, shift, NULL, 1e-3, x, &res) != HX_STATUS_OK) {
        fprintf(stderr, "%s\n", hx_last_error());
        return 1;
    }
    printf("fixed point ~ (%.3f, %.3f, %.3f), residual %.2g\n", x[0], x[1], x[2], res);
    return 0;
}
