#include <stdio.h>
#include "diskbsp.h"

int main(void) {
    DiskbspPlan *plan = NULL;
    if (diskbsp_plan_new(8, 0.0, &plan) != DISKBSP_STATUS_OK) return 10;
    double pixels[64];
    for (int i = 0; i < 64; i++) pixels[i] = (double)((i * 7) % 5) / 4.0;
    DiskbspCoeffs *a = NULL;
    if (diskbsp_dht_forward(plan, pixels, 64, DISKBSP_BACKEND_DIRECT, &a) != DISKBSP_STATUS_OK) return 11;
    DiskbspSelective *b = NULL;
    if (diskbsp_selective_bispectrum(a, &b) != DISKBSP_STATUS_OK) return 12;
    DiskbspCoeffs *r = NULL;
    if (diskbsp_invert_selective(b, &r) != DISKBSP_STATUS_OK) return 13;
    DiskbspPlan *bad = NULL;
    if (diskbsp_plan_new(5, 0.0, &bad) != DISKBSP_STATUS_INVALID_ARGUMENT) return 14;
    char msg[128];
    if (diskbsp_last_error(msg, sizeof msg) == 0) return 15;
    printf("%zu %zu %s\n", diskbsp_selective_len(b), diskbsp_coeffs_len(r), msg);
    diskbsp_coeffs_free(r);
    diskbsp_selective_free(b);
    diskbsp_coeffs_free(a);
    diskbsp_plan_free(plan);
    return 0;
}
