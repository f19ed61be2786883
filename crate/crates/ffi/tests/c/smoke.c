#include <math.h>
#include <stdio.h>
#include <string.h>

#include "ecoc.h"

static int fail(const char *what) {
    char msg[256];
    ecoc_last_error_message(msg, sizeof msg);
    fprintf(stderr, "%s: %s\n", what, msg);
    return 1;
}

int main(void) {
    EcocCodeMatrix *code = NULL;
    if (ecoc_code_matrix_build(26, ECOC_ORIENTATION_KEEP_BOTTOM_RIGHT, &code) != ECOC_STATUS_OK)
        return fail("build");
    if (ecoc_code_matrix_n(code) != 26 || ecoc_code_matrix_d(code) != 12 || ecoc_code_matrix_m(code) != 6)
        return fail("code parameters");

    uint8_t word[26];
    ecoc_code_matrix_codeword(code, 7, word, 26);
    word[0] ^= 1;
    word[5] ^= 1;
    EcocDecoded decoded;
    if (ecoc_code_matrix_decode(code, word, 26, ECOC_TIE_POLICY_LOWEST_INDEX, &decoded) != ECOC_STATUS_OK
        || decoded.class_index != 7 || decoded.distance != 2)
        return fail("decode");

    double tail = 0.0;
    if (ecoc_tail_iid(10, 4, 0.1, &tail) != ECOC_STATUS_OK || fabs(tail - 0.0127951984) > 1e-9)
        return fail("tail");

    double c = 0.0058;
    EcocBoundReport report;
    if (ecoc_bounds(26, 6, 0.0686, &c, NULL, &report) != ECOC_STATUS_OK || !report.has_kz)
        return fail("bounds");
    if (fabs(report.gs - 0.2744) > 1e-12)
        return fail("gs");

    if (ecoc_tail_iid(10, 4, 1.5, &tail) != ECOC_STATUS_ARGUMENT)
        return fail("expected argument error");
    if (ecoc_last_error_message(NULL, 0) == 0)
        return fail("missing message");

    EcocModel *model = NULL;
    if (ecoc_model_exchangeable(26, 0.05, 0.01, &model) != ECOC_STATUS_OK)
        return fail("model");
    EcocSimConfig cfg = ecoc_sim_config_default();
    cfg.trials = 20000;
    EcocSimResult sim;
    if (ecoc_simulate_decode(model, code, -1, ECOC_TIE_POLICY_LOWEST_INDEX, &cfg, &sim) != ECOC_STATUS_OK
        || sim.trials != 20000)
        return fail("simulate");

    ecoc_model_free(model);
    ecoc_code_matrix_free(code);
    printf("ok %s\n", ecoc_version());
    return 0;
}
