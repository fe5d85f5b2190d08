#include <stdio.h>
#include <string.h>

#include "hsca.h"

int main(void) {
    HscaConfig *cfg = NULL;
    HscaReport *report = NULL;
    size_t ms[] = {3};
    size_t pass = 0, fail = 0, skip = 0;

    if (hsca_config_new(&cfg) != HSCA_STATUS_OK) return 1;
    if (hsca_config_set_suites(cfg, "almansi") != HSCA_STATUS_OK) return 2;
    if (hsca_config_set_m(cfg, ms, 1) != HSCA_STATUS_OK) return 3;
    if (hsca_config_set_params(cfg, 5, 2, 1, 1e-8, 1) != HSCA_STATUS_OK) return 4;
    size_t ks[] = {2};
    if (hsca_config_set_k(cfg, ks, 1) != HSCA_STATUS_OK) return 5;
    if (hsca_run(cfg, &report) != HSCA_STATUS_OK) {
        fprintf(stderr, "%s\n", hsca_last_error());
        return 6;
    }
    hsca_report_counts(report, &pass, &fail, &skip);
    printf("hsca %s pass=%zu fail=%zu skip=%zu\n", hsca_version(), pass, fail, skip);

    if (hsca_config_set_suites(cfg, "bogus") != HSCA_STATUS_UNKNOWN_SUITE) return 7;
    if (strstr(hsca_last_error(), "bogus") == NULL) return 8;

    hsca_report_free(report);
    hsca_config_free(cfg);
    return hsca_report_exit_code(NULL) == -1 ? 0 : 9;
}
