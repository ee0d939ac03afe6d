/*
 * Copyright 2026 The kzpar Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* The public header must compile as plain C and the library must link from C. */

#include <stdio.h>

#include "kaczmarz/kaczmarz.h"

#define CHECK(cond)                                                        \
    do {                                                                   \
        if (!(cond)) {                                                     \
            fprintf(stderr, "%s:%d: check failed: %s (%s)\n", __FILE__,    \
                    __LINE__, #cond, kz_last_error_message());             \
            return 1;                                                      \
        }                                                                  \
    } while (0)

int
main(void)
{
    kz_generator_config g;
    kz_solver_config    cfg;
    kz_run_report       rep;
    kz_system*          sys = NULL;
    char                row[256];

    kz_generator_config_default(&g);
    g.mother_rows = 100;
    g.mother_cols = 8;
    g.seed        = 3;
    CHECK(kz_system_generate(&g, &sys) == KZ_OK);

    kz_solver_config_default(&cfg);
    cfg.variant = KZ_VARIANT_RKA;
    cfg.q       = 2;
    CHECK(kz_solve(sys, &cfg, &rep, NULL, 0) == KZ_OK);
    CHECK(rep.converged);
    CHECK(kz_format_report_row(&rep, 0, row, sizeof row) > 0);
    printf("%s\n%s\n", kz_report_csv_header(), row);

    kz_system_free(sys);
    return 0;
}
