// Copyright 2026 The porohdg Authors
// SPDX-License-Identifier: Apache-2.0

/* The public header must be usable from plain C. */

#include <stdio.h>

#include "porohdg/porohdg.h"

int main(void) {
  porohdg_config* cfg = NULL;
  porohdg_result* res = NULL;
  porohdg_run_options opt = porohdg_run_options_default();
  porohdg_status s = porohdg_config_from_scenario("example1-compressible", &cfg);
  if (s != POROHDG_OK) {
    fprintf(stderr, "%s\n", porohdg_last_error());
    return 1;
  }
  if (porohdg_config_set(cfg, "mode", "oracle-check") != POROHDG_OK) return 1;
  opt.write_files = 0;
  s = porohdg_run(cfg, &opt, &res);
  porohdg_config_free(cfg);
  if (s != POROHDG_OK) {
    fprintf(stderr, "%s\n", porohdg_last_error());
    return 1;
  }
  printf("porohdg %s oracle difference %.3e\n", porohdg_version(),
         porohdg_result_oracle_difference(res));
  s = porohdg_result_oracle_difference(res) <= 1e-9 ? POROHDG_OK : POROHDG_ERR_SOLVER;
  porohdg_result_free(res);
  return s == POROHDG_OK ? 0 : 1;
}
