#ifndef AMPC_H
#define AMPC_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Predictive coordinate control for an aerial manipulator: data collection,
 * residual network training, and closed-loop tracking experiments behind an
 * opaque context. All functions returning int yield AMPC_OK or an error code;
 * ampc_last_error describes the most recent failure. */

typedef struct ampc_ctx ampc_ctx;

enum {
  AMPC_OK = 0,
  AMPC_ERROR = 1,            /* unexpected failure */
  AMPC_BAD_CONFIG = 2,       /* malformed config file, key, or value */
  AMPC_MISSING_ARTIFACT = 3, /* run needs a model artifact that is absent */
  AMPC_DIVERGED = 4,         /* plant left the divergence envelope */
  AMPC_SOLVER_FAILURE = 5    /* optimizer produced unusable output */
};

ampc_ctx* ampc_create(void);
void ampc_destroy(ampc_ctx* ctx);

const char* ampc_version(void);
const char* ampc_last_error(const ampc_ctx* ctx);

/* Replaces the context config with defaults overlaid by the file. */
int ampc_load_config(ampc_ctx* ctx, const char* path);

/* Sets one entry, e.g. ("run.seed", "7") or ("mpc.horizon", "15"). */
int ampc_set_option(ampc_ctx* ctx, const char* dotted_key, const char* value);

/* Scripted data-collection schedule to a dataset CSV. */
int ampc_collect(ampc_ctx* ctx, const char* out_csv);

/* Offline training on a dataset CSV; writes the model artifact. */
int ampc_train(ampc_ctx* ctx, const char* data_csv, const char* artifact_out);

/* Closed-loop experiment; scenario is "clover" or "moving_target". */
int ampc_run(ampc_ctx* ctx, const char* scenario, const char* out_csv);

/* Recomputes metrics from a previously written run CSV. */
int ampc_replay(ampc_ctx* ctx, const char* csv_path);

/* Copies the report of the last successful collect/train/run/replay into buf
 * (NUL-terminated, truncated to cap). Returns the full length. */
int ampc_report_text(const ampc_ctx* ctx, char* buf, size_t cap);

/* Copies the canonical config text into buf. Returns the full length. */
int ampc_config_text(const ampc_ctx* ctx, char* buf, size_t cap);

#ifdef __cplusplus
}
#endif

#endif /* AMPC_H */
