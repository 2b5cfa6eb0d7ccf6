#ifndef SAMPLAN_H
#define SAMPLAN_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Error codes returned by every fallible call. */
enum {
    SP_OK = 0,
    SP_ERR_ARGUMENT = 1,   /* null pointer / bad argument at the C boundary */
    SP_ERR_CONFIG = 2,     /* invalid request or configuration */
    SP_ERR_DATA = 3,       /* malformed or inconsistent input data */
    SP_ERR_DEGENERATE = 4, /* input valid but statistically degenerate */
    SP_ERR_INTERNAL = 5
};

/* Opaque handle owning request state and the last error message. */
typedef struct sp_workspace sp_workspace;

int sp_workspace_create(sp_workspace** out);
void sp_workspace_destroy(sp_workspace* ws);

/* Human-readable message for the last failed call on this workspace.
 * Owned by the workspace; valid until the next call or destroy. */
const char* sp_last_error(const sp_workspace* ws);

/* Executes one JSON request (see docs: commands rates, smith, rmse, od,
 * sweep, plan, simulate, fixture) and returns the response JSON in
 * *response_json. Free the string with sp_string_free. */
int sp_run(sp_workspace* ws, const char* request_json, char** response_json);

void sp_string_free(char* s);

/* Required sampling rate for one O-D interchange of `trip_total` trips. */
int sp_interchange_rate(sp_workspace* ws, int64_t trip_total, double cv, double confidence,
                        double margin_of_error, double* out_rate);

/* Inverse standard-normal CDF. */
int sp_normal_quantile(sp_workspace* ws, double p, double* out_value);

const char* sp_version(void);
int sp_schema_version(void);

#ifdef __cplusplus
}
#endif

#endif /* SAMPLAN_H */
