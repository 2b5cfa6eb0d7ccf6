#include "samplan/samplan.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "core/commands.hpp"
#include "core/errors.hpp"
#include "core/stats.hpp"

struct sp_workspace {
    std::string last_error;
};

namespace {

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out != nullptr) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

template <typename Fn>
int guarded(sp_workspace* ws, Fn&& fn) {
    if (ws == nullptr) return SP_ERR_ARGUMENT;
    ws->last_error.clear();
    try {
        return fn();
    } catch (const samplan::ConfigError& e) {
        ws->last_error = e.what();
        return SP_ERR_CONFIG;
    } catch (const samplan::DegenerateInputError& e) {
        ws->last_error = e.what();
        return SP_ERR_DEGENERATE;
    } catch (const samplan::DataError& e) {
        ws->last_error = e.what();
        return SP_ERR_DATA;
    } catch (const std::exception& e) {
        ws->last_error = e.what();
        return SP_ERR_INTERNAL;
    } catch (...) {
        ws->last_error = "unknown error";
        return SP_ERR_INTERNAL;
    }
}

}  // namespace

extern "C" {

int sp_workspace_create(sp_workspace** out) {
    if (out == nullptr) return SP_ERR_ARGUMENT;
    *out = new (std::nothrow) sp_workspace();
    return *out != nullptr ? SP_OK : SP_ERR_INTERNAL;
}

void sp_workspace_destroy(sp_workspace* ws) { delete ws; }

const char* sp_last_error(const sp_workspace* ws) {
    return ws == nullptr ? "" : ws->last_error.c_str();
}

int sp_run(sp_workspace* ws, const char* request_json, char** response_json) {
    if (request_json == nullptr || response_json == nullptr) return SP_ERR_ARGUMENT;
    return guarded(ws, [&] {
        const auto text = samplan::commands::run_command_text(request_json);
        *response_json = dup_string(text);
        return *response_json != nullptr ? SP_OK : SP_ERR_INTERNAL;
    });
}

void sp_string_free(char* s) { std::free(s); }

int sp_interchange_rate(sp_workspace* ws, int64_t trip_total, double cv, double confidence,
                        double margin_of_error, double* out_rate) {
    if (out_rate == nullptr) return SP_ERR_ARGUMENT;
    return guarded(ws, [&] {
        const samplan::stats::SizeSpec spec(confidence, margin_of_error);
        *out_rate = samplan::stats::interchange_rate(trip_total, cv, spec);
        return SP_OK;
    });
}

int sp_normal_quantile(sp_workspace* ws, double p, double* out_value) {
    if (out_value == nullptr) return SP_ERR_ARGUMENT;
    return guarded(ws, [&] {
        *out_value = samplan::stats::normal_quantile(p);
        return SP_OK;
    });
}

const char* sp_version(void) { return "1.0.0"; }

int sp_schema_version(void) { return samplan::commands::kSchemaVersion; }

}  // extern "C"
