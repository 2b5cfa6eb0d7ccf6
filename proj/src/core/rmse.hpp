#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "core/records.hpp"

namespace samplan::rmse {

struct Category {
    std::string label;
    double value = 0.0;  // count or expanded count
};

struct MarginalTable {
    std::string variable;
    std::vector<Category> categories;
};

struct CategoryError {
    std::string variable;
    std::string category;
    double reference = 0.0;
    double sample = 0.0;
    double relative_error = 0.0;  // (r - s) / r, signed
    bool uncoverable = false;     // r == 0 with s > 0; excluded from RMSE
};

// Signed per-category errors for one variable pair. Category sets must match;
// zero-reference categories are flagged and excluded downstream.
std::vector<CategoryError> relative_errors(const MarginalTable& reference,
                                           const MarginalTable& sample);

enum class RmseMode { per_variable, pooled };

// Percent RMSE over paired variable lists. per_variable follows the printed
// composition: mean of squared relative errors within each variable, then mean
// over variables, then root, x100. pooled averages all categories at once.
double percent_rmse(const std::vector<MarginalTable>& references,
                    const std::vector<MarginalTable>& samples,
                    RmseMode mode = RmseMode::per_variable);

struct Report {
    std::vector<CategoryError> per_category;
    std::vector<std::pair<std::string, double>> per_variable_rmse;  // percent
    double overall_percent_rmse = 0.0;
    std::vector<std::string> skipped_variables;  // requested but absent from microdata
    int excluded_categories = 0;                 // zero-reference exclusions
    bool weighted = false;
    RmseMode mode = RmseMode::per_variable;
};

// Builds sample marginals from microdata (household sizes from household
// records, mode users from trips), compares against the reference set.
// Variables in `references` with no microdata counterpart are skipped with a
// warning and reduce the variable count. Empty geography means no filter.
Report audit(const std::vector<HouseholdRecord>& households,
             const std::vector<TripRecord>& trips,
             const std::vector<MarginalTable>& references, const std::string& geography = "",
             RmseMode mode = RmseMode::per_variable);

// Marginals the audit can derive from the bundled microdata schemas.
MarginalTable household_size_marginal(const std::vector<HouseholdRecord>& households,
                                      bool weighted);
MarginalTable mode_user_marginal(const std::vector<TripRecord>& trips, bool weighted);

std::vector<MarginalTable> parse_marginals_csv(const std::string& text);
std::string emit_marginals_csv(const std::vector<MarginalTable>& tables);

nlohmann::json report_json(const Report& report);

}  // namespace samplan::rmse
