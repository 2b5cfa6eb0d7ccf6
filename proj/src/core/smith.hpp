#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "core/records.hpp"
#include "core/stats.hpp"

namespace samplan::smith {

// One stratification variable. Classification is resolved in this order:
//   - explicit `categories`: token must match one of them (else validation error);
//   - numeric `upper_bounds` [b1 < b2 < ...]: classes <=b1, <=b2, ..., >b_last;
//   - neither: observed distinct values become categories, except an all-numeric
//     income variable, which defaults to data-driven tertiles.
struct VariableSpec {
    std::string name;  // one of: size, vehicles, income_class
    std::vector<double> upper_bounds;
    std::vector<std::string> categories;
};

struct StratificationScheme {
    std::vector<VariableSpec> variables;
};

struct StratumStats {
    std::vector<std::string> key;  // one label per scheme variable
    std::int64_t count = 0;
    double frequency = 0.0;
    double mean_trip_rate = 0.0;
    double std_trip_rate = 0.0;
    double cv = 0.0;
    double weighted_cv = 0.0;
    bool thin = false;  // fewer than 2 households; std forced to 0
};

struct StratumTable {
    std::vector<StratumStats> strata;  // sorted by key
    double overall_mean_trip_rate = 0.0;
    double c_star = 0.0;
    std::int64_t population = 0;  // household count behind the table
    nlohmann::json scheme_resolved;  // boundaries actually used, echoed for output
};

enum class CvDenominator { overall, stratum };

struct Options {
    CvDenominator cv_denominator = CvDenominator::overall;
    stats::StdDenominator std_denominator = stats::StdDenominator::population;
};

// Household groups prior to the statistics pass.
struct Grouped {
    std::vector<std::vector<std::string>> keys;
    std::vector<std::vector<double>> trip_counts;  // per group, household trip totals
    double overall_mean_trip_rate = 0.0;
    std::int64_t population = 0;
    nlohmann::json scheme_resolved;
};

Grouped group_households(const std::vector<HouseholdRecord>& households,
                         const StratificationScheme& scheme);

StratumTable compute_stats(const Grouped& grouped, const Options& options = {});

// group + stats in one call.
StratumTable stratify(const std::vector<HouseholdRecord>& households,
                      const StratificationScheme& scheme, const Options& options = {});

// F = c_star^2 * z^2 / e^2.
double initial_sample_size(double c_star, const stats::SizeSpec& spec);

struct AllocationRow {
    double weight = 0.0;              // weighted_cv / c_star
    double optimal_allocation = 0.0;  // weight * F
    double expected_frequency = 0.0;  // frequency * F
    double final_required = 0.0;      // expected_frequency * rho
};

std::vector<AllocationRow> allocate(const StratumTable& table, double initial_size_f);

struct AugmentPlan {
    StratumTable table;
    double initial_size_f = 0.0;
    std::vector<AllocationRow> rows;  // parallel to table.strata
    std::size_t critical_index = 0;
    bool tied_critical = false;
    double inflation_rho = 1.0;
    double final_total = 0.0;
    std::int64_t final_total_rounded = 0;
    double sampling_rate = 0.0;  // final_total_rounded / population
    double confidence = 0.0;
    double margin_of_error = 0.0;
};

AugmentPlan critical_inflation(const StratumTable& table, std::vector<AllocationRow> rows,
                               double initial_size_f);

AugmentPlan smith_plan(const std::vector<HouseholdRecord>& households,
                       const StratificationScheme& scheme, const stats::SizeSpec& spec,
                       const Options& options = {});

nlohmann::json plan_json(const AugmentPlan& plan);
std::string plan_csv(const AugmentPlan& plan);

}  // namespace samplan::smith
