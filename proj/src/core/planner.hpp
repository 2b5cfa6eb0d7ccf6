#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "core/records.hpp"
#include "core/smith.hpp"
#include "core/stats.hpp"

namespace samplan::planner {

// Which households an augment target is drawn from.
enum class Cohort { all, transit_users, no_car };

Cohort parse_cohort(const std::string& s);
std::string to_string(Cohort c);

struct AugmentTarget {
    std::string name;
    Cohort cohort = Cohort::all;
    smith::StratificationScheme scheme;
};

struct AugmentResult {
    std::string name;
    Cohort cohort = Cohort::all;
    std::int64_t cohort_size = 0;
    std::int64_t sample = 0;        // allocator final total for the cohort
    std::int64_t contribution = 0;  // after the overlap policy
    bool skipped = false;
    std::string note;
    nlohmann::json plan;  // full allocator plan when not skipped
};

struct RegionInput {
    std::string name;
    std::int64_t household_population = 0;    // frame size (>= microdata size)
    std::vector<HouseholdRecord> households;  // microdata reference
    std::vector<TripRecord> trips;
    std::vector<AugmentTarget> targets;
};

enum class OverlapPolicy { additive, credit_core };

OverlapPolicy parse_overlap(const std::string& s);
std::string to_string(OverlapPolicy p);

struct RegionPlan {
    std::string name;
    std::int64_t population = 0;
    std::int64_t core_size = 0;
    std::vector<AugmentResult> augments;
    std::int64_t total = 0;
    double effective_rate = 0.0;
};

struct CoreAugmentPlan {
    double core_rate = 0.0;
    std::string overlap_policy;
    std::vector<RegionPlan> regions;
    std::int64_t total_core = 0;
    std::int64_t total_augment = 0;
    std::int64_t total = 0;
};

std::int64_t core_size(std::int64_t population, double core_rate);

// One allocator plan per target; cohorts with no households in the microdata
// are skipped with a note instead of failing the whole plan.
std::vector<AugmentResult> plan_augment(const std::vector<HouseholdRecord>& households,
                                        const std::vector<TripRecord>& trips,
                                        const std::vector<AugmentTarget>& targets,
                                        const stats::SizeSpec& spec,
                                        const smith::Options& options = {});

// Core sizes plus augments under the overlap policy. `additive` stacks the
// augment on top of the core; `credit_core` subtracts the core's expected
// coverage of the cohort, floored at zero.
CoreAugmentPlan combine_plan(const std::vector<RegionInput>& regions, double core_rate,
                             const stats::SizeSpec& spec,
                             OverlapPolicy policy = OverlapPolicy::additive,
                             const smith::Options& options = {});

std::string plan_csv(const CoreAugmentPlan& plan);
nlohmann::json plan_json(const CoreAugmentPlan& plan);

}  // namespace samplan::planner
