#include "core/planner.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <unordered_set>

#include "core/errors.hpp"

namespace samplan::planner {

using nlohmann::json;

Cohort parse_cohort(const std::string& s) {
    if (s == "all") return Cohort::all;
    if (s == "transit_users") return Cohort::transit_users;
    if (s == "no_car") return Cohort::no_car;
    throw ConfigError("unknown cohort '" + s + "' (expected all|transit_users|no_car)");
}

std::string to_string(Cohort c) {
    switch (c) {
        case Cohort::all: return "all";
        case Cohort::transit_users: return "transit_users";
        case Cohort::no_car: return "no_car";
    }
    return "all";
}

OverlapPolicy parse_overlap(const std::string& s) {
    if (s == "additive") return OverlapPolicy::additive;
    if (s == "credit-core" || s == "credit_core") return OverlapPolicy::credit_core;
    throw ConfigError("unknown overlap policy '" + s + "' (expected additive|credit-core)");
}

std::string to_string(OverlapPolicy p) {
    return p == OverlapPolicy::additive ? "additive" : "credit-core";
}

std::int64_t core_size(std::int64_t population, double core_rate) {
    if (!(core_rate > 0.0) || core_rate >= 1.0) {
        throw ConfigError("core_size: core_rate must be in (0, 1)");
    }
    if (population < 1) throw DataError("core_size: population must be >= 1");
    return static_cast<std::int64_t>(std::ceil(core_rate * static_cast<double>(population) - 1e-9));
}

namespace {

std::vector<HouseholdRecord> cohort_filter(const std::vector<HouseholdRecord>& households,
                                           const std::vector<TripRecord>& trips, Cohort cohort) {
    if (cohort == Cohort::all) return households;
    std::unordered_set<std::string> transit;
    if (cohort == Cohort::transit_users) {
        for (const auto& t : trips) {
            if (t.mode == Mode::transit) transit.insert(t.household_id);
        }
    }
    std::vector<HouseholdRecord> out;
    for (const auto& h : households) {
        const bool keep = cohort == Cohort::no_car ? h.vehicles == 0
                                                   : transit.count(h.household_id) > 0;
        if (keep) out.push_back(h);
    }
    return out;
}

}  // namespace

std::vector<AugmentResult> plan_augment(const std::vector<HouseholdRecord>& households,
                                        const std::vector<TripRecord>& trips,
                                        const std::vector<AugmentTarget>& targets,
                                        const stats::SizeSpec& spec,
                                        const smith::Options& options) {
    std::vector<AugmentResult> out;
    for (const auto& target : targets) {
        AugmentResult r;
        r.name = target.name;
        r.cohort = target.cohort;
        auto cohort = cohort_filter(households, trips, target.cohort);
        r.cohort_size = static_cast<std::int64_t>(cohort.size());
        if (cohort.empty()) {
            r.skipped = true;
            r.note = "cohort empty in microdata; target skipped";
            out.push_back(std::move(r));
            continue;
        }
        link_trip_counts(cohort, trips);
        try {
            const auto plan = smith::smith_plan(cohort, target.scheme, spec, options);
            r.sample = plan.final_total_rounded;
            r.contribution = r.sample;
            r.plan = smith::plan_json(plan);
        } catch (const DegenerateInputError& e) {
            r.skipped = true;
            r.note = e.what();
        }
        out.push_back(std::move(r));
    }
    return out;
}

CoreAugmentPlan combine_plan(const std::vector<RegionInput>& regions, double core_rate,
                             const stats::SizeSpec& spec, OverlapPolicy policy,
                             const smith::Options& options) {
    CoreAugmentPlan plan;
    plan.core_rate = core_rate;
    plan.overlap_policy = to_string(policy);
    std::set<std::string> seen;
    for (const auto& region : regions) {
        if (!seen.insert(region.name).second) {
            throw DataError("combine_plan: duplicate region '" + region.name + "'");
        }
        RegionPlan rp;
        rp.name = region.name;
        rp.population = region.household_population > 0
                            ? region.household_population
                            : static_cast<std::int64_t>(region.households.size());
        if (rp.population < 1) {
            throw DataError("combine_plan: region '" + region.name + "' has no population");
        }
        rp.core_size = core_size(rp.population, core_rate);
        rp.augments = plan_augment(region.households, region.trips, region.targets, spec, options);
        rp.total = rp.core_size;
        for (auto& a : rp.augments) {
            if (a.skipped) continue;
            if (policy == OverlapPolicy::credit_core) {
                // The core already reaches core_rate of the cohort by chance.
                const auto credited = static_cast<std::int64_t>(
                    std::llround(core_rate * static_cast<double>(a.cohort_size)));
                a.contribution = std::max<std::int64_t>(0, a.sample - credited);
            }
            rp.total += a.contribution;
            plan.total_augment += a.contribution;
        }
        rp.effective_rate = static_cast<double>(rp.total) / static_cast<double>(rp.population);
        plan.total_core += rp.core_size;
        plan.total += rp.total;
        plan.regions.push_back(std::move(rp));
    }
    return plan;
}

std::string plan_csv(const CoreAugmentPlan& plan) {
    std::ostringstream os;
    os.precision(12);
    os << "region,population,core_size,augment_total,total,effective_rate\n";
    for (const auto& r : plan.regions) {
        std::int64_t aug = 0;
        for (const auto& a : r.augments) {
            if (!a.skipped) aug += a.contribution;
        }
        os << r.name << ',' << r.population << ',' << r.core_size << ',' << aug << ',' << r.total
           << ',' << r.effective_rate << '\n';
    }
    os << "TOTAL,," << plan.total_core << ',' << plan.total_augment << ',' << plan.total << ",\n";
    return os.str();
}

json plan_json(const CoreAugmentPlan& plan) {
    json regions = json::array();
    for (const auto& r : plan.regions) {
        json augments = json::array();
        for (const auto& a : r.augments) {
            json entry = {{"name", a.name},
                          {"cohort", to_string(a.cohort)},
                          {"cohort_size", a.cohort_size},
                          {"sample", a.sample},
                          {"contribution", a.contribution},
                          {"skipped", a.skipped},
                          {"note", a.note}};
            if (!a.plan.is_null()) entry["plan"] = a.plan;
            augments.push_back(std::move(entry));
        }
        regions.push_back({{"region", r.name},
                           {"population", r.population},
                           {"core_size", r.core_size},
                           {"augments", std::move(augments)},
                           {"total", r.total},
                           {"effective_rate", r.effective_rate}});
    }
    return json{{"core_rate", plan.core_rate},
                {"overlap_policy", plan.overlap_policy},
                {"regions", std::move(regions)},
                {"total_core", plan.total_core},
                {"total_augment", plan.total_augment},
                {"total", plan.total}};
}

}  // namespace samplan::planner
