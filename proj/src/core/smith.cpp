#include "core/smith.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

#include "core/errors.hpp"

namespace samplan::smith {

using nlohmann::json;

namespace {

bool is_numeric(const std::string& s) {
    if (s.empty()) return false;
    double v{};
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    return ec == std::errc{} && p == s.data() + s.size();
}

double numeric_value(const HouseholdRecord& h, const VariableSpec& var) {
    if (var.name == "size") return h.size;
    if (var.name == "vehicles") return h.vehicles;
    double v{};
    auto [p, ec] = std::from_chars(h.income_class.data(),
                                   h.income_class.data() + h.income_class.size(), v);
    if (ec != std::errc{} || p != h.income_class.data() + h.income_class.size()) {
        throw DataError("household '" + h.household_id + "': income_class '" + h.income_class +
                        "' is not numeric but the scheme uses numeric boundaries");
    }
    return v;
}

std::string bound_label(const std::vector<double>& bounds, std::size_t idx) {
    std::ostringstream os;
    if (idx < bounds.size()) {
        os << "<=" << bounds[idx];
    } else {
        os << ">" << bounds.back();
    }
    return os.str();
}

std::string classify_bounded(double v, const std::vector<double>& bounds) {
    for (std::size_t i = 0; i < bounds.size(); ++i) {
        if (v <= bounds[i]) return bound_label(bounds, i);
    }
    return bound_label(bounds, bounds.size());
}

std::string raw_token(const HouseholdRecord& h, const VariableSpec& var) {
    if (var.name == "size") return std::to_string(h.size);
    if (var.name == "vehicles") return std::to_string(h.vehicles);
    if (var.name == "income_class" || var.name == "income") return h.income_class;
    throw ConfigError("unknown stratification variable '" + var.name +
                      "' (expected size, vehicles or income_class)");
}

// Tertile boundaries over numeric income values (io default when the scheme
// gives no classing for income).
std::vector<double> income_tertiles(const std::vector<HouseholdRecord>& households) {
    std::vector<double> vals;
    vals.reserve(households.size());
    for (const auto& h : households) {
        double v{};
        auto [p, ec] = std::from_chars(h.income_class.data(),
                                       h.income_class.data() + h.income_class.size(), v);
        if (ec != std::errc{} || p != h.income_class.data() + h.income_class.size()) return {};
        vals.push_back(v);
    }
    std::sort(vals.begin(), vals.end());
    auto q = [&](double f) { return vals[static_cast<std::size_t>(f * (vals.size() - 1))]; };
    std::vector<double> b = {q(1.0 / 3.0), q(2.0 / 3.0)};
    if (b[0] == b[1]) b.pop_back();
    return b;
}

}  // namespace

Grouped group_households(const std::vector<HouseholdRecord>& households,
                         const StratificationScheme& scheme) {
    if (households.empty()) throw DataError("stratify: empty household list");
    if (scheme.variables.empty()) throw ConfigError("stratify: scheme needs >= 1 variable");

    // Resolve per-variable classing up front.
    std::vector<VariableSpec> resolved = scheme.variables;
    json scheme_echo = json::array();
    for (auto& var : resolved) {
        if (var.categories.empty() && var.upper_bounds.empty() &&
            (var.name == "income_class" || var.name == "income")) {
            var.upper_bounds = income_tertiles(households);
        }
        if (var.categories.empty() && var.upper_bounds.empty()) {
            // observed distinct tokens become the category set
            std::vector<std::string> seen;
            for (const auto& h : households) seen.push_back(raw_token(h, var));
            std::sort(seen.begin(), seen.end());
            seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
            var.categories = std::move(seen);
        }
        json v{{"name", var.name}};
        if (!var.upper_bounds.empty()) v["upper_bounds"] = var.upper_bounds;
        if (!var.categories.empty()) v["categories"] = var.categories;
        scheme_echo.push_back(std::move(v));
    }

    std::map<std::vector<std::string>, std::vector<double>> groups;
    double total_trips = 0.0;
    for (const auto& h : households) {
        std::vector<std::string> key;
        key.reserve(resolved.size());
        for (const auto& var : resolved) {
            if (!var.upper_bounds.empty()) {
                key.push_back(classify_bounded(numeric_value(h, var), var.upper_bounds));
            } else {
                std::string tok = raw_token(h, var);
                if (std::find(var.categories.begin(), var.categories.end(), tok) ==
                    var.categories.end()) {
                    throw DataError("household '" + h.household_id + "': value '" + tok +
                                    "' for variable '" + var.name +
                                    "' is outside the scheme's categories");
                }
                key.push_back(std::move(tok));
            }
        }
        groups[std::move(key)].push_back(h.trip_count);
        total_trips += h.trip_count;
    }

    Grouped out;
    out.population = static_cast<std::int64_t>(households.size());
    out.overall_mean_trip_rate = total_trips / static_cast<double>(households.size());
    out.scheme_resolved = std::move(scheme_echo);
    for (auto& [key, trips] : groups) {
        out.keys.push_back(key);
        out.trip_counts.push_back(std::move(trips));
    }
    return out;
}

StratumTable compute_stats(const Grouped& grouped, const Options& options) {
    if (!(grouped.overall_mean_trip_rate > 0.0)) {
        throw DegenerateInputError("compute_stats: overall mean trip rate is zero");
    }
    StratumTable table;
    table.population = grouped.population;
    table.overall_mean_trip_rate = grouped.overall_mean_trip_rate;
    table.scheme_resolved = grouped.scheme_resolved;
    table.strata.reserve(grouped.keys.size());
    for (std::size_t i = 0; i < grouped.keys.size(); ++i) {
        const auto& trips = grouped.trip_counts[i];
        StratumStats s;
        s.key = grouped.keys[i];
        s.count = static_cast<std::int64_t>(trips.size());
        s.frequency = static_cast<double>(trips.size()) / static_cast<double>(grouped.population);
        s.mean_trip_rate = stats::mean(trips);
        if (trips.size() < 2) {
            s.thin = true;
            s.std_trip_rate = 0.0;
        } else {
            s.std_trip_rate = stats::std_dev(trips, options.std_denominator);
        }
        const double denom = options.cv_denominator == CvDenominator::overall
                                 ? grouped.overall_mean_trip_rate
                                 : s.mean_trip_rate;
        s.cv = denom > 0.0 ? s.std_trip_rate / denom : 0.0;
        s.weighted_cv = s.frequency * s.cv;
        table.c_star += s.weighted_cv;
        table.strata.push_back(std::move(s));
    }
    return table;
}

StratumTable stratify(const std::vector<HouseholdRecord>& households,
                      const StratificationScheme& scheme, const Options& options) {
    return compute_stats(group_households(households, scheme), options);
}

double initial_sample_size(double c_star, const stats::SizeSpec& spec) {
    if (c_star < 0.0) throw ConfigError("initial_sample_size: c_star must be nonnegative");
    const double t = c_star * spec.z() / spec.margin_of_error();
    return t * t;
}

std::vector<AllocationRow> allocate(const StratumTable& table, double initial_size_f) {
    if (initial_size_f < 0.0) throw ConfigError("allocate: F must be nonnegative");
    if (!(table.c_star > 0.0)) {
        throw DegenerateInputError(
            "allocate: c_star is zero (no between/within dispersion; any sample suffices)");
    }
    std::vector<AllocationRow> rows;
    rows.reserve(table.strata.size());
    for (const auto& s : table.strata) {
        AllocationRow r;
        r.weight = s.weighted_cv / table.c_star;
        r.optimal_allocation = r.weight * initial_size_f;
        r.expected_frequency = s.frequency * initial_size_f;
        rows.push_back(r);
    }
    return rows;
}

AugmentPlan critical_inflation(const StratumTable& table, std::vector<AllocationRow> rows,
                               double initial_size_f) {
    AugmentPlan plan;
    plan.table = table;
    plan.initial_size_f = initial_size_f;

    std::size_t crit = 0;
    bool tied = false;
    for (std::size_t i = 1; i < table.strata.size(); ++i) {
        if (table.strata[i].cv > table.strata[crit].cv) {
            crit = i;
            tied = false;
        } else if (table.strata[i].cv == table.strata[crit].cv) {
            tied = true;  // first in key order wins; flagged
        }
    }
    plan.critical_index = crit;
    plan.tied_critical = tied;
    plan.inflation_rho = table.strata[crit].cv / table.c_star;
    for (auto& r : rows) r.final_required = r.expected_frequency * plan.inflation_rho;
    plan.rows = std::move(rows);
    plan.final_total = initial_size_f * plan.inflation_rho;
    plan.final_total_rounded = static_cast<std::int64_t>(std::ceil(plan.final_total - 1e-9));
    plan.sampling_rate = table.population > 0
                             ? static_cast<double>(plan.final_total_rounded) /
                                   static_cast<double>(table.population)
                             : 0.0;
    return plan;
}

AugmentPlan smith_plan(const std::vector<HouseholdRecord>& households,
                       const StratificationScheme& scheme, const stats::SizeSpec& spec,
                       const Options& options) {
    StratumTable table = stratify(households, scheme, options);
    const double f = initial_sample_size(table.c_star, spec);
    auto rows = allocate(table, f);
    AugmentPlan plan = critical_inflation(table, std::move(rows), f);
    plan.confidence = spec.confidence();
    plan.margin_of_error = spec.margin_of_error();
    return plan;
}

namespace {

std::string key_string(const std::vector<std::string>& key) {
    std::string out;
    for (const auto& part : key) {
        if (!out.empty()) out += '|';
        out += part;
    }
    return out;
}

}  // namespace

json plan_json(const AugmentPlan& plan) {
    json strata = json::array();
    for (std::size_t i = 0; i < plan.table.strata.size(); ++i) {
        const auto& s = plan.table.strata[i];
        const auto& r = plan.rows[i];
        strata.push_back({{"key", key_string(s.key)},
                          {"count", s.count},
                          {"frequency", s.frequency},
                          {"mean", s.mean_trip_rate},
                          {"std", s.std_trip_rate},
                          {"cv", s.cv},
                          {"weighted_cv", s.weighted_cv},
                          {"weight", r.weight},
                          {"optimal", r.optimal_allocation},
                          {"expected", r.expected_frequency},
                          {"final", r.final_required},
                          {"thin", s.thin}});
    }
    json out{{"spec",
              {{"confidence", plan.confidence},
               {"margin_of_error", plan.margin_of_error}}},
             {"scheme", plan.table.scheme_resolved},
             {"strata", std::move(strata)},
             {"overall_mean_trip_rate", plan.table.overall_mean_trip_rate},
             {"c_star", plan.table.c_star},
             {"F", plan.initial_size_f},
             {"critical", key_string(plan.table.strata[plan.critical_index].key)},
             {"tied_critical", plan.tied_critical},
             {"rho", plan.inflation_rho},
             {"final_total", plan.final_total},
             {"final_total_rounded", plan.final_total_rounded},
             {"population", plan.table.population},
             {"sampling_rate", plan.sampling_rate}};
    return out;
}

std::string plan_csv(const AugmentPlan& plan) {
    std::ostringstream os;
    os << "key,count,frequency,mean,std,cv,weighted_cv,weight,optimal,expected,final,thin\n";
    os.precision(12);
    for (std::size_t i = 0; i < plan.table.strata.size(); ++i) {
        const auto& s = plan.table.strata[i];
        const auto& r = plan.rows[i];
        os << key_string(s.key) << ',' << s.count << ',' << s.frequency << ','
           << s.mean_trip_rate << ',' << s.std_trip_rate << ',' << s.cv << ',' << s.weighted_cv
           << ',' << r.weight << ',' << r.optimal_allocation << ',' << r.expected_frequency
           << ',' << r.final_required << ',' << (s.thin ? 1 : 0) << '\n';
    }
    return os.str();
}

}  // namespace samplan::smith
