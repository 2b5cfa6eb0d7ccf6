#include "core/rmse.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

#include "core/csv.hpp"
#include "core/errors.hpp"

namespace samplan::rmse {

using nlohmann::json;

std::vector<CategoryError> relative_errors(const MarginalTable& reference,
                                           const MarginalTable& sample) {
    if (reference.variable != sample.variable) {
        throw DataError("relative_errors: variable mismatch ('" + reference.variable + "' vs '" +
                        sample.variable + "')");
    }
    std::map<std::string, double> ref, smp;
    for (const auto& c : reference.categories) {
        if (!ref.emplace(c.label, c.value).second) {
            throw DataError("duplicate category '" + c.label + "' in reference variable '" +
                            reference.variable + "'");
        }
    }
    for (const auto& c : sample.categories) {
        if (!smp.emplace(c.label, c.value).second) {
            throw DataError("duplicate category '" + c.label + "' in sample variable '" +
                            sample.variable + "'");
        }
    }
    std::vector<std::string> missing, extra;
    for (const auto& [label, _] : ref) {
        if (!smp.count(label)) missing.push_back(label);
    }
    for (const auto& [label, _] : smp) {
        if (!ref.count(label)) extra.push_back(label);
    }
    if (!missing.empty() || !extra.empty()) {
        std::string msg = "category sets differ for variable '" + reference.variable + "':";
        for (const auto& m : missing) msg += " missing-in-sample:" + m;
        for (const auto& e : extra) msg += " missing-in-reference:" + e;
        throw DataError(msg);
    }
    std::vector<CategoryError> out;
    out.reserve(ref.size());
    for (const auto& [label, r] : ref) {
        CategoryError e;
        e.variable = reference.variable;
        e.category = label;
        e.reference = r;
        e.sample = smp[label];
        if (r == 0.0) {
            e.uncoverable = true;
            e.relative_error = 0.0;
        } else {
            e.relative_error = (r - e.sample) / r;
        }
        out.push_back(std::move(e));
    }
    return out;
}

double percent_rmse(const std::vector<MarginalTable>& references,
                    const std::vector<MarginalTable>& samples, RmseMode mode) {
    if (references.size() != samples.size()) {
        throw DataError("percent_rmse: variable lists differ in length");
    }
    if (references.empty()) throw DataError("percent_rmse: no variables");
    double acc = 0.0;
    int pooled_n = 0;
    for (std::size_t i = 0; i < references.size(); ++i) {
        const auto errs = relative_errors(references[i], samples[i]);
        double ss = 0.0;
        int n = 0;
        for (const auto& e : errs) {
            if (e.uncoverable) continue;
            ss += e.relative_error * e.relative_error;
            ++n;
        }
        if (n == 0) {
            throw DataError("percent_rmse: variable '" + references[i].variable +
                            "' has no usable categories");
        }
        if (mode == RmseMode::per_variable) {
            acc += ss / n;
        } else {
            acc += ss;
            pooled_n += n;
        }
    }
    const double mean_sq = mode == RmseMode::per_variable
                               ? acc / static_cast<double>(references.size())
                               : acc / pooled_n;
    return std::sqrt(mean_sq) * 100.0;
}

MarginalTable household_size_marginal(const std::vector<HouseholdRecord>& households,
                                      bool weighted) {
    // Same classing as the published comparison: 1, 2, 3, 4-5, 6+.
    MarginalTable t;
    t.variable = "household_size";
    t.categories = {{"1", 0}, {"2", 0}, {"3", 0}, {"4-5", 0}, {"6+", 0}};
    for (const auto& h : households) {
        const double w = weighted ? h.weight : 1.0;
        int idx;
        if (h.size <= 3) {
            idx = h.size - 1;
        } else if (h.size <= 5) {
            idx = 3;
        } else {
            idx = 4;
        }
        t.categories[idx].value += w;
    }
    return t;
}

MarginalTable mode_user_marginal(const std::vector<TripRecord>& trips, bool weighted) {
    MarginalTable t;
    t.variable = "mode_users";
    t.categories = {{"auto", 0}, {"transit", 0}, {"active", 0}, {"other", 0}};
    for (const auto& trip : trips) {
        const double w = weighted ? trip.weight : 1.0;
        t.categories[static_cast<int>(trip.mode)].value += w;
    }
    return t;
}

Report audit(const std::vector<HouseholdRecord>& households,
             const std::vector<TripRecord>& trips,
             const std::vector<MarginalTable>& references, const std::string& geography,
             RmseMode mode) {
    std::vector<HouseholdRecord> hh;
    std::vector<TripRecord> tr;
    if (geography.empty()) {
        hh = households;
        tr = trips;
    } else {
        std::unordered_set<std::string> ids;
        for (const auto& h : households) {
            if (h.region == geography) {
                hh.push_back(h);
                ids.insert(h.household_id);
            }
        }
        for (const auto& t : trips) {
            if (ids.count(t.household_id)) tr.push_back(t);
        }
        if (hh.empty()) throw DataError("audit: no households in geography '" + geography + "'");
    }
    const bool weighted =
        std::any_of(hh.begin(), hh.end(), [](const auto& h) { return h.weight != 1.0; }) ||
        std::any_of(tr.begin(), tr.end(), [](const auto& t) { return t.weight != 1.0; });

    Report report;
    report.weighted = weighted;
    report.mode = mode;
    std::vector<MarginalTable> refs, smps;
    for (const auto& ref : references) {
        MarginalTable sample;
        if (ref.variable == "household_size") {
            sample = household_size_marginal(hh, weighted);
        } else if (ref.variable == "mode_users") {
            sample = mode_user_marginal(tr, weighted);
        } else {
            report.skipped_variables.push_back(ref.variable);
            continue;
        }
        auto errs = relative_errors(ref, sample);
        double ss = 0.0;
        int n = 0;
        for (const auto& e : errs) {
            if (e.uncoverable) {
                ++report.excluded_categories;
            } else {
                ss += e.relative_error * e.relative_error;
                ++n;
            }
            report.per_category.push_back(e);
        }
        if (n > 0) {
            report.per_variable_rmse.emplace_back(ref.variable, std::sqrt(ss / n) * 100.0);
        }
        refs.push_back(ref);
        smps.push_back(std::move(sample));
    }
    if (refs.empty()) throw DataError("audit: no reference variable is derivable from microdata");
    report.overall_percent_rmse = percent_rmse(refs, smps, mode);
    return report;
}

std::vector<MarginalTable> parse_marginals_csv(const std::string& text) {
    const auto t = io::parse_csv(text);
    if (t.header != std::vector<std::string>{"variable", "category", "value"}) {
        throw DataError("marginals CSV: expected header variable,category,value");
    }
    std::vector<MarginalTable> out;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto& row = t.rows[i];
        if (row.size() != 3) {
            throw DataError("marginals CSV line " + std::to_string(i + 2) + ": expected 3 cells");
        }
        double value;
        try {
            value = std::stod(row[2]);
        } catch (const std::exception&) {
            throw DataError("marginals CSV line " + std::to_string(i + 2) + ": bad value '" +
                            row[2] + "'");
        }
        if (value < 0.0) {
            throw DataError("marginals CSV line " + std::to_string(i + 2) + ": negative value");
        }
        if (out.empty() || out.back().variable != row[0]) {
            auto existing = std::find_if(out.begin(), out.end(),
                                         [&](const auto& m) { return m.variable == row[0]; });
            if (existing != out.end()) {
                existing->categories.push_back({row[1], value});
                continue;
            }
            out.push_back({row[0], {}});
        }
        out.back().categories.push_back({row[1], value});
    }
    return out;
}

std::string emit_marginals_csv(const std::vector<MarginalTable>& tables) {
    std::ostringstream os;
    os << "variable,category,value\n";
    os.precision(12);
    for (const auto& t : tables) {
        for (const auto& c : t.categories) {
            os << t.variable << ',' << c.label << ',' << c.value << '\n';
        }
    }
    return os.str();
}

json report_json(const Report& report) {
    json cats = json::array();
    for (const auto& e : report.per_category) {
        cats.push_back({{"variable", e.variable},
                        {"category", e.category},
                        {"reference", e.reference},
                        {"sample", e.sample},
                        {"relative_error", e.relative_error},
                        {"uncoverable", e.uncoverable}});
    }
    json per_var = json::object();
    for (const auto& [var, value] : report.per_variable_rmse) per_var[var] = value;
    return json{{"per_category", std::move(cats)},
                {"per_variable_rmse", std::move(per_var)},
                {"overall_percent_rmse", report.overall_percent_rmse},
                {"skipped_variables", report.skipped_variables},
                {"excluded_categories", report.excluded_categories},
                {"weighted", report.weighted},
                {"mode", report.mode == RmseMode::per_variable ? "per_variable" : "pooled"}};
}

}  // namespace samplan::rmse
