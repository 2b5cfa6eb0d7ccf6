#include "core/commands.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <vector>

#include "core/csv.hpp"
#include "core/errors.hpp"
#include "core/fixture_figure1.hpp"
#include "core/montecarlo.hpp"
#include "core/od.hpp"
#include "core/planner.hpp"
#include "core/records.hpp"
#include "core/rmse.hpp"
#include "core/smith.hpp"
#include "core/stats.hpp"

namespace samplan::commands {

using nlohmann::json;

namespace {

json response(const std::string& command, json config, json report, json artifacts) {
    return json{{"schema_version", kSchemaVersion},
                {"command", command},
                {"config", std::move(config)},
                {"report", std::move(report)},
                {"artifacts", std::move(artifacts)}};
}

std::string require_string(const json& request, const std::string& key) {
    if (!request.contains(key) || !request[key].is_string()) {
        throw ConfigError("missing required string field '" + key + "'");
    }
    return request[key].get<std::string>();
}

double number_or(const json& request, const std::string& key, double fallback) {
    if (!request.contains(key)) return fallback;
    if (!request[key].is_number()) throw ConfigError("field '" + key + "' must be a number");
    return request[key].get<double>();
}

std::int64_t int_or(const json& request, const std::string& key, std::int64_t fallback) {
    if (!request.contains(key)) return fallback;
    if (!request[key].is_number_integer()) {
        throw ConfigError("field '" + key + "' must be an integer");
    }
    return request[key].get<std::int64_t>();
}

std::string string_or(const json& request, const std::string& key, const std::string& fallback) {
    if (!request.contains(key)) return fallback;
    if (!request[key].is_string()) throw ConfigError("field '" + key + "' must be a string");
    return request[key].get<std::string>();
}

stats::SizeSpec size_spec(const json& request) {
    return {number_or(request, "confidence", 0.95), number_or(request, "margin_of_error", 0.05)};
}

smith::Options smith_options(const json& request) {
    smith::Options options;
    const auto denom = string_or(request, "cv_denominator", "overall");
    if (denom == "overall") {
        options.cv_denominator = smith::CvDenominator::overall;
    } else if (denom == "stratum") {
        options.cv_denominator = smith::CvDenominator::stratum;
    } else {
        throw ConfigError("cv_denominator must be overall|stratum");
    }
    return options;
}

smith::StratificationScheme scheme_from_json(const json& node) {
    if (!node.is_array() || node.empty()) {
        throw ConfigError("scheme must be a nonempty array");
    }
    smith::StratificationScheme scheme;
    for (const auto& entry : node) {
        smith::VariableSpec var;
        if (entry.is_string()) {
            var.name = entry.get<std::string>();
        } else if (entry.is_object()) {
            var.name = require_string(entry, "name");
            if (entry.contains("upper_bounds")) {
                var.upper_bounds = entry["upper_bounds"].get<std::vector<double>>();
            }
            if (entry.contains("categories")) {
                var.categories = entry["categories"].get<std::vector<std::string>>();
            }
        } else {
            throw ConfigError("scheme entries must be names or objects");
        }
        scheme.variables.push_back(std::move(var));
    }
    return scheme;
}

std::vector<HouseholdRecord> load_households(const json& request, const std::string& key) {
    return io::parse_households(io::read_file(require_string(request, key)));
}

std::vector<TripRecord> load_trips(const json& request, const std::string& key) {
    return io::parse_trips(io::read_file(require_string(request, key)));
}

std::map<std::string, std::string> load_partition(const std::string& path) {
    const auto table = io::parse_csv(io::read_file(path));
    if (table.header != std::vector<std::string>{"zone", "region"}) {
        throw DataError("partition file must have header zone,region");
    }
    std::map<std::string, std::string> out;
    for (const auto& row : table.rows) {
        if (row.size() != 2) throw DataError("partition file has a malformed row");
        if (!out.emplace(row[0], row[1]).second) {
            throw DataError("partition file maps zone '" + row[0] + "' twice");
        }
    }
    return out;
}

mc::SynthConfig synth_config(const json& node) {
    mc::SynthConfig config;
    config.n_households = int_or(node, "n_households", config.n_households);
    config.mean_trip_rate = number_or(node, "mean_trip_rate", config.mean_trip_rate);
    config.trip_cv = number_or(node, "heterogeneity", number_or(node, "trip_cv", config.trip_cv));
    config.n_zones = int_or(node, "n_zones", config.n_zones);
    config.peak_share = number_or(node, "peak_share", config.peak_share);
    config.seed = static_cast<std::uint64_t>(int_or(node, "seed", 1));
    config.region = string_or(node, "region", config.region);
    auto shares = [](const json& n, const char* key,
                     std::map<std::string, double> fallback) {
        if (!n.contains(key)) return fallback;
        std::map<std::string, double> out;
        double total = 0.0;
        for (const auto& [k, v] : n[key].items()) {
            out[k] = v.get<double>();
            total += out[k];
        }
        if (out.empty() || std::abs(total - 1.0) > 1e-9) {
            throw ConfigError(std::string(key) + " must be nonempty and sum to 1");
        }
        return out;
    };
    config.mode_shares = shares(node, "modal_split", config.mode_shares);
    config.purpose_shares = shares(node, "purpose_split", config.purpose_shares);
    // validate tokens against the closed sets
    for (const auto& [k, _] : config.mode_shares) parse_mode(k);
    for (const auto& [k, _] : config.purpose_shares) parse_purpose(k);
    return config;
}

json resolved_synth(const mc::SynthConfig& c) {
    return json{{"n_households", c.n_households},
                {"mean_trip_rate", c.mean_trip_rate},
                {"heterogeneity", c.trip_cv},
                {"n_zones", c.n_zones},
                {"peak_share", c.peak_share},
                {"modal_split", c.mode_shares},
                {"purpose_split", c.purpose_shares},
                {"region", c.region},
                {"seed", c.seed}};
}

json cmd_rates(const json& request) {
    std::vector<double> cvs = {0.5, 0.75, 1.0, 1.25, 1.5};
    std::vector<double> confidences = {0.90, 0.95};
    if (request.contains("cvs")) cvs = request["cvs"].get<std::vector<double>>();
    if (request.contains("confidences")) {
        confidences = request["confidences"].get<std::vector<double>>();
    }
    const double e = number_or(request, "margin_of_error", 0.25);
    const auto lo = int_or(request, "min_total", 100);
    const auto hi = int_or(request, "max_total", 1000000);
    const int ppd = static_cast<int>(int_or(request, "points_per_decade", 10));
    const auto grid = stats::log_grid(lo, hi, ppd);
    const auto points = stats::rate_curve(grid, cvs, confidences, e);
    json config = {{"command", "rates"}, {"cvs", cvs},          {"confidences", confidences},
                   {"margin_of_error", e}, {"min_total", lo},   {"max_total", hi},
                   {"points_per_decade", ppd}};
    json report = {{"curves", cvs.size() * confidences.size()}, {"points", points.size()}};
    return response("rates", std::move(config),
                    std::move(report), json{{"rates.csv", stats::rate_curve_csv(points)}});
}

json cmd_smith(const json& request) {
    auto households = load_households(request, "households");
    auto trips = load_trips(request, "trips");
    const auto orphans = link_trip_counts(households, trips);
    const auto scheme = scheme_from_json(request.contains("scheme") ? request["scheme"]
                                                                    : json::array({"size"}));
    const auto spec = size_spec(request);
    const auto plan = smith::smith_plan(households, scheme, spec, smith_options(request));
    json config = {{"command", "smith"},
                   {"households", request["households"]},
                   {"trips", request["trips"]},
                   {"scheme", request.contains("scheme") ? request["scheme"]
                                                         : json::array({"size"})},
                   {"confidence", spec.confidence()},
                   {"margin_of_error", spec.margin_of_error()},
                   {"cv_denominator", string_or(request, "cv_denominator", "overall")}};
    json report = smith::plan_json(plan);
    report["orphan_household_ids"] = orphans;
    json artifacts = {{"plan.json", report.dump(2) + "\n"}, {"plan.csv", smith::plan_csv(plan)}};
    return response("smith", std::move(config), std::move(report), std::move(artifacts));
}

json cmd_rmse(const json& request) {
    auto households = load_households(request, "households");
    std::vector<TripRecord> trips;
    if (request.contains("trips")) trips = load_trips(request, "trips");
    const auto references =
        rmse::parse_marginals_csv(io::read_file(require_string(request, "marginals")));
    const auto geography = string_or(request, "geography", "");
    const auto mode_name = string_or(request, "rmse_mode", "per_variable");
    rmse::RmseMode mode;
    if (mode_name == "per_variable") {
        mode = rmse::RmseMode::per_variable;
    } else if (mode_name == "pooled") {
        mode = rmse::RmseMode::pooled;
    } else {
        throw ConfigError("rmse_mode must be per_variable|pooled");
    }
    const auto report = rmse::audit(households, trips, references, geography, mode);
    json config = {{"command", "rmse"},
                   {"households", request["households"]},
                   {"marginals", request["marginals"]},
                   {"geography", geography},
                   {"rmse_mode", mode_name}};
    if (request.contains("trips")) config["trips"] = request["trips"];
    json report_js = rmse::report_json(report);
    return response("rmse", std::move(config), report_js,
                    json{{"rmse.json", report_js.dump(2) + "\n"}});
}

od::Slice slice_from_request(const json& request) {
    od::Slice slice;
    if (request.contains("period")) {
        const auto p = require_string(request, "period");
        if (p == "peak") {
            slice.period = Period::peak;
        } else if (p == "offpeak") {
            slice.period = Period::offpeak;
        } else {
            throw ConfigError("period must be peak|offpeak");
        }
    }
    if (request.contains("mode")) slice.mode = parse_mode(require_string(request, "mode"));
    if (request.contains("purpose")) {
        slice.purpose = parse_purpose(require_string(request, "purpose"));
    }
    return slice;
}

json cmd_od(const json& request) {
    const auto trips = load_trips(request, "trips");
    const auto partition = load_partition(require_string(request, "partition"));
    const auto slice = slice_from_request(request);
    const double cv = number_or(request, "cv", 1.0);
    const auto spec = stats::SizeSpec(number_or(request, "confidence", 0.90),
                                      number_or(request, "margin_of_error", 0.25));
    const auto matrix = od::build_od_matrix(trips, partition, slice);
    const auto rates = od::cell_required_rates(matrix, cv, spec);

    std::ostringstream rates_csv;
    rates_csv.precision(12);
    rates_csv << "origin,destination,trip_total,required_rate\n";
    for (const auto& r : rates) {
        rates_csv << matrix.row_labels[r.row] << ',' << matrix.col_labels[r.col] << ','
                  << r.trip_total << ',' << r.required_rate << '\n';
    }
    double total = 0.0;
    for (std::size_t r = 0; r < matrix.cells.size(); ++r) total += matrix.row_sum(r);

    json config = {{"command", "od"},
                   {"trips", request["trips"]},
                   {"partition", request["partition"]},
                   {"cv", cv},
                   {"confidence", spec.confidence()},
                   {"margin_of_error", spec.margin_of_error()}};
    for (const auto* key : {"period", "mode", "purpose"}) {
        if (request.contains(key)) config[key] = request[key];
    }
    json report = {{"regions", matrix.row_labels.size()},
                   {"trip_total", total},
                   {"rated_cells", rates.size()},
                   {"matrix", od::matrix_json(matrix)}};
    json artifacts = {{"matrix.csv", od::matrix_csv(matrix)},
                      {"cell_rates.csv", rates_csv.str()}};
    return response("od", std::move(config), std::move(report), std::move(artifacts));
}

json cmd_sweep(const json& request) {
    auto households = load_households(request, "households");
    const auto trips = load_trips(request, "trips");
    link_trip_counts(households, trips);
    const auto spec = stats::SizeSpec(number_or(request, "confidence", 0.95),
                                      number_or(request, "margin_of_error", 0.05));
    const auto rows = od::disaggregation_sweep(households, trips, spec);
    json config = {{"command", "sweep"},
                   {"households", request["households"]},
                   {"trips", request["trips"]},
                   {"confidence", spec.confidence()},
                   {"margin_of_error", spec.margin_of_error()}};
    return response("sweep", std::move(config), json{{"rows", od::sweep_json(rows)}},
                    json{{"sweep.csv", od::sweep_csv(rows)}});
}

json cmd_plan(const json& request) {
    if (!request.contains("regions") || !request["regions"].is_array() ||
        request["regions"].empty()) {
        throw ConfigError("plan: 'regions' must be a nonempty array");
    }
    const double core_rate = number_or(request, "core_rate", 0.04);
    const auto spec = size_spec(request);
    const auto policy = planner::parse_overlap(string_or(request, "overlap", "additive"));
    const auto options = smith_options(request);

    std::vector<planner::RegionInput> regions;
    for (const auto& node : request["regions"]) {
        planner::RegionInput region;
        region.name = require_string(node, "name");
        region.household_population = int_or(node, "population", 0);
        if (node.contains("households")) region.households = load_households(node, "households");
        if (node.contains("trips")) region.trips = load_trips(node, "trips");
        if (node.contains("targets")) {
            for (const auto& t : node["targets"]) {
                planner::AugmentTarget target;
                target.name = require_string(t, "name");
                target.cohort = planner::parse_cohort(string_or(t, "cohort", "all"));
                target.scheme = scheme_from_json(t.contains("scheme") ? t["scheme"]
                                                                      : json::array({"size"}));
                region.targets.push_back(std::move(target));
            }
        }
        regions.push_back(std::move(region));
    }
    const auto plan = planner::combine_plan(regions, core_rate, spec, policy, options);
    json config = request;
    config["core_rate"] = core_rate;
    config["overlap"] = planner::to_string(policy);
    config["confidence"] = spec.confidence();
    config["margin_of_error"] = spec.margin_of_error();
    json report = planner::plan_json(plan);
    json artifacts = {{"plan.json", report.dump(2) + "\n"},
                      {"plan.csv", planner::plan_csv(plan)}};
    return response("plan", std::move(config), std::move(report), std::move(artifacts));
}

json cmd_simulate(const json& request) {
    std::vector<HouseholdRecord> households;
    std::vector<TripRecord> trips;
    json config = {{"command", "simulate"}};
    if (request.contains("synth")) {
        const auto sc = synth_config(request["synth"]);
        auto pop = mc::synth_population(sc);
        households = std::move(pop.households);
        trips = std::move(pop.trips);
        config["synth"] = resolved_synth(sc);
        config["realized_cv"] = pop.realized_cv;
    } else {
        households = load_households(request, "households");
        trips = load_trips(request, "trips");
        config["households"] = request["households"];
        config["trips"] = request["trips"];
    }
    mc::SimConfig sim;
    sim.rate = number_or(request, "rate", sim.rate);
    sim.margin_of_error = number_or(request, "margin_of_error", sim.margin_of_error);
    sim.replications = static_cast<int>(int_or(request, "replications", sim.replications));
    sim.seed = static_cast<std::uint64_t>(int_or(request, "seed", 1));
    sim.threads = static_cast<int>(int_or(request, "threads", 0));
    config["rate"] = sim.rate;
    config["margin_of_error"] = sim.margin_of_error;
    config["replications"] = sim.replications;
    config["seed"] = sim.seed;

    json report;
    json artifacts = json::object();
    if (request.contains("rates")) {
        const auto rates = request["rates"].get<std::vector<double>>();
        config["rates"] = rates;
        const auto curve = mc::coverage_curve(households, trips, rates, sim);
        json points = json::array();
        for (const auto& p : curve) {
            points.push_back({{"rate", p.rate}, {"coverage", p.coverage},
                              {"mean_mape", p.mean_mape}});
        }
        report = {{"seed", sim.seed}, {"curve", std::move(points)}};
        artifacts["coverage.csv"] = mc::coverage_csv(curve);
    } else {
        const auto result = mc::simulate_sampling(households, trips, sim);
        report = mc::sim_json(result);
        report["seed"] = sim.seed;
    }
    artifacts["simulate.json"] = report.dump(2) + "\n";
    return response("simulate", std::move(config), std::move(report), std::move(artifacts));
}

json cmd_fixture(const json& request) {
    const auto name = string_or(request, "name", "figure1");
    if (name == "figure1") {
        const auto& f = fixtures::figure1();
        json report = {{"name", "figure1"},
                       {"regions", f.matrix.row_labels.size()},
                       {"grand_total", f.grand_total},
                       {"suppressed_cells", f.matrix.suppressed.size()}};
        return response("fixture", json{{"command", "fixture"}, {"name", "figure1"}},
                        std::move(report), json{{"figure1.csv", fixtures::figure1_csv()}});
    }
    if (name == "synth") {
        const auto sc = synth_config(request.contains("synth") ? request["synth"] : json::object());
        const auto pop = mc::synth_population(sc);
        std::map<std::string, std::int64_t> per_mode;
        for (const auto& t : pop.trips) ++per_mode[to_string(t.mode)];
        json manifest = {{"n_households", pop.households.size()},
                         {"n_trips", pop.trips.size()},
                         {"realized_cv", pop.realized_cv},
                         {"per_mode", per_mode},
                         {"seed", sc.seed}};
        json config = {{"command", "fixture"}, {"name", "synth"}, {"synth", resolved_synth(sc)}};
        json artifacts = {{"households.csv", io::emit_households(pop.households)},
                          {"trips.csv", io::emit_trips(pop.trips)},
                          {"manifest.json", manifest.dump(2) + "\n"}};
        return response("fixture", std::move(config), std::move(manifest), std::move(artifacts));
    }
    throw ConfigError("unknown fixture '" + name + "' (expected figure1|synth)");
}

}  // namespace

json run_command(const json& request) {
    if (!request.is_object()) throw ConfigError("request must be a JSON object");
    const auto command = require_string(request, "command");
    if (command == "rates") return cmd_rates(request);
    if (command == "smith") return cmd_smith(request);
    if (command == "rmse") return cmd_rmse(request);
    if (command == "od") return cmd_od(request);
    if (command == "sweep") return cmd_sweep(request);
    if (command == "plan") return cmd_plan(request);
    if (command == "simulate") return cmd_simulate(request);
    if (command == "fixture") return cmd_fixture(request);
    throw ConfigError("unknown command '" + command + "'");
}

std::string run_command_text(const std::string& request_text) {
    json request;
    try {
        request = json::parse(request_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("request is not valid JSON: ") + e.what());
    }
    return run_command(request).dump(2) + "\n";
}

}  // namespace samplan::commands
