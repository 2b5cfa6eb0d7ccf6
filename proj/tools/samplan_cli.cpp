#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "samplan/samplan.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Process exit codes, distinct per error family.
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitDegenerate = 4;
constexpr int kExitInternal = 5;

int exit_code_for(int sp_code) {
    switch (sp_code) {
        case SP_OK: return 0;
        case SP_ERR_ARGUMENT:
        case SP_ERR_CONFIG: return kExitConfig;
        case SP_ERR_DATA: return kExitData;
        case SP_ERR_DEGENERATE: return kExitDegenerate;
        default: return kExitInternal;
    }
}

const char* kind_for(int sp_code) {
    switch (sp_code) {
        case SP_ERR_ARGUMENT: return "argument";
        case SP_ERR_CONFIG: return "config";
        case SP_ERR_DATA: return "data";
        case SP_ERR_DEGENERATE: return "degenerate";
        default: return "internal";
    }
}

int run_request(const json& request, const std::string& outdir, bool print_report) {
    sp_workspace* ws = nullptr;
    if (sp_workspace_create(&ws) != SP_OK) {
        std::cerr << R"({"error":{"kind":"internal","message":"workspace allocation failed"}})"
                  << "\n";
        return kExitInternal;
    }
    char* response_text = nullptr;
    const int rc = sp_run(ws, request.dump().c_str(), &response_text);
    if (rc != SP_OK) {
        const json err = {{"error",
                           {{"code", rc},
                            {"kind", kind_for(rc)},
                            {"message", sp_last_error(ws)}}}};
        std::cerr << err.dump() << "\n";
        sp_workspace_destroy(ws);
        return exit_code_for(rc);
    }
    const auto response = json::parse(response_text);
    sp_string_free(response_text);
    sp_workspace_destroy(ws);

    fs::create_directories(outdir);
    for (const auto& [name, content] : response["artifacts"].items()) {
        std::ofstream out(fs::path(outdir) / name, std::ios::binary);
        out << content.get<std::string>();
        if (!out) {
            const json err = {{"error",
                               {{"kind", "data"},
                                {"message", "could not write artifact '" + name + "'"}}}};
            std::cerr << err.dump() << "\n";
            return kExitData;
        }
    }
    if (print_report) {
        std::cout << json{{"schema_version", response["schema_version"]},
                          {"command", response["command"]},
                          {"config", response["config"]},
                          {"report", response["report"]}}
                         .dump(2)
                  << "\n";
    }
    return 0;
}

std::vector<double> parse_list(const std::string& csv) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= csv.size()) {
        const auto comma = csv.find(',', pos);
        const auto tok = csv.substr(pos, comma == std::string::npos ? std::string::npos
                                                                    : comma - pos);
        if (!tok.empty()) out.push_back(std::stod(tok));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

json scheme_json(const std::string& csv) {
    json out = json::array();
    std::size_t pos = 0;
    while (pos <= csv.size()) {
        const auto comma = csv.find(',', pos);
        const auto tok = csv.substr(pos, comma == std::string::npos ? std::string::npos
                                                                    : comma - pos);
        if (!tok.empty()) out.push_back(tok);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sample-size planning and audit toolkit for regional household travel surveys"};
    app.require_subcommand(1);

    std::string outdir = []() -> std::string {
        const char* env = std::getenv("SAMPLAN_OUT");
        return env != nullptr ? env : "out";
    }();
    bool quiet = false;
    app.add_option("-o,--out", outdir, "Output directory for artifacts (env SAMPLAN_OUT)");
    app.add_flag("-q,--quiet", quiet, "Suppress the report on stdout");

    // rates
    auto* rates = app.add_subcommand("rates", "Required-rate curves over a trip-total grid");
    std::string cvs = "0.5,0.75,1.0,1.25,1.5";
    std::string confidences = "0.90,0.95";
    double rates_e = 0.25;
    std::int64_t min_total = 100, max_total = 1000000;
    int ppd = 10;
    rates->add_option("--cv", cvs, "Comma-separated CV values");
    rates->add_option("--confidence", confidences, "Comma-separated confidence levels");
    rates->add_option("--e", rates_e, "Relative margin of error");
    rates->add_option("--min-total", min_total, "Grid lower bound (trips)");
    rates->add_option("--max-total", max_total, "Grid upper bound (trips)");
    rates->add_option("--points-per-decade", ppd, "Grid density");

    // smith
    auto* smith = app.add_subcommand("smith", "Stratified allocation plan from microdata");
    std::string households, trips, scheme = "size";
    double confidence = 0.95, margin = 0.05;
    std::string cv_denominator = "overall";
    smith->add_option("--households", households, "Household CSV")->required();
    smith->add_option("--trips", trips, "Trip CSV")->required();
    smith->add_option("--scheme", scheme, "Stratification variables (comma-separated)");
    smith->add_option("--confidence", confidence, "Confidence level");
    smith->add_option("--e", margin, "Relative margin of error");
    smith->add_option("--cv-denominator", cv_denominator, "overall|stratum");

    // rmse
    auto* rmse = app.add_subcommand("rmse", "Representativeness audit against marginals");
    std::string marginals, geography, rmse_mode = "per_variable";
    std::string rmse_households, rmse_trips;
    rmse->add_option("--households", rmse_households, "Household CSV")->required();
    rmse->add_option("--trips", rmse_trips, "Trip CSV (for mode-user marginals)");
    rmse->add_option("--marginals", marginals, "Reference marginals CSV")->required();
    rmse->add_option("--geography", geography, "Restrict to one region");
    rmse->add_option("--rmse-mode", rmse_mode, "per_variable|pooled");

    // od
    auto* od = app.add_subcommand("od", "O-D matrix and per-cell required rates");
    std::string od_trips, partition, period, mode, purpose;
    double od_cv = 1.0, od_conf = 0.90, od_e = 0.25;
    od->add_option("--trips", od_trips, "Trip CSV")->required();
    od->add_option("--partition", partition, "zone,region CSV")->required();
    od->add_option("--period", period, "peak|offpeak");
    od->add_option("--mode", mode, "Trip mode filter");
    od->add_option("--purpose", purpose, "Trip purpose filter");
    od->add_option("--cv", od_cv, "Assumed cell CV");
    od->add_option("--confidence", od_conf, "Confidence level");
    od->add_option("--e", od_e, "Relative margin of error");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Disaggregation sweep over time/mode/purpose");
    std::string sw_households, sw_trips;
    double sw_conf = 0.95, sw_e = 0.05;
    sweep->add_option("--households", sw_households, "Household CSV")->required();
    sweep->add_option("--trips", sw_trips, "Trip CSV")->required();
    sweep->add_option("--confidence", sw_conf, "Confidence level");
    sweep->add_option("--e", sw_e, "Relative margin of error");

    // plan
    auto* plan = app.add_subcommand("plan", "Core-augment sample plan from a config file");
    std::string plan_config;
    plan->add_option("--config", plan_config, "Plan config JSON")->required();

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo sampling simulation");
    std::string sim_households, sim_trips, sim_synth, sim_rates;
    double sim_rate = 0.05, sim_e = 0.25;
    int replications = 500, threads = 0;
    std::int64_t seed = 1;
    simulate->add_option("--households", sim_households, "Household CSV");
    simulate->add_option("--trips", sim_trips, "Trip CSV");
    simulate->add_option("--synth", sim_synth, "Synthetic-population config JSON");
    simulate->add_option("--rate", sim_rate, "Sampling rate");
    simulate->add_option("--rates", sim_rates, "Comma-separated rates (coverage curve)");
    simulate->add_option("--e", sim_e, "Coverage margin of error");
    simulate->add_option("--replications", replications, "Replication count");
    simulate->add_option("--seed", seed, "Master seed");
    simulate->add_option("--threads", threads, "Worker threads (0 = auto)");

    // fixture
    auto* fixture = app.add_subcommand("fixture", "Emit a bundled or generated fixture");
    std::string fixture_name = "figure1", fixture_synth;
    std::int64_t fixture_seed = 1;
    fixture->add_option("name", fixture_name, "figure1|synth");
    fixture->add_option("--synth", fixture_synth, "Synthetic-population config JSON");
    fixture->add_option("--seed", fixture_seed, "Seed for synth fixtures");

    CLI11_PARSE(app, argc, argv);

    json request;
    if (rates->parsed()) {
        request = {{"command", "rates"},          {"cvs", parse_list(cvs)},
                   {"confidences", parse_list(confidences)}, {"margin_of_error", rates_e},
                   {"min_total", min_total},      {"max_total", max_total},
                   {"points_per_decade", ppd}};
    } else if (smith->parsed()) {
        request = {{"command", "smith"},       {"households", households},
                   {"trips", trips},           {"scheme", scheme_json(scheme)},
                   {"confidence", confidence}, {"margin_of_error", margin},
                   {"cv_denominator", cv_denominator}};
    } else if (rmse->parsed()) {
        request = {{"command", "rmse"},
                   {"households", rmse_households},
                   {"marginals", marginals},
                   {"geography", geography},
                   {"rmse_mode", rmse_mode}};
        if (!rmse_trips.empty()) request["trips"] = rmse_trips;
    } else if (od->parsed()) {
        request = {{"command", "od"}, {"trips", od_trips},   {"partition", partition},
                   {"cv", od_cv},     {"confidence", od_conf}, {"margin_of_error", od_e}};
        if (!period.empty()) request["period"] = period;
        if (!mode.empty()) request["mode"] = mode;
        if (!purpose.empty()) request["purpose"] = purpose;
    } else if (sweep->parsed()) {
        request = {{"command", "sweep"},
                   {"households", sw_households},
                   {"trips", sw_trips},
                   {"confidence", sw_conf},
                   {"margin_of_error", sw_e}};
    } else if (plan->parsed()) {
        std::ifstream in(plan_config);
        if (!in) {
            std::cerr << json{{"error", {{"kind", "config"},
                                         {"message", "cannot open '" + plan_config + "'"}}}}
                             .dump()
                      << "\n";
            return kExitConfig;
        }
        try {
            request = json::parse(in);
        } catch (const json::parse_error& e) {
            std::cerr << json{{"error", {{"kind", "config"}, {"message", e.what()}}}}.dump()
                      << "\n";
            return kExitConfig;
        }
        request["command"] = "plan";
    } else if (simulate->parsed()) {
        request = {{"command", "simulate"}, {"rate", sim_rate},
                   {"margin_of_error", sim_e}, {"replications", replications},
                   {"seed", seed},          {"threads", threads}};
        if (!sim_rates.empty()) request["rates"] = parse_list(sim_rates);
        if (!sim_synth.empty()) {
            std::ifstream in(sim_synth);
            try {
                request["synth"] = json::parse(in);
            } catch (const json::parse_error& e) {
                std::cerr << json{{"error", {{"kind", "config"}, {"message", e.what()}}}}.dump()
                          << "\n";
                return kExitConfig;
            }
        } else {
            request["households"] = sim_households;
            request["trips"] = sim_trips;
        }
    } else if (fixture->parsed()) {
        request = {{"command", "fixture"}, {"name", fixture_name}};
        if (!fixture_synth.empty()) {
            std::ifstream in(fixture_synth);
            try {
                request["synth"] = json::parse(in);
            } catch (const json::parse_error& e) {
                std::cerr << json{{"error", {{"kind", "config"}, {"message", e.what()}}}}.dump()
                          << "\n";
                return kExitConfig;
            }
        } else if (fixture_name == "synth") {
            request["synth"] = {{"seed", fixture_seed}};
        }
    }

    return run_request(request, outdir, !quiet);
}
