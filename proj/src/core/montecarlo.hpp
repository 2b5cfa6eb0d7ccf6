#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "core/records.hpp"
#include "core/stats.hpp"

namespace samplan::mc {

// Synthetic population: household trip counts are gamma-Poisson so the
// realised per-household coefficient of variation lands near `trip_cv`.
struct SynthConfig {
    std::int64_t n_households = 1000;
    double mean_trip_rate = 2.0;
    double trip_cv = 1.0;  // 0 => every household makes round(mean) trips
    std::int64_t n_zones = 1;
    double peak_share = 0.5;
    std::map<std::string, double> mode_shares = {{"auto", 1.0}};
    std::map<std::string, double> purpose_shares = {{"work", 1.0}};
    std::string region = "synthetic";
    std::uint64_t seed = 1;
};

struct SynthPopulation {
    std::vector<HouseholdRecord> households;
    std::vector<TripRecord> trips;
    double realized_cv = 0.0;
};

SynthPopulation synth_population(const SynthConfig& config);

struct SimConfig {
    double rate = 0.05;           // SRS household sampling rate
    double margin_of_error = 0.25;  // coverage band on the expanded trip total
    int replications = 500;
    std::uint64_t seed = 1;
    int threads = 0;  // 0 => hardware concurrency
};

struct SimResult {
    int replications = 0;
    std::int64_t sample_households = 0;
    double true_total = 0.0;
    double mean_estimate = 0.0;
    double relative_bias = 0.0;
    double coverage = 0.0;   // share of replications with |rel error| <= margin
    double mean_mape = 0.0;  // over nonzero zone-pair cells
};

SimResult simulate_sampling(const std::vector<HouseholdRecord>& households,
                            const std::vector<TripRecord>& trips, const SimConfig& config);

struct CoveragePoint {
    double rate = 0.0;
    double coverage = 0.0;
    double mean_mape = 0.0;
};

std::vector<CoveragePoint> coverage_curve(const std::vector<HouseholdRecord>& households,
                                          const std::vector<TripRecord>& trips,
                                          const std::vector<double>& rates,
                                          const SimConfig& config);

std::string coverage_csv(const std::vector<CoveragePoint>& points);
nlohmann::json sim_json(const SimResult& result);

// Counter-derived deterministic stream: the same (seed, index) pair always
// yields the same value, independent of evaluation order.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace samplan::mc
