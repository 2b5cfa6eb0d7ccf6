#include "core/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include "core/errors.hpp"

namespace samplan::mc {

using nlohmann::json;

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    // splitmix64 over the combined counter
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

namespace {

template <typename T>
T pick_share(const std::map<std::string, double>& shares, double u, T (*parse)(const std::string&)) {
    double total = 0.0;
    for (const auto& [_, v] : shares) total += v;
    double acc = 0.0;
    for (const auto& [k, v] : shares) {
        acc += v / total;
        if (u <= acc) return parse(k);
    }
    return parse(shares.rbegin()->first);
}

std::vector<double> draw_counts(const SynthConfig& config, std::uint64_t attempt_seed) {
    std::mt19937_64 rng(attempt_seed);
    const auto n = static_cast<std::size_t>(config.n_households);
    std::vector<double> counts(n);
    if (config.trip_cv <= 0.0) {
        std::fill(counts.begin(), counts.end(), std::round(config.mean_trip_rate));
        return counts;
    }
    const double m = config.mean_trip_rate;
    const double c2 = config.trip_cv * config.trip_cv;
    // Gamma mixing absorbs the dispersion beyond pure Poisson (cv^2 = 1/m).
    const double mix = c2 - 1.0 / m;
    if (mix <= 1e-12) {
        std::poisson_distribution<int> pois(m);
        for (auto& c : counts) c = pois(rng);
        return counts;
    }
    const double shape = 1.0 / mix;
    std::gamma_distribution<double> gamma(shape, m / shape);
    for (auto& c : counts) {
        const double lambda = gamma(rng);
        std::poisson_distribution<int> pois(lambda);
        c = pois(rng);
    }
    return counts;
}

}  // namespace

SynthPopulation synth_population(const SynthConfig& config) {
    if (config.n_households < 2) throw ConfigError("synth_population: need at least 2 households");
    if (!(config.mean_trip_rate > 0.0)) {
        throw ConfigError("synth_population: mean_trip_rate must be positive");
    }
    if (config.trip_cv < 0.0) throw ConfigError("synth_population: trip_cv must be >= 0");
    if (config.n_zones < 1) throw ConfigError("synth_population: n_zones must be >= 1");
    if (config.mode_shares.empty() || config.purpose_shares.empty()) {
        throw ConfigError("synth_population: mode and purpose shares must be nonempty");
    }

    std::vector<double> counts;
    double realized = 0.0;
    bool ok = false;
    const int max_attempts = 64;
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        counts = draw_counts(config, derive_seed(config.seed, 1000 + attempt));
        const double mean =
            std::accumulate(counts.begin(), counts.end(), 0.0) / static_cast<double>(counts.size());
        if (mean <= 0.0) continue;
        realized = stats::std_dev(counts) / mean;
        if (config.trip_cv <= 0.0 ||
            std::abs(realized - config.trip_cv) <= 0.10 * config.trip_cv) {
            ok = true;
            break;
        }
    }
    if (!ok) {
        throw DegenerateInputError(
            "synth_population: could not realise the target trip-count CV within 10%");
    }

    SynthPopulation pop;
    pop.realized_cv = realized;
    std::mt19937_64 rng(derive_seed(config.seed, 2));
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::uniform_int_distribution<std::int64_t> zone(1, config.n_zones);
    for (std::int64_t i = 0; i < config.n_households; ++i) {
        HouseholdRecord h;
        h.household_id = "H" + std::to_string(i + 1);
        h.region = config.region;
        h.zone = "Z" + std::to_string(zone(rng));
        h.size = 1 + static_cast<int>(u01(rng) * 4.0);
        h.income_class = "medium";
        h.vehicles = u01(rng) < 0.2 ? 0 : 1;
        const auto n_trips = static_cast<int>(counts[static_cast<std::size_t>(i)]);
        h.trip_count = n_trips;
        for (int t = 0; t < n_trips; ++t) {
            TripRecord trip;
            trip.household_id = h.household_id;
            trip.origin_zone = h.zone;
            trip.destination_zone = "Z" + std::to_string(zone(rng));
            trip.mode = pick_share(config.mode_shares, u01(rng), parse_mode);
            trip.purpose = pick_share(config.purpose_shares, u01(rng), parse_purpose);
            trip.depart_hhmm = u01(rng) < config.peak_share ? 800 : 1200;
            trip.period = period_from_depart(trip.depart_hhmm);
            pop.trips.push_back(std::move(trip));
        }
        pop.households.push_back(std::move(h));
    }
    return pop;
}

namespace {

struct RepOutcome {
    double estimate = 0.0;
    bool covered = false;
    double mape = 0.0;
};

struct CellIndexed {
    std::vector<std::vector<double>> per_household;  // [cell][household]
    std::vector<double> true_totals;
};

CellIndexed index_cells(const std::vector<HouseholdRecord>& households,
                        const std::vector<TripRecord>& trips) {
    std::map<std::string, std::size_t> hh_index;
    for (std::size_t i = 0; i < households.size(); ++i) {
        hh_index[households[i].household_id] = i;
    }
    std::map<std::pair<std::string, std::string>, std::size_t> cell_index;
    CellIndexed out;
    for (const auto& t : trips) {
        auto hh = hh_index.find(t.household_id);
        if (hh == hh_index.end()) {
            throw DataError("simulate_sampling: trip references unknown household '" +
                            t.household_id + "'");
        }
        const auto key = std::make_pair(t.origin_zone, t.destination_zone);
        auto [it, inserted] = cell_index.try_emplace(key, out.per_household.size());
        if (inserted) {
            out.per_household.emplace_back(households.size(), 0.0);
            out.true_totals.push_back(0.0);
        }
        out.per_household[it->second][hh->second] += t.weight;
        out.true_totals[it->second] += t.weight;
    }
    return out;
}

RepOutcome run_replication(const CellIndexed& cells, std::size_t n_households,
                           std::size_t n_sample, double margin, std::uint64_t rep_seed) {
    std::vector<std::size_t> ids(n_households);
    std::iota(ids.begin(), ids.end(), 0);
    std::mt19937_64 rng(rep_seed);
    // partial Fisher-Yates: the first n_sample entries are the SRS draw
    for (std::size_t i = 0; i < n_sample; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, n_households - 1);
        std::swap(ids[i], ids[pick(rng)]);
    }
    const double expansion = static_cast<double>(n_households) / static_cast<double>(n_sample);

    RepOutcome out;
    double true_total = 0.0, est_total = 0.0, ape = 0.0;
    int ape_cells = 0;
    for (std::size_t c = 0; c < cells.true_totals.size(); ++c) {
        double est = 0.0;
        for (std::size_t i = 0; i < n_sample; ++i) est += cells.per_household[c][ids[i]];
        est *= expansion;
        est_total += est;
        true_total += cells.true_totals[c];
        if (cells.true_totals[c] > 0.0) {
            ape += std::abs(est - cells.true_totals[c]) / cells.true_totals[c];
            ++ape_cells;
        }
    }
    out.estimate = est_total;
    out.covered = std::abs(est_total - true_total) <= margin * true_total;
    out.mape = ape_cells > 0 ? ape / ape_cells * 100.0 : 0.0;
    return out;
}

}  // namespace

SimResult simulate_sampling(const std::vector<HouseholdRecord>& households,
                            const std::vector<TripRecord>& trips, const SimConfig& config) {
    if (households.size() < 2) throw DataError("simulate_sampling: need at least 2 households");
    if (!(config.rate > 0.0) || config.rate > 1.0) {
        throw ConfigError("simulate_sampling: rate must be in (0, 1]");
    }
    if (config.replications < 1) throw ConfigError("simulate_sampling: replications must be >= 1");
    if (!(config.margin_of_error > 0.0)) {
        throw ConfigError("simulate_sampling: margin_of_error must be positive");
    }

    const auto cells = index_cells(households, trips);
    if (cells.true_totals.empty()) throw DegenerateInputError("simulate_sampling: no trips");

    const auto n_households = households.size();
    auto n_sample = static_cast<std::size_t>(
        std::llround(std::ceil(config.rate * static_cast<double>(n_households) - 1e-9)));
    n_sample = std::clamp<std::size_t>(n_sample, 1, n_households);

    const int reps = config.replications;
    std::vector<RepOutcome> outcomes(static_cast<std::size_t>(reps));
    unsigned n_threads = config.threads > 0 ? static_cast<unsigned>(config.threads)
                                            : std::max(1u, std::thread::hardware_concurrency());
    n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(reps));

    std::atomic<int> next{0};
    auto worker = [&] {
        for (int r = next.fetch_add(1); r < reps; r = next.fetch_add(1)) {
            outcomes[static_cast<std::size_t>(r)] =
                run_replication(cells, n_households, n_sample, config.margin_of_error,
                                derive_seed(config.seed, static_cast<std::uint64_t>(r)));
        }
    };
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < n_threads; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    SimResult result;
    result.replications = reps;
    result.sample_households = static_cast<std::int64_t>(n_sample);
    result.true_total = std::accumulate(cells.true_totals.begin(), cells.true_totals.end(), 0.0);
    double est = 0.0, mape = 0.0;
    int covered = 0;
    for (const auto& o : outcomes) {
        est += o.estimate;
        mape += o.mape;
        covered += o.covered ? 1 : 0;
    }
    result.mean_estimate = est / reps;
    result.relative_bias = (result.mean_estimate - result.true_total) / result.true_total;
    result.coverage = static_cast<double>(covered) / reps;
    result.mean_mape = mape / reps;
    return result;
}

std::vector<CoveragePoint> coverage_curve(const std::vector<HouseholdRecord>& households,
                                          const std::vector<TripRecord>& trips,
                                          const std::vector<double>& rates,
                                          const SimConfig& config) {
    if (rates.empty()) throw ConfigError("coverage_curve: no rates given");
    std::vector<CoveragePoint> out;
    for (std::size_t i = 0; i < rates.size(); ++i) {
        SimConfig c = config;
        c.rate = rates[i];
        c.seed = derive_seed(config.seed, 0x10000 + i);
        const auto r = simulate_sampling(households, trips, c);
        out.push_back({rates[i], r.coverage, r.mean_mape});
    }
    return out;
}

std::string coverage_csv(const std::vector<CoveragePoint>& points) {
    std::ostringstream os;
    os.precision(12);
    os << "rate,coverage,mean_mape\n";
    for (const auto& p : points) {
        os << p.rate << ',' << p.coverage << ',' << p.mean_mape << '\n';
    }
    return os.str();
}

json sim_json(const SimResult& r) {
    return json{{"replications", r.replications},
                {"sample_households", r.sample_households},
                {"true_total", r.true_total},
                {"mean_estimate", r.mean_estimate},
                {"relative_bias", r.relative_bias},
                {"coverage", r.coverage},
                {"mean_mape", r.mean_mape}};
}

}  // namespace samplan::mc
