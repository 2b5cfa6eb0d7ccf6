#include "core/od.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include "core/errors.hpp"

namespace samplan::od {

using nlohmann::json;

double ODMatrix::row_sum(std::size_t r) const {
    double s = 0.0;
    for (std::size_t c = 0; c < cells[r].size(); ++c) {
        if (!is_suppressed(r, c)) s += cells[r][c];
    }
    return s;
}

double ODMatrix::col_sum(std::size_t c) const {
    double s = 0.0;
    for (std::size_t r = 0; r < cells.size(); ++r) {
        if (!is_suppressed(r, c)) s += cells[r][c];
    }
    return s;
}

std::optional<std::size_t> ODMatrix::row_index(const std::string& label) const {
    for (std::size_t i = 0; i < row_labels.size(); ++i) {
        if (row_labels[i] == label) return i;
    }
    return std::nullopt;
}

ODMatrix build_od_matrix(const std::vector<TripRecord>& trips,
                         const std::map<std::string, std::string>& partition,
                         const Slice& slice) {
    std::vector<std::string> regions;
    for (const auto& [zone, region] : partition) {
        if (std::find(regions.begin(), regions.end(), region) == regions.end()) {
            regions.push_back(region);
        }
    }
    std::sort(regions.begin(), regions.end());
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < regions.size(); ++i) index[regions[i]] = i;

    ODMatrix m;
    m.row_labels = regions;
    m.col_labels = regions;
    m.cells.assign(regions.size(), std::vector<double>(regions.size(), 0.0));
    m.slice = slice;
    for (const auto& t : trips) {
        if (!slice.matches(t)) continue;
        auto o = partition.find(t.origin_zone);
        if (o == partition.end()) {
            throw DataError("build_od_matrix: zone '" + t.origin_zone + "' is not mapped");
        }
        auto d = partition.find(t.destination_zone);
        if (d == partition.end()) {
            throw DataError("build_od_matrix: zone '" + t.destination_zone + "' is not mapped");
        }
        m.cells[index[o->second]][index[d->second]] += t.weight;
    }
    return m;
}

std::vector<CellRate> cell_required_rates(const ODMatrix& matrix, double cv,
                                          const stats::SizeSpec& spec) {
    std::vector<CellRate> out;
    for (std::size_t r = 0; r < matrix.cells.size(); ++r) {
        for (std::size_t c = 0; c < matrix.cells[r].size(); ++c) {
            if (matrix.is_suppressed(r, c)) continue;
            const double total = matrix.cells[r][c];
            if (total < 1.0) continue;  // zero/empty cells carry no requirement
            const auto n = static_cast<std::int64_t>(std::llround(total));
            out.push_back({r, c, total, stats::interchange_rate(n, cv, spec)});
        }
    }
    return out;
}

double matrix_cv(const std::vector<TripRecord>& trips, const GroupDims& dims) {
    if (!dims.by_period && !dims.by_mode && !dims.by_purpose) {
        throw ConfigError("matrix_cv: at least one grouping dimension is required");
    }
    std::map<std::tuple<int, int, int>, double> groups;
    for (const auto& t : trips) {
        const auto key = std::make_tuple(dims.by_period ? static_cast<int>(t.period) : -1,
                                         dims.by_mode ? static_cast<int>(t.mode) : -1,
                                         dims.by_purpose ? static_cast<int>(t.purpose) : -1);
        groups[key] += t.weight;
    }
    std::vector<double> totals;
    for (const auto& [_, v] : groups) {
        if (v > 0.0) totals.push_back(v);
    }
    if (totals.size() < 2) {
        throw DegenerateInputError("matrix_cv: fewer than 2 nonzero groups");
    }
    return stats::coefficient_of_variation(totals);
}

double cells_cv(const ODMatrix& matrix, std::size_t n_rows, std::size_t n_cols) {
    if (n_rows == 0) n_rows = matrix.cells.size();
    if (n_cols == 0) n_cols = matrix.col_labels.size();
    std::vector<double> vals;
    for (std::size_t r = 0; r < n_rows; ++r) {
        for (std::size_t c = 0; c < n_cols; ++c) {
            if (!matrix.is_suppressed(r, c)) vals.push_back(matrix.cells[r][c]);
        }
    }
    return stats::coefficient_of_variation(vals);
}

double mape(const ODMatrix& estimate, const ODMatrix& reference) {
    if (estimate.cells.size() != reference.cells.size()) {
        throw DataError("mape: matrices are not conformable");
    }
    double acc = 0.0;
    int n = 0;
    for (std::size_t r = 0; r < reference.cells.size(); ++r) {
        if (estimate.cells[r].size() != reference.cells[r].size()) {
            throw DataError("mape: matrices are not conformable");
        }
        for (std::size_t c = 0; c < reference.cells[r].size(); ++c) {
            if (reference.is_suppressed(r, c) || estimate.is_suppressed(r, c)) continue;
            const double ref = reference.cells[r][c];
            if (ref <= 0.0) continue;
            acc += std::abs(estimate.cells[r][c] - ref) / ref;
            ++n;
        }
    }
    if (n == 0) throw DegenerateInputError("mape: no includable cells");
    return acc / n * 100.0;
}

namespace {

struct SweepSubset {
    std::string name;
    GroupDims dims;
};

std::tuple<int, int, int> trip_key(const TripRecord& t, const GroupDims& dims) {
    return {dims.by_period ? static_cast<int>(t.period) : -1,
            dims.by_mode ? static_cast<int>(t.mode) : -1,
            dims.by_purpose ? static_cast<int>(t.purpose) : -1};
}

}  // namespace

std::vector<SweepRow> disaggregation_sweep(const std::vector<HouseholdRecord>& households,
                                           const std::vector<TripRecord>& trips,
                                           const stats::SizeSpec& spec) {
    if (households.empty()) throw DataError("disaggregation_sweep: no households");
    const std::vector<SweepSubset> subsets = {
        {"mode", {false, true, false}},
        {"purpose", {false, false, true}},
        {"time", {true, false, false}},
        {"time&mode", {true, true, false}},
        {"time&purpose", {true, false, true}},
        {"purpose&mode", {false, true, true}},
        {"time&purpose&mode", {true, true, true}},
    };

    std::unordered_map<std::string, std::size_t> hh_index;
    for (std::size_t i = 0; i < households.size(); ++i) {
        hh_index[households[i].household_id] = i;
    }
    const double n_households = static_cast<double>(households.size());
    double total_trips = 0.0;
    for (const auto& t : trips) {
        if (hh_index.count(t.household_id)) total_trips += 1.0;
    }
    const double overall_mean = total_trips / n_households;

    std::vector<SweepRow> out;
    for (const auto& subset : subsets) {
        SweepRow row;
        row.dimensions = subset.name;
        if (overall_mean <= 0.0) {
            row.degenerate = true;
            row.note = "no trips";
            out.push_back(std::move(row));
            continue;
        }
        // household x category trip counts
        std::map<std::tuple<int, int, int>, std::vector<double>> counts;
        std::map<std::tuple<int, int, int>, double> category_trips;
        for (const auto& t : trips) {
            auto it = hh_index.find(t.household_id);
            if (it == hh_index.end()) continue;
            const auto key = trip_key(t, subset.dims);
            auto& vec = counts[key];
            if (vec.empty()) vec.assign(households.size(), 0.0);
            vec[it->second] += 1.0;
            category_trips[key] += 1.0;
        }
        double c_star = 0.0, cv_max = 0.0;
        std::size_t categories = 0;
        for (const auto& [key, vec] : counts) {
            const double freq = category_trips[key] / total_trips;
            if (freq <= 0.0) continue;
            const double sd = stats::std_dev(vec);
            const double cv = sd / overall_mean;
            c_star += freq * cv;
            cv_max = std::max(cv_max, cv);
            ++categories;
        }
        row.categories = categories;
        row.c_star = c_star;
        row.cv_max = cv_max;
        if (c_star <= 0.0) {
            row.degenerate = true;
            row.note = "zero dispersion";
        } else {
            const double f = smith::initial_sample_size(c_star, spec);
            row.final_total = f * (cv_max / c_star);
            row.sampling_rate = std::ceil(row.final_total - 1e-9) / n_households;
        }
        out.push_back(std::move(row));
    }
    return out;
}

std::string matrix_csv(const ODMatrix& matrix) {
    std::ostringstream os;
    os.precision(12);
    os << "from_region";
    for (const auto& label : matrix.col_labels) os << ',' << label;
    os << ",row_total\n";
    for (std::size_t r = 0; r < matrix.cells.size(); ++r) {
        os << matrix.row_labels[r];
        for (std::size_t c = 0; c < matrix.cells[r].size(); ++c) {
            os << ',';
            if (matrix.is_suppressed(r, c)) {
                os << "suppressed";
            } else {
                os << matrix.cells[r][c];
            }
        }
        os << ',' << matrix.row_sum(r) << '\n';
    }
    os << "col_total";
    for (std::size_t c = 0; c < matrix.col_labels.size(); ++c) os << ',' << matrix.col_sum(c);
    os << ",\n";
    return os.str();
}

json matrix_json(const ODMatrix& matrix) {
    json cells = json::array();
    for (std::size_t r = 0; r < matrix.cells.size(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < matrix.cells[r].size(); ++c) {
            if (matrix.is_suppressed(r, c)) {
                row.push_back(nullptr);
            } else {
                row.push_back(matrix.cells[r][c]);
            }
        }
        cells.push_back(std::move(row));
    }
    json slice = json::object();
    if (matrix.slice.period) slice["period"] = to_string(*matrix.slice.period);
    if (matrix.slice.mode) slice["mode"] = to_string(*matrix.slice.mode);
    if (matrix.slice.purpose) slice["purpose"] = to_string(*matrix.slice.purpose);
    return json{{"row_labels", matrix.row_labels},
                {"col_labels", matrix.col_labels},
                {"cells", std::move(cells)},
                {"slice", std::move(slice)}};
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    os.precision(12);
    os << "dimensions,categories,c_star,cv_max,final_total,sampling_rate,degenerate,note\n";
    for (const auto& r : rows) {
        os << r.dimensions << ',' << r.categories << ',' << r.c_star << ',' << r.cv_max << ','
           << r.final_total << ',' << r.sampling_rate << ',' << (r.degenerate ? 1 : 0) << ','
           << r.note << '\n';
    }
    return os.str();
}

json sweep_json(const std::vector<SweepRow>& rows) {
    json out = json::array();
    for (const auto& r : rows) {
        out.push_back({{"dimensions", r.dimensions},
                       {"categories", r.categories},
                       {"c_star", r.c_star},
                       {"cv_max", r.cv_max},
                       {"final_total", r.final_total},
                       {"sampling_rate", r.sampling_rate},
                       {"degenerate", r.degenerate},
                       {"note", r.note}});
    }
    return out;
}

}  // namespace samplan::od
