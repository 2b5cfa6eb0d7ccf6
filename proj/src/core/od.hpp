#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "core/records.hpp"
#include "core/smith.hpp"
#include "core/stats.hpp"

namespace samplan::od {

struct Slice {
    std::optional<Period> period;
    std::optional<Mode> mode;
    std::optional<Purpose> purpose;

    bool matches(const TripRecord& t) const {
        return (!period || t.period == *period) && (!mode || t.mode == *mode) &&
               (!purpose || t.purpose == *purpose);
    }
};

struct ODMatrix {
    std::vector<std::string> row_labels;
    std::vector<std::string> col_labels;
    std::vector<std::vector<double>> cells;  // [row][col], >= 0
    std::set<std::pair<std::size_t, std::size_t>> suppressed;
    Slice slice;

    double& at(std::size_t r, std::size_t c) { return cells[r][c]; }
    double at(std::size_t r, std::size_t c) const { return cells[r][c]; }
    bool is_suppressed(std::size_t r, std::size_t c) const { return suppressed.count({r, c}) > 0; }
    double row_sum(std::size_t r) const;
    double col_sum(std::size_t c) const;
    std::optional<std::size_t> row_index(const std::string& label) const;
};

// Weighted trip totals per (origin region, destination region); zones are
// mapped through `partition`. Every zone a trip touches must be mapped.
ODMatrix build_od_matrix(const std::vector<TripRecord>& trips,
                         const std::map<std::string, std::string>& partition,
                         const Slice& slice = {});

// Per-cell required sampling rate; suppressed and zero cells get no entry.
struct CellRate {
    std::size_t row = 0, col = 0;
    double trip_total = 0.0;
    double required_rate = 0.0;
};
std::vector<CellRate> cell_required_rates(const ODMatrix& matrix, double cv,
                                          const stats::SizeSpec& spec);

// CV over trip totals grouped by the selected dimensions.
struct GroupDims {
    bool by_period = false;
    bool by_mode = false;
    bool by_purpose = false;
};
double matrix_cv(const std::vector<TripRecord>& trips, const GroupDims& dims);

// CV over the unsuppressed cells of a matrix (optionally a sub-block).
double cells_cv(const ODMatrix& matrix, std::size_t n_rows = 0, std::size_t n_cols = 0);

// Mean absolute percentage error over cells with reference > 0.
double mape(const ODMatrix& estimate, const ODMatrix& reference);

struct SweepRow {
    std::string dimensions;  // e.g. "mode", "time&purpose&mode"
    std::size_t categories = 0;
    double c_star = 0.0;
    double cv_max = 0.0;
    double final_total = 0.0;
    double sampling_rate = 0.0;
    bool degenerate = false;
    std::string note;
};

// The seven nonempty subsets of {time, mode, purpose}: households are
// characterised by their trip counts per category combination and each table
// is pushed through the allocator pipeline.
std::vector<SweepRow> disaggregation_sweep(const std::vector<HouseholdRecord>& households,
                                           const std::vector<TripRecord>& trips,
                                           const stats::SizeSpec& spec);

std::string matrix_csv(const ODMatrix& matrix);
nlohmann::json matrix_json(const ODMatrix& matrix);
std::string sweep_csv(const std::vector<SweepRow>& rows);
nlohmann::json sweep_json(const std::vector<SweepRow>& rows);

}  // namespace samplan::od
