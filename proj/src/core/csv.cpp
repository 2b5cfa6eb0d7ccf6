#include "core/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "core/errors.hpp"

namespace samplan::io {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path);
    out << content;
}

Table parse_csv(const std::string& text) {
    Table t;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto cells = split_csv_line(line);
        if (first) {
            t.header = std::move(cells);
            first = false;
        } else {
            t.rows.push_back(std::move(cells));
        }
    }
    if (first) throw DataError("empty CSV input");
    return t;
}

Table read_csv(const std::string& path) { return parse_csv(read_file(path)); }

namespace {

int column_index(const Table& t, const std::string& name, bool required, const char* what) {
    for (size_t i = 0; i < t.header.size(); ++i) {
        if (t.header[i] == name) return static_cast<int>(i);
    }
    if (required) {
        throw DataError(std::string(what) + ": missing required column '" + name + "'");
    }
    return -1;
}

long parse_long(const std::string& s, size_t line_no, const char* field) {
    long v{};
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) {
        throw DataError("line " + std::to_string(line_no) + ": bad integer for " + field +
                        ": '" + s + "'");
    }
    return v;
}

double parse_double(const std::string& s, size_t line_no, const char* field) {
    try {
        size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw DataError("line " + std::to_string(line_no) + ": bad number for " + field +
                        ": '" + s + "'");
    }
}

}  // namespace

std::vector<HouseholdRecord> parse_households(const std::string& text) {
    const Table t = parse_csv(text);
    const int c_id = column_index(t, "household_id", true, "households");
    const int c_region = column_index(t, "region", true, "households");
    const int c_zone = column_index(t, "zone", true, "households");
    const int c_size = column_index(t, "size", true, "households");
    const int c_income = column_index(t, "income_class", true, "households");
    const int c_veh = column_index(t, "vehicles", true, "households");
    const int c_weight = column_index(t, "weight", false, "households");

    std::vector<HouseholdRecord> out;
    out.reserve(t.rows.size());
    std::unordered_map<std::string, size_t> seen;  // id -> first line number
    for (size_t i = 0; i < t.rows.size(); ++i) {
        const auto& row = t.rows[i];
        const size_t line_no = i + 2;
        if (row.size() < t.header.size()) {
            throw DataError("line " + std::to_string(line_no) + ": expected " +
                            std::to_string(t.header.size()) + " columns, got " +
                            std::to_string(row.size()));
        }
        HouseholdRecord h;
        h.household_id = row[c_id];
        auto [it, inserted] = seen.emplace(h.household_id, line_no);
        if (!inserted) {
            throw DataError("duplicate household_id '" + h.household_id + "' at lines " +
                            std::to_string(it->second) + " and " + std::to_string(line_no));
        }
        h.region = row[c_region];
        h.zone = row[c_zone];
        h.size = static_cast<int>(parse_long(row[c_size], line_no, "size"));
        if (h.size < 1) throw DataError("line " + std::to_string(line_no) + ": size must be >= 1");
        h.income_class = row[c_income];
        h.vehicles = static_cast<int>(parse_long(row[c_veh], line_no, "vehicles"));
        if (h.vehicles < 0) {
            throw DataError("line " + std::to_string(line_no) + ": vehicles must be >= 0");
        }
        h.weight = c_weight >= 0 ? parse_double(row[c_weight], line_no, "weight") : 1.0;
        if (!(h.weight > 0.0)) {
            throw DataError("line " + std::to_string(line_no) + ": weight must be positive");
        }
        out.push_back(std::move(h));
    }
    return out;
}

std::vector<HouseholdRecord> ingest_households(const std::string& path) {
    return parse_households(read_file(path));
}

std::string emit_households(const std::vector<HouseholdRecord>& records) {
    std::ostringstream os;
    os << "household_id,region,zone,size,income_class,vehicles,weight\n";
    os.precision(12);
    for (const auto& h : records) {
        os << h.household_id << ',' << h.region << ',' << h.zone << ',' << h.size << ','
           << h.income_class << ',' << h.vehicles << ',' << h.weight << '\n';
    }
    return os.str();
}

std::vector<TripRecord> parse_trips(const std::string& text) {
    const Table t = parse_csv(text);
    const int c_id = column_index(t, "household_id", true, "trips");
    const int c_orig = column_index(t, "origin_zone", true, "trips");
    const int c_dest = column_index(t, "destination_zone", true, "trips");
    const int c_mode = column_index(t, "mode", true, "trips");
    const int c_purpose = column_index(t, "purpose", true, "trips");
    const int c_depart = column_index(t, "depart_hhmm", true, "trips");
    const int c_weight = column_index(t, "weight", false, "trips");

    std::vector<TripRecord> out;
    out.reserve(t.rows.size());
    for (size_t i = 0; i < t.rows.size(); ++i) {
        const auto& row = t.rows[i];
        const size_t line_no = i + 2;
        if (row.size() < t.header.size()) {
            throw DataError("line " + std::to_string(line_no) + ": expected " +
                            std::to_string(t.header.size()) + " columns, got " +
                            std::to_string(row.size()));
        }
        TripRecord r;
        r.household_id = row[c_id];
        r.origin_zone = row[c_orig];
        r.destination_zone = row[c_dest];
        try {
            r.mode = parse_mode(row[c_mode]);
            r.purpose = parse_purpose(row[c_purpose]);
        } catch (const DataError& e) {
            throw DataError("line " + std::to_string(line_no) + ": " + e.what());
        }
        r.depart_hhmm = static_cast<int>(parse_long(row[c_depart], line_no, "depart_hhmm"));
        try {
            r.period = period_from_depart(r.depart_hhmm);
        } catch (const DataError& e) {
            throw DataError("line " + std::to_string(line_no) + ": " + e.what());
        }
        r.weight = c_weight >= 0 ? parse_double(row[c_weight], line_no, "weight") : 1.0;
        if (!(r.weight > 0.0)) {
            throw DataError("line " + std::to_string(line_no) + ": weight must be positive");
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<TripRecord> ingest_trips(const std::string& path) {
    return parse_trips(read_file(path));
}

std::string emit_trips(const std::vector<TripRecord>& records) {
    std::ostringstream os;
    os << "household_id,origin_zone,destination_zone,mode,purpose,depart_hhmm,weight\n";
    os.precision(12);
    for (const auto& r : records) {
        os << r.household_id << ',' << r.origin_zone << ',' << r.destination_zone << ','
           << to_string(r.mode) << ',' << to_string(r.purpose) << ',' << r.depart_hhmm << ','
           << r.weight << '\n';
    }
    return os.str();
}

}  // namespace samplan::io
