#pragma once

#include <string>
#include <vector>

#include "core/records.hpp"

namespace samplan::io {

// Minimal CSV splitter; the bundled schemas never quote fields.
std::vector<std::string> split_csv_line(const std::string& line);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;  // raw cells, row numbers offset by header
};

Table read_csv(const std::string& path);
Table parse_csv(const std::string& text);

// Schema: household_id,region,zone,size,income_class,vehicles[,weight]
std::vector<HouseholdRecord> ingest_households(const std::string& path);
std::vector<HouseholdRecord> parse_households(const std::string& text);
std::string emit_households(const std::vector<HouseholdRecord>& records);

// Schema: household_id,origin_zone,destination_zone,mode,purpose,depart_hhmm[,weight]
std::vector<TripRecord> ingest_trips(const std::string& path);
std::vector<TripRecord> parse_trips(const std::string& text);
std::string emit_trips(const std::vector<TripRecord>& records);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace samplan::io
