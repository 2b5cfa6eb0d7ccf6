#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace samplan {

enum class Mode { auto_, transit, active, other };
enum class Purpose { work, home, school, recreation, other };
enum class Period { peak, offpeak };

const char* to_string(Mode m);
const char* to_string(Purpose p);
const char* to_string(Period p);
Mode parse_mode(const std::string& s);        // throws DataError on unknown token
Purpose parse_purpose(const std::string& s);  // throws DataError on unknown token

// Peak = [06:00,10:00) u [15:00,19:00), start inclusive, end exclusive.
Period period_from_depart(int hhmm);

struct HouseholdRecord {
    std::string household_id;
    std::string region;
    std::string zone;
    int size = 1;
    std::string income_class;
    int vehicles = 0;
    double weight = 1.0;
    // Derived from linked TripRecords; zero-trip households stay at 0.
    double trip_count = 0.0;
};

struct TripRecord {
    std::string household_id;
    std::string origin_zone;
    std::string destination_zone;
    Mode mode = Mode::auto_;
    Purpose purpose = Purpose::other;
    Period period = Period::offpeak;
    int depart_hhmm = 0;
    double weight = 1.0;
};

// Fills trip_count on each household from its linked trips (unweighted counts).
// Returns the household_ids referenced by trips but absent from `households`.
std::vector<std::string> link_trip_counts(std::vector<HouseholdRecord>& households,
                                          const std::vector<TripRecord>& trips);

}  // namespace samplan
