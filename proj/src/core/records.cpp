#include "core/records.hpp"

#include <algorithm>
#include <unordered_map>

#include "core/errors.hpp"

namespace samplan {

const char* to_string(Mode m) {
    switch (m) {
        case Mode::auto_: return "auto";
        case Mode::transit: return "transit";
        case Mode::active: return "active";
        case Mode::other: return "other";
    }
    return "other";
}

const char* to_string(Purpose p) {
    switch (p) {
        case Purpose::work: return "work";
        case Purpose::home: return "home";
        case Purpose::school: return "school";
        case Purpose::recreation: return "recreation";
        case Purpose::other: return "other";
    }
    return "other";
}

const char* to_string(Period p) { return p == Period::peak ? "peak" : "offpeak"; }

Mode parse_mode(const std::string& s) {
    if (s == "auto") return Mode::auto_;
    if (s == "transit") return Mode::transit;
    if (s == "active") return Mode::active;
    if (s == "other") return Mode::other;
    throw DataError("unknown mode token: '" + s + "'");
}

Purpose parse_purpose(const std::string& s) {
    if (s == "work") return Purpose::work;
    if (s == "home") return Purpose::home;
    if (s == "school") return Purpose::school;
    if (s == "recreation") return Purpose::recreation;
    if (s == "other") return Purpose::other;
    throw DataError("unknown purpose token: '" + s + "'");
}

Period period_from_depart(int hhmm) {
    if (hhmm < 0 || hhmm > 2359 || hhmm % 100 > 59) {
        throw DataError("depart_hhmm out of range: " + std::to_string(hhmm));
    }
    const int minutes = (hhmm / 100) * 60 + hhmm % 100;
    const bool am = minutes >= 6 * 60 && minutes < 10 * 60;
    const bool pm = minutes >= 15 * 60 && minutes < 19 * 60;
    return (am || pm) ? Period::peak : Period::offpeak;
}

std::vector<std::string> link_trip_counts(std::vector<HouseholdRecord>& households,
                                          const std::vector<TripRecord>& trips) {
    std::unordered_map<std::string, HouseholdRecord*> by_id;
    by_id.reserve(households.size());
    for (auto& h : households) {
        h.trip_count = 0.0;
        by_id.emplace(h.household_id, &h);
    }
    std::vector<std::string> orphans;
    for (const auto& t : trips) {
        auto it = by_id.find(t.household_id);
        if (it == by_id.end()) {
            if (orphans.empty() || orphans.back() != t.household_id) {
                orphans.push_back(t.household_id);
            }
            continue;
        }
        it->second->trip_count += 1.0;
    }
    std::sort(orphans.begin(), orphans.end());
    orphans.erase(std::unique(orphans.begin(), orphans.end()), orphans.end());
    return orphans;
}

}  // namespace samplan
