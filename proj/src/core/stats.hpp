#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace samplan::stats {

// Two-sided confidence level plus relative margin of error, with the normal
// variate cached at construction.
class SizeSpec {
public:
    SizeSpec(double confidence, double margin_of_error);

    double confidence() const { return confidence_; }
    double margin_of_error() const { return margin_of_error_; }
    double z() const { return z_; }

private:
    double confidence_;
    double margin_of_error_;
    double z_;
};

// Inverse standard-normal CDF at (1 + confidence) / 2.
double z_quantile(double confidence);

// Inverse standard-normal CDF (Acklam's rational approximation, |err| < 1.2e-9).
double normal_quantile(double p);

enum class StdDenominator { population, sample };

// Population (or sample) standard deviation over mean. Requires >= 2 values
// and a strictly positive mean.
double coefficient_of_variation(std::span<const double> values,
                                StdDenominator denom = StdDenominator::population);

double mean(std::span<const double> values);
double std_dev(std::span<const double> values,
               StdDenominator denom = StdDenominator::population);

// Infinite-population sample size n0 = (cv * z / e)^2.
double base_sample_size(double cv, const SizeSpec& spec);

// Finite population correction: n0 / (1 + n0 / population).
double fpc_sample_size(double n0, std::int64_t population);

// Required sampling rate for one O-D interchange with `trip_total` trips.
double interchange_rate(std::int64_t trip_total, double cv, const SizeSpec& spec);

struct RateCurvePoint {
    std::int64_t trip_total;
    double cv;
    double confidence;
    double margin_of_error;
    double required_rate;
};

// Full cross product, sorted by (confidence, cv, trip_total).
std::vector<RateCurvePoint> rate_curve(std::span<const std::int64_t> trip_totals,
                                       std::span<const double> cvs,
                                       std::span<const double> confidences,
                                       double margin_of_error);

std::string rate_curve_csv(const std::vector<RateCurvePoint>& points);

// Logarithmically spaced integer grid over [lo, hi], deduplicated.
std::vector<std::int64_t> log_grid(std::int64_t lo, std::int64_t hi, int points_per_decade);

}  // namespace samplan::stats
