#include "core/stats.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "core/errors.hpp"

namespace samplan::stats {

namespace {

// Coefficients from Acklam's inverse-normal approximation.
constexpr double kA[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                          -2.759285104469687e+02, 1.383577518672690e+02,
                          -3.066479806614716e+01, 2.506628277459239e+00};
constexpr double kB[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                          -1.556989798598866e+02, 6.680131188771972e+01,
                          -1.328068155288572e+01};
constexpr double kC[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                          -2.400758277161838e+00, -2.549732539343734e+00,
                          4.374664141464968e+00,  2.938163982698783e+00};
constexpr double kD[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                          2.445134137142996e+00, 3.754408661907416e+00};

double acklam(double p) {
    constexpr double p_low = 0.02425;
    double q, r, x;
    if (p < p_low) {
        q = std::sqrt(-2.0 * std::log(p));
        x = (((((kC[0] * q + kC[1]) * q + kC[2]) * q + kC[3]) * q + kC[4]) * q + kC[5]) /
            ((((kD[0] * q + kD[1]) * q + kD[2]) * q + kD[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        q = p - 0.5;
        r = q * q;
        x = (((((kA[0] * r + kA[1]) * r + kA[2]) * r + kA[3]) * r + kA[4]) * r + kA[5]) * q /
            (((((kB[0] * r + kB[1]) * r + kB[2]) * r + kB[3]) * r + kB[4]) * r + 1.0);
    } else {
        q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((kC[0] * q + kC[1]) * q + kC[2]) * q + kC[3]) * q + kC[4]) * q + kC[5]) /
            ((((kD[0] * q + kD[1]) * q + kD[2]) * q + kD[3]) * q + 1.0);
    }
    // One Halley refinement step against the exact CDF brings the absolute
    // error to the ~1e-15 level.
    const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
    const double u = e * std::sqrt(2.0 * M_PI) * std::exp(x * x / 2.0);
    x = x - u / (1.0 + x * u / 2.0);
    return x;
}

}  // namespace

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw ConfigError("normal_quantile: p must lie in (0,1), got " + std::to_string(p));
    }
    return acklam(p);
}

double z_quantile(double confidence) {
    if (!(confidence > 0.0 && confidence < 1.0)) {
        throw ConfigError("z_quantile: confidence must lie in (0,1), got " +
                          std::to_string(confidence));
    }
    return normal_quantile((1.0 + confidence) / 2.0);
}

SizeSpec::SizeSpec(double confidence, double margin_of_error)
    : confidence_(confidence), margin_of_error_(margin_of_error), z_(z_quantile(confidence)) {
    if (!(margin_of_error > 0.0 && margin_of_error < 1.0)) {
        throw ConfigError("SizeSpec: margin_of_error must lie in (0,1), got " +
                          std::to_string(margin_of_error));
    }
}

double mean(std::span<const double> values) {
    if (values.empty()) throw DegenerateInputError("mean: empty input");
    double s = 0.0;
    for (double v : values) s += v;
    return s / static_cast<double>(values.size());
}

double std_dev(std::span<const double> values, StdDenominator denom) {
    if (values.size() < 2) throw DegenerateInputError("std_dev: need at least 2 values");
    const double m = mean(values);
    double ss = 0.0;
    for (double v : values) ss += (v - m) * (v - m);
    const double n = static_cast<double>(values.size());
    return std::sqrt(ss / (denom == StdDenominator::population ? n : n - 1.0));
}

double coefficient_of_variation(std::span<const double> values, StdDenominator denom) {
    if (values.size() < 2) {
        throw DegenerateInputError("coefficient_of_variation: need at least 2 values");
    }
    const double m = mean(values);
    if (!(m > 0.0)) {
        throw DegenerateInputError("coefficient_of_variation: mean must be positive");
    }
    return std_dev(values, denom) / m;
}

double base_sample_size(double cv, const SizeSpec& spec) {
    if (cv < 0.0) throw ConfigError("base_sample_size: cv must be nonnegative");
    const double t = cv * spec.z() / spec.margin_of_error();
    return t * t;
}

double fpc_sample_size(double n0, std::int64_t population) {
    if (population < 1) throw ConfigError("fpc_sample_size: population must be >= 1");
    if (n0 < 0.0) throw ConfigError("fpc_sample_size: n0 must be nonnegative");
    return n0 / (1.0 + n0 / static_cast<double>(population));
}

double interchange_rate(std::int64_t trip_total, double cv, const SizeSpec& spec) {
    if (trip_total < 1) throw ConfigError("interchange_rate: trip_total must be >= 1");
    const double n = fpc_sample_size(base_sample_size(cv, spec), trip_total);
    return n / static_cast<double>(trip_total);
}

std::vector<RateCurvePoint> rate_curve(std::span<const std::int64_t> trip_totals,
                                       std::span<const double> cvs,
                                       std::span<const double> confidences,
                                       double margin_of_error) {
    std::vector<RateCurvePoint> out;
    out.reserve(trip_totals.size() * cvs.size() * confidences.size());
    std::vector<double> sorted_conf(confidences.begin(), confidences.end());
    std::sort(sorted_conf.begin(), sorted_conf.end());
    std::vector<double> sorted_cv(cvs.begin(), cvs.end());
    std::sort(sorted_cv.begin(), sorted_cv.end());
    std::vector<std::int64_t> sorted_n(trip_totals.begin(), trip_totals.end());
    std::sort(sorted_n.begin(), sorted_n.end());
    for (double conf : sorted_conf) {
        const SizeSpec spec(conf, margin_of_error);
        for (double cv : sorted_cv) {
            for (std::int64_t n : sorted_n) {
                out.push_back({n, cv, conf, margin_of_error, interchange_rate(n, cv, spec)});
            }
        }
    }
    return out;
}

std::string rate_curve_csv(const std::vector<RateCurvePoint>& points) {
    std::ostringstream os;
    os << "confidence,cv,margin_of_error,trip_total,required_rate\n";
    os.precision(12);
    for (const auto& p : points) {
        os << p.confidence << ',' << p.cv << ',' << p.margin_of_error << ',' << p.trip_total
           << ',' << p.required_rate << '\n';
    }
    return os.str();
}

std::vector<std::int64_t> log_grid(std::int64_t lo, std::int64_t hi, int points_per_decade) {
    if (lo < 1 || hi < lo || points_per_decade < 1) {
        throw ConfigError("log_grid: need 1 <= lo <= hi and points_per_decade >= 1");
    }
    std::vector<std::int64_t> out;
    const double step = 1.0 / points_per_decade;
    for (double e = std::log10(static_cast<double>(lo));
         e <= std::log10(static_cast<double>(hi)) + 1e-12; e += step) {
        auto v = static_cast<std::int64_t>(std::llround(std::pow(10.0, e)));
        v = std::clamp(v, lo, hi);
        if (out.empty() || out.back() != v) out.push_back(v);
    }
    if (out.back() != hi) out.push_back(hi);
    return out;
}

}  // namespace samplan::stats
