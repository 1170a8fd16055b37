#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "yardcast/forecast_result.hpp"

namespace yardcast {

/// Maps timestamps onto the unit interval spanned by the training window.
struct TimeScale {
    TimePoint t0 = 0;
    std::int64_t span_secs = kSecsPerHour;

    double normalize(TimePoint tp) const {
        return static_cast<double>(tp - t0) / static_cast<double>(span_secs);
    }
    double hours_since_start(TimePoint tp) const {
        return static_cast<double>(tp - t0) / static_cast<double>(kSecsPerHour);
    }
    friend bool operator==(const TimeScale&, const TimeScale&) = default;
};

/// Trend g(t). Piecewise-linear: g = (k + a(t)'delta) t + (m + a(t)'gamma)
/// with gamma_j = -cp_j * delta_j keeping the segments continuous.
/// Logistic: g = C / (1 + exp(-(k + a(t)'delta)(t - (m + a(t)'gamma)))).
/// a(t) indicators close on the left: a_j(t) = 1 iff t >= cp_j.
struct TrendSpec {
    TrendKind kind = TrendKind::PiecewiseLinear;
    double k = 0.0;
    double m = 0.0;
    std::vector<double> delta;
    std::vector<double> gamma;
    std::vector<TimePoint> changepoints;
    double capacity = 0.0;  // C, logistic only
};

struct SeasonalitySpec {
    std::string name;
    double period_hours = kHoursPerWeek;
    int fourier_order = 0;
    std::vector<double> cos_coef;  // a_n
    std::vector<double> sin_coef;  // b_n
    bool enabled = true;
};

struct HolidaySpec {
    std::vector<std::string> names;
    std::vector<std::vector<std::int64_t>> dates;  // epoch days per holiday
    std::vector<double> kappa;                     // fitted effect per holiday
    double nu = 10.0;                              // prior scale
};

struct DecomposableFit {
    TrendSpec trend;
    std::vector<SeasonalitySpec> seasonalities;
    HolidaySpec holidays;
    SeasonalityMode mode = SeasonalityMode::Additive;
    double sigma = 0.0;  // residual standard deviation on training data
    TimeScale t_scale;
    DecomposableConfig config;

    TimePoint origin = 0;
    ContainerCategory category = ContainerCategory::Standard;
    std::uint64_t seed = 0;
};

/// Design matrices on an hourly index. Trend columns are [t', 1, hinge_j...]
/// where hinge_j = max(t' - cp_j, 0); seasonal columns are cos/sin pairs per
/// enabled block; holiday columns are 0/1 date indicators.
struct DecomposableFeatures {
    std::vector<double> t_norm;
    Eigen::MatrixXd trend;
    Eigen::MatrixXd seasonal;
    Eigen::MatrixXd holiday;
    std::vector<double> changepoints_norm;
    std::vector<SeasonalityConfig> seasonal_blocks;  // enabled blocks, column order
    std::vector<std::string> holiday_names;
    std::vector<std::vector<std::int64_t>> holiday_dates;

    std::size_t total_columns() const {
        return static_cast<std::size_t>(trend.cols() + seasonal.cols() + holiday.cols());
    }
};

/// Changepoints spaced uniformly over the first changepoint_range fraction
/// of the index (fit path).
DecomposableFeatures build_features(const TimeIndex& index, const DecomposableConfig& config,
                                    const CalendarSpec& cal);
/// Prediction path: reuse the training scale and changepoints.
DecomposableFeatures build_features(const TimeIndex& index, const DecomposableConfig& config,
                                    const CalendarSpec& cal, const TimeScale& scale,
                                    const std::vector<double>& changepoints_norm);

/// Penalized least squares (MAP): L1 on the changepoint adjustments, L2 on
/// seasonal and holiday coefficients, solved by accelerated proximal
/// gradient with soft-thresholding.
DecomposableFit fit_decomposable(const StockSeries& series, const DecomposableConfig& config,
                                 const CalendarSpec& cal);

struct DecomposableForecast {
    ForecastResult result;
    std::vector<double> trend;
    std::vector<double> seasonal;
    std::vector<double> holiday;
};

DecomposableForecast predict_decomposable(const DecomposableFit& fit, const TimeIndex& index);

/// Trend evaluated at a normalized time (changepoints normalized via scale).
double evaluate_trend_at(const TrendSpec& trend, double t_norm, const TimeScale& scale);
std::vector<double> evaluate_trend(const TrendSpec& trend, const TimeIndex& index,
                                   const TimeScale& scale);
double evaluate_seasonal_at(const std::vector<SeasonalitySpec>& blocks, double hours_since_start);

/// Prophet-style continuity adjustments for the logistic trend.
std::vector<double> logistic_gamma(double k, double m, const std::vector<double>& delta,
                                   const std::vector<double>& changepoints_norm);

}  // namespace yardcast
