#pragma once

#include <vector>

#include "yardcast/model_config.hpp"

namespace yardcast {

struct ForecastPoint {
    TimePoint ts = 0;
    double mean = 0.0;  // predicted count, always >= 0
};

/// Horizon-indexed predictions: hourly points starting one hour after the
/// forecast origin (the last training hour).
struct ForecastResult {
    TimePoint origin = 0;
    int horizon_hours = 0;
    std::vector<ForecastPoint> points;
    ModelSpec model;
    ContainerCategory category = ContainerCategory::Standard;
};

/// Assembles a result from raw per-hour predictions, clamping at zero.
ForecastResult make_forecast_result(TimePoint origin, const std::vector<double>& predictions,
                                    const ModelSpec& spec, ContainerCategory category);

}  // namespace yardcast
