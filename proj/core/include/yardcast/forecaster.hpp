#pragma once

#include <variant>

#include "yardcast/arima.hpp"
#include "yardcast/decomposable.hpp"
#include "yardcast/forecast_result.hpp"
#include "yardcast/lstm.hpp"

namespace yardcast {

struct NaiveFit {
    double last_value = 0.0;
    TimePoint origin = 0;
    ContainerCategory category = ContainerCategory::Standard;
    std::uint64_t seed = 0;
};

/// Fitted model of any family plus the metadata needed to forecast without
/// the training series. Immutable once produced; predict() may be called
/// concurrently on a shared fit.
struct Fit {
    ModelSpec spec;
    std::variant<NaiveFit, ArimaFit, DecomposableFit, LstmFit> model;

    ModelFamily family() const { return spec.family; }
    TimePoint origin() const;
    ContainerCategory category() const;
};

/// Every forecast point equals the last observed value.
ForecastResult naive_forecast(const StockSeries& series, int horizon_hours);

/// Family dispatch. Enforces the per-family series minimums:
/// ARIMA >= 10(p+d+q), LSTM >= 2 x timesteps, decomposable >= one enabled
/// seasonal period (and >= 2 x basis columns).
Fit fit(const ModelSpec& spec, const StockSeries& series);
ForecastResult predict(const Fit& fit, int horizon_hours);

}  // namespace yardcast
