#include "yardcast/forecaster.hpp"

#include <algorithm>
#include <cmath>

#include "yardcast/error.hpp"

namespace yardcast {

std::string to_string(ModelFamily f) {
    switch (f) {
        case ModelFamily::Naive: return "naive";
        case ModelFamily::Arima: return "arima";
        case ModelFamily::Decomposable: return "prophet";
        case ModelFamily::Lstm: return "lstm";
    }
    throw InvalidArgument("bad model family value");
}

ModelFamily family_from_string(const std::string& s) {
    if (s == "naive") return ModelFamily::Naive;
    if (s == "arima") return ModelFamily::Arima;
    if (s == "prophet" || s == "decomposable") return ModelFamily::Decomposable;
    if (s == "lstm") return ModelFamily::Lstm;
    throw ConfigError("unknown model family '" + s + "'");
}

ModelSpec ModelSpec::naive(std::uint64_t seed) {
    return ModelSpec{ModelFamily::Naive, NaiveParams{}, seed};
}
ModelSpec ModelSpec::arima(ArimaOrder order, std::uint64_t seed) {
    return ModelSpec{ModelFamily::Arima, order, seed};
}
ModelSpec ModelSpec::decomposable(DecomposableConfig config, std::uint64_t seed) {
    return ModelSpec{ModelFamily::Decomposable, std::move(config), seed};
}
ModelSpec ModelSpec::lstm(NetworkConfig config, std::uint64_t seed) {
    return ModelSpec{ModelFamily::Lstm, config, seed};
}

void ModelSpec::validate() const {
    switch (family) {
        case ModelFamily::Naive:
            if (!std::holds_alternative<NaiveParams>(params))
                throw ConfigError("naive spec carries foreign parameters");
            return;
        case ModelFamily::Arima:
            if (!std::holds_alternative<ArimaOrder>(params))
                throw ConfigError("arima spec carries foreign parameters");
            std::get<ArimaOrder>(params).validate();
            return;
        case ModelFamily::Decomposable:
            if (!std::holds_alternative<DecomposableConfig>(params))
                throw ConfigError("prophet spec carries foreign parameters");
            std::get<DecomposableConfig>(params).validate();
            return;
        case ModelFamily::Lstm:
            if (!std::holds_alternative<NetworkConfig>(params))
                throw ConfigError("lstm spec carries foreign parameters");
            std::get<NetworkConfig>(params).validate();
            return;
    }
    throw ConfigError("unknown model family");
}

ForecastResult make_forecast_result(TimePoint origin, const std::vector<double>& predictions,
                                    const ModelSpec& spec, ContainerCategory category) {
    ForecastResult res;
    res.origin = origin;
    res.horizon_hours = static_cast<int>(predictions.size());
    res.model = spec;
    res.category = category;
    res.points.reserve(predictions.size());
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const double v = predictions[i];
        if (!std::isfinite(v)) throw FitError("non-finite forecast value at step " + std::to_string(i + 1));
        res.points.push_back(
            {origin + static_cast<TimePoint>(i + 1) * kSecsPerHour, std::max(0.0, v)});
    }
    return res;
}

ForecastResult naive_forecast(const StockSeries& series, int horizon_hours) {
    if (series.size() == 0) throw InvalidArgument("naive forecast needs a non-empty series");
    if (horizon_hours < 1) throw InvalidArgument("forecast horizon must be >= 1");
    const double last = static_cast<double>(series.values().back());
    const std::vector<double> flat(static_cast<std::size_t>(horizon_hours), last);
    return make_forecast_result(series.index().last(), flat, ModelSpec::naive(), series.category());
}

TimePoint Fit::origin() const {
    return std::visit([](const auto& m) { return m.origin; }, model);
}

ContainerCategory Fit::category() const {
    return std::visit([](const auto& m) { return m.category; }, model);
}

Fit fit(const ModelSpec& spec, const StockSeries& series) {
    spec.validate();
    if (series.size() == 0) throw InvalidArgument("cannot fit an empty series");

    Fit out;
    out.spec = spec;
    switch (spec.family) {
        case ModelFamily::Naive: {
            NaiveFit nf;
            nf.last_value = static_cast<double>(series.values().back());
            nf.origin = series.index().last();
            nf.category = series.category();
            nf.seed = spec.seed;
            out.model = nf;
            return out;
        }
        case ModelFamily::Arima: {
            ArimaFit af = fit_arima(series, std::get<ArimaOrder>(spec.params));
            af.seed = spec.seed;
            out.model = std::move(af);
            return out;
        }
        case ModelFamily::Decomposable: {
            const auto& cfg = std::get<DecomposableConfig>(spec.params);
            double longest_period = 0.0;
            for (const auto& s : cfg.seasonalities)
                if (s.enabled) longest_period = std::max(longest_period, s.period_hours);
            if (static_cast<double>(series.size()) < longest_period)
                throw InsufficientDataError(
                    "decomposable fit needs one full seasonal period (" +
                    std::to_string(static_cast<long>(longest_period)) + " hours), got " +
                    std::to_string(series.size()));
            DecomposableFit df = fit_decomposable(series, cfg, cfg.calendar);
            df.seed = spec.seed;
            out.model = std::move(df);
            return out;
        }
        case ModelFamily::Lstm: {
            LstmFit lf = train_lstm(series, std::get<NetworkConfig>(spec.params), spec.seed);
            out.model = std::move(lf);
            return out;
        }
    }
    throw ConfigError("unknown model family");
}

ForecastResult predict(const Fit& fit, int horizon_hours) {
    if (horizon_hours < 1) throw InvalidArgument("forecast horizon must be >= 1");
    switch (fit.family()) {
        case ModelFamily::Naive: {
            const auto& nf = std::get<NaiveFit>(fit.model);
            const std::vector<double> flat(static_cast<std::size_t>(horizon_hours), nf.last_value);
            return make_forecast_result(nf.origin, flat, fit.spec, nf.category);
        }
        case ModelFamily::Arima:
            return forecast_arima(std::get<ArimaFit>(fit.model), horizon_hours);
        case ModelFamily::Decomposable: {
            const auto& df = std::get<DecomposableFit>(fit.model);
            const TimeIndex horizon(df.origin + kSecsPerHour,
                                    static_cast<std::size_t>(horizon_hours));
            DecomposableForecast fc = predict_decomposable(df, horizon);
            fc.result.model = fit.spec;
            return fc.result;
        }
        case ModelFamily::Lstm: {
            const auto& lf = std::get<LstmFit>(fit.model);
            return forecast_lstm_from_window(lf, lf.seed_window, horizon_hours);
        }
    }
    throw ConfigError("unknown model family");
}

}  // namespace yardcast
