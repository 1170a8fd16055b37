#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "yardcast/series.hpp"

namespace yardcast {

enum class ModelFamily { Naive, Arima, Decomposable, Lstm };

std::string to_string(ModelFamily f);
ModelFamily family_from_string(const std::string& s);

struct NaiveParams {
    friend bool operator==(const NaiveParams&, const NaiveParams&) = default;
};

struct ArimaOrder {
    int p = 2;
    int d = 1;
    int q = 5;  // paper-tuned default, overridable

    void validate() const;
    friend bool operator==(const ArimaOrder&, const ArimaOrder&) = default;
};

enum class SeasonalityMode { Additive, Multiplicative };

std::string to_string(SeasonalityMode m);
SeasonalityMode seasonality_mode_from_string(const std::string& s);

enum class TrendKind { PiecewiseLinear, Logistic };

/// One Fourier seasonality block: period P hours, order N.
struct SeasonalityConfig {
    std::string name;
    double period_hours = kHoursPerWeek;
    int fourier_order = 3;
    bool enabled = true;
};

struct DecomposableConfig {
    double changepoint_prior_scale = 0.05;
    double seasonality_prior_scale = 10.0;
    double holiday_prior_scale = 10.0;  // nu
    SeasonalityMode mode = SeasonalityMode::Additive;
    int n_changepoints = 25;
    double changepoint_range = 0.8;  // fraction of training time carrying changepoints
    TrendKind trend = TrendKind::PiecewiseLinear;
    double capacity = 0.0;  // logistic carrying capacity; 0 = 1.2 x training max
    std::vector<SeasonalityConfig> seasonalities;
    CalendarSpec calendar;

    /// Yearly seasonality on, weekly and daily off.
    static std::vector<SeasonalityConfig> default_seasonalities();
    /// Grid-search optimum: multiplicative, both prior scales 0.01.
    static DecomposableConfig tuned_defaults();

    void validate() const;
};

struct NetworkConfig {
    int timesteps = 150;
    int layers = 5;
    int hidden = 32;
    int epochs = 200;
    double learning_rate = 1e-3;
    int batch_size = 32;

    void validate() const;
    friend bool operator==(const NetworkConfig&, const NetworkConfig&) = default;
};

using FamilyParams = std::variant<NaiveParams, ArimaOrder, DecomposableConfig, NetworkConfig>;

struct ModelSpec {
    ModelFamily family = ModelFamily::Naive;
    FamilyParams params = NaiveParams{};
    std::uint64_t seed = 0;

    static ModelSpec naive(std::uint64_t seed = 0);
    static ModelSpec arima(ArimaOrder order = {}, std::uint64_t seed = 0);
    static ModelSpec decomposable(DecomposableConfig config, std::uint64_t seed = 0);
    static ModelSpec lstm(NetworkConfig config, std::uint64_t seed = 0);

    void validate() const;
};

}  // namespace yardcast
