#pragma once

#include <optional>
#include <utility>
#include <vector>

namespace yardcast {

struct AdfResult {
    double statistic = 0.0;  // t-ratio on the lagged-level coefficient
    double p_value = 1.0;
    int lags_used = 0;
    int n_obs = 0;  // regression rows
};

/// Augmented Dickey-Fuller test with a constant term:
///   dy_t = alpha + rho * y_{t-1} + sum_{i=1..L} phi_i * dy_{t-i} + e_t
/// The statistic is the t-ratio on rho; the p-value comes from the MacKinnon
/// response-surface approximation for the constant-only case, clamped to
/// [1e-10, 1]. When max_lag is absent the Schwert rule
/// L = floor(12 * (n/100)^(1/4)) applies.
AdfResult adf_test(const std::vector<double>& series, std::optional<int> max_lag = std::nullopt);

/// MacKinnon (1994/2010) approximate p-value for the constant, no-trend case.
double mackinnon_pvalue(double statistic);

struct Correlogram {
    std::vector<double> acf;   // lag 0..n_lags, acf[0] == 1
    std::vector<double> pacf;  // lag 0..n_lags, pacf[0] == 1, via Durbin-Levinson
};

Correlogram correlogram(const std::vector<double>& series, int n_lags);

/// Durbin-Levinson solve of the Yule-Walker equations; returns the order-p
/// AR coefficients for a given autocorrelation sequence (acf[0..p]).
std::vector<double> levinson_ar(const std::vector<double>& acf, int order);

/// What log_difference did, with enough context to undo it on forecasts:
/// the last diff_order pre-difference values in the log domain.
struct TransformState {
    bool applied_log = true;
    int diff_order = 0;
    double log_offset = 1.0;  // added before log so zero counts stay finite
    std::vector<double> retained;  // oldest..newest, length == diff_order

    friend bool operator==(const TransformState&, const TransformState&) = default;
};

/// w_t = diff^d log(y_t + 1); output length is input length - d.
std::pair<std::vector<double>, TransformState> log_difference(const std::vector<double>& values,
                                                              int d);

/// Cumulative undifferencing seeded by the retained values, then
/// exp(.) - offset, clamped at zero.
std::vector<double> invert_log_difference(const std::vector<double>& w_forecast,
                                          const TransformState& state);

struct ScalerState {
    double min = 0.0;
    double max = 1.0;

    friend bool operator==(const ScalerState&, const ScalerState&) = default;
};

/// (y - min) / (max - min), fitted on the given data only. Values scaled
/// later with the same state may fall outside [0, 1]; that is accepted.
std::pair<std::vector<double>, ScalerState> minmax_scale(const std::vector<double>& series);
std::vector<double> minmax_apply(const std::vector<double>& series, const ScalerState& state);
std::vector<double> minmax_invert(const std::vector<double>& scaled, const ScalerState& state);

double mean_of(const std::vector<double>& v);
double stddev_of(const std::vector<double>& v);  // population (n denominator)

}  // namespace yardcast
