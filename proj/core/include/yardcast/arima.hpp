#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "yardcast/forecast_result.hpp"
#include "yardcast/stats.hpp"

namespace yardcast {

/// Coefficients of w_t = theta0 + sum_i beta_i w_{t-i} + e_t + sum_j theta_j e_{t-j}.
struct ArimaParams {
    std::vector<double> beta;   // AR, length p
    double theta0 = 0.0;        // constant
    std::vector<double> theta;  // MA, length q

    friend bool operator==(const ArimaParams&, const ArimaParams&) = default;
};

struct ArimaFit {
    ArimaOrder order;
    ArimaParams params;
    TransformState transform;
    std::vector<double> residuals;  // one per transformed observation
    std::vector<double> train_tail_w;      // last max(p,q) transformed observations
    std::vector<double> train_tail_resid;  // last max(p,q) residuals
    double css = 0.0;
    double sigma2 = 0.0;
    bool ar_roots_stationary = true;  // post-fit check, warning only

    // forecast metadata
    TimePoint origin = 0;
    ContainerCategory category = ContainerCategory::Standard;
    std::uint64_t seed = 0;
};

/// One-step residuals of the defining recursion with zero pre-sample values
/// (conditional sum of squares). Returns (residuals, css).
std::pair<std::vector<double>, double> css_residuals(const ArimaParams& params,
                                                     const std::vector<double>& w,
                                                     const ArimaOrder& order);

/// Log+difference transform, then CSS minimization by quasi-Newton descent
/// with numeric gradients; multi-start from zeros and from the Yule-Walker
/// AR solution padded with zero MA terms.
ArimaFit fit_arima(const StockSeries& series, const ArimaOrder& order);

/// Iterates the recursion forward with future shocks at zero, undoes the
/// log-difference transform and clamps at zero.
ForecastResult forecast_arima(const ArimaFit& fit, int horizon_hours);

/// Seeded ARMA generator (plus d-fold integration when order.d > 0) used as
/// a test oracle; a 200-sample burn-in is discarded.
std::vector<double> simulate_arima(const ArimaParams& params, const ArimaOrder& order, int n,
                                   double sigma, std::uint64_t seed);

/// True when every root of 1 - sum beta_i z^i lies outside the unit circle.
bool ar_polynomial_is_stationary(const std::vector<double>& beta);

}  // namespace yardcast
