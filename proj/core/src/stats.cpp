#include "yardcast/stats.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "yardcast/error.hpp"

namespace yardcast {

double mean_of(const std::vector<double>& v) {
    if (v.empty()) throw InvalidArgument("mean of empty vector");
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double stddev_of(const std::vector<double>& v) {
    const double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size()));
}

namespace {

double norm_cdf(double x) { return 0.5 * std::erfc(-x / 1.4142135623730951); }

// MacKinnon response-surface coefficients, constant / no-trend, one series.
constexpr double kTauMax = 2.74;
constexpr double kTauMin = -18.83;
constexpr double kTauStar = -1.61;
constexpr double kSmallP[3] = {2.1659, 1.4412, 0.038269};
constexpr double kLargeP[4] = {1.7339, 0.93202, -0.12745, -0.010368};
constexpr double kPvalueFloor = 1e-10;

}  // namespace

double mackinnon_pvalue(double statistic) {
    double p;
    if (statistic > kTauMax) {
        p = 1.0;
    } else if (statistic < kTauMin) {
        p = kPvalueFloor;
    } else if (statistic <= kTauStar) {
        const double z = kSmallP[0] + statistic * (kSmallP[1] + statistic * kSmallP[2]);
        p = norm_cdf(z);
    } else {
        const double z =
            kLargeP[0] + statistic * (kLargeP[1] + statistic * (kLargeP[2] + statistic * kLargeP[3]));
        p = norm_cdf(z);
    }
    return std::clamp(p, kPvalueFloor, 1.0);
}

AdfResult adf_test(const std::vector<double>& series, std::optional<int> max_lag) {
    const int n = static_cast<int>(series.size());
    const int lags =
        max_lag ? *max_lag
                : static_cast<int>(std::floor(12.0 * std::pow(n / 100.0, 0.25)));  // Schwert rule
    if (lags < 0) throw InvalidArgument("max_lag must be >= 0");
    if (n < lags + 10)
        throw InsufficientDataError("ADF needs length >= max_lag + 10, got " + std::to_string(n) +
                                    " with " + std::to_string(lags) + " lags");

    const int rows = n - 1 - lags;
    const int cols = lags + 2;  // [y_{t-1}, dy lags..., const]
    Eigen::MatrixXd x(rows, cols);
    Eigen::VectorXd dy(rows);
    for (int r = 0; r < rows; ++r) {
        const int t = r + lags + 1;
        dy(r) = series[t] - series[t - 1];
        x(r, 0) = series[t - 1];
        for (int j = 1; j <= lags; ++j) x(r, j) = series[t - j] - series[t - j - 1];
        x(r, cols - 1) = 1.0;
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    if (qr.rank() < cols)
        throw FitError("degenerate ADF regression (constant or collinear series)");
    const Eigen::VectorXd coef = qr.solve(dy);
    const Eigen::VectorXd resid = dy - x * coef;
    const double sigma2 = resid.squaredNorm() / static_cast<double>(rows - cols);
    const Eigen::MatrixXd xtx_inv = (x.transpose() * x).inverse();
    const double se = std::sqrt(sigma2 * xtx_inv(0, 0));
    if (!(se > 0.0) || !std::isfinite(se)) throw FitError("degenerate ADF regression");

    AdfResult res;
    res.statistic = coef(0) / se;
    res.p_value = mackinnon_pvalue(res.statistic);
    res.lags_used = lags;
    res.n_obs = rows;
    return res;
}

std::vector<double> levinson_ar(const std::vector<double>& acf, int order) {
    if (order < 1) throw InvalidArgument("levinson_ar order must be >= 1");
    if (static_cast<int>(acf.size()) < order + 1)
        throw InvalidArgument("levinson_ar needs acf up to the requested order");
    std::vector<double> phi(static_cast<std::size_t>(order) + 1, 0.0);
    std::vector<double> prev(phi);
    double var = 1.0;  // working with autocorrelations, acf[0] == 1
    phi[1] = acf[1];
    var *= 1.0 - phi[1] * phi[1];
    for (int k = 2; k <= order; ++k) {
        prev = phi;
        double num = acf[static_cast<std::size_t>(k)];
        for (int j = 1; j < k; ++j) num -= prev[static_cast<std::size_t>(j)] * acf[static_cast<std::size_t>(k - j)];
        const double kappa = var != 0.0 ? num / var : 0.0;
        phi[static_cast<std::size_t>(k)] = kappa;
        for (int j = 1; j < k; ++j)
            phi[static_cast<std::size_t>(j)] =
                prev[static_cast<std::size_t>(j)] - kappa * prev[static_cast<std::size_t>(k - j)];
        var *= 1.0 - kappa * kappa;
    }
    return {phi.begin() + 1, phi.end()};
}

Correlogram correlogram(const std::vector<double>& series, int n_lags) {
    const int n = static_cast<int>(series.size());
    if (n_lags < 1 || n_lags >= n)
        throw InvalidArgument("n_lags must satisfy 1 <= n_lags < series length");
    const double m = mean_of(series);
    std::vector<double> acov(static_cast<std::size_t>(n_lags) + 1, 0.0);
    for (int k = 0; k <= n_lags; ++k) {
        double s = 0.0;
        for (int t = 0; t + k < n; ++t) s += (series[static_cast<std::size_t>(t)] - m) *
                                              (series[static_cast<std::size_t>(t + k)] - m);
        acov[static_cast<std::size_t>(k)] = s / n;
    }
    if (acov[0] <= 0.0) throw ValidationError("zero-variance series has no correlogram");

    Correlogram cg;
    cg.acf.resize(static_cast<std::size_t>(n_lags) + 1);
    for (int k = 0; k <= n_lags; ++k)
        cg.acf[static_cast<std::size_t>(k)] = acov[static_cast<std::size_t>(k)] / acov[0];

    cg.pacf.assign(static_cast<std::size_t>(n_lags) + 1, 1.0);
    // phi_{k,k} from Durbin-Levinson at each order
    std::vector<double> phi(static_cast<std::size_t>(n_lags) + 1, 0.0);
    std::vector<double> prev(phi);
    double var = 1.0;
    for (int k = 1; k <= n_lags; ++k) {
        double num = cg.acf[static_cast<std::size_t>(k)];
        for (int j = 1; j < k; ++j)
            num -= phi[static_cast<std::size_t>(j)] * cg.acf[static_cast<std::size_t>(k - j)];
        const double kappa = var != 0.0 ? num / var : 0.0;
        prev = phi;
        phi[static_cast<std::size_t>(k)] = kappa;
        for (int j = 1; j < k; ++j)
            phi[static_cast<std::size_t>(j)] =
                prev[static_cast<std::size_t>(j)] - kappa * prev[static_cast<std::size_t>(k - j)];
        var *= 1.0 - kappa * kappa;
        cg.pacf[static_cast<std::size_t>(k)] = kappa;
    }
    return cg;
}

std::pair<std::vector<double>, TransformState> log_difference(const std::vector<double>& values,
                                                              int d) {
    if (d < 0) throw InvalidArgument("difference order must be >= 0");
    if (static_cast<int>(values.size()) <= d)
        throw InsufficientDataError("series too short to difference " + std::to_string(d) +
                                    " times");
    TransformState state;
    state.diff_order = d;

    std::vector<double> w(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] < 0.0) throw ValidationError("log transform requires non-negative values");
        w[i] = std::log(values[i] + state.log_offset);
    }
    if (d > 0) state.retained.assign(w.end() - d, w.end());
    for (int level = 0; level < d; ++level) {
        for (std::size_t i = w.size() - 1; i > 0; --i) w[i] -= w[i - 1];
        w.erase(w.begin());
    }
    return {std::move(w), std::move(state)};
}

std::vector<double> invert_log_difference(const std::vector<double>& w_forecast,
                                          const TransformState& state) {
    if (static_cast<int>(state.retained.size()) != state.diff_order)
        throw InvalidArgument("transform state does not match its difference order");
    // Seed value for each differencing level, from the retained log-levels.
    std::vector<double> seeds(static_cast<std::size_t>(state.diff_order));
    std::vector<double> v = state.retained;
    for (int level = 0; level < state.diff_order; ++level) {
        seeds[static_cast<std::size_t>(level)] = v.back();
        for (std::size_t i = v.size() - 1; i > 0; --i) v[i] -= v[i - 1];
        v.erase(v.begin());
    }

    std::vector<double> cur = w_forecast;
    for (int level = state.diff_order - 1; level >= 0; --level) {
        double acc = seeds[static_cast<std::size_t>(level)];
        for (double& x : cur) {
            acc += x;
            x = acc;
        }
    }
    for (double& x : cur) x = std::max(0.0, std::exp(x) - state.log_offset);
    return cur;
}

std::pair<std::vector<double>, ScalerState> minmax_scale(const std::vector<double>& series) {
    if (series.size() < 2) throw InsufficientDataError("min-max scaling needs >= 2 values");
    const auto [lo, hi] = std::minmax_element(series.begin(), series.end());
    if (*hi <= *lo) throw ValidationError("degenerate scale: series has no spread");
    ScalerState state{*lo, *hi};
    return {minmax_apply(series, state), state};
}

std::vector<double> minmax_apply(const std::vector<double>& series, const ScalerState& state) {
    if (!(state.max > state.min)) throw InvalidArgument("scaler state has max <= min");
    std::vector<double> out(series.size());
    const double span = state.max - state.min;
    for (std::size_t i = 0; i < series.size(); ++i) out[i] = (series[i] - state.min) / span;
    return out;
}

std::vector<double> minmax_invert(const std::vector<double>& scaled, const ScalerState& state) {
    if (!(state.max > state.min)) throw InvalidArgument("scaler state has max <= min");
    std::vector<double> out(scaled.size());
    const double span = state.max - state.min;
    for (std::size_t i = 0; i < scaled.size(); ++i) out[i] = scaled[i] * span + state.min;
    return out;
}

}  // namespace yardcast
