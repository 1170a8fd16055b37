#include "yardcast/arima.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <iostream>

#include "yardcast/error.hpp"
#include "yardcast/optim.hpp"
#include "yardcast/rng.hpp"

namespace yardcast {

void ArimaOrder::validate() const {
    if (p < 0 || d < 0 || q < 0) throw ConfigError("ARIMA orders must be non-negative");
    if (p > 24 || d > 24 || q > 24) throw ConfigError("ARIMA orders are capped at 24");
    if (p + q < 1 && !(p == 0 && q == 0)) throw ConfigError("ARIMA needs p + q >= 1 or (0,d,0)");
}

std::pair<std::vector<double>, double> css_residuals(const ArimaParams& params,
                                                     const std::vector<double>& w,
                                                     const ArimaOrder& order) {
    const int p = order.p;
    const int q = order.q;
    const int n = static_cast<int>(w.size());
    std::vector<double> eps(w.size(), 0.0);
    double css = 0.0;
    for (int t = 0; t < n; ++t) {
        double e = w[static_cast<std::size_t>(t)] - params.theta0;
        for (int i = 1; i <= p && i <= t; ++i)
            e -= params.beta[static_cast<std::size_t>(i - 1)] * w[static_cast<std::size_t>(t - i)];
        for (int j = 1; j <= q && j <= t; ++j)
            e -= params.theta[static_cast<std::size_t>(j - 1)] * eps[static_cast<std::size_t>(t - j)];
        eps[static_cast<std::size_t>(t)] = e;
        css += e * e;
    }
    return {std::move(eps), css};
}

namespace {

ArimaParams unpack(const Eigen::VectorXd& x, const ArimaOrder& order) {
    ArimaParams params;
    params.beta.assign(x.data(), x.data() + order.p);
    params.theta0 = x(order.p);
    params.theta.assign(x.data() + order.p + 1, x.data() + order.p + 1 + order.q);
    return params;
}

Eigen::VectorXd pack(const ArimaParams& params, const ArimaOrder& order) {
    Eigen::VectorXd x(order.p + 1 + order.q);
    for (int i = 0; i < order.p; ++i) x(i) = params.beta[static_cast<std::size_t>(i)];
    x(order.p) = params.theta0;
    for (int j = 0; j < order.q; ++j) x(order.p + 1 + j) = params.theta[static_cast<std::size_t>(j)];
    return x;
}

}  // namespace

bool ar_polynomial_is_stationary(const std::vector<double>& beta) {
    const int p = static_cast<int>(beta.size());
    if (p == 0) return true;
    // roots of u^p - beta_1 u^{p-1} - ... - beta_p via the companion matrix;
    // stationarity <=> all |u| < 1
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(p, p);
    for (int j = 0; j < p; ++j) companion(0, j) = beta[static_cast<std::size_t>(j)];
    for (int i = 1; i < p; ++i) companion(i, i - 1) = 1.0;
    const auto eigenvalues = companion.eigenvalues();
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i)
        if (std::abs(eigenvalues(i)) >= 1.0 - 1e-12) return false;
    return true;
}

ArimaFit fit_arima(const StockSeries& series, const ArimaOrder& order) {
    order.validate();
    const int min_len = std::max(10 * (order.p + order.d + order.q),
                                 order.p + order.q + order.d + 2);
    if (static_cast<int>(series.size()) < min_len)
        throw InsufficientDataError("ARIMA(" + std::to_string(order.p) + "," +
                                    std::to_string(order.d) + "," + std::to_string(order.q) +
                                    ") needs at least " + std::to_string(min_len) +
                                    " observations, got " + std::to_string(series.size()));

    auto [w, transform] = log_difference(series.values_as_double(), order.d);
    const double w_mean = mean_of(w);

    const auto objective = [&w, &order](const Eigen::VectorXd& x) {
        return css_residuals(unpack(x, order), w, order).second;
    };

    // start A: all zeros except the constant at the series mean
    ArimaParams start_a;
    start_a.beta.assign(static_cast<std::size_t>(order.p), 0.0);
    start_a.theta.assign(static_cast<std::size_t>(order.q), 0.0);
    start_a.theta0 = w_mean;

    std::vector<Eigen::VectorXd> starts{pack(start_a, order)};
    if (order.p > 0) {
        // start B: Yule-Walker AR estimate, zero MA, mean-consistent constant
        try {
            const auto cg = correlogram(w, order.p);
            ArimaParams start_b = start_a;
            start_b.beta = levinson_ar(cg.acf, order.p);
            double beta_sum = 0.0;
            for (double b : start_b.beta) beta_sum += b;
            start_b.theta0 = w_mean * (1.0 - beta_sum);
            starts.push_back(pack(start_b, order));
        } catch (const Error&) {
            // degenerate correlogram (constant w): the zero start suffices
        }
    }

    OptimResult best;
    bool have_best = false;
    const int dim = order.p + 1 + order.q;
    for (const auto& x0 : starts) {
        OptimResult r = dim > 0 ? bfgs_minimize(objective, x0)
                                : OptimResult{x0, objective(x0), 0, true};
        if (!have_best || r.value < best.value) {
            best = std::move(r);
            have_best = true;
        }
    }
    // never worse than the best initialization
    for (const auto& x0 : starts) {
        const double f0 = objective(x0);
        if (f0 < best.value) {
            best.x = x0;
            best.value = f0;
        }
    }
    if (!std::isfinite(best.value))
        throw FitError("ARIMA CSS optimization produced a non-finite loss");

    ArimaFit fit;
    fit.order = order;
    fit.params = unpack(best.x, order);
    fit.transform = std::move(transform);
    auto [resid, css] = css_residuals(fit.params, w, order);
    fit.residuals = std::move(resid);
    fit.css = css;
    fit.sigma2 = css / static_cast<double>(w.size());
    const std::size_t tail = static_cast<std::size_t>(std::max(order.p, order.q));
    if (tail > 0) {
        fit.train_tail_w.assign(w.end() - static_cast<std::ptrdiff_t>(std::min(tail, w.size())),
                                w.end());
        fit.train_tail_resid.assign(
            fit.residuals.end() - static_cast<std::ptrdiff_t>(std::min(tail, fit.residuals.size())),
            fit.residuals.end());
    }
    fit.ar_roots_stationary = ar_polynomial_is_stationary(fit.params.beta);
    if (!fit.ar_roots_stationary)
        std::cerr << "warning: fitted AR roots are non-stationary for ARIMA(" << order.p << ","
                  << order.d << "," << order.q << ")\n";
    fit.origin = series.index().last();
    fit.category = series.category();
    return fit;
}

ForecastResult forecast_arima(const ArimaFit& fit, int horizon_hours) {
    if (horizon_hours < 1) throw InvalidArgument("forecast horizon must be >= 1");
    const int p = fit.order.p;
    const int q = fit.order.q;

    // history of transformed values and residuals, forecasts appended as we go
    std::vector<double> w_hist = fit.train_tail_w;
    std::vector<double> e_hist = fit.train_tail_resid;
    const std::size_t base = w_hist.size();

    std::vector<double> w_forecast(static_cast<std::size_t>(horizon_hours));
    for (int h = 0; h < horizon_hours; ++h) {
        double value = fit.params.theta0;
        for (int i = 1; i <= p; ++i) {
            const std::ptrdiff_t pos = static_cast<std::ptrdiff_t>(base) + h - i;
            if (pos >= 0) value += fit.params.beta[static_cast<std::size_t>(i - 1)] *
                                   w_hist[static_cast<std::size_t>(pos)];
            // pre-sample values are zero, matching the CSS convention
        }
        for (int j = 1; j <= q; ++j) {
            const std::ptrdiff_t pos = static_cast<std::ptrdiff_t>(base) + h - j;
            if (pos >= 0 && pos < static_cast<std::ptrdiff_t>(base))
                value += fit.params.theta[static_cast<std::size_t>(j - 1)] *
                         e_hist[static_cast<std::size_t>(pos)];
            // future shocks enter at their expectation, zero
        }
        w_forecast[static_cast<std::size_t>(h)] = value;
        w_hist.push_back(value);
    }

    const std::vector<double> levels = invert_log_difference(w_forecast, fit.transform);
    ModelSpec spec = ModelSpec::arima(fit.order, fit.seed);
    return make_forecast_result(fit.origin, levels, spec, fit.category);
}

std::vector<double> simulate_arima(const ArimaParams& params, const ArimaOrder& order, int n,
                                   double sigma, std::uint64_t seed) {
    order.validate();
    if (n < 1) throw InvalidArgument("simulation length must be >= 1");
    if (!(sigma > 0.0)) throw InvalidArgument("simulation sigma must be > 0");
    if (static_cast<int>(params.beta.size()) != order.p ||
        static_cast<int>(params.theta.size()) != order.q)
        throw InvalidArgument("parameter lengths do not match the order");
    if (!ar_polynomial_is_stationary(params.beta))
        std::cerr << "warning: simulating with explosive AR parameters\n";

    constexpr int kBurnIn = 200;
    Rng rng(seed);
    const int total = n + kBurnIn;
    std::vector<double> y(static_cast<std::size_t>(total), 0.0);
    std::vector<double> e(static_cast<std::size_t>(total), 0.0);
    for (int t = 0; t < total; ++t) {
        const double shock = rng.normal(0.0, sigma);
        e[static_cast<std::size_t>(t)] = shock;
        double value = params.theta0 + shock;
        for (int i = 1; i <= order.p && i <= t; ++i)
            value += params.beta[static_cast<std::size_t>(i - 1)] * y[static_cast<std::size_t>(t - i)];
        for (int j = 1; j <= order.q && j <= t; ++j)
            value += params.theta[static_cast<std::size_t>(j - 1)] * e[static_cast<std::size_t>(t - j)];
        y[static_cast<std::size_t>(t)] = value;
    }
    std::vector<double> out(y.begin() + kBurnIn, y.end());
    for (int level = 0; level < order.d; ++level) {
        double acc = 0.0;
        for (double& v : out) {
            acc += v;
            v = acc;
        }
    }
    return out;
}

}  // namespace yardcast
