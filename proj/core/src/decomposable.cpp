#include "yardcast/decomposable.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "yardcast/error.hpp"
#include "yardcast/optim.hpp"
#include "yardcast/stats.hpp"

namespace yardcast {

namespace {
constexpr double kTrendFloor = 1e-6;  // multiplicative mode keeps g positive
constexpr double kTwoPi = 6.283185307179586476925286766559;
}  // namespace

std::vector<SeasonalityConfig> DecomposableConfig::default_seasonalities() {
    return {
        {"yearly", kHoursPerYear, 10, true},
        {"weekly", static_cast<double>(kHoursPerWeek), 3, false},
        {"daily", static_cast<double>(kHoursPerDay), 4, false},
    };
}

DecomposableConfig DecomposableConfig::tuned_defaults() {
    DecomposableConfig cfg;
    cfg.mode = SeasonalityMode::Multiplicative;
    cfg.changepoint_prior_scale = 0.01;
    cfg.seasonality_prior_scale = 0.01;
    cfg.seasonalities = default_seasonalities();
    return cfg;
}

void DecomposableConfig::validate() const {
    if (!(changepoint_prior_scale > 0.0) || !(seasonality_prior_scale > 0.0) ||
        !(holiday_prior_scale > 0.0))
        throw ConfigError("prior scales must be positive");
    if (!(changepoint_range > 0.0) || changepoint_range > 1.0)
        throw ConfigError("changepoint_range must lie in (0, 1]");
    if (n_changepoints < 0) throw ConfigError("n_changepoints must be >= 0");
    for (const auto& s : seasonalities)
        if (s.enabled && (s.fourier_order < 1 || !(s.period_hours > 0.0)))
            throw ConfigError("enabled seasonality '" + s.name +
                              "' needs fourier_order >= 1 and a positive period");
    if (trend == TrendKind::Logistic && n_changepoints > 0)
        throw ConfigError("logistic trend fitting supports n_changepoints = 0 only");
}

std::string to_string(SeasonalityMode m) {
    return m == SeasonalityMode::Additive ? "additive" : "multiplicative";
}

SeasonalityMode seasonality_mode_from_string(const std::string& s) {
    if (s == "additive") return SeasonalityMode::Additive;
    if (s == "multiplicative") return SeasonalityMode::Multiplicative;
    throw ParseError("unknown seasonality mode '" + s + "'");
}

DecomposableFeatures build_features(const TimeIndex& index, const DecomposableConfig& config,
                                    const CalendarSpec& cal) {
    const TimeScale scale{index.start(),
                          std::max<std::int64_t>(index.last() - index.start(), kSecsPerHour)};
    std::vector<double> cps(static_cast<std::size_t>(config.n_changepoints));
    for (int j = 1; j <= config.n_changepoints; ++j)
        cps[static_cast<std::size_t>(j - 1)] =
            config.changepoint_range * static_cast<double>(j) / config.n_changepoints;
    return build_features(index, config, cal, scale, cps);
}

DecomposableFeatures build_features(const TimeIndex& index, const DecomposableConfig& config,
                                    const CalendarSpec& cal, const TimeScale& scale,
                                    const std::vector<double>& changepoints_norm) {
    const Eigen::Index n = static_cast<Eigen::Index>(index.size());
    DecomposableFeatures f;
    f.changepoints_norm = changepoints_norm;
    f.t_norm.resize(index.size());
    for (std::size_t i = 0; i < index.size(); ++i) f.t_norm[i] = scale.normalize(index.at(i));

    const Eigen::Index n_cp = static_cast<Eigen::Index>(changepoints_norm.size());
    f.trend.resize(n, 2 + n_cp);
    for (Eigen::Index r = 0; r < n; ++r) {
        const double t = f.t_norm[static_cast<std::size_t>(r)];
        f.trend(r, 0) = t;
        f.trend(r, 1) = 1.0;
        for (Eigen::Index j = 0; j < n_cp; ++j)
            f.trend(r, 2 + j) = std::max(t - changepoints_norm[static_cast<std::size_t>(j)], 0.0);
    }

    for (const auto& s : config.seasonalities)
        if (s.enabled) f.seasonal_blocks.push_back(s);
    Eigen::Index scols = 0;
    for (const auto& s : f.seasonal_blocks) scols += 2 * s.fourier_order;
    f.seasonal.resize(n, scols);
    Eigen::Index col = 0;
    for (const auto& s : f.seasonal_blocks) {
        for (int order = 1; order <= s.fourier_order; ++order) {
            for (Eigen::Index r = 0; r < n; ++r) {
                const double hours = scale.hours_since_start(index.at(static_cast<std::size_t>(r)));
                const double arg = kTwoPi * order * hours / s.period_hours;
                f.seasonal(r, col) = std::cos(arg);
                f.seasonal(r, col + 1) = std::sin(arg);
            }
            col += 2;
        }
    }

    for (const auto& g : cal.holiday_groups) {
        f.holiday_names.push_back(g.name);
        f.holiday_dates.push_back(g.dates);
    }
    f.holiday.resize(n, static_cast<Eigen::Index>(f.holiday_names.size()));
    for (std::size_t h = 0; h < f.holiday_dates.size(); ++h) {
        for (Eigen::Index r = 0; r < n; ++r) {
            const TimePoint tp = index.at(static_cast<std::size_t>(r));
            std::int64_t day = tp / kSecsPerDay;
            if (tp % kSecsPerDay < 0) --day;
            const auto& dates = f.holiday_dates[h];
            const bool hit = std::find(dates.begin(), dates.end(), day) != dates.end();
            f.holiday(r, static_cast<Eigen::Index>(h)) = hit ? 1.0 : 0.0;
        }
    }
    return f;
}

std::vector<double> logistic_gamma(double k, double m, const std::vector<double>& delta,
                                   const std::vector<double>& changepoints_norm) {
    std::vector<double> gamma(delta.size(), 0.0);
    double k_cum = k;
    double gamma_sum = 0.0;
    for (std::size_t j = 0; j < delta.size(); ++j) {
        const double k_next = k_cum + delta[j];
        if (k_next == 0.0) throw FitError("logistic trend rate hits zero at a changepoint");
        gamma[j] = (changepoints_norm[j] - m - gamma_sum) * (1.0 - k_cum / k_next);
        gamma_sum += gamma[j];
        k_cum = k_next;
    }
    return gamma;
}

double evaluate_trend_at(const TrendSpec& trend, double t_norm, const TimeScale& scale) {
    double rate = trend.k;
    double offset = trend.m;
    for (std::size_t j = 0; j < trend.changepoints.size(); ++j) {
        if (t_norm >= scale.normalize(trend.changepoints[j])) {
            rate += trend.delta[j];
            offset += trend.gamma[j];
        }
    }
    if (trend.kind == TrendKind::PiecewiseLinear) return rate * t_norm + offset;
    return trend.capacity / (1.0 + std::exp(-rate * (t_norm - offset)));
}

std::vector<double> evaluate_trend(const TrendSpec& trend, const TimeIndex& index,
                                   const TimeScale& scale) {
    std::vector<double> g(index.size());
    for (std::size_t i = 0; i < index.size(); ++i)
        g[i] = evaluate_trend_at(trend, scale.normalize(index.at(i)), scale);
    return g;
}

double evaluate_seasonal_at(const std::vector<SeasonalitySpec>& blocks, double hours_since_start) {
    double s = 0.0;
    for (const auto& b : blocks) {
        if (!b.enabled) continue;
        for (int order = 1; order <= b.fourier_order; ++order) {
            const double arg = kTwoPi * order * hours_since_start / b.period_hours;
            s += b.cos_coef[static_cast<std::size_t>(order - 1)] * std::cos(arg) +
                 b.sin_coef[static_cast<std::size_t>(order - 1)] * std::sin(arg);
        }
    }
    return s;
}

namespace {

struct ParamLayout {
    Eigen::Index n_trend = 0;  // 2 + changepoints (piecewise) or 2 (logistic)
    Eigen::Index n_seasonal = 0;
    Eigen::Index n_holiday = 0;
    Eigen::Index total() const { return n_trend + n_seasonal + n_holiday; }
};

// Smooth part of the MAP objective and its gradient.
class MapObjective {
public:
    MapObjective(const DecomposableFeatures& f, const Eigen::VectorXd& y,
                 const DecomposableConfig& cfg, const ParamLayout& layout, double sigma0,
                 double capacity)
        : f_(f), y_(y), cfg_(cfg), layout_(layout), inv_s0_(1.0 / (sigma0 * sigma0)),
          inv_ss_(1.0 / (cfg.seasonality_prior_scale * cfg.seasonality_prior_scale)),
          inv_sh_(1.0 / (cfg.holiday_prior_scale * cfg.holiday_prior_scale)),
          capacity_(capacity) {}

    double operator()(const Eigen::VectorXd& x, Eigen::VectorXd* grad) const {
        const Eigen::Index n = y_.size();
        const auto trend_params = x.head(layout_.n_trend);
        const auto seasonal_params = x.segment(layout_.n_trend, layout_.n_seasonal);
        const auto holiday_params = x.tail(layout_.n_holiday);

        Eigen::VectorXd g(n);
        Eigen::VectorXd dg_dk(n), dg_dm(n);  // logistic partials
        if (cfg_.trend == TrendKind::PiecewiseLinear) {
            g = f_.trend * trend_params;
        } else {
            const double k = trend_params(0), m = trend_params(1);
            for (Eigen::Index r = 0; r < n; ++r) {
                const double t = f_.t_norm[static_cast<std::size_t>(r)];
                const double lg = capacity_ / (1.0 + std::exp(-k * (t - m)));
                g(r) = lg;
                const double shape = lg * (1.0 - lg / capacity_);
                dg_dk(r) = shape * (t - m);
                dg_dm(r) = -k * shape;
            }
        }
        Eigen::VectorXd sh = Eigen::VectorXd::Zero(n);
        if (layout_.n_seasonal > 0) sh += f_.seasonal * seasonal_params;
        if (layout_.n_holiday > 0) sh += f_.holiday * holiday_params;

        Eigen::VectorXd mu(n);
        Eigen::VectorXd g_eff = g;
        Eigen::VectorXd active = Eigen::VectorXd::Ones(n);  // trend-gradient mask
        if (cfg_.mode == SeasonalityMode::Additive) {
            mu = g + sh;
        } else {
            for (Eigen::Index r = 0; r < n; ++r) {
                if (g_eff(r) < kTrendFloor) {
                    g_eff(r) = kTrendFloor;
                    active(r) = 0.0;
                }
            }
            mu = g_eff.cwiseProduct(Eigen::VectorXd::Ones(n) + sh);
        }
        const Eigen::VectorXd r = y_ - mu;

        double value = 0.5 * inv_s0_ * r.squaredNorm();
        value += 0.5 * inv_ss_ * seasonal_params.squaredNorm();
        value += 0.5 * inv_sh_ * holiday_params.squaredNorm();

        if (grad) {
            grad->resize(layout_.total());
            Eigen::VectorXd r_trend, r_linear;
            if (cfg_.mode == SeasonalityMode::Additive) {
                r_trend = r;
                r_linear = r;
            } else {
                r_trend = r.cwiseProduct(Eigen::VectorXd::Ones(n) + sh).cwiseProduct(active);
                r_linear = r.cwiseProduct(g_eff);
            }
            if (cfg_.trend == TrendKind::PiecewiseLinear) {
                grad->head(layout_.n_trend) = -inv_s0_ * (f_.trend.transpose() * r_trend);
            } else {
                (*grad)(0) = -inv_s0_ * dg_dk.dot(r_trend);
                (*grad)(1) = -inv_s0_ * dg_dm.dot(r_trend);
            }
            if (layout_.n_seasonal > 0)
                grad->segment(layout_.n_trend, layout_.n_seasonal) =
                    -inv_s0_ * (f_.seasonal.transpose() * r_linear) + inv_ss_ * seasonal_params;
            if (layout_.n_holiday > 0)
                grad->tail(layout_.n_holiday) =
                    -inv_s0_ * (f_.holiday.transpose() * r_linear) + inv_sh_ * holiday_params;
        }
        return value;
    }

    Eigen::VectorXd model_values(const Eigen::VectorXd& x) const {
        Eigen::VectorXd dummy;
        // recompute mu by evaluating the residual pathway
        const auto trend_params = x.head(layout_.n_trend);
        const auto seasonal_params = x.segment(layout_.n_trend, layout_.n_seasonal);
        const auto holiday_params = x.tail(layout_.n_holiday);
        const Eigen::Index n = y_.size();
        Eigen::VectorXd g(n);
        if (cfg_.trend == TrendKind::PiecewiseLinear) {
            g = f_.trend * trend_params;
        } else {
            const double k = trend_params(0), m = trend_params(1);
            for (Eigen::Index r = 0; r < n; ++r) {
                const double t = f_.t_norm[static_cast<std::size_t>(r)];
                g(r) = capacity_ / (1.0 + std::exp(-k * (t - m)));
            }
        }
        Eigen::VectorXd sh = Eigen::VectorXd::Zero(n);
        if (layout_.n_seasonal > 0) sh += f_.seasonal * seasonal_params;
        if (layout_.n_holiday > 0) sh += f_.holiday * holiday_params;
        if (cfg_.mode == SeasonalityMode::Additive) return g + sh;
        Eigen::VectorXd g_eff = g.cwiseMax(kTrendFloor);
        return g_eff.cwiseProduct(Eigen::VectorXd::Ones(n) + sh);
    }

    bool trend_floored(const Eigen::VectorXd& x) const {
        const auto trend_params = x.head(layout_.n_trend);
        if (cfg_.trend != TrendKind::PiecewiseLinear) return false;
        const Eigen::VectorXd g = f_.trend * trend_params;
        return (g.array() < kTrendFloor).any();
    }

private:
    const DecomposableFeatures& f_;
    const Eigen::VectorXd& y_;
    const DecomposableConfig& cfg_;
    ParamLayout layout_;
    double inv_s0_;
    double inv_ss_;
    double inv_sh_;
    double capacity_;
};

double estimate_lipschitz(const DecomposableFeatures& f, const ParamLayout& layout, double sigma0) {
    // power iteration on X'X for the stacked linear columns
    const Eigen::Index cols = layout.total();
    Eigen::MatrixXd x(f.trend.rows(), cols);
    Eigen::Index c = 0;
    x.middleCols(c, f.trend.cols()) = f.trend;
    c += f.trend.cols();
    if (f.seasonal.cols() > 0) x.middleCols(c, f.seasonal.cols()) = f.seasonal;
    c += f.seasonal.cols();
    if (f.holiday.cols() > 0) x.middleCols(c, f.holiday.cols()) = f.holiday;

    Eigen::VectorXd v = Eigen::VectorXd::Ones(cols).normalized();
    double lambda = 1.0;
    for (int it = 0; it < 30; ++it) {
        Eigen::VectorXd w = x.transpose() * (x * v);
        lambda = w.norm();
        if (lambda <= 0.0) break;
        v = w / lambda;
    }
    return std::max(lambda / (sigma0 * sigma0), 1e-8);
}

}  // namespace

DecomposableFit fit_decomposable(const StockSeries& series, const DecomposableConfig& config,
                                 const CalendarSpec& cal) {
    config.validate();
    const DecomposableFeatures f = build_features(series.index(), config, cal);
    const std::size_t n_cols = f.total_columns();
    if (series.size() < 2 * n_cols)
        throw InsufficientDataError("decomposable fit needs >= " + std::to_string(2 * n_cols) +
                                    " observations for " + std::to_string(n_cols) +
                                    " basis columns, got " + std::to_string(series.size()));

    const std::vector<double> yv = series.values_as_double();
    const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(yv.data(),
                                                                static_cast<Eigen::Index>(yv.size()));
    double sigma0 = stddev_of(yv);
    if (!(sigma0 > 1e-12)) sigma0 = 1.0;  // degenerate spread, keep the objective finite

    const double y_max = *std::max_element(yv.begin(), yv.end());
    const double capacity = config.capacity > 0.0 ? config.capacity : 1.2 * std::max(y_max, 1.0);

    ParamLayout layout;
    layout.n_trend = config.trend == TrendKind::PiecewiseLinear ? f.trend.cols() : 2;
    layout.n_seasonal = f.seasonal.cols();
    layout.n_holiday = f.holiday.cols();

    // initialize trend from a least-squares line through (t', y)
    Eigen::VectorXd x0 = Eigen::VectorXd::Zero(layout.total());
    {
        const Eigen::Index n = y.size();
        Eigen::MatrixXd line(n, 2);
        for (Eigen::Index r = 0; r < n; ++r) {
            line(r, 0) = f.t_norm[static_cast<std::size_t>(r)];
            line(r, 1) = 1.0;
        }
        const Eigen::Vector2d km = line.colPivHouseholderQr().solve(y);
        if (config.trend == TrendKind::PiecewiseLinear) {
            x0(0) = km(0);
            x0(1) = km(1);
        } else {
            // linearize through the logit of y/C for a starting rate and offset
            Eigen::VectorXd z(n);
            for (Eigen::Index r = 0; r < n; ++r) {
                const double frac = std::clamp(y(r) / capacity, 1e-6, 1.0 - 1e-6);
                z(r) = std::log(frac / (1.0 - frac));
            }
            const Eigen::Vector2d ab = line.colPivHouseholderQr().solve(z);
            const double k0 = std::abs(ab(0)) > 1e-12 ? ab(0) : 1.0;
            x0(0) = k0;
            x0(1) = -ab(1) / k0;
        }
    }

    const MapObjective objective(f, y, config, layout, sigma0, capacity);
    const double l1_weight = 1.0 / config.changepoint_prior_scale;
    const Eigen::Index delta_begin = 2;
    const Eigen::Index delta_count =
        config.trend == TrendKind::PiecewiseLinear ? layout.n_trend - 2 : 0;

    const auto penalty = [&](const Eigen::VectorXd& x) {
        return delta_count > 0 ? l1_weight * x.segment(delta_begin, delta_count).lpNorm<1>() : 0.0;
    };
    const auto prox = [&](Eigen::VectorXd& x, double step) {
        const double threshold = step * l1_weight;
        for (Eigen::Index j = delta_begin; j < delta_begin + delta_count; ++j) {
            const double v = x(j);
            x(j) = v > threshold ? v - threshold : (v < -threshold ? v + threshold : 0.0);
        }
    };

    ProximalOptions opts;
    opts.lipschitz_init = estimate_lipschitz(f, layout, sigma0);
    const OptimResult best = proximal_gradient_minimize(
        [&](const Eigen::VectorXd& x, Eigen::VectorXd* grad) { return objective(x, grad); },
        penalty, prox, x0, opts);

    if (config.mode == SeasonalityMode::Multiplicative && objective.trend_floored(best.x))
        std::cerr << "warning: multiplicative trend crossed zero and was floored at " << kTrendFloor
                  << "\n";

    DecomposableFit fit;
    fit.config = config;
    fit.mode = config.mode;
    fit.t_scale = TimeScale{series.index().start(),
                            std::max<std::int64_t>(series.index().last() - series.index().start(),
                                                   kSecsPerHour)};
    fit.trend.kind = config.trend;
    fit.trend.k = best.x(0);
    fit.trend.m = best.x(1);
    fit.trend.capacity = config.trend == TrendKind::Logistic ? capacity : 0.0;
    fit.trend.changepoints.resize(f.changepoints_norm.size());
    for (std::size_t j = 0; j < f.changepoints_norm.size(); ++j)
        fit.trend.changepoints[j] =
            fit.t_scale.t0 +
            static_cast<TimePoint>(std::llround(f.changepoints_norm[j] *
                                                static_cast<double>(fit.t_scale.span_secs)));
    if (config.trend == TrendKind::PiecewiseLinear) {
        fit.trend.delta.resize(static_cast<std::size_t>(delta_count));
        fit.trend.gamma.resize(static_cast<std::size_t>(delta_count));
        for (Eigen::Index j = 0; j < delta_count; ++j) {
            const double dj = best.x(delta_begin + j);
            fit.trend.delta[static_cast<std::size_t>(j)] = dj;
            fit.trend.gamma[static_cast<std::size_t>(j)] =
                -f.changepoints_norm[static_cast<std::size_t>(j)] * dj;
        }
    }

    Eigen::Index col = layout.n_trend;
    for (const auto& block : f.seasonal_blocks) {
        SeasonalitySpec s;
        s.name = block.name;
        s.period_hours = block.period_hours;
        s.fourier_order = block.fourier_order;
        s.enabled = true;
        for (int order = 0; order < block.fourier_order; ++order) {
            s.cos_coef.push_back(best.x(col));
            s.sin_coef.push_back(best.x(col + 1));
            col += 2;
        }
        fit.seasonalities.push_back(std::move(s));
    }

    fit.holidays.names = f.holiday_names;
    fit.holidays.dates = f.holiday_dates;
    fit.holidays.nu = config.holiday_prior_scale;
    for (Eigen::Index h = 0; h < layout.n_holiday; ++h) fit.holidays.kappa.push_back(best.x(col + h));

    const Eigen::VectorXd mu = objective.model_values(best.x);
    const Eigen::VectorXd resid = y - mu;
    fit.sigma = std::sqrt(resid.squaredNorm() / static_cast<double>(resid.size()));
    fit.origin = series.index().last();
    fit.category = series.category();
    return fit;
}

DecomposableForecast predict_decomposable(const DecomposableFit& fit, const TimeIndex& index) {
    DecomposableForecast out;
    out.trend = evaluate_trend(fit.trend, index, fit.t_scale);
    out.seasonal.resize(index.size());
    out.holiday.resize(index.size());

    for (std::size_t i = 0; i < index.size(); ++i) {
        const TimePoint tp = index.at(i);
        out.seasonal[i] = evaluate_seasonal_at(fit.seasonalities, fit.t_scale.hours_since_start(tp));
        double h = 0.0;
        std::int64_t day = tp / kSecsPerDay;
        if (tp % kSecsPerDay < 0) --day;
        for (std::size_t g = 0; g < fit.holidays.dates.size(); ++g) {
            const auto& dates = fit.holidays.dates[g];
            if (std::find(dates.begin(), dates.end(), day) != dates.end())
                h += fit.holidays.kappa[g];
        }
        out.holiday[i] = h;
    }

    std::vector<double> mu(index.size());
    for (std::size_t i = 0; i < index.size(); ++i) {
        if (fit.mode == SeasonalityMode::Additive) {
            mu[i] = out.trend[i] + out.seasonal[i] + out.holiday[i];
        } else {
            const double g_eff = std::max(out.trend[i], kTrendFloor);
            mu[i] = g_eff * (1.0 + out.seasonal[i] + out.holiday[i]);
        }
    }

    ModelSpec spec = ModelSpec::decomposable(fit.config, fit.seed);
    // origin one hour before the first requested point keeps points contiguous
    out.result = make_forecast_result(index.start() - kSecsPerHour, mu, spec, fit.category);
    return out;
}

}  // namespace yardcast
