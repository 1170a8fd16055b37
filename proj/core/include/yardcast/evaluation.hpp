#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "yardcast/forecaster.hpp"

namespace yardcast {

struct MetricRow {
    double mae = 0.0;
    double mse = 0.0;
    double rmse = 0.0;
    int n = 0;
};

/// MAE = mean |y - yhat|, MSE = mean (y - yhat)^2, RMSE = sqrt(MSE).
MetricRow compute_metrics(const std::vector<double>& actual, const std::vector<double>& predicted);

struct FoldSpec {
    int fold_id = 0;  // 0 = most recent interval
    TimePoint train_end = 0;
    TimePoint test_start = 0;
    TimePoint test_end = 0;  // inclusive; test spans exactly 168 hourly points
};

/// Sliding monthly windows: fold k ends at the last index timestamp shifted
/// back k calendar months (day-of-month clamped); its test set is the final
/// 7 days (168 hours) of that interval and training data is everything
/// strictly before the test window.
std::vector<FoldSpec> make_folds(const TimeIndex& index, int n_folds = 5);

struct FoldOutcome {
    FoldSpec fold;
    MetricRow metrics;
    bool failed = false;
    std::string error;
};

struct CvReport {
    std::vector<FoldOutcome> per_fold;
    double mean_mae = 0.0, std_mae = 0.0;
    double mean_mse = 0.0, std_mse = 0.0;
    double mean_rmse = 0.0, std_rmse = 0.0;
    int folds_succeeded = 0;
};

/// Per fold: fit on the training slice, forecast 168 hours, score against
/// the test window. Aggregates use the sample (n-1) standard deviation;
/// a single fold reports std 0. Failed folds are skipped with a warning
/// unless every fold fails.
CvReport run_cv(const StockSeries& series, const ModelSpec& spec,
                const std::vector<FoldSpec>& folds);

/// Secondary metric view restricted to business-day hours of each test window.
CvReport run_cv_business_days(const StockSeries& series, const ModelSpec& spec,
                              const std::vector<FoldSpec>& folds, const CalendarSpec& cal);

/// One grid-search candidate: a model spec plus its displayed parameters.
struct GridPoint {
    ModelSpec spec;
    std::vector<std::pair<std::string, std::string>> params;  // column -> value, display order
};

struct LeaderboardRow {
    GridPoint point;
    CvReport report;
    int rank = 0;
};

struct GridSearchResult {
    std::vector<LeaderboardRow> leaderboard;  // ranked, best first
    const GridPoint& best() const { return leaderboard.front().point; }
};

using CvEvaluator = std::function<CvReport(const ModelSpec&)>;

/// Evaluates every candidate, ranking by mean RMSE, ties by mean MAE, then
/// by enumeration order.
GridSearchResult grid_search(const std::vector<GridPoint>& grid, const CvEvaluator& evaluate);
GridSearchResult grid_search(const StockSeries& series, const std::vector<GridPoint>& grid,
                             const std::vector<FoldSpec>& folds);

/// The published tuning grids: 4 x 4 x 2 = 32 decomposable candidates and
/// 5 x 5 x 6 = 150 LSTM candidates.
std::vector<GridPoint> prophet_paper_grid(const DecomposableConfig& base, std::uint64_t seed);
std::vector<GridPoint> lstm_paper_grid(const NetworkConfig& base, std::uint64_t seed);

}  // namespace yardcast
