#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "yardcast/forecast_result.hpp"
#include "yardcast/stats.hpp"

namespace yardcast {

/// Per-layer weights in the paper's row-vector orientation: inputs multiply
/// U (input_dim x hidden), the previous hidden state multiplies W
/// (hidden x hidden), biases are row vectors.
struct LstmLayerParams {
    Eigen::MatrixXd u_f, u_i, u_o, u_c;
    Eigen::MatrixXd w_f, w_i, w_o, w_c;
    Eigen::RowVectorXd b_f, b_i, b_o, b_c;

    Eigen::Index input_dim() const { return u_f.rows(); }
    Eigen::Index hidden() const { return u_f.cols(); }

    static LstmLayerParams zeros(Eigen::Index input_dim, Eigen::Index hidden);
};

struct LstmState {
    Eigen::RowVectorXd s;  // hidden state S_t, entries in (-1, 1)
    Eigen::RowVectorXd c;  // cell state C_t

    static LstmState zeros(Eigen::Index hidden);
};

/// Intermediate quantities of one cell step, kept for backpropagation.
struct LstmCellCache {
    Eigen::RowVectorXd x, s_prev, c_prev;
    Eigen::RowVectorXd f, i, o, c_tilde, c, tanh_c;
};

/// One step of the gate equations:
///   f = sigm(x U_f + s W_f + b_f)      i = sigm(x U_i + s W_i + b_i)
///   c~ = tanh(x U_c + s W_c + b_c)     C = C_prev (*) f (+) i (*) c~
///   o = sigm(x U_o + s W_o + b_o)      S = o (*) tanh(C)
LstmState cell_forward(const Eigen::RowVectorXd& x, const LstmState& prev,
                       const LstmLayerParams& params, LstmCellCache* cache = nullptr);

struct LstmNetwork {
    std::vector<LstmLayerParams> layers;
    Eigen::VectorXd head_w;  // hidden -> 1 linear readout
    double head_b = 0.0;

    /// Seeded uniform init in +-1/sqrt(hidden), forget-gate biases at 1.
    static LstmNetwork init(const NetworkConfig& config, std::uint64_t seed);
    static LstmNetwork zeros(const NetworkConfig& config);
};

/// Runs a scaled input sequence (length == timesteps) through the stack;
/// the prediction is the linear head on the top layer's final hidden state.
double forward(const std::vector<double>& sequence, const LstmNetwork& net);

struct LstmGradients {
    std::vector<LstmLayerParams> layers;  // same shapes as the network
    Eigen::VectorXd head_w;
    double head_b = 0.0;
};

struct LstmBatch {
    /// sequences(b, t): element t of sample b; univariate inputs.
    Eigen::MatrixXd sequences;
    Eigen::VectorXd targets;
};

/// Exact gradients of L = 1/(2B) sum_b (pred_b - y_b)^2 through the
/// unrolled recursion, summed over the batch.
LstmGradients bptt_gradients(const LstmBatch& batch, const LstmNetwork& net,
                             double* loss_out = nullptr);

/// Central-difference verification (perturbation 1e-5) over every
/// parameter; returns max |analytic - numeric| / max(|a|, |n|, 1e-8).
double gradient_check(const NetworkConfig& config, std::uint64_t seed);

struct LstmFit {
    LstmNetwork net;
    ScalerState scaler;
    NetworkConfig config;
    double final_train_loss = 0.0;      // MSE over all training windows
    std::vector<double> seed_window;    // last `timesteps` raw observations

    TimePoint origin = 0;
    ContainerCategory category = ContainerCategory::Standard;
    std::uint64_t seed = 0;
};

/// Min-max scales the series, builds (timesteps -> next value) windows, and
/// runs Adam for exactly config.epochs epochs with a seeded per-epoch
/// shuffle. Fully deterministic under a fixed seed.
LstmFit train_lstm(const StockSeries& series, const NetworkConfig& config, std::uint64_t seed);

/// Recursive multi-step forecast: predict one step, slide the window,
/// repeat; un-scale and clamp at zero.
ForecastResult forecast_lstm(const LstmFit& fit, const StockSeries& series, int horizon_hours);
/// Same recursion seeded from an explicit raw-value window (artifact path).
ForecastResult forecast_lstm_from_window(const LstmFit& fit, const std::vector<double>& window_raw,
                                         int horizon_hours);

}  // namespace yardcast
