#include "yardcast/lstm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "yardcast/error.hpp"
#include "yardcast/rng.hpp"

namespace yardcast {

void NetworkConfig::validate() const {
    if (timesteps < 1 || layers < 1 || hidden < 1 || epochs < 0 || batch_size < 1)
        throw ConfigError("network dimensions must be positive (epochs may be 0)");
    if (!(learning_rate > 0.0)) throw ConfigError("learning rate must be positive");
}

LstmLayerParams LstmLayerParams::zeros(Eigen::Index input_dim, Eigen::Index hidden) {
    LstmLayerParams p;
    p.u_f = Eigen::MatrixXd::Zero(input_dim, hidden);
    p.u_i = p.u_f;
    p.u_o = p.u_f;
    p.u_c = p.u_f;
    p.w_f = Eigen::MatrixXd::Zero(hidden, hidden);
    p.w_i = p.w_f;
    p.w_o = p.w_f;
    p.w_c = p.w_f;
    p.b_f = Eigen::RowVectorXd::Zero(hidden);
    p.b_i = p.b_f;
    p.b_o = p.b_f;
    p.b_c = p.b_f;
    return p;
}

LstmState LstmState::zeros(Eigen::Index hidden) {
    return LstmState{Eigen::RowVectorXd::Zero(hidden), Eigen::RowVectorXd::Zero(hidden)};
}

namespace {

inline Eigen::MatrixXd sigmoid(const Eigen::MatrixXd& z) {
    return 1.0 / (1.0 + (-z.array()).exp());
}

// Batched cell step; rows are batch samples.
struct BatchCache {
    Eigen::MatrixXd x, s_prev, c_prev;
    Eigen::MatrixXd f, i, o, c_tilde, c, tanh_c;
};

void cell_forward_batch(const Eigen::MatrixXd& x, const Eigen::MatrixXd& s_prev,
                        const Eigen::MatrixXd& c_prev, const LstmLayerParams& p,
                        Eigen::MatrixXd& s_out, Eigen::MatrixXd& c_out, BatchCache* cache) {
    const auto bias = [&](const Eigen::RowVectorXd& b, Eigen::MatrixXd z) {
        z.rowwise() += b;
        return z;
    };
    const Eigen::MatrixXd f = sigmoid(bias(p.b_f, x * p.u_f + s_prev * p.w_f));
    const Eigen::MatrixXd i = sigmoid(bias(p.b_i, x * p.u_i + s_prev * p.w_i));
    const Eigen::MatrixXd c_tilde = bias(p.b_c, x * p.u_c + s_prev * p.w_c).array().tanh();
    c_out = c_prev.cwiseProduct(f) + i.cwiseProduct(c_tilde);
    const Eigen::MatrixXd o = sigmoid(bias(p.b_o, x * p.u_o + s_prev * p.w_o));
    const Eigen::MatrixXd tanh_c = c_out.array().tanh();
    s_out = o.cwiseProduct(tanh_c);
    if (cache) {
        cache->x = x;
        cache->s_prev = s_prev;
        cache->c_prev = c_prev;
        cache->f = f;
        cache->i = i;
        cache->o = o;
        cache->c_tilde = c_tilde;
        cache->c = c_out;
        cache->tanh_c = tanh_c;
    }
}

// Full forward over a batch of sequences; returns predictions and fills the
// per-(layer, step) cache when given.
Eigen::VectorXd forward_batch(const Eigen::MatrixXd& sequences, const LstmNetwork& net,
                              std::vector<std::vector<BatchCache>>* caches) {
    const Eigen::Index batch = sequences.rows();
    const Eigen::Index steps = sequences.cols();
    const Eigen::Index n_layers = static_cast<Eigen::Index>(net.layers.size());
    const Eigen::Index hidden = net.layers.front().hidden();

    if (caches) caches->assign(static_cast<std::size_t>(n_layers),
                               std::vector<BatchCache>(static_cast<std::size_t>(steps)));

    std::vector<Eigen::MatrixXd> s(static_cast<std::size_t>(n_layers),
                                   Eigen::MatrixXd::Zero(batch, hidden));
    std::vector<Eigen::MatrixXd> c = s;

    Eigen::MatrixXd input;
    for (Eigen::Index t = 0; t < steps; ++t) {
        input = sequences.col(t);  // batch x 1 for the bottom layer
        for (Eigen::Index l = 0; l < n_layers; ++l) {
            BatchCache* cache = caches ? &(*caches)[static_cast<std::size_t>(l)]
                                                   [static_cast<std::size_t>(t)]
                                       : nullptr;
            Eigen::MatrixXd s_new, c_new;
            cell_forward_batch(input, s[static_cast<std::size_t>(l)],
                               c[static_cast<std::size_t>(l)], net.layers[static_cast<std::size_t>(l)],
                               s_new, c_new, cache);
            if (!s_new.allFinite())
                throw FitError("non-finite LSTM activation at timestep " + std::to_string(t));
            s[static_cast<std::size_t>(l)] = std::move(s_new);
            c[static_cast<std::size_t>(l)] = std::move(c_new);
            input = s[static_cast<std::size_t>(l)];
        }
    }
    return (s.back() * net.head_w).array() + net.head_b;
}

std::vector<double*> parameter_spans(LstmNetwork& net, std::vector<Eigen::Index>& sizes) {
    std::vector<double*> ptrs;
    sizes.clear();
    for (auto& layer : net.layers) {
        for (Eigen::MatrixXd* m : {&layer.u_f, &layer.u_i, &layer.u_o, &layer.u_c, &layer.w_f,
                                   &layer.w_i, &layer.w_o, &layer.w_c}) {
            ptrs.push_back(m->data());
            sizes.push_back(m->size());
        }
        for (Eigen::RowVectorXd* b : {&layer.b_f, &layer.b_i, &layer.b_o, &layer.b_c}) {
            ptrs.push_back(b->data());
            sizes.push_back(b->size());
        }
    }
    ptrs.push_back(net.head_w.data());
    sizes.push_back(net.head_w.size());
    ptrs.push_back(&net.head_b);
    sizes.push_back(1);
    return ptrs;
}

std::vector<double*> gradient_spans(LstmGradients& g, std::vector<Eigen::Index>& sizes) {
    std::vector<double*> ptrs;
    sizes.clear();
    for (auto& layer : g.layers) {
        for (Eigen::MatrixXd* m : {&layer.u_f, &layer.u_i, &layer.u_o, &layer.u_c, &layer.w_f,
                                   &layer.w_i, &layer.w_o, &layer.w_c}) {
            ptrs.push_back(m->data());
            sizes.push_back(m->size());
        }
        for (Eigen::RowVectorXd* b : {&layer.b_f, &layer.b_i, &layer.b_o, &layer.b_c}) {
            ptrs.push_back(b->data());
            sizes.push_back(b->size());
        }
    }
    ptrs.push_back(g.head_w.data());
    sizes.push_back(g.head_w.size());
    ptrs.push_back(&g.head_b);
    sizes.push_back(1);
    return ptrs;
}

}  // namespace

LstmState cell_forward(const Eigen::RowVectorXd& x, const LstmState& prev,
                       const LstmLayerParams& params, LstmCellCache* cache) {
    if (x.size() != params.input_dim() || prev.s.size() != params.hidden() ||
        prev.c.size() != params.hidden())
        throw InvalidArgument("cell_forward shape mismatch");
    BatchCache bc;
    Eigen::MatrixXd s_out, c_out;
    cell_forward_batch(x, prev.s, prev.c, params, s_out, c_out, cache ? &bc : nullptr);
    if (cache) {
        cache->x = bc.x.row(0);
        cache->s_prev = bc.s_prev.row(0);
        cache->c_prev = bc.c_prev.row(0);
        cache->f = bc.f.row(0);
        cache->i = bc.i.row(0);
        cache->o = bc.o.row(0);
        cache->c_tilde = bc.c_tilde.row(0);
        cache->c = bc.c.row(0);
        cache->tanh_c = bc.tanh_c.row(0);
    }
    return LstmState{s_out.row(0), c_out.row(0)};
}

LstmNetwork LstmNetwork::init(const NetworkConfig& config, std::uint64_t seed) {
    config.validate();
    Rng rng(seed);
    const double bound = 1.0 / std::sqrt(static_cast<double>(config.hidden));
    const auto fill = [&](Eigen::MatrixXd& m) {
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = rng.uniform(-bound, bound);
    };
    LstmNetwork net = zeros(config);
    for (auto& layer : net.layers) {
        fill(layer.u_f);
        fill(layer.u_i);
        fill(layer.u_o);
        fill(layer.u_c);
        fill(layer.w_f);
        fill(layer.w_i);
        fill(layer.w_o);
        fill(layer.w_c);
        layer.b_f.setConstant(1.0);  // open forget gates at the start
    }
    Eigen::MatrixXd head(net.head_w.size(), 1);
    fill(head);
    net.head_w = head.col(0);
    net.head_b = 0.0;
    return net;
}

LstmNetwork LstmNetwork::zeros(const NetworkConfig& config) {
    config.validate();
    LstmNetwork net;
    for (int l = 0; l < config.layers; ++l)
        net.layers.push_back(LstmLayerParams::zeros(l == 0 ? 1 : config.hidden, config.hidden));
    net.head_w = Eigen::VectorXd::Zero(config.hidden);
    net.head_b = 0.0;
    return net;
}

double forward(const std::vector<double>& sequence, const LstmNetwork& net) {
    if (net.layers.empty()) throw InvalidArgument("network has no layers");
    Eigen::MatrixXd seq(1, static_cast<Eigen::Index>(sequence.size()));
    for (std::size_t t = 0; t < sequence.size(); ++t)
        seq(0, static_cast<Eigen::Index>(t)) = sequence[t];
    return forward_batch(seq, net, nullptr)(0);
}

LstmGradients bptt_gradients(const LstmBatch& batch, const LstmNetwork& net, double* loss_out) {
    const Eigen::Index b = batch.sequences.rows();
    const Eigen::Index steps = batch.sequences.cols();
    if (b == 0 || b != batch.targets.size()) throw InvalidArgument("bad batch shapes");
    const Eigen::Index n_layers = static_cast<Eigen::Index>(net.layers.size());
    const Eigen::Index hidden = net.layers.front().hidden();

    std::vector<std::vector<BatchCache>> caches;
    const Eigen::VectorXd pred = forward_batch(batch.sequences, net, &caches);
    const Eigen::VectorXd err = pred - batch.targets;
    if (loss_out) *loss_out = 0.5 * err.squaredNorm() / static_cast<double>(b);

    LstmGradients grads;
    grads.layers.reserve(static_cast<std::size_t>(n_layers));
    for (const auto& layer : net.layers)
        grads.layers.push_back(LstmLayerParams::zeros(layer.input_dim(), layer.hidden()));
    grads.head_w = Eigen::VectorXd::Zero(hidden);
    grads.head_b = 0.0;

    const Eigen::VectorXd dpred = err / static_cast<double>(b);
    const BatchCache& top_last = caches[static_cast<std::size_t>(n_layers - 1)]
                                       [static_cast<std::size_t>(steps - 1)];
    const Eigen::MatrixXd s_top =
        top_last.o.cwiseProduct(top_last.tanh_c);  // == final top hidden state
    grads.head_w = s_top.transpose() * dpred;
    grads.head_b = dpred.sum();

    std::vector<Eigen::MatrixXd> ds(static_cast<std::size_t>(n_layers),
                                    Eigen::MatrixXd::Zero(b, hidden));
    std::vector<Eigen::MatrixXd> dc = ds;
    ds[static_cast<std::size_t>(n_layers - 1)] = dpred * net.head_w.transpose();

    for (Eigen::Index t = steps - 1; t >= 0; --t) {
        for (Eigen::Index l = n_layers - 1; l >= 0; --l) {
            const BatchCache& cache =
                caches[static_cast<std::size_t>(l)][static_cast<std::size_t>(t)];
            const LstmLayerParams& p = net.layers[static_cast<std::size_t>(l)];
            LstmLayerParams& g = grads.layers[static_cast<std::size_t>(l)];

            const Eigen::MatrixXd& s_grad = ds[static_cast<std::size_t>(l)];
            Eigen::MatrixXd c_grad = dc[static_cast<std::size_t>(l)];

            const Eigen::MatrixXd d_o = s_grad.cwiseProduct(cache.tanh_c);
            c_grad += s_grad.cwiseProduct(cache.o)
                          .cwiseProduct((1.0 - cache.tanh_c.array().square()).matrix());

            const Eigen::MatrixXd d_f = c_grad.cwiseProduct(cache.c_prev);
            const Eigen::MatrixXd d_i = c_grad.cwiseProduct(cache.c_tilde);
            const Eigen::MatrixXd d_ct = c_grad.cwiseProduct(cache.i);

            const Eigen::MatrixXd dz_f =
                d_f.cwiseProduct(cache.f).cwiseProduct((1.0 - cache.f.array()).matrix());
            const Eigen::MatrixXd dz_i =
                d_i.cwiseProduct(cache.i).cwiseProduct((1.0 - cache.i.array()).matrix());
            const Eigen::MatrixXd dz_o =
                d_o.cwiseProduct(cache.o).cwiseProduct((1.0 - cache.o.array()).matrix());
            const Eigen::MatrixXd dz_c = d_ct.cwiseProduct((1.0 - cache.c_tilde.array().square()).matrix());

            g.u_f += cache.x.transpose() * dz_f;
            g.u_i += cache.x.transpose() * dz_i;
            g.u_o += cache.x.transpose() * dz_o;
            g.u_c += cache.x.transpose() * dz_c;
            g.w_f += cache.s_prev.transpose() * dz_f;
            g.w_i += cache.s_prev.transpose() * dz_i;
            g.w_o += cache.s_prev.transpose() * dz_o;
            g.w_c += cache.s_prev.transpose() * dz_c;
            g.b_f += dz_f.colwise().sum();
            g.b_i += dz_i.colwise().sum();
            g.b_o += dz_o.colwise().sum();
            g.b_c += dz_c.colwise().sum();

            ds[static_cast<std::size_t>(l)] = dz_f * p.w_f.transpose() +
                                              dz_i * p.w_i.transpose() +
                                              dz_o * p.w_o.transpose() + dz_c * p.w_c.transpose();
            dc[static_cast<std::size_t>(l)] = c_grad.cwiseProduct(cache.f);

            if (l > 0) {
                const Eigen::MatrixXd dx = dz_f * p.u_f.transpose() + dz_i * p.u_i.transpose() +
                                           dz_o * p.u_o.transpose() + dz_c * p.u_c.transpose();
                ds[static_cast<std::size_t>(l - 1)] += dx;
            }
        }
    }
    return grads;
}

double gradient_check(const NetworkConfig& config, std::uint64_t seed) {
    config.validate();
    LstmNetwork net = LstmNetwork::init(config, seed);

    Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
    const Eigen::Index batch = 4;
    LstmBatch data;
    data.sequences.resize(batch, config.timesteps);
    data.targets.resize(batch);
    for (Eigen::Index r = 0; r < batch; ++r) {
        for (Eigen::Index t = 0; t < config.timesteps; ++t)
            data.sequences(r, t) = rng.uniform(0.0, 1.0);
        data.targets(r) = rng.uniform(0.0, 1.0);
    }

    LstmGradients analytic = bptt_gradients(data, net);
    std::vector<Eigen::Index> psizes, gsizes;
    const auto pspans = parameter_spans(net, psizes);
    const auto gspans = gradient_spans(analytic, gsizes);

    const auto loss = [&]() {
        const Eigen::VectorXd pred = forward_batch(data.sequences, net, nullptr);
        return 0.5 * (pred - data.targets).squaredNorm() / static_cast<double>(batch);
    };

    constexpr double kEps = 1e-5;
    double worst = 0.0;
    for (std::size_t s = 0; s < pspans.size(); ++s) {
        for (Eigen::Index j = 0; j < psizes[s]; ++j) {
            double& param = pspans[s][j];
            const double saved = param;
            param = saved + kEps;
            const double up = loss();
            param = saved - kEps;
            const double down = loss();
            param = saved;
            const double numeric = (up - down) / (2.0 * kEps);
            const double a = gspans[s][j];
            const double denom = std::max({std::abs(a), std::abs(numeric), 1e-8});
            worst = std::max(worst, std::abs(a - numeric) / denom);
        }
    }
    return worst;
}

namespace {

struct AdamState {
    std::vector<Eigen::VectorXd> m, v;
    long step = 0;
};

void adam_update(LstmNetwork& net, const LstmGradients& grads, AdamState& state, double lr) {
    constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;
    std::vector<Eigen::Index> psizes, gsizes;
    LstmNetwork& mutable_net = net;
    LstmGradients& mutable_grads = const_cast<LstmGradients&>(grads);
    const auto pspans = parameter_spans(mutable_net, psizes);
    const auto gspans = gradient_spans(mutable_grads, gsizes);

    if (state.m.empty()) {
        state.m.resize(pspans.size());
        state.v.resize(pspans.size());
        for (std::size_t s = 0; s < pspans.size(); ++s) {
            state.m[s] = Eigen::VectorXd::Zero(psizes[s]);
            state.v[s] = Eigen::VectorXd::Zero(psizes[s]);
        }
    }
    ++state.step;
    const double bc1 = 1.0 - std::pow(kBeta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(kBeta2, static_cast<double>(state.step));
    for (std::size_t s = 0; s < pspans.size(); ++s) {
        for (Eigen::Index j = 0; j < psizes[s]; ++j) {
            const double g = gspans[s][j];
            double& m = state.m[s](j);
            double& v = state.v[s](j);
            m = kBeta1 * m + (1.0 - kBeta1) * g;
            v = kBeta2 * v + (1.0 - kBeta2) * g * g;
            pspans[s][j] -= lr * (m / bc1) / (std::sqrt(v / bc2) + kEps);
        }
    }
}

}  // namespace

LstmFit train_lstm(const StockSeries& series, const NetworkConfig& config, std::uint64_t seed) {
    config.validate();
    const int t_steps = config.timesteps;
    if (static_cast<int>(series.size()) < 2 * t_steps)
        throw InsufficientDataError("LSTM needs at least 2 x timesteps = " +
                                    std::to_string(2 * t_steps) + " observations, got " +
                                    std::to_string(series.size()));

    const std::vector<double> raw = series.values_as_double();
    auto [scaled, scaler] = minmax_scale(raw);

    const std::size_t n_windows = scaled.size() - static_cast<std::size_t>(t_steps);
    std::vector<std::size_t> order(n_windows);
    std::iota(order.begin(), order.end(), 0);

    LstmFit fit;
    fit.net = LstmNetwork::init(config, seed);
    fit.scaler = scaler;
    fit.config = config;
    fit.seed = seed;
    fit.origin = series.index().last();
    fit.category = series.category();
    fit.seed_window.assign(raw.end() - t_steps, raw.end());

    AdamState adam;
    const std::size_t batch_size = static_cast<std::size_t>(config.batch_size);
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        Rng shuffle_rng(seed + 0x51ed2700051ed27ULL * static_cast<std::uint64_t>(epoch + 1));
        shuffle_rng.shuffle(order);
        for (std::size_t begin = 0; begin < n_windows; begin += batch_size) {
            const std::size_t count = std::min(batch_size, n_windows - begin);
            LstmBatch batch;
            batch.sequences.resize(static_cast<Eigen::Index>(count), t_steps);
            batch.targets.resize(static_cast<Eigen::Index>(count));
            for (std::size_t r = 0; r < count; ++r) {
                const std::size_t w = order[begin + r];
                for (int t = 0; t < t_steps; ++t)
                    batch.sequences(static_cast<Eigen::Index>(r), t) =
                        scaled[w + static_cast<std::size_t>(t)];
                batch.targets(static_cast<Eigen::Index>(r)) =
                    scaled[w + static_cast<std::size_t>(t_steps)];
            }
            double loss = 0.0;
            const LstmGradients grads = bptt_gradients(batch, fit.net, &loss);
            if (!std::isfinite(loss))
                throw FitError("non-finite training loss at epoch " + std::to_string(epoch) +
                               ", batch starting at window " + std::to_string(begin));
            adam_update(fit.net, grads, adam, config.learning_rate);
        }
    }

    // final training MSE over every window, in scaled units
    Eigen::MatrixXd all(static_cast<Eigen::Index>(n_windows), t_steps);
    Eigen::VectorXd targets(static_cast<Eigen::Index>(n_windows));
    for (std::size_t w = 0; w < n_windows; ++w) {
        for (int t = 0; t < t_steps; ++t)
            all(static_cast<Eigen::Index>(w), t) = scaled[w + static_cast<std::size_t>(t)];
        targets(static_cast<Eigen::Index>(w)) = scaled[w + static_cast<std::size_t>(t_steps)];
    }
    std::vector<std::vector<BatchCache>> no_cache;
    const Eigen::VectorXd pred = forward_batch(all, fit.net, nullptr);
    fit.final_train_loss = (pred - targets).squaredNorm() / static_cast<double>(n_windows);
    return fit;
}

ForecastResult forecast_lstm_from_window(const LstmFit& fit, const std::vector<double>& window_raw,
                                         int horizon_hours) {
    if (horizon_hours < 1) throw InvalidArgument("forecast horizon must be >= 1");
    if (static_cast<int>(window_raw.size()) != fit.config.timesteps)
        throw InvalidArgument("seed window must hold exactly `timesteps` observations");

    std::vector<double> window = minmax_apply(window_raw, fit.scaler);
    std::vector<double> scaled_preds;
    scaled_preds.reserve(static_cast<std::size_t>(horizon_hours));
    for (int h = 0; h < horizon_hours; ++h) {
        const double next = forward(window, fit.net);
        scaled_preds.push_back(next);
        window.erase(window.begin());
        window.push_back(next);
    }
    const std::vector<double> levels = minmax_invert(scaled_preds, fit.scaler);
    ModelSpec spec = ModelSpec::lstm(fit.config, fit.seed);
    return make_forecast_result(fit.origin, levels, spec, fit.category);
}

ForecastResult forecast_lstm(const LstmFit& fit, const StockSeries& series, int horizon_hours) {
    if (static_cast<int>(series.size()) < fit.config.timesteps)
        throw InsufficientDataError("series shorter than the LSTM window");
    const std::vector<double> raw = series.values_as_double();
    const std::vector<double> window(raw.end() - fit.config.timesteps, raw.end());
    ForecastResult res = forecast_lstm_from_window(fit, window, horizon_hours);
    res.origin = series.index().last();
    for (std::size_t i = 0; i < res.points.size(); ++i)
        res.points[i].ts = res.origin + static_cast<TimePoint>(i + 1) * kSecsPerHour;
    return res;
}

}  // namespace yardcast
