// One-hidden-layer perceptron with sigmoid units, trained by seeded
// mini-batch backpropagation with momentum on the cross-entropy loss.

#include <algorithm>
#include <numeric>

#include "armauth/rng.hpp"
#include "armauth/simd.hpp"
#include "internal.hpp"

namespace armauth::detail {

model::Perceptron train_mlp(const MlpConfig& cfg, std::uint64_t seed, const TrainingSet& ts) {
    const std::size_t d = ts.dims();
    const std::size_t h = cfg.hidden_units > 0 ? cfg.hidden_units : (d + 2) / 2;
    const std::size_t batch = std::max<std::size_t>(1, cfg.batch_size);
    const auto& kern = simd::active();

    model::Perceptron net;
    net.inputs = d;
    net.hidden = h;
    Rng rng(derive_seed(seed, {seed_tag::kModel, 0x6d6c70}));
    std::uniform_real_distribution<double> init(-0.05, 0.05);
    net.w_hidden.resize(h * d);
    net.b_hidden.resize(h);
    net.w_out.resize(h);
    for (auto& v : net.w_hidden) v = init(rng);
    for (auto& v : net.b_hidden) v = init(rng);
    for (auto& v : net.w_out) v = init(rng);
    net.b_out = init(rng);

    // Accumulated gradients and momentum buffers.
    std::vector<double> g_wh(h * d), g_bh(h), g_wo(h);
    double g_bo = 0.0;
    std::vector<double> v_wh(h * d, 0.0), v_bh(h, 0.0), v_wo(h, 0.0);
    double v_bo = 0.0;
    std::vector<double> act(h);

    std::vector<std::size_t> order(ts.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t start = 0; start < order.size(); start += batch) {
            const std::size_t stop = std::min(order.size(), start + batch);
            std::fill(g_wh.begin(), g_wh.end(), 0.0);
            std::fill(g_bh.begin(), g_bh.end(), 0.0);
            std::fill(g_wo.begin(), g_wo.end(), 0.0);
            g_bo = 0.0;
            for (std::size_t s = start; s < stop; ++s) {
                const auto& x = ts.rows[order[s]];
                const double y = ts.labels[order[s]] == kGenuine ? 1.0 : 0.0;
                double z_out = net.b_out;
                for (std::size_t u = 0; u < h; ++u) {
                    act[u] = logistic(net.b_hidden[u] + kern.dot(net.w_hidden.data() + u * d, x.data(), d));
                    z_out += net.w_out[u] * act[u];
                }
                const double delta_out = logistic(z_out) - y;
                g_bo += delta_out;
                for (std::size_t u = 0; u < h; ++u) {
                    g_wo[u] += delta_out * act[u];
                    const double delta_h = delta_out * net.w_out[u] * act[u] * (1.0 - act[u]);
                    g_bh[u] += delta_h;
                    kern.axpy(delta_h, x.data(), g_wh.data() + u * d, d);
                }
            }
            const double step = cfg.learning_rate / static_cast<double>(stop - start);
            for (std::size_t i = 0; i < v_wh.size(); ++i) {
                v_wh[i] = cfg.momentum * v_wh[i] - step * g_wh[i];
                net.w_hidden[i] += v_wh[i];
            }
            for (std::size_t u = 0; u < h; ++u) {
                v_bh[u] = cfg.momentum * v_bh[u] - step * g_bh[u];
                net.b_hidden[u] += v_bh[u];
                v_wo[u] = cfg.momentum * v_wo[u] - step * g_wo[u];
                net.w_out[u] += v_wo[u];
            }
            v_bo = cfg.momentum * v_bo - step * g_bo;
            net.b_out += v_bo;
        }
    }
    return net;
}

double score_mlp(const model::Perceptron& m, std::span<const double> row) {
    const auto& kern = simd::active();
    double z = m.b_out;
    for (std::size_t u = 0; u < m.hidden; ++u)
        z += m.w_out[u] * logistic(m.b_hidden[u] + kern.dot(m.w_hidden.data() + u * m.inputs, row.data(), m.inputs));
    return logistic(z);
}

}  // namespace armauth::detail
