#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "slt/architecture.hpp"
#include "slt/dataset.hpp"

namespace slt::detail {

// Training-path workspace shared by the dense trainer and edge-popup:
// batched forward with stored activations, softmax cross-entropy, and
// delta backpropagation producing raw (per-batch mean) weight and bias
// gradient accumulators against whatever effective weights were passed in.
class TrainingWorkspace {
public:
    explicit TrainingWorkspace(const Architecture& arch) : arch_(arch) {
        const std::size_t layers = arch.layers.size();
        acts_.resize(layers);
        deltas_.resize(layers);
        grad_w_.resize(arch.weight_count());
        grad_b_.resize(arch.bias_count());
    }

    // Forward + loss over `rows` of `data`; when `want_grads` is set, also
    // backpropagates and fills grad_w()/grad_b() with the mean-gradient of
    // the cross-entropy term (no regularization). Returns the mean NLL.
    double forward_loss(std::span<const double> w_eff, std::span<const double> biases,
                        const Dataset& data, std::span<const std::size_t> rows,
                        bool want_grads) {
        const std::size_t bsz = rows.size();
        const std::size_t L = arch_.num_weight_layers();

        for (std::size_t l = 0; l < arch_.layers.size(); ++l) {
            acts_[l].assign(bsz * static_cast<std::size_t>(arch_.layers[l]), 0.0);
            if (want_grads)
                deltas_[l].assign(bsz * static_cast<std::size_t>(arch_.layers[l]), 0.0);
        }
        for (std::size_t b = 0; b < bsz; ++b) {
            const auto row = data.row(rows[b]);
            std::copy(row.begin(), row.end(), acts_[0].begin() + b * row.size());
        }

        for (std::size_t l = 1; l <= L; ++l) {
            const std::size_t n_in = static_cast<std::size_t>(arch_.layers[l - 1]);
            const std::size_t n_out = static_cast<std::size_t>(arch_.layers[l]);
            const std::size_t woff = arch_.layer_weight_offset(l);
            const std::size_t boff = arch_.layer_bias_offset(l);
            const bool relu = l < L;
            for (std::size_t b = 0; b < bsz; ++b) {
                const double* in = acts_[l - 1].data() + b * n_in;
                double* out = acts_[l].data() + b * n_out;
                for (std::size_t j = 0; j < n_out; ++j) {
                    double a = biases[boff + j];
                    const double* w = w_eff.data() + woff + j * n_in;
                    for (std::size_t i = 0; i < n_in; ++i) a += w[i] * in[i];
                    out[j] = relu && a < 0.0 ? 0.0 : a;
                }
            }
        }

        // Softmax cross-entropy; deltas_[L] gets (p - onehot) / batch.
        const std::size_t n_out = static_cast<std::size_t>(arch_.layers[L]);
        double loss = 0.0;
        for (std::size_t b = 0; b < bsz; ++b) {
            const double* z = acts_[L].data() + b * n_out;
            double zmax = z[0];
            for (std::size_t j = 1; j < n_out; ++j) zmax = std::max(zmax, z[j]);
            double sum = 0.0;
            for (std::size_t j = 0; j < n_out; ++j) sum += std::exp(z[j] - zmax);
            const int y = data.labels[rows[b]];
            loss -= z[static_cast<std::size_t>(y)] - zmax - std::log(sum);
            if (want_grads) {
                double* dz = deltas_[L].data() + b * n_out;
                for (std::size_t j = 0; j < n_out; ++j)
                    dz[j] = (std::exp(z[j] - zmax) / sum -
                             (static_cast<int>(j) == y ? 1.0 : 0.0)) /
                            static_cast<double>(bsz);
            }
        }
        loss /= static_cast<double>(bsz);

        if (want_grads) backward(w_eff, bsz);
        return loss;
    }

    const std::vector<double>& grad_w() const { return grad_w_; }
    const std::vector<double>& grad_b() const { return grad_b_; }

private:
    void backward(std::span<const double> w_eff, std::size_t bsz) {
        std::fill(grad_w_.begin(), grad_w_.end(), 0.0);
        std::fill(grad_b_.begin(), grad_b_.end(), 0.0);
        const std::size_t L = arch_.num_weight_layers();
        for (std::size_t l = L; l >= 1; --l) {
            const std::size_t n_in = static_cast<std::size_t>(arch_.layers[l - 1]);
            const std::size_t n_out = static_cast<std::size_t>(arch_.layers[l]);
            const std::size_t woff = arch_.layer_weight_offset(l);
            const std::size_t boff = arch_.layer_bias_offset(l);
            for (std::size_t b = 0; b < bsz; ++b) {
                const double* d = deltas_[l].data() + b * n_out;
                const double* in = acts_[l - 1].data() + b * n_in;
                for (std::size_t j = 0; j < n_out; ++j) {
                    const double dj = d[j];
                    if (dj == 0.0) continue;
                    grad_b_[boff + j] += dj;
                    double* gw = grad_w_.data() + woff + j * n_in;
                    for (std::size_t i = 0; i < n_in; ++i) gw[i] += dj * in[i];
                }
                if (l > 1) {
                    double* dprev = deltas_[l - 1].data() + b * n_in;
                    for (std::size_t j = 0; j < n_out; ++j) {
                        const double dj = d[j];
                        if (dj == 0.0) continue;
                        const double* w = w_eff.data() + woff + j * n_in;
                        for (std::size_t i = 0; i < n_in; ++i) dprev[i] += dj * w[i];
                    }
                    for (std::size_t i = 0; i < n_in; ++i)
                        if (in[i] <= 0.0) dprev[i] = 0.0; // ReLU gate
                }
            }
        }
    }

    Architecture arch_;
    std::vector<std::vector<double>> acts_;
    std::vector<std::vector<double>> deltas_;
    std::vector<double> grad_w_;
    std::vector<double> grad_b_;
};

} // namespace slt::detail
