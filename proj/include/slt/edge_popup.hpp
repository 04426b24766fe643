#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "slt/architecture.hpp"
#include "slt/dataset.hpp"
#include "slt/detail/feedforward.hpp"
#include "slt/genotype.hpp"
#include "slt/network.hpp"
#include "slt/rng.hpp"

namespace slt {

// One trainable pop-up score per weight, aligned to the weight index
// convention.
struct ScoreVector {
    std::vector<double> scores;
};

struct EdgePopupConfig {
    double keep_fraction = 0.5;
    int epochs = 100;
    double lr = 0.1;
    int batch_size = 64;
    InitScheme init = InitScheme::uniform();
    std::uint64_t seed = 0;

    void validate() const {
        if (!(keep_fraction > 0.0 && keep_fraction <= 1.0))
            throw std::invalid_argument("edge_popup: keep_fraction must be in (0, 1]");
        if (epochs < 0 || batch_size < 1 || !(lr >= 0.0))
            throw std::invalid_argument("edge_popup: bad training parameters");
    }
};

// Keeps the ceil(k * layer_size) highest-scoring edges per layer, ties
// broken by lower weight index.
inline Genotype edge_popup_mask(const ScoreVector& sv, const Architecture& arch, double k) {
    if (!(k > 0.0 && k <= 1.0)) throw std::invalid_argument("edge_popup_mask: k must be in (0, 1]");
    if (sv.scores.size() != arch.weight_count())
        throw std::invalid_argument("edge_popup_mask: score length mismatch");
    Genotype mask(arch.weight_count());
    std::vector<std::size_t> idx;
    for (std::size_t l = 1; l <= arch.num_weight_layers(); ++l) {
        const std::size_t off = arch.layer_weight_offset(l);
        const std::size_t size = arch.layer_weight_count(l);
        const auto keep = static_cast<std::size_t>(std::ceil(k * static_cast<double>(size)));
        idx.resize(size);
        std::iota(idx.begin(), idx.end(), off);
        auto higher = [&sv](std::size_t a, std::size_t b) {
            if (sv.scores[a] != sv.scores[b]) return sv.scores[a] > sv.scores[b];
            return a < b;
        };
        if (keep < size) std::nth_element(idx.begin(), idx.begin() + keep, idx.end(), higher);
        for (std::size_t i = 0; i < keep; ++i) mask.set(idx[i], true);
    }
    return mask;
}

struct EdgePopupResult {
    NetworkParams params; // frozen throughout training
    ScoreVector scores;
    Genotype mask;
    double train_accuracy = 0.0;
    double test_accuracy = 0.0;
    int epochs_run = 0;
    bool diverged = false;
};

// Straight-through score search: the forward pass uses the current top-k
// mask, the backward pass updates every edge's score with
// dL/da_v * w_uv * h_u regardless of mask state. Weights and biases never
// change.
inline EdgePopupResult edge_popup_train(const Architecture& arch, const EdgePopupConfig& cfg,
                                        const SplitDataset& data) {
    cfg.validate();
    arch.validate();
    data.train.check();
    if (data.train.n_classes > arch.outputs())
        throw std::invalid_argument("edge_popup_train: more classes than output neurons");

    EdgePopupResult res;
    res.params = init_params(arch, cfg.init, mix_seed(cfg.seed, stream::init));

    const std::size_t nw = arch.weight_count();
    res.scores.scores.resize(nw);
    {
        Rng srng(mix_seed(cfg.seed, stream::scores));
        for (auto& s : res.scores.scores) s = srng.next_unit();
    }

    Rng rng(mix_seed(cfg.seed, stream::algo));
    detail::TrainingWorkspace ws(arch);
    const std::size_t n = data.train.rows;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<double> w_eff(nw);

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        for (std::size_t i = n; i > 1; --i)
            std::swap(order[i - 1], order[static_cast<std::size_t>(rng.below(i))]);
        for (std::size_t b0 = 0; b0 < n; b0 += static_cast<std::size_t>(cfg.batch_size)) {
            const std::size_t bsz = std::min(static_cast<std::size_t>(cfg.batch_size), n - b0);
            const Genotype mask = edge_popup_mask(res.scores, arch, cfg.keep_fraction);
            for (std::size_t i = 0; i < nw; ++i)
                w_eff[i] = mask.get(i) ? res.params.weights[i] : 0.0;

            const double loss = ws.forward_loss(
                w_eff, res.params.biases, data.train,
                std::span<const std::size_t>(order.data() + b0, bsz), true);
            if (!std::isfinite(loss)) {
                res.diverged = true;
                res.epochs_run = epoch;
                res.mask = mask;
                return res;
            }
            // Straight-through: raw dW times the unmasked weight.
            const auto& gw = ws.grad_w();
            for (std::size_t i = 0; i < nw; ++i)
                res.scores.scores[i] -= cfg.lr * gw[i] * res.params.weights[i];
        }
        res.epochs_run = epoch + 1;
    }

    res.mask = edge_popup_mask(res.scores, arch, cfg.keep_fraction);
    BatchEvaluator train_eval(res.params, data.train);
    res.train_accuracy = train_eval.accuracy(res.mask);
    if (data.test.rows > 0) {
        BatchEvaluator test_eval(res.params, data.test);
        res.test_accuracy = test_eval.accuracy(res.mask);
    }
    return res;
}

} // namespace slt
