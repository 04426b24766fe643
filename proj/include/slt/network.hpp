#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "slt/architecture.hpp"
#include "slt/dataset.hpp"
#include "slt/genotype.hpp"
#include "slt/rng.hpp"

namespace slt {

enum class InitKind { UniformPM1, KaimingNormalScaled, SignedKaimingConstantScaled };

// Weight/bias initialization distribution. The Kaiming variants scale the
// per-layer std sqrt(2/fan_in) by sqrt(1/k) for keep fraction k. Biases are
// drawn from the same per-layer distribution as the weights unless
// `zero_bias` is set (ablation switch).
struct InitScheme {
    InitKind kind = InitKind::UniformPM1;
    double keep_fraction = 1.0;
    bool zero_bias = false;

    static InitScheme uniform() { return {InitKind::UniformPM1, 1.0, false}; }
    static InitScheme kaiming_normal(double k, bool zero_bias = false) {
        return {InitKind::KaimingNormalScaled, k, zero_bias};
    }
    static InitScheme signed_kaiming_constant(double k, bool zero_bias = false) {
        return {InitKind::SignedKaimingConstantScaled, k, zero_bias};
    }

    std::string name() const {
        switch (kind) {
        case InitKind::UniformPM1: return "uniform";
        case InitKind::KaimingNormalScaled: return "kaiming_normal";
        case InitKind::SignedKaimingConstantScaled: return "kaiming_signed_const";
        }
        return "?";
    }
};

// Frozen random parameters. Weights are laid out layer by layer,
// output-neuron-major within a layer; biases layer by layer.
struct NetworkParams {
    Architecture arch;
    std::vector<double> weights;
    std::vector<double> biases;
    std::uint64_t seed = 0;
};

inline NetworkParams init_params(const Architecture& arch, const InitScheme& scheme,
                                 std::uint64_t seed) {
    arch.validate();
    if (scheme.kind != InitKind::UniformPM1 &&
        !(scheme.keep_fraction > 0.0 && scheme.keep_fraction <= 1.0))
        throw std::invalid_argument("init_params: keep fraction must be in (0, 1]");

    NetworkParams p;
    p.arch = arch;
    p.seed = seed;
    p.weights.resize(arch.weight_count());
    p.biases.resize(arch.bias_count());
    Rng rng(seed);

    auto layer_sigma = [&](std::size_t l) {
        const double fan_in = static_cast<double>(arch.layers[l - 1]);
        return std::sqrt(2.0 / fan_in) * std::sqrt(1.0 / scheme.keep_fraction);
    };
    auto draw = [&](std::size_t l) {
        switch (scheme.kind) {
        case InitKind::UniformPM1: return rng.uniform(-1.0, 1.0);
        case InitKind::KaimingNormalScaled: return rng.normal(0.0, layer_sigma(l));
        case InitKind::SignedKaimingConstantScaled:
            return (rng.next_u64() & 1ULL) ? layer_sigma(l) : -layer_sigma(l);
        }
        return 0.0;
    };

    std::size_t wi = 0;
    for (std::size_t l = 1; l < arch.layers.size(); ++l)
        for (std::size_t k = 0; k < arch.layer_weight_count(l); ++k) p.weights[wi++] = draw(l);
    std::size_t bi = 0;
    for (std::size_t l = 1; l < arch.layers.size(); ++l)
        for (int j = 0; j < arch.layers[l]; ++j)
            p.biases[bi++] = scheme.zero_bias ? 0.0 : draw(l);
    return p;
}

// Phenotype view: effective weight i is mask_i * w_i; biases are unmasked.
struct MaskedNetwork {
    const NetworkParams& params;
    const Genotype& mask;
};

// Reference forward pass in double precision: ReLU after each hidden
// affine layer, linear output layer.
inline std::vector<double> forward(const MaskedNetwork& net, std::span<const double> x) {
    const Architecture& arch = net.params.arch;
    if (x.size() != static_cast<std::size_t>(arch.inputs()))
        throw std::invalid_argument("forward: input dimension mismatch");
    if (net.mask.size() != arch.weight_count())
        throw std::invalid_argument("forward: mask length mismatch");

    std::vector<double> act(x.begin(), x.end());
    std::vector<double> next;
    for (std::size_t l = 1; l < arch.layers.size(); ++l) {
        const std::size_t n_in = static_cast<std::size_t>(arch.layers[l - 1]);
        const std::size_t n_out = static_cast<std::size_t>(arch.layers[l]);
        const std::size_t woff = arch.layer_weight_offset(l);
        const std::size_t boff = arch.layer_bias_offset(l);
        next.assign(n_out, 0.0);
        for (std::size_t j = 0; j < n_out; ++j) {
            double a = net.params.biases[boff + j];
            const std::size_t base = woff + j * n_in;
            for (std::size_t i = 0; i < n_in; ++i) {
                const double w = net.mask.get(base + i) ? net.params.weights[base + i] : 0.0;
                a += w * act[i];
            }
            next[j] = (l + 1 < arch.layers.size() && a < 0.0) ? 0.0 : a;
        }
        act.swap(next);
    }
    return act;
}

inline int argmax_label(std::span<const double> out) {
    int best = 0;
    for (std::size_t j = 1; j < out.size(); ++j)
        if (out[j] > out[static_cast<std::size_t>(best)]) best = static_cast<int>(j);
    return best;
}

namespace detail {

// Batched forward over a fixed dataset with per-genotype masked weights.
// Wide layers store weights transposed (input-major) so the inner loop
// runs contiguously over output neurons and ReLU zeros skip whole input
// rows; narrow layers (few outputs) keep the row-major layout and use
// plain dot products instead. Scalar type T = float trades ~1e-4 absolute
// output accuracy for throughput; the correct-count fraction is always
// computed in double.
template <typename T>
class BatchEvaluatorT {
public:
    BatchEvaluatorT(const NetworkParams& params, const Dataset& data)
        : params_(&params), arch_(params.arch) {
        data.check();
        if (data.cols != static_cast<std::size_t>(arch_.inputs()))
            throw std::invalid_argument("evaluator: dataset/arch input mismatch");
        if (data.n_classes > arch_.outputs())
            throw std::invalid_argument("evaluator: more classes than output neurons");
        rows_ = data.rows;
        cols_ = data.cols;
        labels_ = data.labels;
        x_.resize(data.x.size());
        std::transform(data.x.begin(), data.x.end(), x_.begin(),
                       [](double v) { return static_cast<T>(v); });

        const std::size_t layers = arch_.num_weight_layers();
        wt_.resize(layers);
        bias_.resize(layers);
        gather_.resize(layers);
        std::size_t max_width = cols_;
        for (std::size_t l = 1; l <= layers; ++l) {
            wt_[l - 1].resize(arch_.layer_weight_count(l));
            const std::size_t n_out = static_cast<std::size_t>(arch_.layers[l]);
            gather_[l - 1] = n_out < kWideOutput;
            bias_[l - 1].resize(n_out);
            const std::size_t boff = arch_.layer_bias_offset(l);
            for (std::size_t j = 0; j < n_out; ++j)
                bias_[l - 1][j] = static_cast<T>(params.biases[boff + j]);
            max_width = std::max(max_width, n_out);
        }
        buf_a_.resize(kBlock * max_width);
        buf_b_.resize(kBlock * max_width);
    }

    std::size_t rows() const { return rows_; }

    double accuracy(const Genotype& mask) {
        if (mask.size() != arch_.weight_count())
            throw std::invalid_argument("evaluator: mask length mismatch");
        load_masked_weights(mask);
        std::size_t correct = 0;
        for (std::size_t r0 = 0; r0 < rows_; r0 += kBlock)
            correct += run_block(r0, std::min(kBlock, rows_ - r0));
        return static_cast<double>(correct) / static_cast<double>(rows_);
    }

    // Dense accuracy (all-ones mask) for trained-parameter evaluation.
    double dense_accuracy() {
        Genotype ones(arch_.weight_count(), true);
        return accuracy(ones);
    }

private:
    static constexpr std::size_t kBlock = 64;
    static constexpr std::size_t kWideOutput = 16;

    void load_masked_weights(const Genotype& mask) {
        for (std::size_t l = 1; l <= arch_.num_weight_layers(); ++l) {
            const std::size_t n_in = static_cast<std::size_t>(arch_.layers[l - 1]);
            const std::size_t n_out = static_cast<std::size_t>(arch_.layers[l]);
            const std::size_t woff = arch_.layer_weight_offset(l);
            T* wt = wt_[l - 1].data();
            if (gather_[l - 1]) {
                for (std::size_t k = 0; k < n_in * n_out; ++k)
                    wt[k] = mask.get(woff + k) ? static_cast<T>(params_->weights[woff + k])
                                               : T(0);
            } else {
                for (std::size_t j = 0; j < n_out; ++j)
                    for (std::size_t i = 0; i < n_in; ++i) {
                        const std::size_t idx = woff + j * n_in + i;
                        wt[i * n_out + j] =
                            mask.get(idx) ? static_cast<T>(params_->weights[idx]) : T(0);
                    }
            }
        }
    }

    std::size_t run_block(std::size_t r0, std::size_t nrows) {
        const T* in = x_.data() + r0 * cols_;
        std::size_t width = cols_;
        T* cur = buf_a_.data();
        T* nxt = buf_b_.data();
        std::copy(in, in + nrows * cols_, cur);

        const std::size_t layers = arch_.num_weight_layers();
        for (std::size_t l = 1; l <= layers; ++l) {
            const std::size_t n_in = width;
            const std::size_t n_out = static_cast<std::size_t>(arch_.layers[l]);
            const T* wt = wt_[l - 1].data();
            const T* bias = bias_[l - 1].data();
            const bool relu = l < layers;
            if (gather_[l - 1]) {
                for (std::size_t b = 0; b < nrows; ++b) {
                    const T* a = cur + b * n_in;
                    T* o = nxt + b * n_out;
                    for (std::size_t j = 0; j < n_out; ++j) {
                        const T* w = wt + j * n_in;
                        T acc = bias[j];
                        for (std::size_t i = 0; i < n_in; ++i) acc += w[i] * a[i];
                        o[j] = relu && acc < T(0) ? T(0) : acc;
                    }
                }
            } else {
                for (std::size_t b = 0; b < nrows; ++b) {
                    const T* a = cur + b * n_in;
                    T* o = nxt + b * n_out;
                    std::copy(bias, bias + n_out, o);
                    for (std::size_t i = 0; i < n_in; ++i) {
                        const T ai = a[i];
                        if (ai == T(0)) continue;
                        const T* w = wt + i * n_out;
                        for (std::size_t j = 0; j < n_out; ++j) o[j] += ai * w[j];
                    }
                    if (relu)
                        for (std::size_t j = 0; j < n_out; ++j)
                            if (o[j] < T(0)) o[j] = T(0);
                }
            }
            std::swap(cur, nxt);
            width = n_out;
        }

        std::size_t correct = 0;
        for (std::size_t b = 0; b < nrows; ++b) {
            const T* o = cur + b * width;
            std::size_t best = 0;
            for (std::size_t j = 1; j < width; ++j)
                if (o[j] > o[best]) best = j;
            correct += static_cast<int>(best) == labels_[r0 + b];
        }
        return correct;
    }

    const NetworkParams* params_;
    Architecture arch_;
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<int> labels_;
    std::vector<T> x_;
    std::vector<std::vector<T>> wt_;
    std::vector<std::vector<T>> bias_;
    std::vector<char> gather_;
    std::vector<T> buf_a_, buf_b_;
};

} // namespace detail

using BatchEvaluator = detail::BatchEvaluatorT<double>;
using FastBatchEvaluator = detail::BatchEvaluatorT<float>;

inline std::vector<int> predict(const MaskedNetwork& net, const Dataset& data) {
    std::vector<int> out(data.rows);
    for (std::size_t r = 0; r < data.rows; ++r)
        out[r] = argmax_label(forward(net, data.row(r)));
    return out;
}

// Fraction of rows whose argmax prediction matches the label (ties go to
// the lowest class index).
inline double accuracy(const MaskedNetwork& net, const Dataset& data) {
    if (data.rows == 0) throw std::invalid_argument("accuracy: empty dataset");
    BatchEvaluator eval(net.params, data);
    return eval.accuracy(net.mask);
}

} // namespace slt
