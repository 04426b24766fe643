#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "slt/architecture.hpp"
#include "slt/dataset.hpp"
#include "slt/detail/feedforward.hpp"
#include "slt/edge_popup.hpp"
#include "slt/network.hpp"

namespace slt {

namespace detail {
inline double rel_err(double a, double f) {
    return std::abs(a - f) / std::max(std::abs(a) + std::abs(f), 1.0);
}
} // namespace detail

// Central-difference check of the analytic softmax-CE weight and bias
// gradients (including the L2 term) at the given parameter point, over the
// whole batch. Returns the maximum relative error.
inline double numeric_grad_check_weights(const NetworkParams& params, const Dataset& batch,
                                         double alpha, double eps_fd) {
    const Architecture& arch = params.arch;
    if (arch.weight_count() + arch.bias_count() > 500)
        throw std::invalid_argument("grad check: architecture too large");
    std::vector<std::size_t> rows(batch.rows);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    const double bsz = static_cast<double>(batch.rows);

    detail::TrainingWorkspace ws(arch);
    std::vector<double> w = params.weights;
    std::vector<double> b = params.biases;

    auto loss_at = [&](const std::vector<double>& wv, const std::vector<double>& bv) {
        double loss = ws.forward_loss(wv, bv, batch, rows, false);
        double wsq = 0.0;
        for (double x : wv) wsq += x * x;
        return loss + 0.5 * alpha * wsq / bsz;
    };

    ws.forward_loss(w, b, batch, rows, true);
    std::vector<double> aw = ws.grad_w();
    for (std::size_t i = 0; i < aw.size(); ++i) aw[i] += alpha * w[i] / bsz;
    const std::vector<double> ab = ws.grad_b();

    double worst = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double keep = w[i];
        w[i] = keep + eps_fd;
        const double up = loss_at(w, b);
        w[i] = keep - eps_fd;
        const double dn = loss_at(w, b);
        w[i] = keep;
        worst = std::max(worst, detail::rel_err(aw[i], (up - dn) / (2.0 * eps_fd)));
    }
    for (std::size_t i = 0; i < b.size(); ++i) {
        const double keep = b[i];
        b[i] = keep + eps_fd;
        const double up = loss_at(w, b);
        b[i] = keep - eps_fd;
        const double dn = loss_at(w, b);
        b[i] = keep;
        worst = std::max(worst, detail::rel_err(ab[i], (up - dn) / (2.0 * eps_fd)));
    }
    return worst;
}

// Checks the straight-through score gradient against finite differences of
// the surrogate loss L(s) = CE(w * (mask + s - s0)), whose mask stays
// frozen at the evaluation point by construction.
inline double numeric_grad_check_scores(const NetworkParams& params, const Dataset& batch,
                                        const ScoreVector& scores, double keep_fraction,
                                        double eps_fd) {
    const Architecture& arch = params.arch;
    if (arch.weight_count() + arch.bias_count() > 500)
        throw std::invalid_argument("grad check: architecture too large");
    std::vector<std::size_t> rows(batch.rows);
    std::iota(rows.begin(), rows.end(), std::size_t{0});

    const Genotype mask = edge_popup_mask(scores, arch, keep_fraction);
    const std::size_t nw = arch.weight_count();
    detail::TrainingWorkspace ws(arch);

    std::vector<double> shift(nw, 0.0); // s - s0
    auto loss_at = [&]() {
        std::vector<double> w_eff(nw);
        for (std::size_t i = 0; i < nw; ++i)
            w_eff[i] = params.weights[i] * ((mask.get(i) ? 1.0 : 0.0) + shift[i]);
        return ws.forward_loss(w_eff, params.biases, batch, rows, false);
    };

    std::vector<double> w_eff(nw);
    for (std::size_t i = 0; i < nw; ++i)
        w_eff[i] = mask.get(i) ? params.weights[i] : 0.0;
    ws.forward_loss(w_eff, params.biases, batch, rows, true);
    std::vector<double> analytic(nw);
    for (std::size_t i = 0; i < nw; ++i) analytic[i] = ws.grad_w()[i] * params.weights[i];

    double worst = 0.0;
    for (std::size_t i = 0; i < nw; ++i) {
        shift[i] = eps_fd;
        const double up = loss_at();
        shift[i] = -eps_fd;
        const double dn = loss_at();
        shift[i] = 0.0;
        worst = std::max(worst, detail::rel_err(analytic[i], (up - dn) / (2.0 * eps_fd)));
    }
    return worst;
}

} // namespace slt
