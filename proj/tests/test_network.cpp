#include <doctest.h>

#include <cmath>
#include <vector>

#include "slt/dataset.hpp"
#include "slt/genotype.hpp"
#include "slt/network.hpp"

using namespace slt;

namespace {

// Independent reference: per-sample loops straight off the index
// convention, no shared code with the library forward pass.
std::vector<double> naive_forward(const NetworkParams& p, const Genotype& mask,
                                  const std::vector<double>& x) {
    std::vector<double> act = x;
    const auto& L = p.arch.layers;
    std::size_t woff = 0, boff = 0;
    for (std::size_t l = 1; l < L.size(); ++l) {
        std::vector<double> next(static_cast<std::size_t>(L[l]));
        for (std::size_t j = 0; j < next.size(); ++j) {
            double a = p.biases[boff + j];
            for (std::size_t i = 0; i < act.size(); ++i) {
                const std::size_t w = woff + j * act.size() + i;
                if (mask.get(w)) a += p.weights[w] * act[i];
            }
            next[j] = (l + 1 < L.size() && a < 0.0) ? 0.0 : a;
        }
        woff += act.size() * next.size();
        boff += next.size();
        act = std::move(next);
    }
    return act;
}

} // namespace

TEST_CASE("uniform init stays in [-1, 1] and is reproducible") {
    const Architecture arch({2, 20, 2});
    const auto p = init_params(arch, InitScheme::uniform(), 77);
    CHECK(p.weights.size() == 80);
    CHECK(p.biases.size() == 22);
    for (double w : p.weights) {
        CHECK(w >= -1.0);
        CHECK(w <= 1.0);
    }
    for (double b : p.biases) {
        CHECK(b >= -1.0);
        CHECK(b <= 1.0);
    }
    const auto q = init_params(arch, InitScheme::uniform(), 77);
    CHECK(p.weights == q.weights);
    CHECK(p.biases == q.biases);
    const auto r = init_params(arch, InitScheme::uniform(), 78);
    CHECK(p.weights != r.weights);
}

TEST_CASE("scaled kaiming normal layer std matches sqrt(2/fan_in)*sqrt(1/k)") {
    const Architecture arch({64, 20, 10});
    double sq = 0.0;
    std::size_t n = 0;
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const auto p = init_params(arch, InitScheme::kaiming_normal(0.5), seed);
        for (std::size_t i = 0; i < arch.layer_weight_count(1); ++i) {
            sq += p.weights[i] * p.weights[i];
            ++n;
        }
    }
    const double expect = std::sqrt(2.0 / 64.0) * std::sqrt(2.0);
    CHECK(std::sqrt(sq / static_cast<double>(n)) == doctest::Approx(expect).epsilon(0.10));
    CHECK_THROWS(init_params(arch, InitScheme::kaiming_normal(0.0), 1));
    CHECK_THROWS(init_params(arch, InitScheme::kaiming_normal(-0.5), 1));
}

TEST_CASE("signed kaiming constant has fixed magnitude and random sign") {
    const Architecture arch({2, 20, 2});
    const auto p = init_params(arch, InitScheme::signed_kaiming_constant(0.5), 5);
    const double sigma1 = std::sqrt(2.0 / 2.0) * std::sqrt(2.0);
    std::size_t pos = 0;
    for (std::size_t i = 0; i < arch.layer_weight_count(1); ++i) {
        CHECK(std::abs(p.weights[i]) == doctest::Approx(sigma1));
        pos += p.weights[i] > 0;
    }
    CHECK(pos > 5);
    CHECK(pos < 35);

    const auto z = init_params(arch, InitScheme::signed_kaiming_constant(0.5, true), 5);
    for (double b : z.biases) CHECK(b == 0.0);
}

TEST_CASE("all-zero mask with zero biases annihilates the output") {
    const Architecture arch({2, 20, 2});
    auto p = init_params(arch, InitScheme::uniform(), 3);
    std::fill(p.biases.begin(), p.biases.end(), 0.0);
    const Genotype zeros(arch.weight_count());
    const auto out = forward({p, zeros}, std::vector<double>{0.3, -0.7});
    for (double v : out) CHECK(v == 0.0);
}

TEST_CASE("single-layer affine by hand") {
    NetworkParams p;
    p.arch = Architecture({1, 1});
    p.weights = {0.5};
    p.biases = {0.1};
    const Genotype ones(1, true);
    const auto out = forward({p, ones}, std::vector<double>{2.0});
    CHECK(out.size() == 1);
    CHECK(out[0] == doctest::Approx(1.1).epsilon(1e-15));
}

TEST_CASE("batched forward matches the naive oracle") {
    const Architecture arch({2, 20, 2});
    const auto p = init_params(arch, InitScheme::uniform(), 9);
    Rng rng(10);
    const auto data = gen_moons(100, 0.1, 11);

    for (int rep = 0; rep < 10; ++rep) {
        const auto mask = Genotype::random(arch.weight_count(), rng);
        for (std::size_t r = 0; r < data.rows; ++r) {
            const std::vector<double> x(data.row(r).begin(), data.row(r).end());
            const auto ref = naive_forward(p, mask, x);
            const auto got = forward({p, mask}, x);
            REQUIRE(got.size() == ref.size());
            for (std::size_t j = 0; j < ref.size(); ++j)
                CHECK(got[j] == doctest::Approx(ref[j]).epsilon(1e-9));
        }
    }
}

TEST_CASE("double and float evaluators agree with the per-row oracle") {
    const Architecture arch({2, 20, 2});
    const auto p = init_params(arch, InitScheme::uniform(), 13);
    const auto data = gen_moons(500, 0.1, 14);
    BatchEvaluator slow(p, data);
    FastBatchEvaluator fast(p, data);
    Rng rng(15);
    for (int rep = 0; rep < 20; ++rep) {
        const auto mask = Genotype::random(arch.weight_count(), rng);
        std::size_t correct = 0;
        for (std::size_t r = 0; r < data.rows; ++r) {
            const std::vector<double> x(data.row(r).begin(), data.row(r).end());
            const auto out = naive_forward(p, mask, x);
            int arg = 0;
            for (std::size_t j = 1; j < out.size(); ++j)
                if (out[j] > out[static_cast<std::size_t>(arg)]) arg = static_cast<int>(j);
            correct += arg == data.labels[r];
        }
        const double expect = static_cast<double>(correct) / static_cast<double>(data.rows);
        CHECK(slow.accuracy(mask) == doctest::Approx(expect).epsilon(1e-12));
        CHECK(fast.accuracy(mask) == doctest::Approx(expect).epsilon(2e-3));
    }
}

TEST_CASE("mask linearity: masking weights equals pre-zeroing weights") {
    const Architecture arch({3, 10, 4, 2});
    const auto p = init_params(arch, InitScheme::uniform(), 17);
    Rng rng(18);
    const auto mask = Genotype::random(arch.weight_count(), rng);

    NetworkParams zeroed = p;
    for (std::size_t i = 0; i < zeroed.weights.size(); ++i)
        zeroed.weights[i] *= mask.get(i) ? 1.0 : 0.0;
    const Genotype ones(arch.weight_count(), true);

    const std::vector<double> x{0.2, -0.4, 0.9};
    const auto a = forward({p, mask}, x);
    const auto b = forward({zeroed, ones}, x);
    for (std::size_t j = 0; j < a.size(); ++j) CHECK(a[j] == b[j]); // exact
}

TEST_CASE("all-ones mask reproduces the dense network") {
    const Architecture arch({2, 5, 2});
    const auto p = init_params(arch, InitScheme::uniform(), 19);
    const Genotype ones(arch.weight_count(), true);
    const std::vector<double> x{0.5, 0.5};
    std::vector<double> act = x;
    // dense reference without any mask logic
    std::size_t woff = 0, boff = 0;
    for (std::size_t l = 1; l < p.arch.layers.size(); ++l) {
        std::vector<double> next(static_cast<std::size_t>(p.arch.layers[l]));
        for (std::size_t j = 0; j < next.size(); ++j) {
            double a = p.biases[boff + j];
            for (std::size_t i = 0; i < act.size(); ++i) a += p.weights[woff + j * act.size() + i] * act[i];
            next[j] = (l + 1 < p.arch.layers.size() && a < 0.0) ? 0.0 : a;
        }
        woff += act.size() * next.size();
        boff += next.size();
        act = std::move(next);
    }
    const auto out = forward({p, ones}, x);
    for (std::size_t j = 0; j < act.size(); ++j) CHECK(out[j] == act[j]);
}

TEST_CASE("predict uses argmax with lowest-index tie break") {
    NetworkParams p;
    p.arch = Architecture({2, 2});
    p.weights = {1.0, 0.0, 1.0, 0.0}; // both outputs equal x0
    p.biases = {0.0, 0.0};
    const Genotype ones(4, true);
    Dataset d;
    d.rows = 2;
    d.cols = 2;
    d.x = {0.5, 0.0, -0.3, 0.0};
    d.labels = {0, 0};
    d.n_classes = 2;
    const auto labels = predict({p, ones}, d);
    CHECK(labels[0] == 0); // tie -> class 0
    CHECK(labels[1] == 0);

    p.weights = {0.2, 0.0, 0.9, 0.0}; // output 1 larger for positive x0
    const auto labels2 = predict({p, ones}, d);
    CHECK(labels2[0] == 1);
}

TEST_CASE("all-zero mask with zero biases predicts class 0 everywhere") {
    const Architecture arch({2, 20, 2});
    auto p = init_params(arch, InitScheme::uniform(), 23);
    std::fill(p.biases.begin(), p.biases.end(), 0.0);
    const Genotype zeros(arch.weight_count());
    const auto data = gen_moons(50, 0.05, 24);
    for (int y : predict({p, zeros}, data)) CHECK(y == 0);
    // balanced binary data -> base rate 0.5
    CHECK(accuracy({p, zeros}, data) == doctest::Approx(0.5));

    Dataset all_zero = data;
    std::fill(all_zero.labels.begin(), all_zero.labels.end(), 0);
    CHECK(accuracy({p, zeros}, all_zero) == 1.0);
}

TEST_CASE("accuracy equals a confusion-matrix recount") {
    const Architecture arch({2, 100, 10});
    const auto p = init_params(arch, InitScheme::uniform(), 29);
    const auto data = gen_blobs(10, 100, 30);
    Rng rng(31);
    const auto mask = Genotype::random(arch.weight_count(), rng);

    const auto preds = predict({p, mask}, data);
    std::size_t confusion[10][10] = {};
    for (std::size_t r = 0; r < data.rows; ++r)
        confusion[data.labels[r]][preds[r]]++;
    std::size_t diag = 0, total = 0;
    for (int a = 0; a < 10; ++a)
        for (int b = 0; b < 10; ++b) {
            diag += a == b ? confusion[a][b] : 0;
            total += confusion[a][b];
        }
    CHECK(total == data.rows);
    CHECK(accuracy({p, mask}, data) ==
          doctest::Approx(static_cast<double>(diag) / static_cast<double>(total)).epsilon(1e-12));

    Dataset empty;
    empty.cols = 2;
    empty.n_classes = 2;
    CHECK_THROWS(accuracy({p, mask}, empty));
}

TEST_CASE("forward rejects dimension mismatches") {
    const Architecture arch({2, 3, 2});
    const auto p = init_params(arch, InitScheme::uniform(), 37);
    const Genotype ones(arch.weight_count(), true);
    CHECK_THROWS(forward({p, ones}, std::vector<double>{1.0}));
    const Genotype wrong(5, true);
    CHECK_THROWS(forward({p, wrong}, std::vector<double>{1.0, 2.0}));
}
