#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "slt/rng.hpp"

namespace slt {

struct Dataset {
    std::vector<double> x; // row-major, rows * cols
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<int> labels;
    int n_classes = 0;

    std::span<const double> row(std::size_t r) const {
        return {x.data() + r * cols, cols};
    }

    void check() const {
        if (x.size() != rows * cols) throw std::invalid_argument("dataset: bad matrix shape");
        if (labels.size() != rows) throw std::invalid_argument("dataset: label count mismatch");
        if (n_classes < 2) throw std::invalid_argument("dataset: need >= 2 classes");
        for (int y : labels)
            if (y < 0 || y >= n_classes) throw std::invalid_argument("dataset: label out of range");
    }
};

struct SplitDataset {
    Dataset train;
    Dataset test;
    double test_fraction = 0.0;
};

// Two interleaving half circles; class 0 on (cos t, sin t), class 1 on
// (1 - cos t, 0.5 - sin t), t uniform on [0, pi], plus per-coordinate
// Gaussian noise.
inline Dataset gen_moons(std::size_t n, double noise_sigma, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("gen_moons: n must be >= 2");
    const std::size_t n0 = (n + 1) / 2;
    Dataset d;
    d.rows = n;
    d.cols = 2;
    d.n_classes = 2;
    d.x.resize(n * 2);
    d.labels.resize(n);
    Rng rng(seed);
    constexpr double pi = 3.14159265358979323846;
    for (std::size_t i = 0; i < n; ++i) {
        const bool cls1 = i >= n0;
        const double t = rng.uniform(0.0, pi);
        double px = cls1 ? 1.0 - std::cos(t) : std::cos(t);
        double py = cls1 ? 0.5 - std::sin(t) : std::sin(t);
        px += noise_sigma * rng.normal();
        py += noise_sigma * rng.normal();
        d.x[i * 2] = px;
        d.x[i * 2 + 1] = py;
        d.labels[i] = cls1 ? 1 : 0;
    }
    return d;
}

// Class 0 on the unit circle, class 1 on a circle of radius `factor`,
// uniform angles, Gaussian noise per coordinate.
inline Dataset gen_circles(std::size_t n, double noise_sigma, double factor, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("gen_circles: n must be >= 2");
    if (!(factor > 0.0 && factor < 1.0))
        throw std::invalid_argument("gen_circles: factor must be in (0, 1)");
    const std::size_t n0 = (n + 1) / 2;
    Dataset d;
    d.rows = n;
    d.cols = 2;
    d.n_classes = 2;
    d.x.resize(n * 2);
    d.labels.resize(n);
    Rng rng(seed);
    constexpr double pi = 3.14159265358979323846;
    for (std::size_t i = 0; i < n; ++i) {
        const bool cls1 = i >= n0;
        const double r = cls1 ? factor : 1.0;
        const double t = rng.uniform(0.0, 2.0 * pi);
        d.x[i * 2] = r * std::cos(t) + noise_sigma * rng.normal();
        d.x[i * 2 + 1] = r * std::sin(t) + noise_sigma * rng.normal();
        d.labels[i] = cls1 ? 1 : 0;
    }
    return d;
}

namespace detail {
// Cluster centers sit on a circle of radius 10 with unit cluster noise,
// so adjacent centers stay >= 6 sigma apart for up to 10 classes and the
// clusters never overlap visually.
constexpr double blob_center_radius = 10.0;
constexpr double blob_cluster_sigma = 1.0;

inline void blob_center(int cls, int n_classes, double& cx, double& cy) {
    constexpr double pi = 3.14159265358979323846;
    const double ang = 2.0 * pi * cls / n_classes;
    cx = blob_center_radius * std::cos(ang);
    cy = blob_center_radius * std::sin(ang);
}
} // namespace detail

inline Dataset gen_blobs(int n_classes, std::size_t per_cluster, std::uint64_t seed) {
    if (n_classes < 2 || n_classes > 10)
        throw std::invalid_argument("gen_blobs: n_classes must be in [2, 10]");
    if (per_cluster < 1) throw std::invalid_argument("gen_blobs: per_cluster must be >= 1");
    Dataset d;
    d.rows = static_cast<std::size_t>(n_classes) * per_cluster;
    d.cols = 2;
    d.n_classes = n_classes;
    d.x.resize(d.rows * 2);
    d.labels.resize(d.rows);
    Rng rng(seed);
    std::size_t i = 0;
    for (int c = 0; c < n_classes; ++c) {
        double cx, cy;
        detail::blob_center(c, n_classes, cx, cy);
        for (std::size_t k = 0; k < per_cluster; ++k, ++i) {
            d.x[i * 2] = cx + detail::blob_cluster_sigma * rng.normal();
            d.x[i * 2 + 1] = cy + detail::blob_cluster_sigma * rng.normal();
            d.labels[i] = c;
        }
    }
    return d;
}

namespace detail {
inline std::vector<std::string> split_csv_line(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    return out;
}
} // namespace detail

// Reads the checked-in UCI optical-digits CSV (64 integer pixels 0..16 and
// a label per row; optional f0,...,f63,label header). When `class_subset`
// is given, rows are filtered and labels re-indexed densely 0..k-1 in
// ascending original order.
inline Dataset load_digits(const std::string& path,
                           const std::optional<std::vector<int>>& class_subset = std::nullopt) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_digits: cannot open " + path);

    std::set<int> subset;
    if (class_subset) {
        for (int c : *class_subset) {
            if (c < 0 || c > 9) throw std::invalid_argument("load_digits: subset label out of 0..9");
            subset.insert(c);
        }
        if (subset.empty()) throw std::invalid_argument("load_digits: empty class subset");
    }
    std::vector<int> relabel(10, -1);
    if (class_subset) {
        int next = 0;
        for (int c : subset) relabel[static_cast<std::size_t>(c)] = next++;
    }

    Dataset d;
    d.cols = 64;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (lineno == 1 && line.rfind("f0,", 0) == 0) continue; // header
        const auto fields = detail::split_csv_line(line);
        if (fields.size() != 65)
            throw std::runtime_error("load_digits: malformed row " + std::to_string(lineno));
        std::array<double, 64> px;
        for (std::size_t j = 0; j < 64; ++j) {
            char* end = nullptr;
            const long v = std::strtol(fields[j].c_str(), &end, 10);
            if (end == fields[j].c_str() || *end != '\0' || v < 0 || v > 16)
                throw std::runtime_error("load_digits: bad pixel at row " + std::to_string(lineno));
            px[j] = static_cast<double>(v);
        }
        char* end = nullptr;
        const long y = std::strtol(fields[64].c_str(), &end, 10);
        if (end == fields[64].c_str() || *end != '\0' || y < 0 || y > 9)
            throw std::runtime_error("load_digits: unknown label at row " + std::to_string(lineno));
        if (class_subset && !subset.count(static_cast<int>(y))) continue;
        d.x.insert(d.x.end(), px.begin(), px.end());
        d.labels.push_back(class_subset ? relabel[static_cast<std::size_t>(y)]
                                        : static_cast<int>(y));
    }
    d.rows = d.labels.size();
    d.n_classes = class_subset ? static_cast<int>(subset.size()) : 10;
    if (d.rows == 0) throw std::runtime_error("load_digits: no rows after filtering");
    d.check();
    return d;
}

// Stratified random partition: per-class counts are apportioned by largest
// remainder so the total test size is round(rows * fraction) exactly and
// class proportions stay within one sample per class.
inline SplitDataset split(const Dataset& data, double test_fraction, std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw std::invalid_argument("split: test_fraction must be in (0, 1)");
    data.check();

    std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(data.n_classes));
    for (std::size_t i = 0; i < data.rows; ++i)
        by_class[static_cast<std::size_t>(data.labels[i])].push_back(i);

    Rng rng(seed);
    for (auto& idx : by_class) {
        for (std::size_t i = idx.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(rng.below(i));
            std::swap(idx[i - 1], idx[j]);
        }
    }

    const auto total_test = static_cast<std::size_t>(
        std::llround(static_cast<double>(data.rows) * test_fraction));
    std::vector<std::size_t> take(by_class.size());
    std::vector<std::pair<double, std::size_t>> rema; // (-fractional part, class)
    std::size_t assigned = 0;
    for (std::size_t c = 0; c < by_class.size(); ++c) {
        const double want = static_cast<double>(by_class[c].size()) * test_fraction;
        take[c] = static_cast<std::size_t>(std::floor(want));
        take[c] = std::min(take[c], by_class[c].size());
        assigned += take[c];
        rema.emplace_back(-(want - std::floor(want)), c);
    }
    std::sort(rema.begin(), rema.end());
    for (const auto& [negfrac, c] : rema) {
        if (assigned >= total_test) break;
        if (take[c] < by_class[c].size()) {
            ++take[c];
            ++assigned;
        }
    }

    std::vector<std::size_t> test_rows, train_rows;
    for (std::size_t c = 0; c < by_class.size(); ++c) {
        for (std::size_t k = 0; k < by_class[c].size(); ++k)
            (k < take[c] ? test_rows : train_rows).push_back(by_class[c][k]);
    }
    // Shuffle assembled row orders so neither side is label-sorted.
    auto shuffle_rows = [&rng](std::vector<std::size_t>& v) {
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[static_cast<std::size_t>(rng.below(i))]);
    };
    shuffle_rows(train_rows);
    shuffle_rows(test_rows);

    auto gather = [&data](const std::vector<std::size_t>& idx) {
        Dataset out;
        out.rows = idx.size();
        out.cols = data.cols;
        out.n_classes = data.n_classes;
        out.x.reserve(idx.size() * data.cols);
        out.labels.reserve(idx.size());
        for (std::size_t r : idx) {
            const auto row = data.row(r);
            out.x.insert(out.x.end(), row.begin(), row.end());
            out.labels.push_back(data.labels[r]);
        }
        return out;
    };

    SplitDataset s;
    s.train = gather(train_rows);
    s.test = gather(test_rows);
    s.test_fraction = test_fraction;
    if (s.train.rows == 0 || s.test.rows == 0)
        throw std::invalid_argument("split: degenerate partition");
    return s;
}

// Per-feature affine map fitted on the train min/max and applied to both
// sides; constant features collapse to `lo`.
inline SplitDataset minmax_normalize(const SplitDataset& s, double lo, double hi) {
    if (!(hi > lo)) throw std::invalid_argument("minmax_normalize: hi must exceed lo");
    SplitDataset out = s;
    const std::size_t cols = s.train.cols;
    std::vector<double> fmin(cols, std::numeric_limits<double>::infinity());
    std::vector<double> fmax(cols, -std::numeric_limits<double>::infinity());
    for (std::size_t r = 0; r < s.train.rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
            const double v = s.train.x[r * cols + c];
            fmin[c] = std::min(fmin[c], v);
            fmax[c] = std::max(fmax[c], v);
        }
    auto apply = [&](Dataset& d) {
        for (std::size_t r = 0; r < d.rows; ++r)
            for (std::size_t c = 0; c < cols; ++c) {
                double& v = d.x[r * cols + c];
                v = fmax[c] > fmin[c] ? lo + (v - fmin[c]) * (hi - lo) / (fmax[c] - fmin[c]) : lo;
            }
    };
    apply(out.train);
    apply(out.test);
    return out;
}

// --- CSV interchange (header f0,...,f{d-1},label) ---

inline void save_dataset_csv(const Dataset& d, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_dataset_csv: cannot open " + path);
    for (std::size_t c = 0; c < d.cols; ++c) out << 'f' << c << ',';
    out << "label\n";
    char buf[64];
    for (std::size_t r = 0; r < d.rows; ++r) {
        for (std::size_t c = 0; c < d.cols; ++c) {
            std::snprintf(buf, sizeof buf, "%.17g", d.x[r * d.cols + c]);
            out << buf << ',';
        }
        out << d.labels[r] << '\n';
    }
    if (!out) throw std::runtime_error("save_dataset_csv: write failed for " + path);
}

inline Dataset load_dataset_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_dataset_csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("load_dataset_csv: empty file " + path);
    const auto header = detail::split_csv_line(line);
    if (header.size() < 2 || header.back() != "label")
        throw std::runtime_error("load_dataset_csv: bad header in " + path);
    Dataset d;
    d.cols = header.size() - 1;
    int max_label = 0;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto fields = detail::split_csv_line(line);
        if (fields.size() != header.size())
            throw std::runtime_error("load_dataset_csv: malformed row " + std::to_string(lineno));
        for (std::size_t c = 0; c < d.cols; ++c) {
            char* end = nullptr;
            const double v = std::strtod(fields[c].c_str(), &end);
            if (end == fields[c].c_str())
                throw std::runtime_error("load_dataset_csv: bad value at row " + std::to_string(lineno));
            d.x.push_back(v);
        }
        d.labels.push_back(std::atoi(fields.back().c_str()));
        max_label = std::max(max_label, d.labels.back());
    }
    d.rows = d.labels.size();
    d.n_classes = max_label + 1;
    d.check();
    return d;
}

} // namespace slt
