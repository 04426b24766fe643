#pragma once

#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace slt {

// Layer widths [n_0, ..., n_L] of a fully connected ReLU network with
// linear output layer. Weights of layer l (1-based) are indexed
// offset(l) + out * n_{l-1} + in; bit masks share the same convention.
struct Architecture {
    std::vector<int> layers;

    Architecture() = default;
    explicit Architecture(std::vector<int> widths) : layers(std::move(widths)) { validate(); }
    Architecture(std::initializer_list<int> widths) : layers(widths) { validate(); }

    void validate() const {
        if (layers.size() < 2) throw std::invalid_argument("architecture needs >= 2 layers");
        for (int w : layers)
            if (w < 1) throw std::invalid_argument("architecture widths must be >= 1");
    }

    std::size_t num_weight_layers() const { return layers.size() - 1; }
    int inputs() const { return layers.front(); }
    int outputs() const { return layers.back(); }

    // l in [1, L]
    std::size_t layer_weight_count(std::size_t l) const {
        return static_cast<std::size_t>(layers[l - 1]) * static_cast<std::size_t>(layers[l]);
    }

    std::size_t layer_weight_offset(std::size_t l) const {
        std::size_t off = 0;
        for (std::size_t k = 1; k < l; ++k) off += layer_weight_count(k);
        return off;
    }

    std::size_t layer_bias_offset(std::size_t l) const {
        std::size_t off = 0;
        for (std::size_t k = 1; k < l; ++k) off += static_cast<std::size_t>(layers[k]);
        return off;
    }

    std::size_t weight_count() const { return layer_weight_offset(layers.size()); }

    std::size_t bias_count() const {
        std::size_t c = 0;
        for (std::size_t k = 1; k < layers.size(); ++k) c += static_cast<std::size_t>(layers[k]);
        return c;
    }

    std::size_t weight_index(std::size_t l, std::size_t out, std::size_t in) const {
        return layer_weight_offset(l) + out * static_cast<std::size_t>(layers[l - 1]) + in;
    }

    std::string to_string() const {
        std::ostringstream os;
        os << '[';
        for (std::size_t i = 0; i < layers.size(); ++i) {
            if (i) os << ", ";
            os << layers[i];
        }
        os << ']';
        return os.str();
    }

    // Parses "2,75,2" (whitespace tolerated).
    static Architecture parse(const std::string& s) {
        std::vector<int> widths;
        std::stringstream ss(s);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            try {
                widths.push_back(std::stoi(tok));
            } catch (const std::exception&) {
                throw std::invalid_argument("bad layer list: " + s);
            }
        }
        return Architecture(std::move(widths));
    }

    bool operator==(const Architecture& o) const { return layers == o.layers; }
};

struct ParamCount {
    std::size_t weights = 0;
    std::size_t biases = 0;
};

inline ParamCount param_count(const Architecture& arch) {
    return {arch.weight_count(), arch.bias_count()};
}

// Published single-letter architectures, generalized over input width and
// output width so multi-class variants keep the lettered hidden structure.
inline Architecture lettered_architecture(char id, int n_inputs, int n_outputs) {
    switch (id) {
    case 'A': return Architecture({n_inputs, 20, n_outputs});
    case 'B': return Architecture({n_inputs, 75, n_outputs});
    case 'C': return Architecture({n_inputs, 100, n_outputs});
    case 'D': return Architecture({n_inputs, 50, 50, n_outputs});
    default: throw std::invalid_argument(std::string("unknown architecture id: ") + id);
    }
}

} // namespace slt
