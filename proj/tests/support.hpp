#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "hjholder/extremal.hpp"

namespace testing_support {

/// Uniform double in [lo, hi) from raw 64-bit draws; identical on every platform.
inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

inline hjholder::SymMatrix random_sym(std::mt19937_64& rng, std::size_t d, double scale = 1.0) {
    std::vector<double> a(d * d);
    for (auto& v : a) v = uniform(rng, -scale, scale);
    return hjholder::SymMatrix(d, a);
}

/// B B^T with a random B: nonnegative definite.
inline hjholder::SymMatrix random_psd(std::mt19937_64& rng, std::size_t d, double scale = 1.0) {
    std::vector<double> b(d * d);
    for (auto& v : b) v = uniform(rng, -scale, scale);
    hjholder::SymMatrix out(d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i; j < d; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < d; ++k) s += b[i * d + k] * b[j * d + k];
            out.set(i, j, s);
        }
    return out;
}

}  // namespace testing_support
