// Copyright 2026 The QSDC Lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QSDC_RNG_HPP
#define QSDC_RNG_HPP

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

namespace qsdc {

/// SplitMix64 finalizer. Used to turn (seed, counter) pairs into
/// well-separated engine seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed of the independent stream `stream` under `seed`. Counter based: the
/// result depends only on the pair, never on how many streams were derived
/// before it.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
    return mix64(seed ^ mix64(stream ^ 0xD1B54A32D192ED03ULL));
}

/// Random stream used throughout the simulator.
///
/// Every draw goes through the 64-bit Mersenne Twister (whose output sequence
/// is fixed by the standard) and explicit integer-to-real conversions, so
/// results are bit-identical across standard library implementations.
class Rng {
  public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

    static constexpr result_type min() { return std::mt19937_64::min(); }
    static constexpr result_type max() { return std::mt19937_64::max(); }
    result_type operator()() { return engine_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    bool bit() { return (engine_() >> 63) != 0; }

    /// Uniform integer in [0, bound). Rejection sampling, no modulo bias.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = max() - max() % bound;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % bound;
    }

    /// `count` distinct values of [0, universe), sorted ascending (Floyd).
    std::vector<std::size_t> sorted_subset(std::size_t universe, std::size_t count) {
        std::vector<std::size_t> chosen;
        chosen.reserve(count);
        for (std::size_t j = universe - count; j < universe; ++j) {
            const auto t = static_cast<std::size_t>(below(j + 1));
            if (std::find(chosen.begin(), chosen.end(), t) == chosen.end()) {
                chosen.push_back(t);
            } else {
                chosen.push_back(j);
            }
        }
        std::sort(chosen.begin(), chosen.end());
        return chosen;
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace qsdc

#endif  // QSDC_RNG_HPP
