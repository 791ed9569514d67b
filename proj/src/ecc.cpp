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

#include "qsdc/ecc.hpp"

#include <cmath>
#include <stdexcept>

#include "qsdc/noise.hpp"

namespace qsdc {

namespace {

void require_odd(int d) {
    if (d < 1 || d % 2 == 0) throw std::invalid_argument("repetition distance must be odd and positive");
}

double choose(int n, int k) {
    double c = 1.0;
    for (int i = 1; i <= k; ++i) {
        c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
    }
    return c;
}

}  // namespace

RepetitionCode::RepetitionCode(int distance) : d_(distance) { require_odd(distance); }

std::size_t RepetitionLayout::physical_index(std::size_t logical, int copy) const {
    const auto d = static_cast<std::size_t>(distance);
    const auto j = static_cast<std::size_t>(copy);
    return interleaved ? j * logical_length + logical : logical * d + j;
}

std::size_t RepetitionLayout::logical_of(std::size_t physical) const {
    const auto d = static_cast<std::size_t>(distance);
    return interleaved ? physical % logical_length : physical / d;
}

std::vector<Qubit> encode_repetition(bool bit, int distance) {
    require_odd(distance);
    return std::vector<Qubit>(static_cast<std::size_t>(distance), bit ? ket1() : ket0());
}

bool decode_majority(const BitString& outcomes) {
    if (outcomes.size() % 2 == 0) throw std::invalid_argument("majority vote needs an odd number of outcomes");
    return 2 * outcomes.count_ones() > outcomes.size();
}

bool decode_majority(const BitString& outcomes, int distance) {
    require_odd(distance);
    if (outcomes.size() != static_cast<std::size_t>(distance)) {
        throw std::invalid_argument("outcome count does not match code distance");
    }
    return decode_majority(outcomes);
}

double logical_error_rate(int distance, double p) {
    require_odd(distance);
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("flip probability must be in [0, 1]");
    double total = 0.0;
    for (int j = (distance + 1) / 2; j <= distance; ++j) {
        total += choose(distance, j) * std::pow(p, j) * std::pow(1.0 - p, distance - j);
    }
    return total;
}

bool threshold_check(double p, int distance) {
    require_odd(distance);
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("flip probability must be in [0, 1]");
    const int t = (distance - 1) / 2;
    if (p == 0.0 || t == 0) return false;
    // C(d, t+1) p^(t+1) < p, divided through by p > 0.
    return choose(distance, t + 1) * std::pow(p, t) < 1.0;
}

double leading_order_threshold(int distance) {
    require_odd(distance);
    const int t = (distance - 1) / 2;
    if (t == 0) return 0.0;
    return std::pow(choose(distance, t + 1), -1.0 / t);
}

double exact_break_even(int distance) {
    require_odd(distance);
    if (distance == 1) return 0.0;
    // Sign change of logical(p) - p inside [1/4, 3/4].
    double lo = 0.25;
    double hi = 0.75;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (logical_error_rate(distance, mid) < mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo;
}

long max_channel_length(double gamma, double p_error, double success_threshold) {
    if (!(gamma > 0.0) || !(p_error > 0.0 && p_error < 1.0) || !(success_threshold > 0.0 && success_threshold <= 1.0)) {
        throw std::invalid_argument("max_channel_length needs gamma > 0, p_error in (0,1), threshold in (0,1]");
    }
    long n = static_cast<long>(std::floor(std::log(success_threshold) / (gamma * std::log1p(-p_error))));
    n = std::max(n, 0L);
    while (predicted_success(static_cast<double>(n + 1), p_error, gamma) >= success_threshold) ++n;
    while (n > 0 && predicted_success(static_cast<double>(n), p_error, gamma) < success_threshold) --n;
    return n;
}

}  // namespace qsdc
