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

#ifndef QSDC_ECC_HPP
#define QSDC_ECC_HPP

#include <cstddef>
#include <vector>

#include "qsdc/bit_string.hpp"
#include "qsdc/quantum_core.hpp"

namespace qsdc {

/// Bit-flip repetition code of odd distance d.
class RepetitionCode {
  public:
    explicit RepetitionCode(int distance);

    int distance() const noexcept { return d_; }
    /// Largest number of flips the code always corrects.
    int corrects() const noexcept { return (d_ - 1) / 2; }

    friend bool operator==(const RepetitionCode&, const RepetitionCode&) = default;

  private:
    int d_;
};

/// Where the copies of each logical qubit sit in the transmitted sequence.
/// Contiguous: copy j of logical i at i*d + j. Interleaved: at j*L + i.
struct RepetitionLayout {
    std::size_t logical_length = 0;
    int distance = 1;
    bool interleaved = false;

    std::size_t physical_length() const { return logical_length * static_cast<std::size_t>(distance); }
    std::size_t physical_index(std::size_t logical, int copy) const;

    /// Expands a logical sequence into its physical copies.
    template <typename T>
    std::vector<T> expand(const std::vector<T>& logical) const {
        std::vector<T> out;
        out.reserve(physical_length());
        for (std::size_t p = 0; p < physical_length(); ++p) {
            out.push_back(logical[logical_of(p)]);
        }
        return out;
    }

    std::size_t logical_of(std::size_t physical) const;
};

/// d identical preparations of the computational basis state |bit>.
std::vector<Qubit> encode_repetition(bool bit, int distance);

/// Majority vote; `outcomes` must have odd length.
bool decode_majority(const BitString& outcomes);
bool decode_majority(const BitString& outcomes, int distance);

/// Probability that more than half of d independent flips (each with
/// probability p) occur.
double logical_error_rate(int distance, double p);

/// Leading-order break-even test C(d, t+1) p^(t+1) < p with t = (d-1)/2; for
/// d = 3 this is 3p^2 < p, i.e. 0 < p < 1/3.
bool threshold_check(double p, int distance = 3);

/// The p at which the leading-order test switches: 1/C(d,t+1)^(1/t).
double leading_order_threshold(int distance);

/// Largest p* in (0, 1) below which logical_error_rate(d, p) < p exactly
/// (1/2 for every d >= 3).
double exact_break_even(int distance);

/// Largest n with (1 - p_error)^(gamma n) >= success_threshold.
long max_channel_length(double gamma, double p_error, double success_threshold);

}  // namespace qsdc

#endif  // QSDC_ECC_HPP
