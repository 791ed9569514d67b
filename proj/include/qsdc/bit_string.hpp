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

#ifndef QSDC_BIT_STRING_HPP
#define QSDC_BIT_STRING_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "qsdc/rng.hpp"

namespace qsdc {

/// Ordered bit sequence written as "0"/"1" text, most significant first
/// when interpreted as an integer.
class BitString {
  public:
    BitString() = default;
    explicit BitString(std::size_t size, bool value = false) : bits_(size, value ? 1 : 0) {}

    /// Throws std::invalid_argument on any character other than '0' or '1'.
    static BitString parse(std::string_view text);
    static BitString from_uint(std::uint64_t value, std::size_t width);
    static BitString random(std::size_t size, Rng& rng);

    std::size_t size() const noexcept { return bits_.size(); }
    bool empty() const noexcept { return bits_.empty(); }
    bool operator[](std::size_t i) const { return bits_[i] != 0; }
    bool at(std::size_t i) const { return bits_.at(i) != 0; }
    void set(std::size_t i, bool value) { bits_.at(i) = value ? 1 : 0; }
    void push_back(bool value) { bits_.push_back(value ? 1 : 0); }

    std::size_t count_ones() const noexcept;
    std::uint64_t to_uint() const;
    std::string str() const;

    friend BitString operator^(const BitString& a, const BitString& b);
    friend bool operator==(const BitString&, const BitString&) = default;

  private:
    std::vector<std::uint8_t> bits_;
};

std::ostream& operator<<(std::ostream& os, const BitString& bits);

/// Number of bits in the minimal binary representation of `value` (>= 1).
std::size_t bit_length(std::uint64_t value) noexcept;

}  // namespace qsdc

#endif  // QSDC_BIT_STRING_HPP
