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

#include "qsdc/bit_string.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace qsdc {

BitString BitString::parse(std::string_view text) {
    BitString out;
    out.bits_.reserve(text.size());
    for (char ch : text) {
        if (ch != '0' && ch != '1') {
            throw std::invalid_argument("bit string may only contain '0' and '1': \"" +
                                        std::string(text) + "\"");
        }
        out.bits_.push_back(ch == '1' ? 1 : 0);
    }
    return out;
}

BitString BitString::from_uint(std::uint64_t value, std::size_t width) {
    if (width < 64 && (value >> width) != 0) {
        throw std::invalid_argument("value does not fit in requested width");
    }
    BitString out(width);
    for (std::size_t i = 0; i < width; ++i) {
        out.bits_[width - 1 - i] = static_cast<std::uint8_t>((value >> i) & 1U);
    }
    return out;
}

BitString BitString::random(std::size_t size, Rng& rng) {
    BitString out(size);
    for (auto& b : out.bits_) {
        b = rng.bit() ? 1 : 0;
    }
    return out;
}

std::size_t BitString::count_ones() const noexcept {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

std::uint64_t BitString::to_uint() const {
    if (bits_.size() > 64) {
        throw std::out_of_range("bit string longer than 64 bits");
    }
    std::uint64_t v = 0;
    for (auto b : bits_) {
        v = (v << 1) | b;
    }
    return v;
}

std::string BitString::str() const {
    std::string s(bits_.size(), '0');
    for (std::size_t i = 0; i < bits_.size(); ++i) {
        if (bits_[i]) s[i] = '1';
    }
    return s;
}

BitString operator^(const BitString& a, const BitString& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("xor of bit strings with different lengths");
    }
    BitString out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        out.bits_[i] = a.bits_[i] ^ b.bits_[i];
    }
    return out;
}

std::ostream& operator<<(std::ostream& os, const BitString& bits) { return os << bits.str(); }

std::size_t bit_length(std::uint64_t value) noexcept {
    std::size_t n = 1;
    while (value >>= 1) ++n;
    return n;
}

}  // namespace qsdc
