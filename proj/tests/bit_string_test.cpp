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


#include <gtest/gtest.h>

#include <set>

#include "qsdc/bit_string.hpp"
#include "qsdc/rng.hpp"

namespace qsdc {
namespace {

TEST(BitStringTest, ParsesAndPrints) {
    const auto b = BitString::parse("011101");
    EXPECT_EQ(b.size(), 6u);
    EXPECT_FALSE(b[0]);
    EXPECT_TRUE(b[1]);
    EXPECT_EQ(b.str(), "011101");
    EXPECT_EQ(b.count_ones(), 4u);
}

TEST(BitStringTest, RejectsNonBinaryCharacters) {
    EXPECT_THROW(BitString::parse("01x"), std::invalid_argument);
    EXPECT_THROW(BitString::parse("0 1"), std::invalid_argument);
}

TEST(BitStringTest, UnsignedRoundTrip) {
    EXPECT_EQ(BitString::from_uint(360, 9).str(), "101101000");
    EXPECT_EQ(BitString::parse("101101000").to_uint(), 360u);
    EXPECT_EQ(BitString::from_uint(7, 3).str(), "111");
    for (std::uint64_t v = 0; v < 512; ++v) EXPECT_EQ(BitString::from_uint(v, 9).to_uint(), v);
}

TEST(BitStringTest, XorIsBitwise) {
    EXPECT_EQ((BitString::parse("0111") ^ BitString::parse("1001")).str(), "1110");
    EXPECT_THROW(BitString::parse("01") ^ BitString::parse("011"), std::invalid_argument);
}

TEST(BitStringTest, BitLength) {
    EXPECT_EQ(bit_length(1), 1u);
    EXPECT_EQ(bit_length(7), 3u);
    EXPECT_EQ(bit_length(255), 8u);
    EXPECT_EQ(bit_length(256), 9u);
    EXPECT_EQ(bit_length(360), 9u);
}

TEST(BitStringTest, RandomIsDeterministicPerSeed) {
    Rng a(42), b(42), c(43);
    const auto x = BitString::random(64, a);
    EXPECT_EQ(x, BitString::random(64, b));
    EXPECT_NE(x, BitString::random(64, c));
}

TEST(RngTest, BelowStaysInRange) {
    Rng rng(1);
    std::vector<int> hist(6, 0);
    for (int i = 0; i < 60000; ++i) ++hist[rng.below(6)];
    for (int h : hist) EXPECT_NEAR(h, 10000, 400);
}

TEST(RngTest, SortedSubsetIsSortedAndDistinct) {
    Rng rng(7);
    for (int rep = 0; rep < 200; ++rep) {
        const auto s = rng.sorted_subset(30, 9);
        ASSERT_EQ(s.size(), 9u);
        EXPECT_TRUE(std::is_sorted(s.begin(), s.end()));
        EXPECT_EQ(std::set<std::size_t>(s.begin(), s.end()).size(), 9u);
        EXPECT_LT(s.back(), 30u);
    }
}

TEST(RngTest, SortedSubsetIsUniformOverSlots) {
    Rng rng(11);
    std::vector<int> hist(10, 0);
    for (int rep = 0; rep < 50000; ++rep) {
        for (auto v : rng.sorted_subset(10, 3)) ++hist[v];
    }
    for (int h : hist) EXPECT_NEAR(h, 15000, 600);
}

TEST(RngTest, DerivedSeedsDiffer) {
    std::set<std::uint64_t> seen;
    for (std::uint64_t s = 0; s < 1000; ++s) seen.insert(derive_seed(5, s));
    EXPECT_EQ(seen.size(), 1000u);
    EXPECT_NE(derive_seed(1, 2), derive_seed(2, 1));
}

}  // namespace
}  // namespace qsdc
