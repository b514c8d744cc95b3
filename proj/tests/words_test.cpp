#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "upat/words.hpp"

using namespace upat;

namespace {

Word w(std::string_view s, std::size_t m) { return Word::parse(s, m); }

MorphicPermutation perm(std::vector<Letter> images) { return MorphicPermutation(std::move(images)); }

MorphicPermutation random_perm(std::size_t m, std::mt19937_64& rng) {
  std::vector<Letter> images(m);
  for (std::size_t a = 0; a < m; ++a) images[a] = static_cast<Letter>(a);
  std::shuffle(images.begin(), images.end(), rng);
  return MorphicPermutation(images);
}

}  // namespace

TEST(Word, ParsesDigitsAndDelimitedForms) {
  EXPECT_EQ(w("0110", 2).str(), "0110");
  const Word big = Word::parse("10,3,0", 12);
  ASSERT_EQ(big.size(), 3u);
  EXPECT_EQ(big[0], 10);
  EXPECT_EQ(big.str(), "10,3,0");
  EXPECT_THROW(Word::parse("0120", 2), std::invalid_argument);
  EXPECT_THROW(Word::parse("01a", 3), std::invalid_argument);
  EXPECT_THROW(Word::parse("0123", 12), std::invalid_argument);
  EXPECT_TRUE(w("", 2).empty());
}

TEST(Word, FactorsAndPrefixes) {
  const Word x = w("012021", 3);
  EXPECT_EQ(x.factor(2, 3).str(), "202");
  EXPECT_TRUE(w("012", 3).is_prefix_of(x));
  EXPECT_FALSE(w("02", 3).is_prefix_of(x));
  EXPECT_THROW(x.factor(5, 3), std::out_of_range);
}

TEST(PermPower, Examples) {
  const auto c3 = perm({1, 2, 0});
  EXPECT_TRUE(power(c3, 0).is_identity());
  EXPECT_EQ(power(c3, 2), perm({2, 0, 1}));
  EXPECT_TRUE(power(c3, order(c3)).is_identity());
  EXPECT_EQ(power(c3, 3'000'000'001ULL), c3);
}

TEST(Order, Examples) {
  EXPECT_EQ(order(MorphicPermutation::identity(5)), 1u);
  EXPECT_EQ(order(MorphicPermutation::rotation(5)), 5u);
  EXPECT_EQ(order(perm({1, 0, 3, 4, 2})), 6u);
}

TEST(OrbitLength, Examples) {
  const auto f = perm({1, 2, 0, 3, 4});
  EXPECT_EQ(orbit_length(MorphicPermutation::identity(4), 2), 1u);
  EXPECT_EQ(orbit_length(f, 0), 3u);
  EXPECT_EQ(orbit_length(f, 4), 1u);
}

TEST(ApplyPerm, Examples) {
  EXPECT_EQ(apply(perm({1, 0}), w("0110", 2)).str(), "1001");
  EXPECT_EQ(apply(MorphicPermutation::identity(3), w("0121", 3)).str(), "0121");
  EXPECT_EQ(apply(perm({1, 2, 0}), w("012", 3)).str(), "120");
  EXPECT_THROW(apply(perm({1, 0}), w("012", 3)), std::invalid_argument);
}

TEST(MorphicPermutation, RejectsNonBijections) {
  EXPECT_THROW(perm({0, 0}), std::invalid_argument);
  EXPECT_THROW(perm({0, 2}), std::invalid_argument);
}

TEST(Morphism, ApplyExamples) {
  EXPECT_EQ(thue_morse_morphism().apply(w("0", 2)).str(), "01");
  EXPECT_EQ(ternary_thue_morphism().apply(w("01", 3)).str(), "01202");
  EXPECT_TRUE(thue_morse_morphism().apply(Word(2)).empty());
  EXPECT_THROW(thue_morse_morphism().apply(w("012", 3)), std::invalid_argument);
}

TEST(FixedPoint, Examples) {
  EXPECT_EQ(fixed_point_prefix(thue_morse_morphism(), 0, 8).str(), "01101001");
  EXPECT_EQ(fixed_point_prefix(ternary_thue_morphism(), 0, 9).str(), "012021012");
  EXPECT_THROW(fixed_point_prefix(ternary_thue_morphism(), 2, 5), std::invalid_argument);
  EXPECT_THROW(fixed_point_prefix(thue_morse_morphism(), 0, 0), std::invalid_argument);
}

TEST(Repetitions, Examples) {
  EXPECT_TRUE(is_square_free(w("010", 2)));
  EXPECT_FALSE(is_square_free(w("0101", 2)));
  EXPECT_FALSE(is_cube_free(w("1000", 2)));
  EXPECT_TRUE(is_cube_free(w("0011", 2)));
  EXPECT_FALSE(is_overlap_free(w("01010", 2)));
  EXPECT_TRUE(is_overlap_free(w("0110", 2)));
  EXPECT_FALSE(is_four_power_free(w("0000", 1)));
  EXPECT_TRUE(is_four_power_free(w("000", 1)));
}

// Naive factor enumeration for the repetition checkers.
namespace {

bool has_power(const Word& x, std::size_t num, std::size_t den) {
  // factor of length n with period p and n * den >= num * p, n >= 2p for squares
  const std::size_t len = x.size();
  for (std::size_t p = 1; p <= len; ++p) {
    const std::size_t n = (num * p + den - 1) / den;
    if (n > len) break;
    for (std::size_t s = 0; s + n <= len; ++s) {
      bool ok = true;
      for (std::size_t q = s + p; q < s + n && ok; ++q) ok = x[q] == x[q - p];
      if (ok) return true;
    }
  }
  return false;
}

}  // namespace

TEST(Repetitions, AgreeWithNaiveScanOnRandomWords) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t m = 2 + rng() % 2;
    const std::size_t n = rng() % 20;
    std::vector<Letter> letters(n);
    for (auto& a : letters) a = static_cast<Letter>(rng() % m);
    const Word x(letters, m);
    EXPECT_EQ(is_square_free(x), !has_power(x, 2, 1));
    EXPECT_EQ(is_cube_free(x), !has_power(x, 3, 1));
    EXPECT_EQ(is_four_power_free(x), !has_power(x, 4, 1));
    // overlap: length 2p + 1 with period p
    bool overlap = false;
    for (std::size_t p = 1; 2 * p + 1 <= n && !overlap; ++p) {
      for (std::size_t s = 0; s + 2 * p + 1 <= n && !overlap; ++s) {
        bool ok = true;
        for (std::size_t q = s + p; q < s + 2 * p + 1 && ok; ++q) ok = x[q] == x[q - p];
        overlap = ok;
      }
    }
    EXPECT_EQ(is_overlap_free(x), !overlap);
  }
}

TEST(PermPowerProperty, PowersCompose) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t m = 1 + rng() % 7;
    const auto f = random_perm(m, rng);
    const std::uint64_t ord = order(f);
    const std::uint64_t a = rng() % (3 * ord + 1);
    const std::uint64_t b = rng() % (3 * ord + 1);
    EXPECT_EQ(power(f, a + b), power(f, a) * power(f, b));
  }
}

TEST(PermPowerProperty, MatchesRepeatedApplication) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t m = 1 + rng() % 7;
    const auto f = random_perm(m, rng);
    const std::uint64_t n = rng() % 50;
    const oracle::Perm raw(f.images().begin(), f.images().end());
    for (Letter a = 0; a < m; ++a) EXPECT_EQ(power(f, n)(a), oracle::apply_times(raw, a, n));
  }
}

TEST(OrderProperty, IsLcmOfOrbitLengthsAndLeastIdentityPower) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t m = 1 + rng() % 8;
    const auto f = random_perm(m, rng);
    std::uint64_t l = 1;
    for (Letter a = 0; a < m; ++a) l = std::lcm(l, orbit_length(f, a));
    EXPECT_EQ(order(f), l);
    const oracle::Perm raw(f.images().begin(), f.images().end());
    EXPECT_EQ(order(f), oracle::order_by_iteration(raw));
  }
}

TEST(FixedPointProperty, PrefixesAreNested) {
  for (std::size_t len : {1, 5, 17, 100}) {
    for (std::size_t longer : {len, len + 1, 3 * len}) {
      EXPECT_TRUE(fixed_point_prefix(thue_morse_morphism(), 0, len)
                      .is_prefix_of(fixed_point_prefix(thue_morse_morphism(), 0, longer)));
      EXPECT_TRUE(fixed_point_prefix(ternary_thue_morphism(), 0, len)
                      .is_prefix_of(fixed_point_prefix(ternary_thue_morphism(), 0, longer)));
    }
  }
}

TEST(MorphismProperty, DistributesOverConcatenation) {
  std::mt19937_64 rng(14);
  const Morphism mu = ternary_thue_morphism();
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Letter> a(rng() % 10), b(rng() % 10);
    for (auto& x : a) x = static_cast<Letter>(rng() % 3);
    for (auto& x : b) x = static_cast<Letter>(rng() % 3);
    const Word u(a, 3), v(b, 3);
    EXPECT_EQ(mu.apply(u + v), mu.apply(u) + mu.apply(v));
  }
}

TEST(ClassicalWords, RepetitionFreedomOnShortPrefixes) {
  EXPECT_TRUE(is_cube_free(thue_morse_prefix(2000)));
  EXPECT_TRUE(is_overlap_free(thue_morse_prefix(2000)));
  EXPECT_TRUE(is_square_free(ternary_thue_prefix(2000)));
  EXPECT_FALSE(is_square_free(thue_morse_prefix(2000)));
}
