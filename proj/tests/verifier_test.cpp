#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "upat/verifier.hpp"

using namespace upat;

namespace {

Morphism morphism(std::initializer_list<const char*> images, std::size_t target) {
  std::vector<Word> out;
  for (const char* s : images) out.push_back(Word::parse(s, target));
  return Morphism(out);
}

ParamSet all_but_one() {
  ParamSet t;
  for (std::size_t a = 2; a <= kNumAlphas; ++a) t.insert(a);
  return t;
}

}  // namespace

TEST(HAlpha, PrefixExamples) {
  EXPECT_EQ(h_alpha_prefix(16).str(), "0123041203410234");
  EXPECT_EQ(h_alpha_prefix(32).str(), "01230412034102340132403124302134");
  for (std::size_t len : {1, 7, 100, 1001}) EXPECT_EQ(h_alpha_prefix(len).size(), len);
  EXPECT_THROW(h_alpha_prefix(0), std::invalid_argument);
}

TEST(HAlpha, ImageStructure) {
  const Morphism a = h_alpha_coding();
  ASSERT_EQ(a.source_size(), 3u);
  EXPECT_EQ(a.target_size(), 5u);
  for (const Word& img : a.images()) {
    EXPECT_EQ(img.size(), 16u);
    EXPECT_EQ(img[0], 0);
    for (Letter x = 0; x < 5; ++x) EXPECT_NE(std::find(img.begin(), img.end(), x), img.end());
  }
  EXPECT_FALSE(a.image(0) == a.image(1));
  EXPECT_FALSE(a.image(1) == a.image(2));
  EXPECT_FALSE(a.image(0) == a.image(2));
}

TEST(HAlpha, DecodesBackToTernaryThue) {
  const Morphism a = h_alpha_coding();
  const Word coded = h_alpha_prefix(16 * 500);
  const Word h = ternary_thue_prefix(500);
  for (std::size_t n = 0; n < 500; ++n) {
    const Word block = coded.factor(16 * n, 16);
    std::size_t matches = 0;
    Letter decoded = 0;
    for (Letter b = 0; b < 3; ++b) {
      if (a.image(b) == block) {
        ++matches;
        decoded = b;
      }
    }
    ASSERT_EQ(matches, 1u);
    EXPECT_EQ(decoded, h[n]);
  }
}

TEST(Gap, Examples) {
  EXPECT_EQ(max_gap_without_full_image(h_alpha_spec(), 20000), 30u);
  const MorphicWordSpec unit{"unit", ternary_thue_morphism(), 0, morphism({"0", "1", "0"}, 2)};
  EXPECT_EQ(max_gap_without_full_image(unit, 500), 0u);
  EXPECT_THROW(max_gap_without_full_image(thue_morse_spec(), 100), std::invalid_argument);
}

TEST(Gap, SingleImageGivesTwiceLengthMinusTwo) {
  // One base letter 0 -> 00, coded as a length-g image.
  const Morphism base = morphism({"00"}, 1);
  for (std::size_t g : {2, 3, 5, 9}) {
    std::string img = "0";
    for (std::size_t q = 1; q < g; ++q) img.push_back(q % 2 ? '1' : '0');
    const MorphicWordSpec spec{"one", base, 0, morphism({img.c_str()}, 2)};
    EXPECT_EQ(max_gap_without_full_image(spec, 10 * g), 2 * (g - 1)) << g;
  }
}

TEST(Gap, MatchesDirectFactorScan) {
  // Every factor [x, y) checked against every image interval.
  const MorphicWordSpec spec = h_alpha_spec();
  const std::size_t len = 800;
  std::vector<std::pair<std::size_t, std::size_t>> images;
  const Word h = ternary_thue_prefix(len / 16 + 2);
  std::size_t pos = 0;
  for (std::size_t n = 0; n < h.size(); ++n) {
    images.emplace_back(pos, pos + 16);
    pos += 16;
  }
  std::size_t best = 0;
  for (std::size_t x = 0; x < len; ++x) {
    for (std::size_t y = x + 1; y <= len; ++y) {
      bool full = false;
      for (auto [s, e] : images) full = full || (s >= x && e <= y);
      if (full) break;
      best = std::max(best, y - x);
    }
  }
  EXPECT_EQ(max_gap_without_full_image(spec, len), best);
}

TEST(Certificate, TernaryThueHasNoFourPowersOrSquares) {
  ParamSet with_squares{2, 5, 10, 11};
  const auto cert =
      verify_prefix_avoids(ternary_thue_spec(), with_squares, PermModel::AllPermutations, 10, 3000);
  EXPECT_EQ(cert.status, CertificateStatus::Clean);
  EXPECT_EQ(cert.checked_through, 3000u);
  EXPECT_FALSE(cert.gap.has_value());
}

TEST(Certificate, AlternatingWordHasWitness) {
  const MorphicWordSpec alt{"alt", morphism({"01", "01"}, 2), 0, {}};
  EXPECT_EQ(alt.prefix(8).str(), "01010101");
  const auto cert = verify_prefix_avoids(alt, ParamSet{11}, PermModel::AllPermutations, 2, 8);
  ASSERT_EQ(cert.status, CertificateStatus::Witness);
  EXPECT_EQ(cert.witness->block_length, 1u);
  EXPECT_EQ(cert.witness->permutation, MorphicPermutation({1, 0}));
  EXPECT_TRUE(witness_is_valid(*cert.witness, alt.prefix(8)));
}

TEST(Certificate, HAlphaCleanOnShortPrefix) {
  const auto cert =
      verify_prefix_avoids(h_alpha_spec(), all_but_one(), PermModel::AllPermutations, 30, 600);
  EXPECT_EQ(cert.status, CertificateStatus::Clean);
  EXPECT_EQ(cert.gap, 30u);
}

TEST(Certificate, HAlphaContainsAlphaOneInstances) {
  const auto cert =
      verify_prefix_avoids(h_alpha_spec(), ParamSet{1}, PermModel::AllPermutations, 30, 600);
  EXPECT_EQ(cert.status, CertificateStatus::Witness);
}

TEST(Certificate, MonotoneInBounds) {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 6; ++trial) {
    ParamSet forbidden;
    for (std::size_t a = 1; a <= kNumAlphas; ++a) {
      if (rng() % 2) forbidden.insert(a);
    }
    if (forbidden.empty()) forbidden.insert(3);
    const auto big = verify_prefix_avoids(h_alpha_spec(), forbidden, PermModel::AllPermutations, 8, 400);
    const auto small =
        verify_prefix_avoids(h_alpha_spec(), forbidden, PermModel::AllPermutations, 5, 250);
    if (big.status == CertificateStatus::Clean) EXPECT_EQ(small.status, CertificateStatus::Clean);
    if (small.status == CertificateStatus::Witness) {
      EXPECT_EQ(big.status, CertificateStatus::Witness);
    }
  }
}

TEST(Certificate, ThreadCountDoesNotChangeResult) {
  for (const ParamSet& forbidden : {ParamSet{1}, all_but_one(), ParamSet{3, 4}}) {
    const auto one = verify_prefix_avoids(h_alpha_spec(), forbidden, PermModel::AllPermutations, 12, 500);
    const auto three = verify_prefix_avoids(h_alpha_spec(), forbidden, PermModel::AllPermutations,
                                            12, 500, {3, 0});
    EXPECT_EQ(one.status, three.status);
    EXPECT_EQ(one.checked_through, three.checked_through);
    if (one.witness) EXPECT_EQ(one.witness->start, three.witness->start);
  }
}

TEST(Certificate, WorkBudgetGivesPartial) {
  const auto cert = verify_prefix_avoids(h_alpha_spec(), all_but_one(), PermModel::AllPermutations,
                                         30, 3000, {1, 1000});
  EXPECT_EQ(cert.status, CertificateStatus::Partial);
  EXPECT_LT(cert.checked_through, 3000u);
}

// Random factors of h_alpha re-checked with the brute-force enumerator.
TEST(Certificate, DetectorAgreesWithOracleOnHAlphaFactors) {
  std::mt19937_64 rng(52);
  const Word w = h_alpha_prefix(3000);
  const auto perms = oracle::all_perms(5);
  std::set<std::string> every;
  for (std::size_t a = 1; a <= kNumAlphas; ++a) every.insert(representation_of(a).str());
  SearchConfig c;
  c.alphabet_size = 5;
  c.model = PermModel::AllPermutations;
  c.forbidden = PatternSet::of(all_but_one());
  c.forbidden.insert(representation_of(1));
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t len = 4 * (1 + rng() % 4);
    const std::size_t start = rng() % (w.size() - len);
    const Word piece = w.factor(start, len);
    std::vector<std::uint8_t> raw(piece.begin(), piece.end());
    EXPECT_EQ(suffix_instance(piece, c).has_value(),
              oracle::suffix_has_instance(raw, 5, every, perms));
  }
}

TEST(FourPowers, Examples) {
  EXPECT_TRUE(four_power_free_certificate(thue_morse_spec(), 10000));
  EXPECT_TRUE(four_power_free_certificate(h_alpha_spec(), 10000));
  const MorphicWordSpec constant{"zero", morphism({"00"}, 1), 0, {}};
  EXPECT_FALSE(four_power_free_certificate(constant, 4));
}

TEST(Spec, Validation) {
  const MorphicWordSpec bad{"bad", morphism({"10", "01"}, 2), 0, {}};
  EXPECT_THROW(bad.prefix(5), std::invalid_argument);
  const MorphicWordSpec mismatch{"mismatch", thue_morse_morphism(), 0,
                                 morphism({"0", "1", "2"}, 3)};
  EXPECT_THROW(mismatch.prefix(5), std::invalid_argument);
  EXPECT_TRUE(builtin_spec("h-alpha").has_value());
  EXPECT_FALSE(builtin_spec("fibonacci").has_value());
}
