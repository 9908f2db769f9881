//
// rxpj - reaction practicality judgment from SMILES text
// SPDX-License-Identifier: Apache-2.0
//

#include <random>

#include <gtest/gtest.h>

#include "oracles.h"
#include "rxpj/errors.h"
#include "rxpj/rsd.h"

using namespace rxpj;

namespace {
TokenSequence chars(const std::string &s) {
  TokenSequence out;
  for (char c: s)
    out.emplace_back(1, c);
  return out;
}

std::size_t non_nop(const RsdSequence &r) {
  std::size_t c = 0;
  for (const auto &t: r.tags)
    c += (t.op != RsdOp::kNop) + t.inserted.size();
  return c;
}
} // namespace

TEST(EditDistance, Examples) {
  EXPECT_EQ(edit_distance(chars("kitten"), chars("sitting")), 3u);
  EXPECT_EQ(edit_distance(chars("abc"), chars("abc")), 0u);
  EXPECT_EQ(edit_distance({ }, chars("abcd")), 4u);
  EXPECT_EQ(edit_distance(chars("abcd"), { }), 4u);
  EXPECT_EQ(oracle::edit_distance(chars("kitten"), chars("sitting")), 3u);
}

TEST(EditDistance, MatchesRecursiveOracle) {
  std::mt19937_64 rng(1);
  for (int k = 0; k < 300; ++k) {
    TokenSequence a, b;
    for (std::size_t i = rng() % 12; i > 0; --i)
      a.emplace_back(1, static_cast<char>('a' + rng() % 3));
    for (std::size_t i = rng() % 12; i > 0; --i)
      b.emplace_back(1, static_cast<char>('a' + rng() % 3));
    EXPECT_EQ(edit_distance(a, b), oracle::edit_distance(a, b));
  }
}

TEST(GenerateRsd, Identity) {
  const auto r = generate_rsd(chars("ABC"), chars("ABC"));
  EXPECT_EQ(rsd_tokens(r), (TokenSequence { "_", "_", "_", "_" }));
}

TEST(GenerateRsd, Replacement) {
  const auto r = generate_rsd(chars("ABC"), chars("ADC"));
  EXPECT_EQ(rsd_tokens(r), (TokenSequence { "_", "AR:D", "_", "_" }));
}

TEST(GenerateRsd, InsertionBeforePosition) {
  const auto r = generate_rsd(chars("AC"), chars("ABC"));
  EXPECT_EQ(r.tags[1].op, RsdOp::kNop);
  EXPECT_EQ(r.tags[1].inserted, chars("B"));
  EXPECT_EQ(rsd_tokens(r), (TokenSequence { "_", "AD:B", "_" }));
}

TEST(GenerateRsd, MergedInsertion) {
  const auto r = generate_rsd(chars("A"), chars("ABC"));
  EXPECT_EQ(rsd_tokens(r), (TokenSequence { "_", "AD:BC" }));
}

TEST(GenerateRsd, Removal) {
  const auto r = generate_rsd(chars("ABC"), { });
  EXPECT_EQ(rsd_tokens(r), (TokenSequence { "RR", "RR", "RR", "_" }));
  EXPECT_TRUE(apply_rsd(chars("ABC"), r).empty());
}

TEST(GenerateRsd, EmptySource) {
  const auto r = generate_rsd({ }, chars("XY"));
  EXPECT_EQ(rsd_tokens(r), (TokenSequence { "AD:XY" }));
  EXPECT_EQ(apply_rsd({ }, r), chars("XY"));
}

TEST(ApplyRsd, HandReplay) {
  RsdSequence r;
  r.source_len = 1;
  r.target_len = 3;
  r.tags.resize(2);
  r.tags[0].inserted = chars("B");
  r.tags[1].inserted = chars("C");
  EXPECT_EQ(apply_rsd(chars("A"), r), chars("BAC"));
  EXPECT_EQ(rsd_tokens(r), (TokenSequence { "AD:B", "AD:C" }));
}

TEST(ApplyRsd, CompositeSlots) {
  RsdSequence r;
  r.source_len = 2;
  r.tags.resize(3);
  r.tags[0].inserted = chars("X");
  r.tags[0].op = RsdOp::kRemove;
  r.tags[1].inserted = chars("Y");
  r.tags[1].op = RsdOp::kReplace;
  r.tags[1].replacement = "Z";
  EXPECT_EQ(apply_rsd(chars("AB"), r), chars("XYZ"));
  EXPECT_EQ(rsd_tokens(r), (TokenSequence { "AD:X|RR", "AD:Y|AR:Z", "_" }));
}

TEST(ApplyRsd, LengthMismatch) {
  const auto r = generate_rsd(chars("AB"), chars("AC"));
  EXPECT_THROW(apply_rsd(chars("ABC"), r), LengthMismatch);
}

TEST(Rsd, ReplayAndMinimalityRandom) {
  std::mt19937_64 rng(2);
  for (int k = 0; k < 2000; ++k) {
    TokenSequence s, t;
    for (std::size_t i = rng() % 20; i > 0; --i)
      s.emplace_back(1, static_cast<char>('a' + rng() % 4));
    for (std::size_t i = rng() % 20; i > 0; --i)
      t.emplace_back(1, static_cast<char>('a' + rng() % 4));
    const auto r = generate_rsd(s, t);
    ASSERT_EQ(r.tags.size(), s.size() + 1);
    EXPECT_EQ(apply_rsd(s, r), t);
    EXPECT_EQ(non_nop(r), edit_distance(s, t));
    EXPECT_EQ(r.cost(), edit_distance(s, t));
  }
}
