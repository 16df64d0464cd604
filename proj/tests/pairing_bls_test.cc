/*
 * Copyright 2026 The PPTM Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include <vector>

#include "generators.h"
#include "pptm/bls.h"
#include "pptm/pairing.h"

namespace pptm {
namespace {

using pairing::G1Point;
using pairing::GroupParams;

class GroupTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() { gp_ = new GroupParams(pairing::Setup(80, 5)); }
  static void TearDownTestSuite() { delete gp_; }
  static const GroupParams& gp() { return *gp_; }
  static GroupParams* gp_;
};
GroupParams* GroupTest::gp_ = nullptr;

TEST(GroupSetup, ParameterSets) {
  GroupParams big = pairing::Setup(160, 1);
  EXPECT_EQ(mpz_sizeinbase(big.q.get_mpz_t(), 2), 160u);
  EXPECT_EQ(mpz_sizeinbase(big.p.get_mpz_t(), 2), 512u);
  EXPECT_EQ(big.p % 4, 3);
  EXPECT_EQ(big.cofactor * big.q, big.p + 1);
  EXPECT_TRUE(pairing::InSubgroup(big, big.generator));
  EXPECT_EQ(pairing::Setup(160, 1), big);
  EXPECT_THROW(pairing::Setup(128, 1), InvalidArgumentError);
  EXPECT_FALSE(pairing::IsSupportedKappa(256));
}

TEST_F(GroupTest, SmallScalarBilinearity) {
  const G1Point& P = gp().generator;
  auto lhs = pairing::Pair(gp(), pairing::Mul(gp(), P, 2),
                           pairing::Mul(gp(), P, 3));
  auto rhs = pairing::GtPow(gp(), pairing::Pair(gp(), P, P), 6);
  EXPECT_EQ(lhs, rhs);
  EXPECT_NE(pairing::Pair(gp(), P, P), pairing::GtOne());
}

TEST_F(GroupTest, RandomBilinearity) {
  Rng rng(17);
  const G1Point& P = gp().generator;
  for (int t = 0; t < 10; ++t) {
    mpz_class a = rng.Below(gp().q), b = rng.Below(gp().q);
    G1Point Q = pairing::HashToGroup(gp(), ToBytes("point " + std::to_string(t)));
    auto via_points = pairing::Pair(gp(), pairing::Mul(gp(), P, a),
                                    pairing::Mul(gp(), Q, b));
    mpz_class ab = (a * b) % gp().q;
    auto via_exponent = pairing::GtPow(gp(), pairing::Pair(gp(), P, Q), ab);
    EXPECT_EQ(via_points, via_exponent);
    // Symmetric pairing.
    EXPECT_EQ(pairing::Pair(gp(), P, Q), pairing::Pair(gp(), Q, P));
  }
}

TEST_F(GroupTest, GroupLaw) {
  const G1Point& P = gp().generator;
  EXPECT_TRUE(pairing::Mul(gp(), P, gp().q).infinity);
  EXPECT_EQ(pairing::Add(gp(), P, pairing::Negate(gp(), P)), G1Point::Identity());
  EXPECT_EQ(pairing::Add(gp(), P, P), pairing::Mul(gp(), P, 2));
  EXPECT_EQ(pairing::Mul(gp(), P, 5),
            pairing::Add(gp(), pairing::Mul(gp(), P, 2), pairing::Mul(gp(), P, 3)));
}

TEST_F(GroupTest, HashToGroup) {
  G1Point h1 = pairing::HashToGroup(gp(), ToBytes("abc"));
  EXPECT_EQ(h1, pairing::HashToGroup(gp(), ToBytes("abc")));
  EXPECT_NE(h1, pairing::HashToGroup(gp(), ToBytes("abd")));
  G1Point empty = pairing::HashToGroup(gp(), {});
  EXPECT_FALSE(empty.infinity);
  EXPECT_TRUE(pairing::InSubgroup(gp(), empty));
  // Same message, independently set up parameters: same point.
  GroupParams again = pairing::Setup(80, 5);
  EXPECT_EQ(pairing::HashToGroup(again, ToBytes("abc")), h1);
}

TEST_F(GroupTest, PointEncoding) {
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    G1Point a = pairing::Mul(gp(), gp().generator, rng.Below(gp().q));
    Bytes enc = pairing::EncodePoint(gp(), a);
    EXPECT_EQ(enc.size(), pairing::PointBytes(gp()));
    EXPECT_EQ(pairing::DecodePoint(gp(), enc), a);
  }
  Bytes id = pairing::EncodePoint(gp(), G1Point::Identity());
  EXPECT_EQ(id, Bytes(pairing::PointBytes(gp()), 0));
  EXPECT_TRUE(pairing::DecodePoint(gp(), id).infinity);

  Bytes bad = pairing::EncodePoint(gp(), gp().generator);
  bad[0] = 0x05;
  EXPECT_THROW(pairing::DecodePoint(gp(), bad), DecodeError);
  Bytes short_enc(pairing::PointBytes(gp()) - 1, 0);
  EXPECT_THROW(pairing::DecodePoint(gp(), short_enc), DecodeError);
  Bytes big_x(pairing::PointBytes(gp()), 0xff);
  big_x[0] = 0x02;
  EXPECT_THROW(pairing::DecodePoint(gp(), big_x), DecodeError);
}

// A curve point outside the order-q subgroup must not decode.
TEST_F(GroupTest, SubgroupCheckOnDecode) {
  // Try-and-increment without cofactor clearing: walk x until on-curve
  // and check the raw point is rejected unless it happens to lie in G1.
  size_t rejected = 0;
  for (unsigned long x = 1; x < 200 && rejected < 3; ++x) {
    mpz_class rhs = (mpz_class(x) * x * x + x) % gp().p;
    mpz_class y;
    mpz_class e = (gp().p + 1) / 4;
    mpz_powm(y.get_mpz_t(), rhs.get_mpz_t(), e.get_mpz_t(), gp().p.get_mpz_t());
    if ((y * y) % gp().p != rhs) continue;
    G1Point pt{mpz_class(x), y, false};
    ASSERT_TRUE(pairing::IsOnCurve(gp(), pt));
    if (pairing::InSubgroup(gp(), pt)) continue;
    Bytes enc = pairing::EncodePoint(gp(), pt);
    EXPECT_THROW(pairing::DecodePoint(gp(), enc), DecodeError);
    ++rejected;
  }
  EXPECT_GT(rejected, 0u);
}

TEST_F(GroupTest, SignVerify) {
  Rng rng(11);
  sig::KeyPair kp = sig::KeyGen(gp(), rng);
  sig::KeyPair other = sig::KeyGen(gp(), rng);
  EXPECT_NE(kp.sk.x, other.sk.x);
  Bytes m = ToBytes("ID_r || TS || TR");
  sig::Signature s = sig::Sign(gp(), kp.sk, m);
  EXPECT_TRUE(sig::Verify(gp(), kp.vk, m, s));
  EXPECT_FALSE(sig::Verify(gp(), kp.vk, ToBytes("ID_r || TS || TR!"), s));
  EXPECT_FALSE(sig::Verify(gp(), other.vk, m, s));
  sig::Signature empty = sig::Sign(gp(), kp.sk, {});
  EXPECT_TRUE(sig::Verify(gp(), kp.vk, {}, empty));
}

TEST_F(GroupTest, ScalarOneGivesGenerator) {
  sig::KeyPair kp = sig::KeyFromScalar(gp(), 1);
  EXPECT_EQ(kp.vk.y, gp().generator);
  EXPECT_THROW(sig::KeyFromScalar(gp(), 0), InvalidArgumentError);
  EXPECT_THROW(sig::KeyFromScalar(gp(), gp().q), InvalidArgumentError);
}

TEST_F(GroupTest, KeygenDeterministic) {
  Rng a(8), b(8);
  EXPECT_EQ(sig::KeyGen(gp(), a).sk, sig::KeyGen(gp(), b).sk);
}

// Flipping any bit of an encoded signature yields a decode error or a
// failed verification, never acceptance.
TEST_F(GroupTest, SignatureBitFlips) {
  Rng rng(12);
  sig::KeyPair kp = sig::KeyGen(gp(), rng);
  Bytes m = ToBytes("report");
  Bytes enc = pairing::EncodePoint(gp(), sig::Sign(gp(), kp.sk, m).sigma);
  for (size_t bit = 0; bit < enc.size() * 8; ++bit) {
    Bytes t = enc;
    t[bit / 8] ^= static_cast<uint8_t>(1u << (bit % 8));
    try {
      sig::Signature s{pairing::DecodePoint(gp(), t)};
      EXPECT_FALSE(sig::Verify(gp(), kp.vk, m, s)) << "bit " << bit;
    } catch (const DecodeError&) {
    }
  }
}

TEST_F(GroupTest, RandomSignaturesFail) {
  Rng rng(13);
  sig::KeyPair kp = sig::KeyGen(gp(), rng);
  for (int t = 0; t < 20; ++t) {
    sig::Signature s{pairing::Mul(gp(), gp().generator, rng.Below(gp().q))};
    EXPECT_FALSE(sig::Verify(gp(), kp.vk, ToBytes("m"), s));
  }
}

TEST_F(GroupTest, VerifyCosts) {
  Rng rng(14);
  sig::KeyPair kp = sig::KeyGen(gp(), rng);
  OpCounter sign_ops, verify_ops;
  sig::Signature s = sig::Sign(gp(), kp.sk, ToBytes("m"), &sign_ops);
  EXPECT_EQ(sign_ops.mul_g, 1u);
  EXPECT_EQ(sign_ops.pairing, 0u);
  sig::Verify(gp(), kp.vk, ToBytes("m"), s, &verify_ops);
  EXPECT_EQ(verify_ops.pairing, 2u);
}

struct Batch {
  std::vector<sig::KeyPair> keys;
  std::vector<Bytes> messages;
  std::vector<sig::Signature> sigs;

  std::vector<sig::BatchItem> Items() const {
    std::vector<sig::BatchItem> items;
    for (size_t j = 0; j < keys.size(); ++j) {
      items.push_back({&keys[j].vk, messages[j], &sigs[j]});
    }
    return items;
  }
};

Batch MakeBatch(const GroupParams& gp, size_t n, uint64_t seed) {
  Rng rng(seed);
  Batch b;
  for (size_t j = 0; j < n; ++j) {
    b.keys.push_back(sig::KeyGen(gp, rng));
    b.messages.push_back(ToBytes("report " + std::to_string(seed) + "/" +
                                 std::to_string(j)));
    b.sigs.push_back(sig::Sign(gp, b.keys[j].sk, b.messages[j]));
  }
  return b;
}

TEST_F(GroupTest, BatchOfFive) {
  Batch b = MakeBatch(gp(), 5, 21);
  auto items = b.Items();
  EXPECT_TRUE(sig::BatchVerify(gp(), items));
  for (size_t j = 0; j < 5; ++j) {
    EXPECT_TRUE(sig::Verify(gp(), b.keys[j].vk, b.messages[j], b.sigs[j]));
  }
  // Replace one signature by a signature on a different message.
  b.sigs[2] = sig::Sign(gp(), b.keys[2].sk, ToBytes("something else"));
  items = b.Items();
  EXPECT_FALSE(sig::BatchVerify(gp(), items));
}

TEST_F(GroupTest, BatchOfOneIsVerify) {
  Batch b = MakeBatch(gp(), 1, 22);
  auto items = b.Items();
  EXPECT_TRUE(sig::BatchVerify(gp(), items));
  b.messages[0] = ToBytes("other");
  items = b.Items();
  EXPECT_FALSE(sig::BatchVerify(gp(), items));
  EXPECT_THROW(sig::BatchVerify(gp(), std::span<const sig::BatchItem>{}),
               InvalidArgumentError);
}

// Property: honest batches of every size up to 50 agree with individual
// verification and cost exactly N + 1 pairings.
TEST_F(GroupTest, BatchAgreementAndPairingCount) {
  Batch all = MakeBatch(gp(), 50, 23);
  for (size_t n = 1; n <= 50; ++n) {
    Batch b;
    b.keys.assign(all.keys.begin(), all.keys.begin() + n);
    b.messages.assign(all.messages.begin(), all.messages.begin() + n);
    b.sigs.assign(all.sigs.begin(), all.sigs.begin() + n);
    auto items = b.Items();
    OpCounter ops;
    ASSERT_TRUE(sig::BatchVerify(gp(), items, &ops));
    EXPECT_EQ(ops.pairing, n + 1) << "N=" << n;
  }
}

}  // namespace
}  // namespace pptm
