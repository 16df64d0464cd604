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

#ifndef PPTM_PAIRING_H_
#define PPTM_PAIRING_H_

#include <gmpxx.h>

#include <string>

#include "pptm/common.h"

// Symmetric (Type-1) bilinear group.
//
// G1 is the order-q subgroup of E(F_p): y^2 = x^3 + x with p = 3 mod 4, so
// #E(F_p) = p + 1 = h * q. G2 (the target group, called GT here) is the
// order-q subgroup of F_{p^2}^* with F_{p^2} = F_p[i] / (i^2 + 1).
//
//   e(A, B) = f_{q,A}(phi(B))^((p^2 - 1) / q),  phi(x, y) = (-x, i y)
//
// The distortion map phi makes e(P, P) != 1, giving e: G1 x G1 -> GT with
// e(aA, bB) = e(A, B)^(ab).
namespace pptm::pairing {

inline constexpr char kHashToGroupVersion[] = "pptm-h2g-sha256-tai-v1";

struct G1Point {
  mpz_class x;
  mpz_class y;
  bool infinity = true;

  static G1Point Identity() { return G1Point{}; }
  friend bool operator==(const G1Point&, const G1Point&) = default;
};

// Element a + b i of F_{p^2}.
struct GtElement {
  mpz_class a;
  mpz_class b;
  friend bool operator==(const GtElement&, const GtElement&) = default;
};

struct GroupParams {
  int kappa = 0;       // bit length of q
  mpz_class q;         // prime group order
  mpz_class p;         // field characteristic
  mpz_class cofactor;  // (p + 1) / q
  G1Point generator;
  std::string version = kHashToGroupVersion;

  friend bool operator==(const GroupParams&, const GroupParams&) = default;
};

// Supported parameter sets: kappa = 160 (512-bit field, default) and
// kappa = 80 (96-bit field, test scale). Deterministic for a fixed seed.
// Throws InvalidArgumentError for any other kappa.
GroupParams Setup(int kappa, uint64_t seed);
bool IsSupportedKappa(int kappa);

G1Point Add(const GroupParams& gp, const G1Point& a, const G1Point& b,
            OpCounter* ops = nullptr);
G1Point Negate(const GroupParams& gp, const G1Point& a);
// k * a for any non-negative k.
G1Point Mul(const GroupParams& gp, const G1Point& a, const mpz_class& k,
            OpCounter* ops = nullptr);

bool IsOnCurve(const GroupParams& gp, const G1Point& a);
// On the curve and of order dividing q.
bool InSubgroup(const GroupParams& gp, const G1Point& a);

GtElement Pair(const GroupParams& gp, const G1Point& a, const G1Point& b,
               OpCounter* ops = nullptr);
GtElement GtOne();
GtElement GtMul(const GroupParams& gp, const GtElement& x, const GtElement& y);
GtElement GtPow(const GroupParams& gp, const GtElement& x, const mpz_class& k);

// Deterministic map {0,1}* -> G1 \ {O}: SHA-256 try-and-increment onto the
// curve followed by cofactor clearing.
G1Point HashToGroup(const GroupParams& gp, BytesView message,
                    OpCounter* ops = nullptr);

// Canonical compressed encoding: 0x02 | parity(y), then x as a fixed-width
// big-endian field element. The identity is 0x00 followed by zeros.
size_t PointBytes(const GroupParams& gp);
Bytes EncodePoint(const GroupParams& gp, const G1Point& a);
// Throws DecodeError for anything that is not a canonical encoding of a G1
// element (off-curve, outside the order-q subgroup, x >= p, bad prefix).
G1Point DecodePoint(const GroupParams& gp, BytesView bytes);

}  // namespace pptm::pairing

#endif  // PPTM_PAIRING_H_
