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

#include "pptm/bls.h"

namespace pptm::sig {

using pairing::G1Point;
using pairing::GroupParams;

KeyPair KeyFromScalar(const GroupParams& gp, const mpz_class& x,
                      OpCounter* ops) {
  if (x < 1 || x >= gp.q) {
    throw InvalidArgumentError("signing scalar must lie in [1, q)");
  }
  return KeyPair{SigningKey{x}, VerifyKey{pairing::Mul(gp, gp.generator, x, ops)}};
}

KeyPair KeyGen(const GroupParams& gp, Rng& rng, OpCounter* ops) {
  mpz_class x = rng.Below(gp.q - 1) + 1;
  return KeyFromScalar(gp, x, ops);
}

Signature Sign(const GroupParams& gp, const SigningKey& sk, BytesView message,
               OpCounter* ops) {
  G1Point h = pairing::HashToGroup(gp, message, ops);
  return Signature{pairing::Mul(gp, h, sk.x, ops)};
}

bool Verify(const GroupParams& gp, const VerifyKey& vk, BytesView message,
            const Signature& sig, OpCounter* ops) {
  if (vk.y.infinity || sig.sigma.infinity) return false;
  if (!pairing::IsOnCurve(gp, vk.y) || !pairing::IsOnCurve(gp, sig.sigma)) {
    return false;
  }
  G1Point h = pairing::HashToGroup(gp, message, ops);
  return pairing::Pair(gp, gp.generator, sig.sigma, ops) ==
         pairing::Pair(gp, vk.y, h, ops);
}

bool BatchVerify(const GroupParams& gp, std::span<const BatchItem> items,
                 OpCounter* ops) {
  if (items.empty()) throw InvalidArgumentError("empty verification batch");
  G1Point sum = G1Point::Identity();
  pairing::GtElement rhs = pairing::GtOne();
  bool well_formed = true;
  for (const BatchItem& item : items) {
    if (item.vk->y.infinity || item.sig->sigma.infinity ||
        !pairing::IsOnCurve(gp, item.vk->y) ||
        !pairing::IsOnCurve(gp, item.sig->sigma)) {
      well_formed = false;
      continue;
    }
    sum = pairing::Add(gp, sum, item.sig->sigma, ops);
    G1Point h = pairing::HashToGroup(gp, item.message, ops);
    rhs = pairing::GtMul(gp, rhs, pairing::Pair(gp, item.vk->y, h, ops));
  }
  if (!well_formed) return false;
  return pairing::Pair(gp, gp.generator, sum, ops) == rhs;
}

}  // namespace pptm::sig
