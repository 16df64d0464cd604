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

#ifndef PPTM_BLS_H_
#define PPTM_BLS_H_

#include <span>

#include "pptm/common.h"
#include "pptm/pairing.h"
#include "pptm/rng.h"

// Short signatures over the symmetric pairing group:
//   sign:   sigma = x H(m)
//   verify: e(P, sigma) == e(Y, H(m)),  Y = x P
//   batch:  e(P, sum sigma_j) == prod e(Y_j, H(m_j))   (N + 1 pairings)
namespace pptm::sig {

struct SigningKey {
  mpz_class x;  // in [1, q)
  friend bool operator==(const SigningKey&, const SigningKey&) = default;
};

struct VerifyKey {
  pairing::G1Point y;
  friend bool operator==(const VerifyKey&, const VerifyKey&) = default;
};

struct Signature {
  pairing::G1Point sigma;
  friend bool operator==(const Signature&, const Signature&) = default;
};

struct KeyPair {
  SigningKey sk;
  VerifyKey vk;
};

KeyPair KeyGen(const pairing::GroupParams& gp, Rng& rng,
               OpCounter* ops = nullptr);
// Test hook: derive the verify key for a chosen scalar.
KeyPair KeyFromScalar(const pairing::GroupParams& gp, const mpz_class& x,
                      OpCounter* ops = nullptr);

Signature Sign(const pairing::GroupParams& gp, const SigningKey& sk,
               BytesView message, OpCounter* ops = nullptr);

bool Verify(const pairing::GroupParams& gp, const VerifyKey& vk,
            BytesView message, const Signature& sig, OpCounter* ops = nullptr);

struct BatchItem {
  const VerifyKey* vk;
  BytesView message;
  const Signature* sig;
};

// Throws InvalidArgumentError on an empty batch.
bool BatchVerify(const pairing::GroupParams& gp, std::span<const BatchItem> items,
                 OpCounter* ops = nullptr);

}  // namespace pptm::sig

#endif  // PPTM_BLS_H_
