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

#ifndef PPTM_PAILLIER_H_
#define PPTM_PAILLIER_H_

#include <gmpxx.h>

#include <optional>

#include "pptm/common.h"
#include "pptm/rng.h"

// Additively homomorphic Paillier cryptosystem.
//
//   pk = (n, g), sk = (lambda, mu)
//   E(m; r) = g^m * r^n mod n^2
//   D(c)    = L(c^lambda mod n^2) * mu mod n,  L(u) = (u - 1) / n
//
// E(m1) * E(m2) decrypts to m1 + m2 and E(m)^a to a * m (both mod n).
namespace pptm::paillier {

// Default iteration count for probabilistic primality tests; error < 2^-80.
inline constexpr int kPrimalityReps = 40;

struct PublicKey {
  mpz_class n;
  mpz_class n_squared;
  mpz_class g;

  bool g_is_n_plus_one() const { return g == n + 1; }
  friend bool operator==(const PublicKey&, const PublicKey&) = default;
};

struct SecretKey {
  mpz_class lambda;
  mpz_class mu;
  friend bool operator==(const SecretKey&, const SecretKey&) = default;
};

struct Ciphertext {
  mpz_class value;
  friend bool operator==(const Ciphertext&, const Ciphertext&) = default;
};

struct Keypair {
  PublicKey pk;
  SecretKey sk;
};

// Samples two distinct prime_bits-bit primes and derives the keys with
// g = n + 1. prime_bits must be at least 16. Deterministic given rng state.
Keypair GenerateKeypair(int prime_bits, Rng& rng);

// Builds keys from explicit primes (test hook and toy examples). Throws
// InvalidArgumentError if p == q, either is composite, or g fails the
// decryptability check gcd(L(g^lambda mod n^2), n) == 1.
Keypair KeypairFromPrimes(const mpz_class& p, const mpz_class& q,
                          const std::optional<mpz_class>& g = std::nullopt);

// Encrypts m in [0, n) with a fresh r drawn from rng.
Ciphertext Encrypt(const PublicKey& pk, const mpz_class& m, Rng& rng,
                   OpCounter* ops = nullptr);
// Encrypts with the supplied nonce; r must be coprime to n.
Ciphertext EncryptWithNonce(const PublicKey& pk, const mpz_class& m,
                            const mpz_class& r, OpCounter* ops = nullptr);

// Throws DecodeError if c is not a unit of Z_{n^2}.
mpz_class Decrypt(const SecretKey& sk, const PublicKey& pk, const Ciphertext& c,
                  OpCounter* ops = nullptr);

Ciphertext Add(const PublicKey& pk, const Ciphertext& a, const Ciphertext& b,
               OpCounter* ops = nullptr);
// c^a mod n^2; requires 0 <= a < n.
Ciphertext ScalarMul(const PublicKey& pk, const Ciphertext& c,
                     const mpz_class& a, OpCounter* ops = nullptr);

// 0 < value < n^2 and gcd(value, n) == 1.
bool IsValidCiphertext(const PublicKey& pk, const Ciphertext& c);

// Fixed serialized width of a ciphertext under pk.
size_t CiphertextBytes(const PublicKey& pk);

}  // namespace pptm::paillier

#endif  // PPTM_PAILLIER_H_
