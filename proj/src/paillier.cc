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

#include "pptm/paillier.h"

#include "pptm/bigint.h"

namespace pptm::paillier {

namespace {

mpz_class L(const mpz_class& u, const mpz_class& n) { return (u - 1) / n; }

bool IsProbablePrime(const mpz_class& v) {
  return mpz_probab_prime_p(v.get_mpz_t(), kPrimalityReps) > 0;
}

// Random prime with exactly `bits` bits and its two top bits set, so the
// product of two such primes has exactly 2 * bits bits.
mpz_class RandomPrime(int bits, Rng& rng) {
  mpz_class top = mpz_class(3) << (bits - 2);
  while (true) {
    mpz_class c = rng.Bits(bits) | top | 1;
    while (!IsProbablePrime(c)) c += 2;
    if (BitLength(c) == static_cast<size_t>(bits)) return c;
  }
}

mpz_class PowMod(const mpz_class& base, const mpz_class& exp,
                 const mpz_class& mod) {
  mpz_class r;
  mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), mod.get_mpz_t());
  return r;
}

}  // namespace

Keypair KeypairFromPrimes(const mpz_class& p, const mpz_class& q,
                          const std::optional<mpz_class>& g) {
  if (p == q) throw InvalidArgumentError("Paillier primes must differ");
  if (!IsProbablePrime(p) || !IsProbablePrime(q)) {
    throw InvalidArgumentError("Paillier factors must be prime");
  }
  Keypair kp;
  kp.pk.n = p * q;
  kp.pk.n_squared = kp.pk.n * kp.pk.n;
  kp.pk.g = g.value_or(kp.pk.n + 1);
  const mpz_class& n = kp.pk.n;
  if (kp.pk.g <= 0 || kp.pk.g >= kp.pk.n_squared ||
      gcd(kp.pk.g, n) != 1) {
    throw InvalidArgumentError("g is not in Z*_{n^2}");
  }
  kp.sk.lambda = lcm(mpz_class(p - 1), mpz_class(q - 1));
  mpz_class u = L(PowMod(kp.pk.g, kp.sk.lambda, kp.pk.n_squared), n);
  if (gcd(u, n) != 1) {
    throw InvalidArgumentError("g fails the decryptability check");
  }
  // The inverse is taken mod n; decryption reduces mod n.
  mpz_invert(kp.sk.mu.get_mpz_t(), u.get_mpz_t(), n.get_mpz_t());
  return kp;
}

Keypair GenerateKeypair(int prime_bits, Rng& rng) {
  if (prime_bits < 16) {
    throw InvalidArgumentError("Paillier prime size must be at least 16 bits");
  }
  while (true) {
    mpz_class p = RandomPrime(prime_bits, rng);
    mpz_class q = RandomPrime(prime_bits, rng);
    if (p == q) continue;
    try {
      return KeypairFromPrimes(p, q);
    } catch (const InvalidArgumentError&) {
      // gcd(n, (p-1)(q-1)) != 1; resample.
    }
  }
}

Ciphertext EncryptWithNonce(const PublicKey& pk, const mpz_class& m,
                            const mpz_class& r, OpCounter* ops) {
  if (m < 0 || m >= pk.n) {
    throw InvalidArgumentError("Paillier plaintext out of range [0, n)");
  }
  if (r <= 0 || r >= pk.n || gcd(r, pk.n) != 1) {
    throw InvalidArgumentError("Paillier nonce must be a unit mod n");
  }
  mpz_class gm;
  if (pk.g_is_n_plus_one()) {
    // (1 + n)^m = 1 + m n mod n^2.
    gm = (1 + m * pk.n) % pk.n_squared;
  } else {
    gm = PowMod(pk.g, m, pk.n_squared);
    Count(ops, &OpCounter::exp_n2);
  }
  mpz_class rn = PowMod(r, pk.n, pk.n_squared);
  Count(ops, &OpCounter::exp_n2);
  Count(ops, &OpCounter::mul_n2);
  return Ciphertext{(gm * rn) % pk.n_squared};
}

Ciphertext Encrypt(const PublicKey& pk, const mpz_class& m, Rng& rng,
                   OpCounter* ops) {
  mpz_class r;
  do {
    r = rng.Below(pk.n);
  } while (r == 0 || gcd(r, pk.n) != 1);
  return EncryptWithNonce(pk, m, r, ops);
}

bool IsValidCiphertext(const PublicKey& pk, const Ciphertext& c) {
  return c.value > 0 && c.value < pk.n_squared && gcd(c.value, pk.n) == 1;
}

mpz_class Decrypt(const SecretKey& sk, const PublicKey& pk, const Ciphertext& c,
                  OpCounter* ops) {
  if (!IsValidCiphertext(pk, c)) {
    throw DecodeError("ciphertext is not a unit of Z_{n^2}");
  }
  mpz_class u = PowMod(c.value, sk.lambda, pk.n_squared);
  Count(ops, &OpCounter::exp_n2);
  return (L(u, pk.n) * sk.mu) % pk.n;
}

Ciphertext Add(const PublicKey& pk, const Ciphertext& a, const Ciphertext& b,
               OpCounter* ops) {
  Count(ops, &OpCounter::mul_n2);
  return Ciphertext{(a.value * b.value) % pk.n_squared};
}

Ciphertext ScalarMul(const PublicKey& pk, const Ciphertext& c,
                     const mpz_class& a, OpCounter* ops) {
  if (a < 0 || a >= pk.n) {
    throw InvalidArgumentError("Paillier scalar out of range [0, n)");
  }
  Count(ops, &OpCounter::exp_n2);
  return Ciphertext{PowMod(c.value, a, pk.n_squared)};
}

size_t CiphertextBytes(const PublicKey& pk) {
  return ByteLength(pk.n_squared - 1);
}

}  // namespace pptm::paillier
