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

#include <openssl/evp.h>

#include <algorithm>
#include <stdexcept>

#include "pptm/bigint.h"
#include "pptm/common.h"
#include "pptm/hash.h"
#include "pptm/rng.h"

namespace pptm {

std::string ToHex(BytesView bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (uint8_t b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xf]);
  }
  return out;
}

namespace {

int HexValue(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

Bytes FromHex(std::string_view hex) {
  if (hex.size() % 2 != 0) throw DecodeError("hex string has odd length");
  Bytes out(hex.size() / 2);
  for (size_t i = 0; i < out.size(); ++i) {
    int hi = HexValue(hex[2 * i]);
    int lo = HexValue(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw DecodeError("invalid hex digit");
    out[i] = static_cast<uint8_t>(hi << 4 | lo);
  }
  return out;
}

// ---- bigint ----

size_t BitLength(const mpz_class& v) {
  if (v == 0) return 0;
  return mpz_sizeinbase(v.get_mpz_t(), 2);
}

Bytes ToFixedBytes(const mpz_class& v, size_t width) {
  if (v < 0) throw InvalidArgumentError("negative integer cannot be encoded");
  size_t len = ByteLength(v);
  if (len > width) throw InvalidArgumentError("integer wider than field");
  Bytes out(width, 0);
  if (len > 0) {
    size_t written = 0;
    mpz_export(out.data() + (width - len), &written, 1, 1, 1, 0,
               v.get_mpz_t());
  }
  return out;
}

Bytes ToMinimalBytes(const mpz_class& v) {
  return ToFixedBytes(v, std::max<size_t>(1, ByteLength(v)));
}

mpz_class FromBytes(BytesView bytes) {
  mpz_class v;
  if (!bytes.empty()) {
    mpz_import(v.get_mpz_t(), bytes.size(), 1, 1, 1, 0, bytes.data());
  }
  return v;
}

mpz_class FromU64(uint64_t v) {
  mpz_class out;
  mpz_import(out.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
  return out;
}

uint64_t ToU64(const mpz_class& v) {
  if (v < 0 || BitLength(v) > 64) {
    throw InvalidArgumentError("integer does not fit in 64 bits");
  }
  uint64_t out = 0;
  size_t count = 0;
  mpz_export(&out, &count, 1, sizeof(out), 0, 0, v.get_mpz_t());
  return out;
}

std::string ToHexString(const mpz_class& v) { return v.get_str(16); }

mpz_class FromHexString(std::string_view hex) {
  mpz_class v;
  if (hex.empty() || v.set_str(std::string(hex), 16) != 0) {
    throw DecodeError("invalid hex integer");
  }
  return v;
}

// ---- hashing ----

Sha256Builder::Sha256Builder() : ctx_(EVP_MD_CTX_new()) {
  auto* ctx = static_cast<EVP_MD_CTX*>(ctx_);
  if (ctx == nullptr || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 init failed");
  }
}

Sha256Builder::~Sha256Builder() {
  EVP_MD_CTX_free(static_cast<EVP_MD_CTX*>(ctx_));
}

Sha256Builder& Sha256Builder::Update(BytesView data) {
  EVP_DigestUpdate(static_cast<EVP_MD_CTX*>(ctx_), data.data(), data.size());
  return *this;
}

Sha256Builder& Sha256Builder::Update(std::string_view data) {
  EVP_DigestUpdate(static_cast<EVP_MD_CTX*>(ctx_), data.data(), data.size());
  return *this;
}

Sha256Builder& Sha256Builder::UpdateU32(uint32_t v) {
  uint8_t b[4] = {static_cast<uint8_t>(v >> 24), static_cast<uint8_t>(v >> 16),
                  static_cast<uint8_t>(v >> 8), static_cast<uint8_t>(v)};
  return Update(BytesView(b, 4));
}

Sha256Builder& Sha256Builder::UpdateU64(uint64_t v) {
  UpdateU32(static_cast<uint32_t>(v >> 32));
  return UpdateU32(static_cast<uint32_t>(v));
}

Digest Sha256Builder::Finish() {
  Digest d{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(static_cast<EVP_MD_CTX*>(ctx_), d.data(), &len);
  return d;
}

Digest Sha256(BytesView data) { return Sha256Builder().Update(data).Finish(); }

// ---- rng ----

Rng::Rng(uint64_t seed) : seed_(seed), engine_(seed) {}

Rng Rng::FromOs() {
  std::random_device rd;
  uint64_t seed = (static_cast<uint64_t>(rd()) << 32) ^ rd();
  return Rng(seed);
}

uint64_t Rng::DeriveSeed(uint64_t seed, std::string_view label) {
  Digest d = Sha256Builder().UpdateU64(seed).Update(label).Finish();
  uint64_t out = 0;
  for (int i = 0; i < 8; ++i) out = out << 8 | d[i];
  return out;
}

Rng Rng::Derive(std::string_view label) const {
  return Rng(DeriveSeed(seed_, label));
}

uint64_t Rng::NextU64() { return engine_(); }

uint64_t Rng::Below(uint64_t bound) {
  if (bound == 0) throw InvalidArgumentError("Rng::Below: zero bound");
  // Rejection sampling keeps the draw exactly uniform.
  uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  while (true) {
    uint64_t x = NextU64();
    if (x < limit) return x % bound;
  }
}

mpz_class Rng::Bits(size_t bits) {
  mpz_class v = 0;
  size_t words = (bits + 63) / 64;
  for (size_t i = 0; i < words; ++i) {
    uint64_t w = NextU64();
    mpz_class wz;
    mpz_import(wz.get_mpz_t(), 1, 1, sizeof(w), 0, 0, &w);
    v = (v << 64) | wz;
  }
  size_t extra = words * 64 - bits;
  if (extra > 0) v >>= extra;
  return v;
}

mpz_class Rng::Below(const mpz_class& bound) {
  if (bound <= 0) throw InvalidArgumentError("Rng::Below: non-positive bound");
  size_t bits = BitLength(bound);
  while (true) {
    mpz_class v = Bits(bits);
    if (v < bound) return v;
  }
}

void Rng::Fill(std::span<uint8_t> out) {
  size_t i = 0;
  while (i < out.size()) {
    uint64_t w = NextU64();
    for (int k = 0; k < 8 && i < out.size(); ++k, ++i) {
      out[i] = static_cast<uint8_t>(w >> (56 - 8 * k));
    }
  }
}

}  // namespace pptm
