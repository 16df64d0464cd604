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

#include "pptm/pseudonym.h"

#include <openssl/evp.h>

#include <memory>

namespace pptm::pseudonym {

namespace {

struct CipherDeleter {
  void operator()(EVP_CIPHER* c) const { EVP_CIPHER_free(c); }
};
struct CtxDeleter {
  void operator()(EVP_CIPHER_CTX* c) const { EVP_CIPHER_CTX_free(c); }
};

using CipherPtr = std::unique_ptr<EVP_CIPHER, CipherDeleter>;
using CtxPtr = std::unique_ptr<EVP_CIPHER_CTX, CtxDeleter>;

CipherPtr FetchSiv() {
  CipherPtr cipher(EVP_CIPHER_fetch(nullptr, "AES-256-SIV", nullptr));
  if (!cipher) throw Error("AES-256-SIV unavailable in this OpenSSL build");
  return cipher;
}

}  // namespace

TracingKey TracingKey::Generate(Rng& rng) {
  TracingKey k;
  rng.Fill(k.bytes);
  return k;
}

Bytes Seal(const TracingKey& k0, std::string_view identity, BytesView secret) {
  if (identity.empty() || identity.size() > 255) {
    throw InvalidArgumentError("vehicle identity must be 1..255 bytes");
  }
  Bytes plain;
  plain.push_back(static_cast<uint8_t>(identity.size()));
  plain.insert(plain.end(), identity.begin(), identity.end());
  plain.insert(plain.end(), secret.begin(), secret.end());

  CipherPtr cipher = FetchSiv();
  CtxPtr ctx(EVP_CIPHER_CTX_new());
  Bytes out(kSivTagBytes + plain.size());
  int len = 0;
  if (EVP_EncryptInit_ex2(ctx.get(), cipher.get(), k0.bytes.data(), nullptr,
                          nullptr) != 1 ||
      EVP_EncryptUpdate(ctx.get(), out.data() + kSivTagBytes, &len,
                        plain.data(), static_cast<int>(plain.size())) != 1 ||
      EVP_EncryptFinal_ex(ctx.get(), nullptr, &len) != 1 ||
      EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_AEAD_GET_TAG, kSivTagBytes,
                          out.data()) != 1) {
    throw Error("AES-SIV encryption failed");
  }
  return out;
}

std::optional<Opened> Open(const TracingKey& k0, BytesView pid) {
  if (pid.size() <= kSivTagBytes + 1) return std::nullopt;
  CipherPtr cipher = FetchSiv();
  CtxPtr ctx(EVP_CIPHER_CTX_new());
  Bytes tag(pid.begin(), pid.begin() + kSivTagBytes);
  Bytes plain(pid.size() - kSivTagBytes);
  int len = 0;
  if (EVP_DecryptInit_ex2(ctx.get(), cipher.get(), k0.bytes.data(), nullptr,
                          nullptr) != 1 ||
      EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_AEAD_SET_TAG, kSivTagBytes,
                          tag.data()) != 1) {
    throw Error("AES-SIV init failed");
  }
  if (EVP_DecryptUpdate(ctx.get(), plain.data(), &len,
                        pid.data() + kSivTagBytes,
                        static_cast<int>(plain.size())) != 1 ||
      EVP_DecryptFinal_ex(ctx.get(), nullptr, &len) != 1) {
    return std::nullopt;
  }
  const size_t id_len = plain[0];
  if (id_len == 0 || 1 + id_len > plain.size()) return std::nullopt;
  Opened opened;
  opened.identity.assign(plain.begin() + 1, plain.begin() + 1 + id_len);
  opened.secret.assign(plain.begin() + 1 + id_len, plain.end());
  return opened;
}

}  // namespace pptm::pseudonym
