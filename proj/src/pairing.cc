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

#include "pptm/pairing.h"

#include "pptm/bigint.h"
#include "pptm/hash.h"
#include "pptm/rng.h"

namespace pptm::pairing {

namespace {

struct ParamSet {
  int kappa;
  int field_bits;
};

constexpr ParamSet kParamSets[] = {{160, 512}, {80, 96}};

// In-place F_p arithmetic on mpz_class values; results are reduced to [0, p).
class Fp {
 public:
  explicit Fp(const mpz_class& p) : p_(p) {}

  void Mul(mpz_class& r, const mpz_class& a, const mpz_class& b) const {
    mpz_mul(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    mpz_mod(r.get_mpz_t(), r.get_mpz_t(), p_.get_mpz_t());
  }
  void Sqr(mpz_class& r, const mpz_class& a) const { Mul(r, a, a); }
  void Add(mpz_class& r, const mpz_class& a, const mpz_class& b) const {
    mpz_add(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    if (mpz_cmp(r.get_mpz_t(), p_.get_mpz_t()) >= 0) {
      mpz_sub(r.get_mpz_t(), r.get_mpz_t(), p_.get_mpz_t());
    }
  }
  void Sub(mpz_class& r, const mpz_class& a, const mpz_class& b) const {
    mpz_sub(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    if (mpz_sgn(r.get_mpz_t()) < 0) {
      mpz_add(r.get_mpz_t(), r.get_mpz_t(), p_.get_mpz_t());
    }
  }
  void MulSmall(mpz_class& r, const mpz_class& a, unsigned long k) const {
    mpz_mul_ui(r.get_mpz_t(), a.get_mpz_t(), k);
    mpz_mod(r.get_mpz_t(), r.get_mpz_t(), p_.get_mpz_t());
  }
  void Inv(mpz_class& r, const mpz_class& a) const {
    mpz_invert(r.get_mpz_t(), a.get_mpz_t(), p_.get_mpz_t());
  }
  void Neg(mpz_class& r, const mpz_class& a) const {
    if (a == 0) {
      r = 0;
    } else {
      mpz_sub(r.get_mpz_t(), p_.get_mpz_t(), a.get_mpz_t());
    }
  }
  const mpz_class& p() const { return p_; }

 private:
  const mpz_class& p_;
};

// F_{p^2} arithmetic with scratch registers reused across calls.
class Fp2 {
 public:
  explicit Fp2(const Fp& f) : f_(f) {}

  // r = x * y (r may alias x or y).
  void Mul(GtElement& r, const GtElement& x, const GtElement& y) {
    f_.Mul(t0_, x.a, y.a);
    f_.Mul(t1_, x.b, y.b);
    f_.Add(t2_, x.a, x.b);
    f_.Add(t3_, y.a, y.b);
    f_.Mul(t2_, t2_, t3_);
    f_.Sub(t2_, t2_, t0_);
    f_.Sub(r.b, t2_, t1_);
    f_.Sub(r.a, t0_, t1_);
  }
  void Sqr(GtElement& r, const GtElement& x) {
    f_.Add(t0_, x.a, x.b);
    f_.Sub(t1_, x.a, x.b);
    f_.Mul(t2_, x.a, x.b);
    f_.Mul(r.a, t0_, t1_);
    f_.Add(r.b, t2_, t2_);
  }
  void Inv(GtElement& r, const GtElement& x) {
    f_.Sqr(t0_, x.a);
    f_.Sqr(t1_, x.b);
    f_.Add(t0_, t0_, t1_);
    f_.Inv(t0_, t0_);
    f_.Mul(r.a, x.a, t0_);
    f_.Mul(t1_, x.b, t0_);
    f_.Neg(r.b, t1_);
  }
  void Conj(GtElement& r, const GtElement& x) {
    r.a = x.a;
    f_.Neg(r.b, x.b);
  }
  GtElement Pow(const GtElement& x, const mpz_class& k) {
    GtElement acc = GtOne();
    for (size_t i = BitLength(k); i-- > 0;) {
      Sqr(acc, acc);
      if (mpz_tstbit(k.get_mpz_t(), i)) Mul(acc, acc, x);
    }
    return acc;
  }

 private:
  const Fp& f_;
  mpz_class t0_, t1_, t2_, t3_;
};

// Jacobian coordinates: (X / Z^2, Y / Z^3); Z == 0 is the point at infinity.
struct Jacobian {
  mpz_class x, y, z;
};

// y^2 = x^3 + x, i.e. a = 1.
void Double(const Fp& f, Jacobian& t) {
  if (t.z == 0 || t.y == 0) {
    t.z = 0;
    return;
  }
  mpz_class xx, yy, zz, s, m, tmp;
  f.Sqr(xx, t.x);
  f.Sqr(yy, t.y);
  f.Sqr(zz, t.z);
  f.Mul(s, t.x, yy);
  f.MulSmall(s, s, 4);
  f.MulSmall(m, xx, 3);
  f.Sqr(tmp, zz);
  f.Add(m, m, tmp);
  // Z3 = 2 Y Z
  f.Mul(t.z, t.y, t.z);
  f.Add(t.z, t.z, t.z);
  // X3 = M^2 - 2S
  f.Sqr(t.x, m);
  f.Sub(t.x, t.x, s);
  f.Sub(t.x, t.x, s);
  // Y3 = M (S - X3) - 8 YY^2
  f.Sub(s, s, t.x);
  f.Mul(s, m, s);
  f.Sqr(yy, yy);
  f.MulSmall(yy, yy, 8);
  f.Sub(t.y, s, yy);
}

// t += a with a affine and not the identity.
void AddMixed(const Fp& f, Jacobian& t, const G1Point& a) {
  if (t.z == 0) {
    t.x = a.x;
    t.y = a.y;
    t.z = 1;
    return;
  }
  mpz_class zz, u2, s2, h, r, hh, hhh, v, tmp;
  f.Sqr(zz, t.z);
  f.Mul(u2, a.x, zz);
  f.Mul(s2, a.y, t.z);
  f.Mul(s2, s2, zz);
  f.Sub(h, u2, t.x);
  f.Sub(r, s2, t.y);
  if (h == 0) {
    if (r == 0) {
      Double(f, t);
    } else {
      t.z = 0;
    }
    return;
  }
  f.Sqr(hh, h);
  f.Mul(hhh, h, hh);
  f.Mul(v, t.x, hh);
  f.Mul(t.z, t.z, h);
  f.Sqr(tmp, r);
  f.Sub(tmp, tmp, hhh);
  f.Sub(tmp, tmp, v);
  f.Sub(t.x, tmp, v);
  f.Sub(v, v, t.x);
  f.Mul(v, r, v);
  f.Mul(hhh, t.y, hhh);
  f.Sub(t.y, v, hhh);
}

G1Point ToAffine(const Fp& f, const Jacobian& t) {
  if (t.z == 0) return G1Point::Identity();
  mpz_class zi, zi2, zi3;
  f.Inv(zi, t.z);
  f.Sqr(zi2, zi);
  f.Mul(zi3, zi2, zi);
  G1Point out;
  out.infinity = false;
  f.Mul(out.x, t.x, zi2);
  f.Mul(out.y, t.y, zi3);
  return out;
}

mpz_class CurveRhs(const Fp& f, const mpz_class& x) {
  mpz_class x2, rhs;
  f.Sqr(x2, x);
  f.Add(x2, x2, 1);
  f.Mul(rhs, x2, x);
  return rhs;
}

mpz_class SqrtMod(const Fp& f, const mpz_class& v) {
  // p = 3 mod 4.
  mpz_class e = (f.p() + 1) / 4;
  mpz_class r;
  mpz_powm(r.get_mpz_t(), v.get_mpz_t(), e.get_mpz_t(), f.p().get_mpz_t());
  return r;
}

bool IsProbablePrime(const mpz_class& v) {
  return mpz_probab_prime_p(v.get_mpz_t(), 40) > 0;
}

}  // namespace

bool IsSupportedKappa(int kappa) {
  for (const auto& ps : kParamSets) {
    if (ps.kappa == kappa) return true;
  }
  return false;
}

GroupParams Setup(int kappa, uint64_t seed) {
  const ParamSet* set = nullptr;
  for (const auto& ps : kParamSets) {
    if (ps.kappa == kappa) set = &ps;
  }
  if (set == nullptr) {
    throw InvalidArgumentError("unsupported pairing parameter set kappa=" +
                               std::to_string(kappa));
  }
  Rng rng = Rng(seed).Derive("pairing-setup/" + std::to_string(kappa));
  GroupParams gp;
  gp.kappa = kappa;
  mpz_class top = mpz_class(1) << (kappa - 1);
  do {
    gp.q = rng.Bits(kappa) | top | 1;
  } while (!IsProbablePrime(gp.q));

  const int h_bits = set->field_bits - kappa;
  const mpz_class h_top = mpz_class(1) << (h_bits - 1);
  while (true) {
    mpz_class h = rng.Bits(h_bits) | h_top;
    h -= h % 4;  // p = h q - 1 = 3 mod 4
    mpz_class p = h * gp.q - 1;
    if (BitLength(p) != static_cast<size_t>(set->field_bits)) continue;
    if (h % gp.q == 0) continue;
    if (!IsProbablePrime(p)) continue;
    gp.p = p;
    gp.cofactor = h;
    break;
  }
  gp.generator = HashToGroup(gp, ToBytes("pptm/generator"));
  return gp;
}

bool IsOnCurve(const GroupParams& gp, const G1Point& a) {
  if (a.infinity) return true;
  if (a.x < 0 || a.x >= gp.p || a.y < 0 || a.y >= gp.p) return false;
  Fp f(gp.p);
  mpz_class y2;
  f.Sqr(y2, a.y);
  return y2 == CurveRhs(f, a.x);
}

bool InSubgroup(const GroupParams& gp, const G1Point& a) {
  return IsOnCurve(gp, a) && Mul(gp, a, gp.q).infinity;
}

G1Point Negate(const GroupParams& gp, const G1Point& a) {
  if (a.infinity) return a;
  G1Point out = a;
  Fp(gp.p).Neg(out.y, a.y);
  return out;
}

G1Point Add(const GroupParams& gp, const G1Point& a, const G1Point& b,
            OpCounter* ops) {
  Count(ops, &OpCounter::add_g);
  if (a.infinity) return b;
  if (b.infinity) return a;
  Fp f(gp.p);
  Jacobian t{a.x, a.y, 1};
  AddMixed(f, t, b);
  return ToAffine(f, t);
}

G1Point Mul(const GroupParams& gp, const G1Point& a, const mpz_class& k,
            OpCounter* ops) {
  Count(ops, &OpCounter::mul_g);
  if (k < 0) throw InvalidArgumentError("negative scalar");
  if (a.infinity || k == 0) return G1Point::Identity();
  Fp f(gp.p);
  Jacobian t{0, 1, 0};
  for (size_t i = BitLength(k); i-- > 0;) {
    Double(f, t);
    if (mpz_tstbit(k.get_mpz_t(), i)) AddMixed(f, t, a);
  }
  return ToAffine(f, t);
}

GtElement GtOne() { return GtElement{1, 0}; }

GtElement GtMul(const GroupParams& gp, const GtElement& x,
                const GtElement& y) {
  Fp f(gp.p);
  Fp2 f2(f);
  GtElement r;
  f2.Mul(r, x, y);
  return r;
}

GtElement GtPow(const GroupParams& gp, const GtElement& x,
                const mpz_class& k) {
  Fp f(gp.p);
  Fp2 f2(f);
  return f2.Pow(x, k);
}

GtElement Pair(const GroupParams& gp, const G1Point& a, const G1Point& b,
               OpCounter* ops) {
  Count(ops, &OpCounter::pairing);
  if (a.infinity || b.infinity) return GtOne();
  Fp f(gp.p);
  Fp2 f2(f);

  // Miller loop for f_{q,a} evaluated at phi(b) = (-xb, i yb). Line values
  // are scaled by F_p factors and vertical lines are dropped; both vanish
  // under the final exponentiation because (p - 1) divides it.
  const mpz_class& xb = b.x;
  const mpz_class& yb = b.y;
  GtElement acc = GtOne();
  GtElement line;
  Jacobian t{a.x, a.y, 1};
  mpz_class xx, yy, zz, m, s, tmp;
  mpz_class zzv, u2, s2, h, r, hh, hhh, v;
  const size_t bits = BitLength(gp.q);
  for (size_t i = bits - 1; i-- > 0;) {
    // Tangent at t: real = M (Z^2 xb + X) - 2 Y^2, imag = 2 Y Z^3 yb.
    f.Sqr(xx, t.x);
    f.Sqr(yy, t.y);
    f.Sqr(zz, t.z);
    f.MulSmall(m, xx, 3);
    f.Sqr(tmp, zz);
    f.Add(m, m, tmp);
    f.Mul(tmp, zz, xb);
    f.Add(tmp, tmp, t.x);
    f.Mul(line.a, m, tmp);
    f.Add(tmp, yy, yy);
    f.Sub(line.a, line.a, tmp);
    // Z3 = 2 Y Z, and 2 Y Z^3 = Z3 Z^2.
    f.Mul(tmp, t.y, t.z);
    f.Add(tmp, tmp, tmp);
    f.Mul(line.b, tmp, zz);
    f.Mul(line.b, line.b, yb);
    f2.Sqr(acc, acc);
    f2.Mul(acc, acc, line);
    // Point doubling, reusing XX, YY, M.
    t.z = tmp;
    f.Mul(s, t.x, yy);
    f.MulSmall(s, s, 4);
    f.Sqr(t.x, m);
    f.Sub(t.x, t.x, s);
    f.Sub(t.x, t.x, s);
    f.Sub(s, s, t.x);
    f.Mul(s, m, s);
    f.Sqr(yy, yy);
    f.MulSmall(yy, yy, 8);
    f.Sub(t.y, s, yy);

    if (mpz_tstbit(gp.q.get_mpz_t(), i)) {
      f.Sqr(zzv, t.z);
      f.Mul(u2, a.x, zzv);
      f.Mul(s2, a.y, t.z);
      f.Mul(s2, s2, zzv);
      f.Sub(h, u2, t.x);
      f.Sub(r, s2, t.y);
      if (h == 0) {
        // t == -a: the chord is vertical and t + a is the identity.
        t.z = 0;
        continue;
      }
      // Chord through t and a: real = r (xb + xa) - Z3 ya, imag = Z3 yb.
      f.Mul(t.z, t.z, h);
      f.Add(tmp, xb, a.x);
      f.Mul(line.a, r, tmp);
      f.Mul(tmp, t.z, a.y);
      f.Sub(line.a, line.a, tmp);
      f.Mul(line.b, t.z, yb);
      f2.Mul(acc, acc, line);
      f.Sqr(hh, h);
      f.Mul(hhh, h, hh);
      f.Mul(v, t.x, hh);
      f.Sqr(tmp, r);
      f.Sub(tmp, tmp, hhh);
      f.Sub(tmp, tmp, v);
      f.Sub(t.x, tmp, v);
      f.Sub(v, v, t.x);
      f.Mul(v, r, v);
      f.Mul(hhh, t.y, hhh);
      f.Sub(t.y, v, hhh);
    }
  }

  // Final exponentiation: (p^2 - 1) / q = (p - 1) * cofactor. Frobenius on
  // F_{p^2} is conjugation, so acc^(p - 1) = conj(acc) / acc.
  GtElement inv, conj;
  f2.Inv(inv, acc);
  f2.Conj(conj, acc);
  f2.Mul(acc, conj, inv);
  return f2.Pow(acc, gp.cofactor);
}

G1Point HashToGroup(const GroupParams& gp, BytesView message, OpCounter* ops) {
  Count(ops, &OpCounter::hash_to_group);
  Fp f(gp.p);
  const size_t width = ByteLength(gp.p) + 16;
  for (uint32_t ctr = 0;; ++ctr) {
    Bytes expanded;
    for (uint32_t block = 0; expanded.size() < width + 1; ++block) {
      Digest d = Sha256Builder()
                     .Update(gp.version)
                     .UpdateU32(ctr)
                     .UpdateU32(block)
                     .Update(message)
                     .Finish();
      expanded.insert(expanded.end(), d.begin(), d.end());
    }
    const bool odd = expanded[width] & 1;
    mpz_class x = FromBytes(BytesView(expanded.data(), width)) % gp.p;
    mpz_class rhs = CurveRhs(f, x);
    if (rhs == 0 || mpz_legendre(rhs.get_mpz_t(), gp.p.get_mpz_t()) != 1) {
      continue;
    }
    G1Point pt;
    pt.infinity = false;
    pt.x = x;
    pt.y = SqrtMod(f, rhs);
    if (mpz_odd_p(pt.y.get_mpz_t()) != static_cast<int>(odd)) {
      f.Neg(pt.y, pt.y);
    }
    // Cofactor clearing is part of H, not a counted protocol multiplication.
    G1Point out = Mul(gp, pt, gp.cofactor);
    if (!out.infinity) return out;
  }
}

size_t PointBytes(const GroupParams& gp) { return 1 + ByteLength(gp.p); }

Bytes EncodePoint(const GroupParams& gp, const G1Point& a) {
  const size_t width = ByteLength(gp.p);
  Bytes out;
  out.reserve(1 + width);
  if (a.infinity) {
    out.assign(1 + width, 0);
    return out;
  }
  out.push_back(mpz_odd_p(a.y.get_mpz_t()) ? 0x03 : 0x02);
  Bytes x = ToFixedBytes(a.x, width);
  out.insert(out.end(), x.begin(), x.end());
  return out;
}

G1Point DecodePoint(const GroupParams& gp, BytesView bytes) {
  if (bytes.size() != PointBytes(gp)) {
    throw DecodeError("group element has wrong length");
  }
  const uint8_t prefix = bytes[0];
  BytesView body = bytes.subspan(1);
  if (prefix == 0x00) {
    for (uint8_t b : body) {
      if (b != 0) throw DecodeError("non-canonical identity encoding");
    }
    return G1Point::Identity();
  }
  if (prefix != 0x02 && prefix != 0x03) {
    throw DecodeError("bad group element prefix");
  }
  Fp f(gp.p);
  G1Point pt;
  pt.infinity = false;
  pt.x = FromBytes(body);
  if (pt.x >= gp.p) throw DecodeError("x coordinate out of range");
  mpz_class rhs = CurveRhs(f, pt.x);
  if (rhs == 0 || mpz_legendre(rhs.get_mpz_t(), gp.p.get_mpz_t()) != 1) {
    throw DecodeError("x coordinate not on curve");
  }
  pt.y = SqrtMod(f, rhs);
  if (mpz_odd_p(pt.y.get_mpz_t()) != (prefix & 1)) f.Neg(pt.y, pt.y);
  if (!Mul(gp, pt, gp.q).infinity) {
    throw DecodeError("point outside the order-q subgroup");
  }
  return pt;
}

}  // namespace pptm::pairing
