#include "splitsurf/genus2.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <unordered_map>
#include <utility>

#include "splitsurf/error.hpp"
#include "splitsurf/numth.hpp"

namespace splitsurf::genus2 {

namespace sp = gf::sp;

namespace {

SPoly derivative(const gf::SmallField& F, const SPoly& f) {
  SPoly d;
  for (std::size_t i = 1; i < f.size(); ++i) d.push_back(F.mul(F.from_int(static_cast<i64>(i)), f[i]));
  sp::trim(d);
  return d;
}

}  // namespace

Genus2Curve::Genus2Curve(FieldPtr field, SPoly f) : field_(std::move(field)), f_(std::move(f)) {
  sp::trim(f_);
  const int d = degree();
  if (d != 5 && d != 6) throw std::invalid_argument("genus-2 model needs degree 5 or 6");
  if (field_->p() < 5) throw std::invalid_argument("characteristic must be at least 5");
  const SPoly g = sp::gcd(*field_, f_, derivative(*field_, f_));
  if (sp::degree(g) > 0) throw std::invalid_argument("f is not squarefree");
}

namespace {

// Sum over x in F_q of chi(f(x)), plus the number of roots.
struct AffineSum {
  i64 chi_sum = 0;
  u64 roots = 0;
};

// Forward differences of a degree-D polynomial over F_p, run as kLanes
// interleaved streams with stride kLanes so the additions vectorize.
template <int D>
AffineSum affine_sum_fd(const gf::SmallField& F, const SPoly& f) {
  constexpr u32 kLanes = 16;
  const u32 p = F.p();
  const std::int8_t* chi = F.chi_table().data();
  alignas(64) u32 diff[D + 1][kLanes];
  for (u32 l = 0; l < kLanes; ++l) {
    std::array<u32, D + 1> col{};
    for (int k = 0; k <= D; ++k) col[k] = sp::eval(F, f, static_cast<u32>((l + static_cast<u64>(kLanes) * k) % p));
    for (int k = 1; k <= D; ++k)
      for (int i = D; i >= k; --i) col[i] = col[i] >= col[i - 1] ? col[i] - col[i - 1] : col[i] + p - col[i - 1];
    for (int k = 0; k <= D; ++k) diff[k][l] = col[k];
  }
  i64 s = 0;
  u64 roots = 0;
  for (u32 x0 = 0; x0 < p; x0 += kLanes) {
    const u32 live = std::min(kLanes, p - x0);
    for (u32 l = 0; l < live; ++l) {
      const u32 v = diff[0][l];
      s += chi[v];
      roots += v == 0;
    }
    for (int i = 0; i < D; ++i) {
      for (u32 l = 0; l < kLanes; ++l) {
        const u32 t = diff[i][l] + diff[i + 1][l];
        diff[i][l] = t >= p ? t - p : t;
      }
    }
  }
  return AffineSum{s, roots};
}

AffineSum affine_sum(const gf::SmallField& F, const SPoly& f) {
  const int d = sp::degree(f);
  if (F.prime() && F.q() > 16 && F.q() <= (1u << 22)) {
    if (d == 5) return affine_sum_fd<5>(F, f);
    if (d == 6) return affine_sum_fd<6>(F, f);
  }
  AffineSum out;
  for (u32 x = 0; x < F.q(); ++x) {
    const u32 v = sp::eval(F, f, x);
    out.chi_sum += F.chi(v);
    out.roots += v == 0;
  }
  return out;
}

}  // namespace

u64 genus2_count(const Genus2Curve& C, unsigned k) {
  const auto& F = C.field();
  const SPoly& f = C.f();
  const int d = C.degree();
  const u32 lead = f.back();
  if (k == 1) {
    const auto s = affine_sum(F, f);
    const i64 inf = d == 5 ? 1 : 1 + F.chi(lead);
    return static_cast<u64>(static_cast<i64>(F.q()) + s.chi_sum + inf);
  }
  if (k != 2) throw std::invalid_argument("genus2_count supports k = 1 or 2");
  if (F.q() > 20000) throw std::invalid_argument("field too large for exhaustive F_{q^2} counting");
  const u32 q = F.q();
  i64 total = 0;
  for (u32 x = 0; x < q; ++x) total += sp::eval(F, f, x) == 0 ? 1 : 2;
  // Conjugate pairs {alpha, alpha^q} for each monic irreducible t^2 - s t + n.
  for (u32 s = 0; s < q; ++s) {
    const u32 s2 = F.mul(s, s);
    for (u32 n = 0; n < q; ++n) {
      if (F.chi(F.sub(s2, F.mul(F.from_int(4), n))) != -1) continue;
      u32 A = 0, B = 0;
      for (std::size_t i = f.size(); i-- > 0;) {
        // (A + B t) t + a_i with t^2 = s t - n.
        const u32 nA = F.add(F.neg(F.mul(B, n)), f[i]);
        const u32 nB = F.add(A, F.mul(B, s));
        A = nA;
        B = nB;
      }
      const u32 norm = F.add(F.add(F.mul(A, A), F.mul(s, F.mul(A, B))), F.mul(n, F.mul(B, B)));
      total += 2 * (1 + F.chi(norm));
    }
  }
  total += d == 5 ? 1 : 2;
  return static_cast<u64>(total);
}

namespace {

// Fixed-capacity polynomial over a SmallField, low-to-high.
struct P16 {
  std::array<u32, 16> c{};
  int d = -1;
  void trim() {
    while (d >= 0 && c[d] == 0) --d;
  }
  bool zero() const { return d < 0; }
};

P16 from_spoly(const SPoly& a) {
  P16 r;
  if (a.size() > r.c.size()) throw std::logic_error("polynomial too large");
  for (std::size_t i = 0; i < a.size(); ++i) r.c[i] = a[i];
  r.d = static_cast<int>(a.size()) - 1;
  r.trim();
  return r;
}

SPoly to_spoly(const P16& a) { return SPoly(a.c.begin(), a.c.begin() + (a.d + 1)); }

struct Ops {
  const gf::SmallField& F;

  P16 add(const P16& a, const P16& b) const {
    P16 r;
    r.d = std::max(a.d, b.d);
    for (int i = 0; i <= r.d; ++i) r.c[i] = F.add(i <= a.d ? a.c[i] : 0, i <= b.d ? b.c[i] : 0);
    r.trim();
    return r;
  }
  P16 sub(const P16& a, const P16& b) const {
    P16 r;
    r.d = std::max(a.d, b.d);
    for (int i = 0; i <= r.d; ++i) r.c[i] = F.sub(i <= a.d ? a.c[i] : 0, i <= b.d ? b.c[i] : 0);
    r.trim();
    return r;
  }
  P16 neg(const P16& a) const {
    P16 r = a;
    for (int i = 0; i <= r.d; ++i) r.c[i] = F.neg(r.c[i]);
    return r;
  }
  P16 mul(const P16& a, const P16& b) const {
    P16 r;
    if (a.zero() || b.zero()) return r;
    r.d = a.d + b.d;
    if (r.d >= 16) throw std::logic_error("polynomial product too large");
    for (int i = 0; i <= a.d; ++i) {
      if (a.c[i] == 0) continue;
      for (int j = 0; j <= b.d; ++j) r.c[i + j] = F.add(r.c[i + j], F.mul(a.c[i], b.c[j]));
    }
    r.trim();
    return r;
  }
  P16 scale(const P16& a, u32 s) const {
    P16 r = a;
    for (int i = 0; i <= r.d; ++i) r.c[i] = F.mul(r.c[i], s);
    r.trim();
    return r;
  }
  void divmod(const P16& a, const P16& b, P16& quo, P16& rem) const {
    if (b.zero()) throw std::domain_error("polynomial division by zero");
    rem = a;
    quo = P16{};
    if (a.d < b.d) return;
    quo.d = a.d - b.d;
    const u32 il = F.inv(b.c[b.d]);
    for (int i = a.d; i >= b.d; --i) {
      const u32 co = F.mul(rem.c[i], il);
      quo.c[i - b.d] = co;
      if (co == 0) continue;
      for (int j = 0; j <= b.d; ++j) rem.c[i - b.d + j] = F.sub(rem.c[i - b.d + j], F.mul(co, b.c[j]));
    }
    rem.d = b.d - 1;
    rem.trim();
    quo.trim();
  }
  P16 mod(const P16& a, const P16& b) const {
    P16 q, r;
    divmod(a, b, q, r);
    return r;
  }
  P16 div(const P16& a, const P16& b) const {
    P16 q, r;
    divmod(a, b, q, r);
    return q;
  }
  P16 monic(const P16& a) const { return a.zero() ? a : scale(a, F.inv(a.c[a.d])); }
  // g = s a + t b with g monic.
  void xgcd(const P16& a, const P16& b, P16& g, P16& s, P16& t) const {
    P16 r0 = a, r1 = b, s0, s1, t0, t1;
    s0.c[0] = 1;
    s0.d = 0;
    t1.c[0] = 1;
    t1.d = 0;
    while (!r1.zero()) {
      P16 qq, rr;
      divmod(r0, r1, qq, rr);
      r0 = r1;
      r1 = rr;
      P16 ns = sub(s0, mul(qq, s1));
      s0 = s1;
      s1 = ns;
      P16 nt = sub(t0, mul(qq, t1));
      t0 = t1;
      t1 = nt;
    }
    if (r0.zero()) {
      g = r0;
      s = s0;
      t = t0;
      return;
    }
    const u32 il = F.inv(r0.c[r0.d]);
    g = scale(r0, il);
    s = scale(s0, il);
    t = scale(t0, il);
  }
};

struct Div {
  P16 u, v;
};

Div zero_div() {
  Div D;
  D.u.c[0] = 1;
  D.u.d = 0;
  return D;
}

// Cantor composition and reduction on an imaginary model.
// Barrett reduction for products of residues modulo a prime below 2^31.
struct Fp {
  u64 p = 0;
  u64 m = 0;
  explicit Fp(u32 prime) : p(prime), m(~0ull / prime) {}
  u32 red(u64 x) const {
    const u64 qh = static_cast<u64>((static_cast<unsigned __int128>(x) * m) >> 64);
    u64 r = x - qh * p;
    while (r >= p) r -= p;
    return static_cast<u32>(r);
  }
  u32 mul(u32 a, u32 b) const { return red(static_cast<u64>(a) * b); }
  u32 add(u32 a, u32 b) const {
    const u64 s = static_cast<u64>(a) + b;
    return static_cast<u32>(s >= p ? s - p : s);
  }
  u32 sub(u32 a, u32 b) const { return static_cast<u32>(a >= b ? a - b : a + p - b); }
  u32 neg(u32 a) const { return a == 0 ? 0 : static_cast<u32>(p - a); }
  u32 inv(u32 a) const {
    i64 t = 0, nt = 1, r = static_cast<i64>(p), nr = a;
    while (nr != 0) {
      const i64 qq = r / nr;
      t = std::exchange(nt, t - qq * nt);
      r = std::exchange(nr, r - qq * nr);
    }
    if (r != 1) throw std::domain_error("inverse of zero");
    return static_cast<u32>(t < 0 ? t + static_cast<i64>(p) : t);
  }
};

class Jac {
 public:
  Jac(const gf::SmallField& F, const SPoly& f) : ops_{F}, f_(from_spoly(f)), fp_(F.p()), prime_(F.prime()) {}

  Div add(const Div& a, const Div& b) const {
    if (a.u.d == 0) return b;
    if (b.u.d == 0) return a;
    if (prime_ && a.u.d == 2 && b.u.d == 2) {
      Div out;
      const bool same_u = a.u.c[0] == b.u.c[0] && a.u.c[1] == b.u.c[1];
      if (same_u ? (coeff(a.v, 0) == coeff(b.v, 0) && coeff(a.v, 1) == coeff(b.v, 1) && fast_double(a, out))
                 : fast_add(a, b, out))
        return out;
    }
    const Ops& o = ops_;
    P16 d1, e1, e2;
    o.xgcd(a.u, b.u, d1, e1, e2);
    P16 d, c1, c2;
    o.xgcd(d1, o.add(a.v, b.v), d, c1, c2);
    const P16 s1 = o.mul(c1, e1), s2 = o.mul(c1, e2);
    P16 u = o.mul(a.u, b.u);
    P16 v = o.add(o.add(o.mul(s1, o.mul(a.u, b.v)), o.mul(s2, o.mul(b.u, a.v))),
                  o.mul(c2, o.add(o.mul(a.v, b.v), f_)));
    if (d.d > 0) {
      u = o.div(u, o.mul(d, d));
      v = o.div(v, d);
    }
    v = o.mod(v, u);
    return reduce(u, v);
  }

  Div neg(const Div& a) const { return Div{a.u, ops_.neg(a.v)}; }

  Div mul(const mpz_class& n, const Div& a) const {
    if (n < 0) return mul(-n, neg(a));
    Div r = zero_div();
    const std::size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2);
    for (std::size_t i = bits; i-- > 0;) {
      r = add(r, r);
      if (mpz_tstbit(n.get_mpz_t(), i)) r = add(r, a);
    }
    return r;
  }

  Div mul(u64 n, const Div& a) const {
    Div r = zero_div();
    Div b = a;
    while (n) {
      if (n & 1) r = add(r, b);
      n >>= 1;
      if (n) b = add(b, b);
    }
    return r;
  }

  bool valid(const Div& a) const {
    if (a.u.d < 0 || a.u.c[a.u.d] != 1 || a.v.d >= a.u.d || a.u.d > 2) return false;
    return ops_.mod(ops_.sub(ops_.mul(a.v, a.v), f_), a.u).zero();
  }

  const P16& f() const { return f_; }
  const Ops& ops() const { return ops_; }

 private:
  static u32 coeff(const P16& a, int i) { return i <= a.d ? a.c[i] : 0; }

  // Degree-2 composition with coprime u's, reduced in one step. Returns false
  // for the special configurations, which the generic path handles.
  bool fast_add(const Div& a, const Div& b, Div& out) const {
    const Fp& F = fp_;
    const u32 a1 = a.u.c[1], a0 = a.u.c[0], b1 = b.u.c[1], b0 = b.u.c[0];
    const u32 e1 = F.sub(a1, b1), e0 = F.sub(a0, b0);
    const u32 R = F.add(F.sub(F.mul(e0, e0), F.mul(F.mul(e0, e1), b1)), F.mul(F.mul(e1, e1), b0));
    if (R == 0) return false;
    const u32 c1 = F.neg(e1), c0 = F.sub(e0, F.mul(e1, b1));
    const u32 w1 = F.sub(coeff(b.v, 1), coeff(a.v, 1)), w0 = F.sub(coeff(b.v, 0), coeff(a.v, 0));
    const u32 p2 = F.mul(w1, c1), p1 = F.add(F.mul(w1, c0), F.mul(w0, c1)), p0 = F.mul(w0, c0);
    const u32 st1 = F.sub(p1, F.mul(p2, b1)), st0 = F.sub(p0, F.mul(p2, b0));
    const u32 U3 = F.add(a1, b1), U2 = F.add(F.add(a0, b0), F.mul(a1, b1));
    return finish(a, R, st1, st0, U3, U2, out);
  }

  bool fast_double(const Div& a, Div& out) const {
    const Fp& F = fp_;
    const u32 a1 = a.u.c[1], a0 = a.u.c[0];
    const u32 v1 = coeff(a.v, 1), v0 = coeff(a.v, 0);
    const u32 e1 = F.add(v1, v1), e0 = F.add(v0, v0);
    const u32 R = F.add(F.sub(F.mul(e0, e0), F.mul(F.mul(e0, e1), a1)), F.mul(F.mul(e1, e1), a0));
    if (R == 0) return false;
    const u32 c1 = F.neg(e1), c0 = F.sub(e0, F.mul(e1, a1));
    // k = ((f - v^2) / u) mod u by long division.
    std::array<u32, 7> n{};
    for (int i = 0; i <= f_.d; ++i) n[i] = f_.c[i];
    n[2] = F.sub(n[2], F.mul(v1, v1));
    n[1] = F.sub(n[1], F.mul(F.add(v0, v0), v1));
    n[0] = F.sub(n[0], F.mul(v0, v0));
    std::array<u32, 5> k{};
    for (int i = 6; i >= 2; --i) {
      const u32 t = n[i];
      k[i - 2] = t;
      n[i - 1] = F.sub(n[i - 1], F.mul(t, a1));
      n[i - 2] = F.sub(n[i - 2], F.mul(t, a0));
    }
    for (int i = 4; i >= 2; --i) {
      const u32 t = k[i];
      k[i - 1] = F.sub(k[i - 1], F.mul(t, a1));
      k[i - 2] = F.sub(k[i - 2], F.mul(t, a0));
    }
    const u32 w1 = k[1], w0 = k[0];
    const u32 p2 = F.mul(w1, c1), p1 = F.add(F.mul(w1, c0), F.mul(w0, c1)), p0 = F.mul(w0, c0);
    const u32 st1 = F.sub(p1, F.mul(p2, a1)), st0 = F.sub(p0, F.mul(p2, a0));
    const u32 U3 = F.add(a1, a1), U2 = F.add(F.mul(a1, a1), F.add(a0, a0));
    return finish(a, R, st1, st0, U3, U2, out);
  }

  // V = v_a + u_a s with s = (st1 x + st0) / R; U = x^4 + U3 x^3 + U2 x^2 + ...
  bool finish(const Div& a, u32 R, u32 st1, u32 st0, u32 U3, u32 U2, Div& out) const {
    const Fp& F = fp_;
    if (st1 == 0) return false;
    const u32 f6 = coeff(f_, 6), f5 = coeff(f_, 5), f4 = coeff(f_, 4);
    const u32 R2 = F.mul(R, R);
    const u32 B = F.sub(F.mul(R2, f6), F.mul(st1, st1));
    if (B == 0) return false;
    const u32 I = F.inv(F.mul(R, B));
    const u32 Rinv = F.mul(B, I);
    const u32 n6inv = F.mul(F.mul(R2, R), I);
    const u32 s1 = F.mul(st1, Rinv), s0 = F.mul(st0, Rinv);
    const u32 c1 = a.u.c[1], c0 = a.u.c[0];
    const u32 V3 = s1;
    const u32 V2 = F.add(s0, F.mul(c1, s1));
    const u32 V1 = F.add(F.add(F.mul(c1, s0), F.mul(c0, s1)), coeff(a.v, 1));
    const u32 V0 = F.add(F.mul(c0, s0), coeff(a.v, 0));
    const u32 n6 = F.sub(f6, F.mul(V3, V3));
    const u32 n5 = F.sub(f5, F.mul(F.add(V3, V3), V2));
    const u32 n4 = F.sub(f4, F.add(F.mul(V2, V2), F.mul(F.add(V3, V3), V1)));
    const u32 q1 = F.sub(n5, F.mul(n6, U3));
    const u32 q0 = F.sub(F.sub(n4, F.mul(n6, U2)), F.mul(q1, U3));
    const u32 m1 = F.mul(q1, n6inv), m0 = F.mul(q0, n6inv);
    const u32 x3_1 = F.sub(F.mul(m1, m1), m0), x3_0 = F.mul(m1, m0);
    const u32 r1 = F.sub(F.add(V1, F.mul(V3, x3_1)), F.mul(V2, m1));
    const u32 r0 = F.sub(F.add(V0, F.mul(V3, x3_0)), F.mul(V2, m0));
    out.u = P16{};
    out.u.c[0] = m0;
    out.u.c[1] = m1;
    out.u.c[2] = 1;
    out.u.d = 2;
    out.v = P16{};
    out.v.c[0] = F.neg(r0);
    out.v.c[1] = F.neg(r1);
    out.v.d = 1;
    out.v.trim();
    return true;
  }

  Div reduce(P16 u, P16 v) const {
    const Ops& o = ops_;
    while (u.d > 2) {
      P16 un = o.div(o.sub(f_, o.mul(v, v)), u);
      un = o.monic(un);
      v = o.mod(o.neg(v), un);
      u = un;
    }
    u = o.monic(u);
    v = o.mod(v, u);
    return Div{u, v};
  }

  Ops ops_;
  P16 f_;
  Fp fp_;
  bool prime_;
};

Div to_div(const MumfordDivisor& D) { return Div{from_spoly(D.u), from_spoly(D.v)}; }
MumfordDivisor from_div(const Div& D) { return MumfordDivisor{to_spoly(D.u), to_spoly(D.v)}; }

std::optional<Div> random_div(const Jac& J, const gf::SmallField& F, int degf, std::mt19937_64& rng) {
  std::uniform_int_distribution<u32> dist(0, F.q() - 1);
  const SPoly f = to_spoly(J.f());
  auto point = [&](u32& x, u32& y) {
    for (int tries = 0; tries < 200; ++tries) {
      x = dist(rng);
      auto s = F.sqrt(sp::eval(F, f, x));
      if (!s) continue;
      y = (rng() & 1) ? F.neg(*s) : *s;
      return true;
    }
    return false;
  };
  u32 x1, y1;
  if (!point(x1, y1)) return std::nullopt;
  Div D1;
  D1.u.c[0] = F.neg(x1);
  D1.u.c[1] = 1;
  D1.u.d = 1;
  D1.v.c[0] = y1;
  D1.v.d = y1 == 0 ? -1 : 0;
  // Two points for both model types, so that most group elements have deg u = 2.
  for (int tries = 0; tries < 50; ++tries) {
    u32 x2, y2;
    if (!point(x2, y2)) return std::nullopt;
    if (x2 == x1) continue;
    // Line through the two points.
    const u32 slope = F.mul(F.sub(y2, y1), F.inv(F.sub(x2, x1)));
    Div D;
    D.u.c[0] = F.mul(x1, x2);
    D.u.c[1] = F.neg(F.add(x1, x2));
    D.u.c[2] = 1;
    D.u.d = 2;
    D.v.c[0] = F.sub(y1, F.mul(slope, x1));
    D.v.c[1] = slope;
    D.v.d = 1;
    D.v.trim();
    return D;
  }
  if (degf == 5) return D1;
  return std::nullopt;
}

struct DivKey {
  std::array<u32, 5> k;
  friend bool operator==(const DivKey&, const DivKey&) = default;
};
struct DivKeyHash {
  std::size_t operator()(const DivKey& a) const {
    u64 h = 0x9e3779b97f4a7c15ULL;
    for (u32 x : a.k) h = (h ^ x) * 0xff51afd7ed558ccdULL;
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};
DivKey key_of(const Div& D) {
  DivKey k{};
  k.k[0] = static_cast<u32>(D.u.d + 1);
  k.k[1] = D.u.c[0];
  k.k[2] = D.u.c[1];
  k.k[3] = D.v.c[0];
  k.k[4] = D.v.c[1];
  if (D.v.d < 1) k.k[4] = 0;
  if (D.v.d < 0) k.k[3] = 0;
  if (D.u.d < 1) k.k[2] = 0;
  return k;
}

// All k in [0, W] with (base + k) D = 0; empty optional if D has tiny order.
std::optional<std::vector<i64>> bsgs_hits(const Jac& J, const Div& D, const mpz_class& base, i64 W,
                                          std::size_t max_hits) {
  const i64 m = static_cast<i64>(std::sqrt(static_cast<double>(W + 1))) + 1;
  std::unordered_map<DivKey, u32, DivKeyHash> baby;
  baby.reserve(static_cast<std::size_t>(m) * 2);
  Div cur = zero_div();
  for (i64 j = 0; j < m; ++j) {
    if (j > 0 && cur.u.d == 0) {
      // Order r = j is small: hits form an arithmetic progression.
      const i64 r = j;
      const i64 first = static_cast<i64>(mpz_class(((-base) % r + r) % r).get_si());
      std::vector<i64> hits;
      for (i64 k = first; k <= W; k += r) {
        hits.push_back(k);
        if (hits.size() > max_hits) return std::nullopt;
      }
      return hits;
    }
    baby.emplace(key_of(cur), static_cast<u32>(j));
    cur = J.add(cur, D);
  }
  const Div giant = J.neg(J.mul(static_cast<u64>(m), D));
  Div R = J.neg(J.mul(base, D));
  std::vector<i64> hits;
  for (i64 i = 0; i * m <= W; ++i) {
    auto it = baby.find(key_of(R));
    if (it != baby.end()) {
      const i64 k = i * m + it->second;
      if (k <= W) hits.push_back(k);
      if (hits.size() > max_hits) return std::nullopt;
    }
    R = J.add(R, giant);
  }
  return hits;
}

u64 seed_of(const Genus2Curve& C) {
  u64 h = 0x6a09e667f3bcc909ULL ^ C.q();
  for (u32 c : C.f()) h = (h ^ c) * 0x100000001b3ULL;
  return h;
}

}  // namespace

bool is_imaginary_model(const Genus2Curve& C) {
  return C.degree() == 5 || C.field().chi(C.f().back()) == -1;
}

namespace {

// x^6 f(x0 + 1/x).
SPoly invert_at(const gf::SmallField& F, const SPoly& f, u32 x0) {
  // Taylor shift h(x) = f(x + x0) by repeated synthetic division.
  SPoly h = f;
  h.resize(7, 0);
  for (int i = 0; i < 7; ++i) {
    for (int j = 5; j >= i; --j) h[j] = F.add(h[j], F.mul(x0, h[j + 1]));
  }
  SPoly g(7);
  for (int i = 0; i < 7; ++i) g[i] = h[6 - i];
  sp::trim(g);
  return g;
}

}  // namespace

std::optional<Genus2Curve> imaginary_model(const Genus2Curve& C) {
  if (is_imaginary_model(C)) return C;
  const auto& F = C.field();
  std::optional<u32> nonsq;
  for (u32 x = 0; x < F.q(); ++x) {
    const u32 v = sp::eval(F, C.f(), x);
    if (v == 0) return Genus2Curve(C.field_ptr(), invert_at(F, C.f(), x));
    if (!nonsq && F.chi(v) == -1) nonsq = x;
    if (nonsq && x > 64) break;
  }
  if (nonsq) return Genus2Curve(C.field_ptr(), invert_at(F, C.f(), *nonsq));
  return std::nullopt;
}

Genus2Curve quadratic_twist(const Genus2Curve& C) {
  return Genus2Curve(C.field_ptr(), sp::scale(C.field(), C.f(), C.field().nonsquare()));
}

bool is_valid_divisor(const Genus2Curve& C, const MumfordDivisor& D) {
  return Jac(C.field(), C.f()).valid(to_div(D));
}

MumfordDivisor cantor_add(const Genus2Curve& C, const MumfordDivisor& D1, const MumfordDivisor& D2) {
  if (!is_imaginary_model(C)) throw std::invalid_argument("Cantor arithmetic needs an imaginary model");
  Jac J(C.field(), C.f());
  if (!J.valid(to_div(D1)) || !J.valid(to_div(D2))) throw std::invalid_argument("invalid Mumford divisor");
  return from_div(J.add(to_div(D1), to_div(D2)));
}

MumfordDivisor cantor_neg(const Genus2Curve& C, const MumfordDivisor& D) {
  Jac J(C.field(), C.f());
  return from_div(J.neg(to_div(D)));
}

MumfordDivisor cantor_mul(const Genus2Curve& C, const mpz_class& n, const MumfordDivisor& D) {
  if (!is_imaginary_model(C)) throw std::invalid_argument("Cantor arithmetic needs an imaginary model");
  Jac J(C.field(), C.f());
  return from_div(J.mul(n, to_div(D)));
}

std::optional<MumfordDivisor> random_divisor(const Genus2Curve& C, std::mt19937_64& rng) {
  if (!is_imaginary_model(C)) throw std::invalid_argument("Cantor arithmetic needs an imaginary model");
  Jac J(C.field(), C.f());
  auto D = random_div(J, C.field(), C.degree(), rng);
  if (!D) return std::nullopt;
  return from_div(*D);
}

namespace {

WeilCoeffs exhaustive_coeffs(const Genus2Curve& C) {
  const i64 q = static_cast<i64>(C.q());
  const i64 n1 = static_cast<i64>(genus2_count(C, 1));
  const i64 n2 = static_cast<i64>(genus2_count(C, 2));
  const i64 a1 = q + 1 - n1;
  const i64 t = a1 * a1 - (q * q + 1 - n2);
  if (t % 2 != 0) throw std::logic_error("inconsistent point counts");
  return WeilCoeffs{a1, t / 2};
}

// Bounds for a2 given a1 from the real Weil polynomial.
std::pair<i64, i64> a2_window(i64 q, i64 a1) {
  const i64 hi = (a1 * a1 + 8 * q) / 4 - ((a1 * a1 + 8 * q) % 4 < 0 ? 1 : 0);
  // Smallest a2 with a2 + 2q >= 0 and (a2 + 2q)^2 >= 4 a1^2 q.
  const mpz_class need = 4 * mpz_class(static_cast<long>(a1 * a1)) * static_cast<long>(q);
  mpz_class r = sqrt(need);
  if (r * r < need) r += 1;
  const i64 lo = r.get_si() - 2 * q;
  return {lo, hi};
}

i64 jacobian_a2(const Genus2Curve& C, i64 a1) {
  const auto& F = C.field();
  if (!F.prime()) throw std::invalid_argument("Jacobian strategy needs a prime field");
  const i64 q = static_cast<i64>(C.q());
  const auto [lo, hi] = a2_window(q, a1);
  if (hi < lo) throw std::logic_error("empty a2 window");
  const auto M = imaginary_model(C);
  const auto Mt = imaginary_model(quadratic_twist(C));
  if (!M || !Mt) throw Undetermined("no imaginary model for the Jacobian strategy");
  const Jac J(F, M->f()), Jt(F, Mt->f());
  const mpz_class Q = static_cast<long>(q);
  const mpz_class base = 1 - mpz_class(static_cast<long>(a1)) * (1 + Q) + Q * Q + static_cast<long>(lo);
  const mpz_class base_t = 1 + mpz_class(static_cast<long>(a1)) * (1 + Q) + Q * Q + static_cast<long>(lo);
  const i64 W = hi - lo;
  std::mt19937_64 rng(seed_of(C));
  std::optional<std::vector<i64>> cands;
  for (int round = 0; round < 12; ++round) {
    auto D = random_div(J, F, M->degree(), rng);
    if (D) {
      if (!cands) {
        cands = bsgs_hits(J, *D, base, W, 4096);
      } else {
        std::vector<i64> keep;
        for (i64 k : *cands) {
          if (J.mul(base + static_cast<long>(k), *D).u.d == 0) keep.push_back(k);
        }
        cands = std::move(keep);
      }
    }
    if (cands && cands->size() > 1) {
      auto Dt = random_div(Jt, F, Mt->degree(), rng);
      if (Dt) {
        std::vector<i64> keep;
        for (i64 k : *cands) {
          if (Jt.mul(base_t + static_cast<long>(k), *Dt).u.d == 0) keep.push_back(k);
        }
        cands = std::move(keep);
      }
    }
    if (cands && cands->size() == 1) return lo + cands->front();
    if (cands && cands->empty()) throw std::logic_error("Jacobian order search lost the true order");
  }
  if (q <= 3000) return exhaustive_coeffs(C).a2;
  throw Undetermined("Jacobian order ambiguous after all attempts");
}

}  // namespace

mpz_class jacobian_order(const Genus2Curve& C) {
  const auto w = weil_coeffs(C, Strategy::Jacobian);
  const mpz_class Q = static_cast<unsigned long>(C.q());
  return 1 - mpz_class(static_cast<long>(w.a1)) * (1 + Q) + static_cast<long>(w.a2) + Q * Q;
}

WeilCoeffs weil_coeffs(const Genus2Curve& C, Strategy strategy) {
  if (strategy == Strategy::Auto) {
    strategy = (C.q() <= kExhaustiveLimit || !C.field().prime()) ? Strategy::Exhaustive : Strategy::Jacobian;
  }
  if (strategy == Strategy::Exhaustive) return exhaustive_coeffs(C);
  const i64 q = static_cast<i64>(C.q());
  const i64 a1 = q + 1 - static_cast<i64>(genus2_count(C, 1));
  return WeilCoeffs{a1, jacobian_a2(C, a1)};
}

}  // namespace splitsurf::genus2
