#include "splitsurf/ellipt.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "splitsurf/error.hpp"
#include "splitsurf/numth.hpp"

namespace splitsurf::ellipt {

using gf::FieldElement;
using gf::sp::SPoly;
namespace sp = gf::sp;

FieldPtr small_field(u64 q) {
  static std::mutex mu;
  static std::map<u64, FieldPtr> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(q);
  if (it != cache.end()) return it->second;
  const auto pp = numth::prime_power(q);
  if (!pp || pp->first < 5) throw std::invalid_argument("q must be a power of a prime p >= 5");
  auto F = std::make_shared<const gf::SmallField>(pp->first, pp->second);
  cache.emplace(q, F);
  return F;
}

namespace {

i64 isqrt_floor(i64 n) { return n <= 0 ? 0 : static_cast<i64>(numth::isqrt(static_cast<u64>(n))); }

u64 mod_inverse(u64 a, u64 m) {
  i64 t = 0, nt = 1;
  i64 r = static_cast<i64>(m), nr = static_cast<i64>(a % m);
  while (nr != 0) {
    const i64 qq = r / nr;
    t -= qq * nt;
    std::swap(t, nt);
    r -= qq * nr;
    std::swap(r, nr);
  }
  if (r != 1) throw std::domain_error("not invertible");
  return static_cast<u64>(t < 0 ? t + static_cast<i64>(m) : t);
}

u64 umod(i64 v, u64 m) {
  const i64 mm = static_cast<i64>(m);
  return static_cast<u64>(((v % mm) + mm) % mm);
}

// Affine arithmetic on y^2 = x^3 + a x + b over a prime field, for BSGS.
struct PrimePoint {
  u64 x = 0, y = 0;
  bool inf = true;
};

struct PrimeCurve {
  u64 p, a, b;

  PrimePoint add(const PrimePoint& P, const PrimePoint& Q) const {
    if (P.inf) return Q;
    if (Q.inf) return P;
    u64 lam;
    if (P.x == Q.x) {
      if ((P.y + Q.y) % p == 0) return PrimePoint{};
      lam = (3 * (P.x * P.x % p) + a) % p * mod_inverse(2 * P.y % p, p) % p;
    } else {
      lam = (Q.y + p - P.y) % p * mod_inverse((Q.x + p - P.x) % p, p) % p;
    }
    const u64 x3 = (lam * lam % p + 2 * p - P.x - Q.x) % p;
    const u64 y3 = (lam * ((P.x + p - x3) % p) % p + p - P.y) % p;
    return PrimePoint{x3, y3, false};
  }
  PrimePoint neg(const PrimePoint& P) const { return P.inf ? P : PrimePoint{P.x, (p - P.y) % p, false}; }
  PrimePoint mul(u64 k, PrimePoint P) const {
    PrimePoint R;
    while (k) {
      if (k & 1) R = add(R, P);
      k >>= 1;
      if (k) P = add(P, P);
    }
    return R;
  }
};

}  // namespace

u64 point_count_exhaustive(const gf::SmallField& F, u32 a4, u32 a6) {
  i64 total = 1;
  const u32 q = F.q();
  if (F.prime()) {
    const u64 p = F.p();
    const bool table = q <= (1u << 22);
    const std::vector<std::int8_t>* chi = table ? &F.chi_table() : nullptr;
    for (u64 x = 0; x < p; ++x) {
      const u64 v = ((x * x % p + a4) % p * x + a6) % p;
      total += 1 + (table ? (*chi)[v] : F.chi(static_cast<u32>(v)));
    }
  } else {
    for (u32 x = 0; x < q; ++x) {
      const u32 v = F.add(F.mul(F.add(F.mul(x, x), a4), x), a6);
      total += 1 + F.chi(v);
    }
  }
  return static_cast<u64>(total);
}

u64 point_count_bsgs(const gf::SmallField& F, u32 a4, u32 a6) {
  if (!F.prime()) throw std::invalid_argument("BSGS point counting is implemented for prime fields");
  const u64 p = F.p();
  const PrimeCurve C{p, a4, a6};
  const i64 w = isqrt_floor(static_cast<i64>(4 * p)) + 1;  // 2 sqrt(p) rounded up
  const u64 lo = p + 1 > static_cast<u64>(w) ? p + 1 - static_cast<u64>(w) : 1;
  const u64 hi = p + 1 + static_cast<u64>(w);
  std::vector<u64> candidates;
  for (u64 N = lo; N <= hi; ++N) candidates.push_back(N);
  std::mt19937_64 rng(0xb5650000ULL ^ (p * 1000003ULL + a4 * 31ULL + a6));
  std::uniform_int_distribution<u64> dist(0, p - 1);
  for (int round = 0; round < 8 && candidates.size() > 1; ++round) {
    PrimePoint P;
    while (true) {
      const u64 x = dist(rng);
      const u64 v = ((x * x % p + a4) % p * x + a6) % p;
      auto s = F.sqrt(static_cast<u32>(v));
      if (!s) continue;
      P = PrimePoint{x, *s, false};
      break;
    }
    // Solve (lo + k) P = 0 for k in [0, hi - lo] by baby steps j P and giant steps.
    const u64 span = hi - lo + 1;
    const u64 s = static_cast<u64>(numth::isqrt(span)) + 1;
    std::unordered_map<u64, u64> baby;
    PrimePoint J;
    u64 small_order = 0;
    for (u64 j = 0; j < s; ++j) {
      if (j > 0 && J.inf) {
        small_order = j;
        break;
      }
      baby.emplace(J.inf ? ~u64{0} : J.x * p + J.y, j);
      J = C.add(J, P);
    }
    if (small_order) {
      std::vector<u64> keep;
      for (u64 N : candidates) {
        if (N % small_order == 0) keep.push_back(N);
      }
      candidates.swap(keep);
      continue;
    }
    const PrimePoint step = C.neg(C.mul(s, P));
    PrimePoint R = C.neg(C.mul(lo, P));  // looking for k P = -lo P
    std::vector<u64> hits;
    for (u64 i = 0; i * s < span; ++i) {
      auto it = baby.find(R.inf ? ~u64{0} : R.x * p + R.y);
      if (it != baby.end()) {
        const u64 k = i * s + it->second;
        if (k < span) hits.push_back(lo + k);
      }
      R = C.add(R, step);
    }
    std::sort(hits.begin(), hits.end());
    std::vector<u64> keep;
    std::set_intersection(candidates.begin(), candidates.end(), hits.begin(), hits.end(), std::back_inserter(keep));
    candidates.swap(keep);
  }
  if (candidates.size() == 1) return candidates[0];
  if (p <= 1000000) return point_count_exhaustive(F, a4, a6);
  throw Undetermined("BSGS point count ambiguous");
}

u64 point_count(const EllipticCurve& E) {
  if (E.field().prime() && E.q() > 4096) return point_count_bsgs(E.field(), E.a4(), E.a6());
  return point_count_exhaustive(E.field(), E.a4(), E.a6());
}

EllipticCurve::EllipticCurve(FieldPtr field, u32 a4, u32 a6) : field_(std::move(field)), a4_(a4), a6_(a6) {
  const auto& F = *field_;
  const u32 d = F.add(F.mul(F.from_int(4), F.mul(a4, F.mul(a4, a4))), F.mul(F.from_int(27), F.mul(a6, a6)));
  if (d == 0) throw std::invalid_argument("singular Weierstrass equation");
  trace_ = static_cast<i64>(q()) + 1 - static_cast<i64>(point_count(*this));
}

u32 EllipticCurve::j_invariant() const {
  const auto& F = *field_;
  const u32 a43 = F.mul(F.from_int(4), F.mul(a4_, F.mul(a4_, a4_)));
  const u32 den = F.add(a43, F.mul(F.from_int(27), F.mul(a6_, a6_)));
  return F.mul(F.mul(F.from_int(1728), a43), F.inv(den));
}

std::vector<CurveClass> enumerate_curves(u64 q) {
  if (q > 10000) throw std::invalid_argument("enumerate_curves: q too large for full enumeration");
  const FieldPtr Fp = small_field(q);
  const auto& F = *Fp;
  std::vector<CurveClass> out;
  const u32 g = F.generator();
  const u32 j1728 = F.from_int(1728);
  const u32 n = F.nonsquare();
  for (u32 j = 0; j < F.q(); ++j) {
    if (j == 0) {
      const u32 d = static_cast<u32>(std::gcd<u64>(6, q - 1));
      for (u32 i = 0; i < d; ++i) out.push_back({EllipticCurve(Fp, 0, F.pow(g, i)), d});
    } else if (j == j1728) {
      const u32 d = static_cast<u32>(std::gcd<u64>(4, q - 1));
      for (u32 i = 0; i < d; ++i) out.push_back({EllipticCurve(Fp, F.pow(g, i), 0), d});
    } else {
      const u32 c = F.sub(j1728, j);
      const u32 k = F.mul(j, c);
      const u32 a4 = F.mul(F.from_int(3), k);
      const u32 a6 = F.mul(F.from_int(2), F.mul(k, c));
      out.push_back({EllipticCurve(Fp, a4, a6), 2});
      out.push_back({EllipticCurve(Fp, F.mul(a4, F.mul(n, n)), F.mul(a6, F.mul(n, F.mul(n, n)))), 2});
    }
  }
  return out;
}

u64 supersingular_trace0_count(u64 p) {
  if (p < 5 || !numth::is_prime(p)) throw std::invalid_argument("p must be a prime >= 5");
  const i64 v = static_cast<i64>(p) + 6 - 4 * numth::kronecker_symbol(-3, static_cast<i64>(p)) -
                3 * numth::kronecker_symbol(-4, static_cast<i64>(p));
  return static_cast<u64>(v / 12);
}

u64 frobenius_conductor(u64 q, i64 a) {
  const i64 delta = a * a - 4 * static_cast<i64>(q);
  if (delta >= 0) throw std::invalid_argument("trace outside the open Hasse interval");
  return static_cast<u64>(quadorders::decompose(delta).conductor);
}

namespace {

bool is_square_int(u64 n) {
  const u64 r = numth::isqrt(n);
  return r * r == n;
}

}  // namespace

std::vector<Stratum> strata(u64 q, i64 a) {
  const auto pp = numth::prime_power(q);
  if (!pp || pp->first < 5) throw std::invalid_argument("q must be a power of a prime p >= 5");
  const u64 p = pp->first;
  if (a * a >= 4 * static_cast<i64>(q)) throw std::invalid_argument("trace outside the open Hasse interval");
  const bool ordinary = umod(a, p) != 0;
  if (!ordinary && !(a == 0 && !is_square_int(q))) {
    throw std::invalid_argument("strata: only ordinary traces or a = 0 over nonsquare q");
  }
  const auto D = quadorders::decompose(a * a - 4 * static_cast<i64>(q));
  u64 f = static_cast<u64>(D.conductor);
  u64 fprime = f;
  while (fprime % p == 0) fprime /= p;
  std::vector<u64> cs = numth::divisors(fprime);
  std::sort(cs.rbegin(), cs.rend());
  std::vector<Stratum> out;
  for (u64 c : cs) {
    const i64 disc = static_cast<i64>(c * c) * D.fundamental;
    out.push_back(Stratum{q, a, quadorders::decompose(disc), f / c, quadorders::class_number(disc)});
  }
  return out;
}

namespace {

// Division polynomials f_n in x (psi_n for odd n, psi_n / (2y) for even n),
// optionally reduced modulo a fixed polynomial.
class DivisionPolys {
 public:
  DivisionPolys(const gf::SmallField& F, u32 a4, u32 a6, SPoly modulus = {})
      : F_(F), a4_(a4), a6_(a6), mod_(std::move(modulus)) {
    cubic_ = red({a6, a4, 0, 1});
    y4_ = red(sp::scale(F, sp::mul(F, cubic_, cubic_), F.from_int(16)));
  }

  const SPoly& cubic() const { return cubic_; }

  const SPoly& get(i64 n) {
    auto it = memo_.find(n);
    if (it != memo_.end()) return it->second;
    SPoly v;
    const auto& F = F_;
    const u32 a = a4_, b = a6_;
    if (n == 0) {
      v = {};
    } else if (n == 1 || n == 2) {
      v = {1};
    } else if (n == 3) {
      v = {F.neg(F.mul(a, a)), F.mul(F.from_int(12), b), F.mul(F.from_int(6), a), 0, F.from_int(3)};
    } else if (n == 4) {
      const u32 aa = F.mul(a, a);
      SPoly t = {F.neg(F.add(F.mul(F.from_int(8), F.mul(b, b)), F.mul(aa, a))),
                 F.neg(F.mul(F.from_int(4), F.mul(a, b))),
                 F.neg(F.mul(F.from_int(5), aa)),
                 F.mul(F.from_int(20), b),
                 F.mul(F.from_int(5), a),
                 0,
                 1};
      v = sp::scale(F, t, F.from_int(2));
    } else if (n % 2 == 1) {
      const i64 m = (n - 1) / 2;
      SPoly t1 = mul(get(m + 2), cube(get(m)));
      SPoly t2 = mul(get(m - 1), cube(get(m + 1)));
      if (m % 2 == 0) {
        t1 = mul(t1, y4_);
      } else {
        t2 = mul(t2, y4_);
      }
      v = sp::sub(F, t1, t2);
    } else {
      const i64 m = n / 2;
      const SPoly& fm1 = get(m - 1);
      const SPoly& fp1 = get(m + 1);
      SPoly inner = sp::sub(F, mul(get(m + 2), mul(fm1, fm1)), mul(get(m - 2), mul(fp1, fp1)));
      v = mul(get(m), inner);
    }
    v = red(v);
    return memo_.emplace(n, std::move(v)).first->second;
  }

  // psi_n^2 as a polynomial in x.
  SPoly psi_sq(i64 n) {
    const SPoly& f = get(n);
    SPoly s = mul(f, f);
    if (n % 2 == 0) s = mul(sp::scale(F_, cubic_, F_.from_int(4)), s);
    return s;
  }

  // psi_{n-1} psi_{n+1} as a polynomial in x.
  SPoly psi_neighbors(i64 n) {
    SPoly s = mul(get(n - 1), get(n + 1));
    if (n % 2 == 1) s = mul(sp::scale(F_, cubic_, F_.from_int(4)), s);
    return s;
  }

  SPoly mul(const SPoly& a, const SPoly& b) { return red(sp::mul(F_, a, b)); }

 private:
  SPoly red(const SPoly& a) const { return mod_.empty() ? a : sp::mod(F_, a, mod_); }
  SPoly cube(const SPoly& a) { return mul(a, mul(a, a)); }

  const gf::SmallField& F_;
  u32 a4_, a6_;
  SPoly mod_;
  SPoly cubic_, y4_;
  std::map<i64, SPoly> memo_;
};

// x-coordinates of E[m] \ {O} (m >= 2).
SPoly torsion_xpoly(const gf::SmallField& F, u32 a4, u32 a6, u64 m) {
  if (m == 1) return {1};
  DivisionPolys D(F, a4, a6);
  SPoly f = D.get(static_cast<i64>(m));
  if (m % 2 == 0) f = sp::mul(F, f, D.cubic());
  return sp::monic(F, f);
}

}  // namespace

bool frobenius_scalar_on(const EllipticCurve& E, u64 m) {
  if (m == 1) return true;
  if (numth::gcd(m, E.q()) != 1) throw std::invalid_argument("m must be coprime to q");
  const auto& F = E.field();
  const u64 q = E.q();
  std::vector<u64> cands;
  for (u64 d = 1; d < m; ++d) {
    if (numth::gcd(d, m) != 1) continue;
    if (umod(2 * static_cast<i64>(d) - E.trace(), m) != 0) continue;
    if ((d * d) % m != q % m) continue;
    cands.push_back(d);
  }
  if (cands.empty()) return false;
  DivisionPolys exact(F, E.a4(), E.a6());
  SPoly fm = sp::monic(F, exact.get(static_cast<i64>(m)));
  SPoly gx = m % 2 == 0 ? sp::mul(F, fm, exact.cubic()) : fm;
  const SPoly X = {0, 1};
  const SPoly xq = sp::powmod(F, X, mpz_class(static_cast<unsigned long>(q)), gx);
  const SPoly xq_minus_x = sp::sub(F, xq, sp::mod(F, X, gx));
  SPoly half;
  bool have_half = false;
  for (u64 d : cands) {
    DivisionPolys R(F, E.a4(), E.a6(), gx);
    const i64 di = static_cast<i64>(d);
    const SPoly s = R.psi_sq(di);
    const SPoly lhs = sp::add(F, R.mul(xq_minus_x, s), R.psi_neighbors(di));
    if (!lhs.empty()) continue;
    if (sp::degree(fm) <= 0) return true;
    if (!have_half) {
      half = sp::powmod(F, exact.cubic(), mpz_class(static_cast<unsigned long>((q - 1) / 2)), fm);
      have_half = true;
    }
    const SPoly s2 = sp::mod(F, sp::mul(F, s, s), fm);
    const SPoly ylhs = sp::sub(F, sp::mulmod(F, half, s2, fm), sp::mod(F, R.get(2 * di), fm));
    if (ylhs.empty()) return true;
  }
  return false;
}

u64 relative_conductor(const EllipticCurve& E) {
  const u64 q = E.q();
  const u64 p = E.p();
  const i64 a = E.trace();
  if (E.ordinary()) {
    const u64 f = frobenius_conductor(q, a);
    u64 r = 1;
    for (const auto& [l, e] : numth::factorize(f).factors) {
      u64 m = 1;
      for (unsigned j = 1; j <= e; ++j) {
        if (!frobenius_scalar_on(E, m * l)) break;
        m *= l;
      }
      r *= m;
    }
    return r;
  }
  const bool square = is_square_int(q);
  if (square) {
    const i64 s = static_cast<i64>(numth::isqrt(q));
    if (a == 2 * s || a == -2 * s) return 0;
    return static_cast<u64>(s);
  }
  // q nonsquare, a = 0 (p >= 5).
  const u64 base = numth::isqrt(q / p);
  if (p % 4 == 3) {
    // End E is the maximal order exactly when E[2] is rational.
    if (frobenius_scalar_on(E, 2)) return 2 * base;
  }
  return base;
}

mpz_class sum_relcond_closed_form(u64 q) {
  const auto pp = numth::prime_power(q);
  if (!pp || pp->first < 5) throw std::invalid_argument("q must be a power of a prime p >= 5");
  const u64 p = pp->first;
  const i64 w = isqrt_floor(static_cast<i64>(4 * q));
  mpz_class total = 0;
  for (i64 a = -w; a <= w; ++a) {
    if (a * a >= 4 * static_cast<i64>(q) || umod(a, p) == 0) continue;
    const auto D = quadorders::decompose(a * a - 4 * static_cast<i64>(q));
    const u64 f = static_cast<u64>(D.conductor);
    for (u64 c : numth::divisors(f)) {
      const i64 h = quadorders::class_number(static_cast<i64>(c * c) * D.fundamental);
      total += mpz_class(static_cast<unsigned long>(h)) * static_cast<unsigned long>(f / c);
    }
  }
  return total;
}

mpz_class sum_relcond_enumerated(u64 q) {
  mpz_class total = 0;
  for (const auto& c : enumerate_curves(q)) {
    if (c.curve.ordinary()) total += static_cast<unsigned long>(relative_conductor(c.curve));
  }
  return total;
}

u64 FrobMatrix::det() const {
  const u64 a = m[0] % n, b = m[1] % n, c = m[2] % n, d = m[3] % n;
  return (a * d % n + n - b * c % n) % n;
}

bool CurveOver::on_curve(const Point& P) const {
  if (P.inf) return true;
  const auto& F = *field;
  const FieldElement rhs = F.add(F.mul(F.add(F.sqr(P.x), a4), P.x), a6);
  return F.sqr(P.y) == rhs;
}

Point CurveOver::neg(const Point& P) const {
  if (P.inf) return P;
  return Point{P.x, field->neg(P.y), false};
}

Point CurveOver::add(const Point& P, const Point& Q) const {
  if (P.inf) return Q;
  if (Q.inf) return P;
  const auto& F = *field;
  FieldElement lam;
  if (P.x == Q.x) {
    if (F.is_zero(F.add(P.y, Q.y))) return identity();
    lam = F.mul(F.add(F.scale(F.sqr(P.x), 3), a4), F.inv(F.scale(P.y, 2)));
  } else {
    lam = F.mul(F.sub(Q.y, P.y), F.inv(F.sub(Q.x, P.x)));
  }
  const FieldElement x3 = F.sub(F.sub(F.sqr(lam), P.x), Q.x);
  const FieldElement y3 = F.sub(F.mul(lam, F.sub(P.x, x3)), P.y);
  return Point{x3, y3, false};
}

Point CurveOver::mul(i64 k, const Point& P) const {
  Point base = k < 0 ? neg(P) : P;
  u64 e = static_cast<u64>(k < 0 ? -k : k);
  Point R = identity();
  while (e) {
    if (e & 1) R = add(R, base);
    e >>= 1;
    if (e) base = add(base, base);
  }
  return R;
}

Point CurveOver::frobenius(const Point& P, u64 q) const {
  if (P.inf) return P;
  return Point{field->pow(P.x, q), field->pow(P.y, q), false};
}

namespace {

// Miller function f_{m,P} evaluated at Q as numerator/denominator; false if a
// factor vanishes (Q lies in the span of P).
bool miller(const CurveOver& C, const Point& P, const Point& Q, u64 m, FieldElement& num, FieldElement& den) {
  const auto& F = *C.field;
  num = F.one();
  den = F.one();
  Point T = P;
  u64 j = 1;
  for (; j < m && !T.inf; ++j) {
    FieldElement line;
    const bool vertical = T.x == P.x && (F.is_zero(F.add(T.y, P.y)));
    if (vertical) {
      line = F.sub(Q.x, T.x);
    } else {
      FieldElement lam;
      if (T == P) {
        lam = F.mul(F.add(F.scale(F.sqr(T.x), 3), C.a4), F.inv(F.scale(T.y, 2)));
      } else {
        lam = F.mul(F.sub(P.y, T.y), F.inv(F.sub(P.x, T.x)));
      }
      line = F.sub(F.sub(Q.y, T.y), F.mul(lam, F.sub(Q.x, T.x)));
    }
    if (F.is_zero(line)) return false;
    num = F.mul(num, line);
    T = C.add(T, P);
    if (!T.inf) {
      const FieldElement v = F.sub(Q.x, T.x);
      if (F.is_zero(v)) return false;
      den = F.mul(den, v);
    }
  }
  // P of order r < m: f_{m,P} = f_{r,P}^{m/r}.
  if (j < m) {
    num = F.pow(num, m / j);
    den = F.pow(den, m / j);
  }
  return true;
}

}  // namespace

FieldElement weil_pairing(const CurveOver& C, const Point& P, const Point& Q, u64 m) {
  const auto& F = *C.field;
  if (P.inf || Q.inf || m == 1) return F.one();
  FieldElement n1, d1, n2, d2;
  if (!miller(C, P, Q, m, n1, d1)) return F.one();
  if (!miller(C, Q, P, m, n2, d2)) return F.one();
  FieldElement r = F.mul(F.mul(n1, d2), F.inv(F.mul(d1, n2)));
  if (m % 2 == 1) r = F.neg(r);
  return r;
}

namespace {

// Integer coefficients of the m-th cyclotomic polynomial.
std::vector<i64> cyclotomic(u64 m) {
  std::vector<i64> num(m + 1, 0);
  num[0] = -1;
  num[m] = 1;
  for (u64 d : numth::divisors(m)) {
    if (d == m) continue;
    const auto phi = cyclotomic(d);
    // Exact division of num by phi (monic).
    std::vector<i64> quo(num.size() - phi.size() + 1, 0);
    for (std::size_t i = num.size(); i-- >= phi.size();) {
      const i64 c = num[i];
      const std::size_t shift = i - (phi.size() - 1);
      quo[shift] = c;
      for (std::size_t j = 0; j < phi.size(); ++j) num[shift + j] -= c * phi[j];
      if (i == phi.size() - 1) break;
    }
    num = quo;
  }
  return num;
}

bool lex_less_top(const SPoly& a, const SPoly& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return std::lexicographical_compare(a.rbegin(), a.rend(), b.rbegin(), b.rend());
}

u64 element_order(const gf::Field& L, const FieldElement& w, u64 m) {
  FieldElement t = w;
  for (u64 k = 1; k <= m; ++k) {
    if (L.is_one(t)) return k;
    t = L.mul(t, w);
  }
  return 0;
}

struct Tower {
  std::shared_ptr<const gf::Field> field;
  std::vector<std::pair<std::shared_ptr<const gf::Field>, gf::Extension>> steps;

  FieldElement embed(const gf::Field& base, const FieldElement& a) const {
    FieldElement v = a;
    const gf::Field* cur = &base;
    for (const auto& [from, ext] : steps) {
      v = ext.embed(*cur, v);
      cur = &ext.field;
    }
    return v;
  }
};

u64 dlog2(const std::vector<Point>& table, u64 m, const Point& R) {
  for (u64 i = 0; i < table.size(); ++i) {
    if (table[i] == R) return i;
  }
  (void)m;
  throw std::logic_error("torsion point not in the span of the basis");
}

TorsionComponent build_component(const EllipticCurve& E, u64 m, unsigned max_degree) {
  const auto& S = E.field();
  const gf::Field& Fq = S.field();
  const u64 q = E.q();
  const auto fac = numth::factorize(m).factors;
  const u64 ell = fac.at(0).first;
  SPoly g_all = torsion_xpoly(S, E.a4(), E.a6(), m);
  SPoly g_prev = torsion_xpoly(S, E.a4(), E.a6(), m / ell);
  SPoly g_exact = sp::divmod(S, g_all, g_prev).first;
  std::mt19937_64 rng(0x7025100ULL + m * 7919ULL + q);
  auto factors = gf::factor_squarefree(Fq, sp::to_poly(S, g_exact), rng);
  const SPoly cubic = E.cubic();
  struct Cand {
    SPoly h;
    unsigned e;
    bool square;
  };
  std::vector<Cand> cands;
  unsigned k = 1;
  for (const auto& f : factors) {
    SPoly h = sp::from_poly(S, f.poly);
    const u32 nrm = sp::resultant(S, h, cubic);
    const bool sq = S.chi(nrm) >= 0;
    const unsigned e = static_cast<unsigned>(f.degree) * (sq ? 1 : 2);
    k = std::max(k, e);
    cands.push_back({h, e, sq});
  }
  if (k > max_degree) {
    throw Undetermined("torsion extension degree " + std::to_string(k) + " exceeds the cap " +
                       std::to_string(max_degree));
  }
  auto build = [&](const Cand& c, Tower& T, Point& P) {
    auto base = std::make_shared<const gf::Field>(Fq);
    gf::Extension e1 = gf::extend(Fq, sp::to_poly(S, c.h));
    auto K = std::make_shared<const gf::Field>(e1.field);
    T.steps.emplace_back(base, e1);
    FieldElement x = e1.root_image;
    const FieldElement a4 = e1.embed(Fq, S.to_element(E.a4()));
    const FieldElement a6 = e1.embed(Fq, S.to_element(E.a6()));
    const FieldElement val = K->add(K->mul(K->add(K->sqr(x), a4), x), a6);
    if (c.square) {
      T.field = K;
      P = Point{x, *K->sqrt(val), false};
      return;
    }
    gf::Poly quad = {K->neg(val), K->zero(), K->one()};
    gf::Extension e2 = gf::extend(*K, quad);
    T.steps.emplace_back(K, e2);
    T.field = std::make_shared<const gf::Field>(e2.field);
    P = Point{e2.embed(*K, x), e2.root_image, false};
  };
  TorsionComponent out;
  out.m = m;
  out.k = k;
  Tower tower;
  Point P, Q;
  bool found = false;
  for (const auto& c : cands) {
    if (c.e != k) continue;
    Tower T;
    Point P0;
    build(c, T, P0);
    CurveOver C{T.field.get(), T.embed(Fq, S.to_element(E.a4())), T.embed(Fq, S.to_element(E.a6()))};
    const Point fP = C.frobenius(P0, q);
    const FieldElement w = weil_pairing(C, P0, fP, m);
    if (element_order(*T.field, w, m) == m) {
      tower = T;
      P = P0;
      Q = fP;
      found = true;
      break;
    }
    if (tower.steps.empty()) {
      tower = T;
      P = P0;
    }
  }
  CurveOver C{tower.field.get(), tower.embed(Fq, S.to_element(E.a4())), tower.embed(Fq, S.to_element(E.a6()))};
  if (!found) {
    // Frobenius alone does not generate: look for a partner among the other torsion points.
    const gf::Field& L = *tower.field;
    for (const auto& c : cands) {
      gf::Poly hL;
      for (u32 coef : c.h) hL.push_back(tower.embed(Fq, S.to_element(coef)));
      for (const auto& x : gf::poly_roots(hL, L)) {
        const FieldElement val = L.add(L.mul(L.add(L.sqr(x), C.a4), x), C.a6);
        auto y = L.sqrt(val);
        if (!y) continue;
        const Point R{x, *y, false};
        if (element_order(L, weil_pairing(C, P, R, m), m) == m) {
          Q = R;
          found = true;
          break;
        }
      }
      if (found) break;
    }
    if (!found) throw std::logic_error("failed to complete a torsion basis");
  }
  const gf::Field& L = *tower.field;
  // Table of i P + j Q indexed by i * m + j.
  std::vector<Point> table(m * m);
  Point iP = C.identity();
  for (u64 i = 0; i < m; ++i) {
    Point cur = iP;
    for (u64 j = 0; j < m; ++j) {
      table[i * m + j] = cur;
      cur = C.add(cur, Q);
    }
    iP = C.add(iP, P);
  }
  const u64 cp = dlog2(table, m, C.frobenius(P, q));
  const u64 cq = dlog2(table, m, C.frobenius(Q, q));
  FrobMatrix gamma;
  gamma.n = m;
  gamma.m = {cp / m, cq / m, cp % m, cq % m};
  if (gamma.trace() != umod(E.trace(), m) || gamma.det() != q % m) {
    throw std::logic_error("Frobenius matrix has wrong trace or determinant");
  }
  const FieldElement w = weil_pairing(C, P, Q, m);
  const SPoly h0 = canonical_root_factor(S, m);
  gf::Poly h0L;
  for (u32 coef : h0) h0L.push_back(tower.embed(Fq, S.to_element(coef)));
  u64 u = 0;
  for (u64 t = 1; t < m && u == 0; ++t) {
    if (numth::gcd(t, m) != 1) continue;
    if (L.is_zero(gf::poly::eval(L, h0L, L.pow(w, t)))) u = mod_inverse(t, m);
  }
  if (u == 0) throw std::logic_error("pairing value is not a root of unity of the expected order");
  out.field = tower.field;
  out.curve = C;
  out.P = P;
  out.Q = Q;
  out.gamma = gamma;
  out.u = u;
  return out;
}

}  // namespace

SPoly canonical_root_factor(const gf::SmallField& F, u64 m) {
  const auto coeffs = cyclotomic(m);
  SPoly phi;
  for (i64 c : coeffs) phi.push_back(F.from_int(c));
  sp::trim(phi);
  std::mt19937_64 rng(0xc7c10ULL + m);
  auto factors = gf::factor_squarefree(F.field(), sp::to_poly(F, phi), rng);
  SPoly best;
  for (const auto& f : factors) {
    SPoly h = sp::from_poly(F, f.poly);
    if (best.empty() || lex_less_top(h, best)) best = h;
  }
  return best;
}

TorsionBasis torsion_basis(const EllipticCurve& E, u64 n, unsigned max_degree) {
  if (n == 0) throw std::invalid_argument("n must be positive");
  if (numth::gcd(n, E.q()) != 1) throw std::invalid_argument("n must be coprime to q");
  TorsionBasis B;
  B.n = n;
  for (const auto& [l, e] : numth::factorize(n).factors) {
    u64 m = 1;
    for (unsigned i = 0; i < e; ++i) m *= l;
    B.components.push_back(build_component(E, m, max_degree));
    B.extension_degree = static_cast<unsigned>(numth::lcm(B.extension_degree, B.components.back().k));
  }
  if (B.extension_degree > max_degree) {
    throw Undetermined("torsion extension degree " + std::to_string(B.extension_degree) + " exceeds the cap");
  }
  return B;
}

FrobMatrix frobenius_matrix(const TorsionBasis& B) {
  FrobMatrix out;
  out.n = B.n;
  if (B.n == 1) {
    out.m = {0, 0, 0, 0};
    return out;
  }
  for (int idx = 0; idx < 4; ++idx) {
    // CRT by search; n is small.
    for (u64 v = 0; v < B.n; ++v) {
      bool ok = true;
      for (const auto& c : B.components) ok = ok && v % c.m == c.gamma.m[idx] % c.m;
      if (ok) {
        out.m[idx] = v;
        break;
      }
    }
  }
  return out;
}

FrobMatrix frobenius_matrix(const EllipticCurve& E, u64 n, unsigned max_degree) {
  return frobenius_matrix(torsion_basis(E, n, max_degree));
}

u64 centralizer_size(const FrobMatrix& g) {
  const u64 n = g.n;
  if (n == 1) return 1;
  const u64 a = g.m[0] % n, b = g.m[1] % n, c = g.m[2] % n, d = g.m[3] % n;
  u64 count = 0;
  for (u64 w = 0; w < n; ++w) {
    for (u64 x = 0; x < n; ++x) {
      for (u64 y = 0; y < n; ++y) {
        for (u64 z = 0; z < n; ++z) {
          // M = [w x; y z]; need M g = g M.
          if ((w * a + x * c) % n != (a * w + b * y) % n) continue;
          if ((w * b + x * d) % n != (a * x + b * z) % n) continue;
          if ((y * a + z * c) % n != (c * w + d * y) % n) continue;
          if ((y * b + z * d) % n != (c * x + d * z) % n) continue;
          const u64 det = (w * z % n + n - x * y % n) % n;
          if (numth::gcd(det, n) == 1) ++count;
        }
      }
    }
  }
  return count;
}

u64 torsion_aut_size(const EllipticCurve& E, u64 n, unsigned max_degree) {
  if (n == 1) return 1;
  return centralizer_size(frobenius_matrix(E, n, max_degree));
}

const char* to_string(SymplecticType t) {
  switch (t) {
    case SymplecticType::Generic:
      return "Generic";
    case SymplecticType::Scalar:
      return "Scalar";
    case SymplecticType::SquareClass:
      return "SquareClass";
    case SymplecticType::NonsquareClass:
      return "NonsquareClass";
  }
  return "?";
}

SymplecticType symplectic_type(const EllipticCurve& E, u64 ell) {
  if (ell < 3 || !numth::is_prime(ell) || E.q() % ell == 0) {
    throw std::invalid_argument("symplectic_type needs an odd prime coprime to q");
  }
  const i64 a = E.trace();
  if (umod(a * a - 4 * static_cast<i64>(E.q()), ell) != 0) return SymplecticType::Generic;
  const auto B = torsion_basis(E, ell);
  const auto& c = B.components.at(0);
  if (c.gamma.scalar()) return SymplecticType::Scalar;
  u64 x;
  if (c.gamma.m[2] % ell != 0) {
    x = c.u * c.gamma.m[2] % ell;  // e(P, pi P) = e(P, Q)^{beta}
  } else {
    x = (ell - c.u) * c.gamma.m[1] % ell;  // e(Q, pi Q) = e(Q, P)^{alpha}
  }
  return numth::powmod(x, (ell - 1) / 2, ell) == 1 ? SymplecticType::SquareClass : SymplecticType::NonsquareClass;
}

u64 count_anti_isometries(const TorsionBasis& A, const TorsionBasis& B) {
  if (A.n != B.n) throw std::invalid_argument("torsion bases of different levels");
  u64 total = 1;
  for (std::size_t i = 0; i < A.components.size(); ++i) {
    const auto& ca = A.components[i];
    const auto& cb = B.components.at(i);
    const u64 m = ca.m;
    const auto& g = ca.gamma.m;
    const auto& h = cb.gamma.m;
    const u64 target = (m - ca.u % m) % m;  // u_B det M = -u_A
    u64 count = 0;
    for (u64 w = 0; w < m; ++w) {
      for (u64 x = 0; x < m; ++x) {
        for (u64 y = 0; y < m; ++y) {
          for (u64 z = 0; z < m; ++z) {
            // M g = h M with M = [w x; y z].
            if ((w * g[0] + x * g[2]) % m != (h[0] * w + h[1] * y) % m) continue;
            if ((w * g[1] + x * g[3]) % m != (h[0] * x + h[1] * z) % m) continue;
            if ((y * g[0] + z * g[2]) % m != (h[2] * w + h[3] * y) % m) continue;
            if ((y * g[1] + z * g[3]) % m != (h[2] * x + h[3] * z) % m) continue;
            const u64 det = (w * z % m + m - x * y % m) % m;
            if (numth::gcd(det, m) != 1) continue;
            if (cb.u * det % m == target) ++count;
          }
        }
      }
    }
    total *= count;
  }
  return total;
}

u64 count_anti_isometries(const EllipticCurve& E, const EllipticCurve& F, u64 n) {
  if (E.q() != F.q()) throw std::invalid_argument("curves over different fields");
  if (n == 1) return 1;
  if (umod(E.trace() - F.trace(), n) != 0) return 0;
  return count_anti_isometries(torsion_basis(E, n), torsion_basis(F, n));
}

}  // namespace splitsurf::ellipt
