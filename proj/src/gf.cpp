#include "splitsurf/gf.hpp"

#include <algorithm>
#include <stdexcept>

#include "splitsurf/numth.hpp"

namespace splitsurf::gf {

namespace {

constexpr u64 kReduceAt = u64{1} << 62;

using FpPoly = std::vector<u32>;

void fp_trim(FpPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

u32 fp_inv(u32 a, u64 p) { return static_cast<u32>(numth::powmod(a, p - 2, p)); }

// Remainder of a by b over F_p (b nonzero).
FpPoly fp_mod(FpPoly a, const FpPoly& b, u64 p) {
  fp_trim(a);
  const std::size_t db = b.size() - 1;
  const u64 ilc = fp_inv(b.back(), p);
  while (a.size() > db) {
    const u64 c = a.back() * ilc % p;
    const std::size_t shift = a.size() - 1 - db;
    for (std::size_t j = 0; j <= db; ++j) {
      const u64 t = c * b[j] % p;
      a[shift + j] = static_cast<u32>((a[shift + j] + p - t) % p);
    }
    fp_trim(a);
  }
  return a;
}

u32 legendre(u64 a, u64 p) {
  a %= p;
  if (a == 0) return 0;
  return numth::powmod(a, (p - 1) / 2, p) == 1 ? 1 : 2;
}

// Resultant Res(a, b) over F_p.
u64 fp_resultant(FpPoly a, FpPoly b, u64 p) {
  fp_trim(a);
  fp_trim(b);
  if (a.empty() || b.empty()) return 0;
  u64 acc = 1;
  while (true) {
    const std::size_t da = a.size() - 1;
    const std::size_t db = b.size() - 1;
    if (db == 0) return acc * numth::powmod(b[0], da, p) % p;
    FpPoly r = fp_mod(a, b, p);
    if (r.empty()) return 0;
    const std::size_t dr = r.size() - 1;
    if ((da & db & 1) != 0) acc = (p - acc) % p;
    acc = acc * numth::powmod(b.back(), da - dr, p) % p;
    a = std::move(b);
    b = std::move(r);
  }
}

}  // namespace

std::strong_ordering operator<=>(const FieldElement& a, const FieldElement& b) {
  if (a.coeffs.size() != b.coeffs.size()) return a.coeffs.size() <=> b.coeffs.size();
  for (std::size_t i = a.coeffs.size(); i-- > 0;) {
    if (a.coeffs[i] != b.coeffs[i]) return a.coeffs[i] <=> b.coeffs[i];
  }
  return std::strong_ordering::equal;
}

std::string to_string(const FieldElement& a) {
  std::string s;
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(a.coeffs[i]);
  }
  return s;
}

Field::Field(u64 p, unsigned k) : p_(p), k_(k) {
  if (p < 3 || p > (u64{1} << 31) || !numth::is_prime(p)) {
    throw std::invalid_argument("field characteristic must be an odd prime below 2^31");
  }
  if (k == 0) throw std::invalid_argument("field degree must be positive");
  if (k == 1) {
    modulus_ = {0, 1};
    init_order();
    return;
  }
  Field prime(p, 1);
  // Enumerate monic candidates in lex order of (c_{k-1}, ..., c_0).
  std::vector<u32> c(k, 0);
  while (true) {
    Poly f(k + 1);
    for (unsigned i = 0; i < k; ++i) f[i] = prime.from_int(c[i]);
    f[k] = prime.one();
    if (c[0] != 0 && poly::is_irreducible(prime, f)) break;
    unsigned i = 0;
    while (i < k && ++c[i] == p) c[i++] = 0;
    if (i == k) throw std::logic_error("no irreducible polynomial found");
  }
  modulus_.assign(c.begin(), c.end());
  modulus_.push_back(1);
  init_order();
}

Field::Field(u64 p, std::vector<u32> modulus) : p_(p), modulus_(std::move(modulus)) {
  if (p < 3 || p > (u64{1} << 31) || !numth::is_prime(p)) {
    throw std::invalid_argument("field characteristic must be an odd prime below 2^31");
  }
  if (modulus_.size() < 2 || modulus_.back() != 1) throw std::invalid_argument("modulus must be monic of positive degree");
  for (u32 c : modulus_) {
    if (c >= p) throw std::invalid_argument("modulus coefficient out of range");
  }
  k_ = static_cast<unsigned>(modulus_.size() - 1);
  if (k_ > 1) {
    Field prime(p, 1);
    Poly f;
    for (u32 c : modulus_) f.push_back(prime.from_int(c));
    if (!poly::is_irreducible(prime, f)) throw std::invalid_argument("modulus is not irreducible");
  }
  init_order();
}

Field Field::trusted(u64 p, std::vector<u32> modulus) {
  Field F;
  F.p_ = p;
  F.k_ = static_cast<unsigned>(modulus.size() - 1);
  F.modulus_ = std::move(modulus);
  F.init_order();
  return F;
}

void Field::init_order() {
  mpz_class pp(static_cast<unsigned long>(p_));
  mpz_pow_ui(order_.get_mpz_t(), pp.get_mpz_t(), k_);
}

Field make_field(u64 p, unsigned k) { return Field(p, k); }

FieldElement Field::zero() const { return FieldElement{std::vector<u32>(k_, 0)}; }

FieldElement Field::one() const {
  FieldElement e = zero();
  e.coeffs[0] = 1;
  return e;
}

FieldElement Field::from_int(i64 v) const {
  FieldElement e = zero();
  const i64 pm = static_cast<i64>(p_);
  e.coeffs[0] = static_cast<u32>(((v % pm) + pm) % pm);
  return e;
}

FieldElement Field::gen() const {
  if (k_ == 1) return from_int(-static_cast<i64>(modulus_[0]));
  FieldElement e = zero();
  e.coeffs[1] = 1;
  return e;
}

FieldElement Field::from_coeffs(std::vector<u32> c) const {
  FpPoly a(c.begin(), c.end());
  for (auto& x : a) x %= p_;
  if (a.size() > k_) a = fp_mod(std::move(a), modulus_, p_);
  a.resize(k_, 0);
  return FieldElement{std::move(a)};
}

u64 Field::encode(const FieldElement& a) const {
  u64 v = 0;
  for (std::size_t i = a.coeffs.size(); i-- > 0;) v = v * p_ + a.coeffs[i];
  return v;
}

FieldElement Field::decode(u64 code) const {
  FieldElement e = zero();
  for (unsigned i = 0; i < k_; ++i) {
    e.coeffs[i] = static_cast<u32>(code % p_);
    code /= p_;
  }
  return e;
}

bool Field::is_zero(const FieldElement& a) const {
  return std::all_of(a.coeffs.begin(), a.coeffs.end(), [](u32 c) { return c == 0; });
}

bool Field::is_one(const FieldElement& a) const {
  if (a.coeffs.empty() || a.coeffs[0] != 1) return false;
  return std::all_of(a.coeffs.begin() + 1, a.coeffs.end(), [](u32 c) { return c == 0; });
}

FieldElement Field::add(const FieldElement& a, const FieldElement& b) const {
  FieldElement r = a;
  for (unsigned i = 0; i < k_; ++i) {
    const u32 s = r.coeffs[i] + b.coeffs[i];
    r.coeffs[i] = s >= p_ ? static_cast<u32>(s - p_) : s;
  }
  return r;
}

FieldElement Field::sub(const FieldElement& a, const FieldElement& b) const {
  FieldElement r = a;
  for (unsigned i = 0; i < k_; ++i) {
    r.coeffs[i] = r.coeffs[i] >= b.coeffs[i] ? r.coeffs[i] - b.coeffs[i]
                                             : static_cast<u32>(r.coeffs[i] + p_ - b.coeffs[i]);
  }
  return r;
}

FieldElement Field::neg(const FieldElement& a) const { return sub(zero(), a); }

FieldElement Field::scale(const FieldElement& a, u32 s) const {
  FieldElement r = a;
  for (auto& c : r.coeffs) c = static_cast<u32>(static_cast<u64>(c) * s % p_);
  return r;
}

FieldElement Field::mul(const FieldElement& a, const FieldElement& b) const {
  if (k_ == 1) return FieldElement{{static_cast<u32>(static_cast<u64>(a.coeffs[0]) * b.coeffs[0] % p_)}};
  std::vector<u64> r(2 * k_ - 1, 0);
  for (unsigned i = 0; i < k_; ++i) {
    const u64 ai = a.coeffs[i];
    if (ai == 0) continue;
    for (unsigned j = 0; j < k_; ++j) {
      u64& acc = r[i + j];
      acc += ai * b.coeffs[j];
      if (acc >= kReduceAt) acc %= p_;
    }
  }
  for (std::size_t i = r.size(); i-- > k_;) {
    const u64 c = r[i] % p_;
    if (c == 0) continue;
    const std::size_t shift = i - k_;
    for (unsigned j = 0; j < k_; ++j) {
      u64& acc = r[shift + j];
      acc += (p_ - modulus_[j]) * c;
      if (acc >= kReduceAt) acc %= p_;
    }
  }
  FieldElement out = zero();
  for (unsigned i = 0; i < k_; ++i) out.coeffs[i] = static_cast<u32>(r[i] % p_);
  return out;
}

FieldElement Field::inv(const FieldElement& a) const {
  if (is_zero(a)) throw std::domain_error("inverse of zero");
  if (k_ == 1) return FieldElement{{fp_inv(a.coeffs[0], p_)}};
  // Extended Euclid on (modulus, a), tracking the cofactor of a.
  FpPoly r0 = modulus_, r1 = a.coeffs;
  fp_trim(r1);
  FpPoly s0 = {}, s1 = {1};
  while (r1.size() > 1) {
    const u64 ilc = fp_inv(r1.back(), p_);
    FpPoly q(r0.size() - r1.size() + 1, 0);
    FpPoly rem = r0;
    while (rem.size() >= r1.size()) {
      const u64 c = rem.back() * ilc % p_;
      const std::size_t shift = rem.size() - r1.size();
      q[shift] = static_cast<u32>(c);
      for (std::size_t j = 0; j < r1.size(); ++j) {
        rem[shift + j] = static_cast<u32>((rem[shift + j] + p_ - c * r1[j] % p_) % p_);
      }
      fp_trim(rem);
      if (rem.empty()) break;
    }
    // s_new = s0 - q * s1
    FpPoly sn(std::max(s0.size(), q.size() + s1.size()), 0);
    for (std::size_t i = 0; i < s0.size(); ++i) sn[i] = s0[i];
    for (std::size_t i = 0; i < q.size(); ++i) {
      if (q[i] == 0) continue;
      for (std::size_t j = 0; j < s1.size(); ++j) {
        sn[i + j] = static_cast<u32>((sn[i + j] + p_ - static_cast<u64>(q[i]) * s1[j] % p_) % p_);
      }
    }
    fp_trim(sn);
    r0 = std::move(r1);
    r1 = std::move(rem);
    s0 = std::move(s1);
    s1 = std::move(sn);
  }
  const u64 c = fp_inv(r1[0], p_);
  FieldElement out = zero();
  for (std::size_t i = 0; i < s1.size() && i < k_; ++i) out.coeffs[i] = static_cast<u32>(s1[i] * c % p_);
  return out;
}

FieldElement Field::pow(const FieldElement& a, const mpz_class& e) const {
  if (e < 0) return pow(inv(a), mpz_class(-e));
  FieldElement r = one();
  const std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (std::size_t i = bits; i-- > 0;) {
    r = sqr(r);
    if (mpz_tstbit(e.get_mpz_t(), i)) r = mul(r, a);
  }
  return r;
}

FieldElement Field::pow(const FieldElement& a, u64 e) const {
  FieldElement r = one(), b = a;
  while (e) {
    if (e & 1) r = mul(r, b);
    e >>= 1;
    if (e) b = sqr(b);
  }
  return r;
}

u32 Field::norm(const FieldElement& a) const {
  if (k_ == 1) return a.coeffs[0];
  return static_cast<u32>(fp_resultant(modulus_, a.coeffs, p_));
}

int Field::chi(const FieldElement& a) const {
  const u32 l = legendre(norm(a), p_);
  return l == 0 ? 0 : (l == 1 ? 1 : -1);
}

std::optional<FieldElement> Field::sqrt(const FieldElement& a) const {
  const int c = chi(a);
  if (c < 0) return std::nullopt;
  if (c == 0) return zero();
  if (!ts_ready_) {
    mpz_class t = order_ - 1;
    unsigned s = 0;
    while (mpz_even_p(t.get_mpz_t())) {
      t >>= 1;
      ++s;
    }
    FieldElement z;
    for (u64 code = 2;; ++code) {
      z = decode(code);
      if (chi(z) < 0) break;
    }
    ts_nonsquare_ = z;
    ts_s_ = s;
    ts_t_ = t;
    ts_ready_ = true;
  }
  unsigned m = ts_s_;
  FieldElement cc = pow(ts_nonsquare_, ts_t_);
  FieldElement t = pow(a, ts_t_);
  FieldElement r = pow(a, mpz_class((ts_t_ + 1) / 2));
  while (!is_one(t)) {
    unsigned i = 0;
    FieldElement tt = t;
    while (!is_one(tt)) {
      tt = sqr(tt);
      ++i;
    }
    FieldElement b = cc;
    for (unsigned j = 0; j + i + 1 < m; ++j) b = sqr(b);
    m = i;
    cc = sqr(b);
    t = mul(t, cc);
    r = mul(r, b);
  }
  FieldElement nr = neg(r);
  return nr < r ? nr : r;
}

FieldElement Field::random(std::mt19937_64& rng) const {
  std::uniform_int_distribution<u64> d(0, p_ - 1);
  FieldElement e = zero();
  for (auto& c : e.coeffs) c = static_cast<u32>(d(rng));
  return e;
}

namespace poly {

void normalize(Poly& f) {
  while (!f.empty() && std::all_of(f.back().coeffs.begin(), f.back().coeffs.end(), [](u32 c) { return c == 0; })) {
    f.pop_back();
  }
}

int degree(const Poly& f) { return static_cast<int>(f.size()) - 1; }

Poly from_ints(const Field& F, const std::vector<i64>& coeffs) {
  Poly f;
  for (i64 c : coeffs) f.push_back(F.from_int(c));
  normalize(f);
  return f;
}

Poly x(const Field& F) { return Poly{F.zero(), F.one()}; }

Poly constant(const Field& F, const FieldElement& c) {
  if (F.is_zero(c)) return {};
  return Poly{c};
}

Poly add(const Field& F, const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()), F.zero());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = F.add(r[i], b[i]);
  normalize(r);
  return r;
}

Poly sub(const Field& F, const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()), F.zero());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = F.sub(r[i], b[i]);
  normalize(r);
  return r;
}

Poly mul(const Field& F, const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, F.zero());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (F.is_zero(a[i])) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
  }
  normalize(r);
  return r;
}

Poly scale(const Field& F, const Poly& a, const FieldElement& c) {
  Poly r;
  r.reserve(a.size());
  for (const auto& e : a) r.push_back(F.mul(e, c));
  normalize(r);
  return r;
}

std::pair<Poly, Poly> divmod(const Field& F, const Poly& a, const Poly& b) {
  if (b.empty()) throw std::domain_error("polynomial division by zero");
  Poly rem = a;
  normalize(rem);
  if (rem.size() < b.size()) return {Poly{}, rem};
  Poly q(rem.size() - b.size() + 1, F.zero());
  const FieldElement ilc = F.inv(b.back());
  const bool monic_b = F.is_one(b.back());
  while (rem.size() >= b.size()) {
    const FieldElement c = monic_b ? rem.back() : F.mul(rem.back(), ilc);
    const std::size_t shift = rem.size() - b.size();
    q[shift] = c;
    for (std::size_t j = 0; j + 1 < b.size(); ++j) rem[shift + j] = F.sub(rem[shift + j], F.mul(c, b[j]));
    rem.pop_back();
    normalize(rem);
  }
  normalize(q);
  return {q, rem};
}

Poly mod(const Field& F, const Poly& a, const Poly& b) { return divmod(F, a, b).second; }

Poly monic(const Field& F, const Poly& a) {
  if (a.empty()) return a;
  return scale(F, a, F.inv(a.back()));
}

Poly gcd(const Field& F, Poly a, Poly b) {
  normalize(a);
  normalize(b);
  while (!b.empty()) {
    Poly r = mod(F, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return monic(F, a);
}

Poly derivative(const Field& F, const Poly& a) {
  Poly r;
  for (std::size_t i = 1; i < a.size(); ++i) r.push_back(F.scale(a[i], static_cast<u32>(i % F.p())));
  normalize(r);
  return r;
}

FieldElement eval(const Field& F, const Poly& a, const FieldElement& x) {
  FieldElement r = F.zero();
  for (std::size_t i = a.size(); i-- > 0;) r = F.add(F.mul(r, x), a[i]);
  return r;
}

Poly mulmod(const Field& F, const Poly& a, const Poly& b, const Poly& m) { return mod(F, mul(F, a, b), m); }

Poly powmod(const Field& F, const Poly& base, const mpz_class& e, const Poly& m) {
  Poly r = mod(F, constant(F, F.one()), m);
  const Poly b = mod(F, base, m);
  const std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  if (e == 0) return r;
  for (std::size_t i = bits; i-- > 0;) {
    r = mulmod(F, r, r, m);
    if (mpz_tstbit(e.get_mpz_t(), i)) r = mulmod(F, r, b, m);
  }
  return r;
}

bool is_squarefree(const Field& F, const Poly& f) {
  Poly d = derivative(F, f);
  if (d.empty()) return degree(f) <= 0;
  return degree(gcd(F, f, d)) == 0;
}

bool is_irreducible(const Field& F, const Poly& f) {
  const int n = degree(f);
  if (n <= 0) return false;
  if (n == 1) return true;
  const Poly g = monic(F, f);
  const Poly X = x(F);
  std::vector<Poly> frob(n + 1);
  frob[0] = mod(F, X, g);
  for (int i = 1; i <= n; ++i) frob[i] = powmod(F, frob[i - 1], F.order(), g);
  if (!sub(F, frob[n], frob[0]).empty()) return false;
  for (const auto& [l, e] : numth::factorize(static_cast<u64>(n)).factors) {
    (void)e;
    const Poly h = sub(F, frob[n / l], X);
    if (degree(gcd(F, g, h)) != 0) return false;
  }
  return true;
}

}  // namespace poly

namespace {

// Split a product of distinct irreducible factors all of degree d.
void edf(const Field& F, const Poly& f, int d, std::mt19937_64& rng, std::vector<Factor>& out) {
  const int n = poly::degree(f);
  if (n == d) {
    out.push_back({poly::monic(F, f), d});
    return;
  }
  mpz_class qd;
  mpz_pow_ui(qd.get_mpz_t(), F.order().get_mpz_t(), static_cast<unsigned long>(d));
  const mpz_class e = (qd - 1) / 2;
  while (true) {
    Poly a;
    for (int i = 0; i < n; ++i) a.push_back(F.random(rng));
    poly::normalize(a);
    if (poly::degree(a) < 1) continue;
    Poly b = poly::sub(F, poly::powmod(F, a, e, f), poly::constant(F, F.one()));
    Poly g = poly::gcd(F, f, b);
    const int dg = poly::degree(g);
    if (dg > 0 && dg < n) {
      edf(F, g, d, rng, out);
      edf(F, poly::divmod(F, f, g).first, d, rng, out);
      return;
    }
  }
}

}  // namespace

std::vector<Factor> factor_squarefree(const Field& F, const Poly& f_in, std::mt19937_64& rng) {
  std::vector<Factor> out;
  Poly f = poly::monic(F, f_in);
  if (poly::degree(f) <= 0) return out;
  if (!poly::is_squarefree(F, f)) throw std::invalid_argument("factor_squarefree: input has a repeated factor");
  const Poly X = poly::x(F);
  Poly h = poly::mod(F, X, f);
  for (int d = 1; 2 * d <= poly::degree(f); ++d) {
    h = poly::powmod(F, h, F.order(), f);
    Poly g = poly::gcd(F, f, poly::sub(F, h, X));
    if (poly::degree(g) > 0) {
      edf(F, g, d, rng, out);
      f = poly::divmod(F, f, g).first;
      h = poly::mod(F, h, f);
    }
  }
  if (poly::degree(f) > 0) out.push_back({poly::monic(F, f), poly::degree(f)});
  std::sort(out.begin(), out.end(), [](const Factor& a, const Factor& b) {
    if (a.degree != b.degree) return a.degree < b.degree;
    return std::lexicographical_compare(a.poly.rbegin(), a.poly.rend(), b.poly.rbegin(), b.poly.rend());
  });
  return out;
}

std::vector<FieldElement> poly_roots(const Poly& g_in, const Field& F) {
  Poly g = g_in;
  poly::normalize(g);
  std::vector<FieldElement> roots;
  if (g.empty()) throw std::invalid_argument("roots of the zero polynomial");
  if (poly::degree(g) == 0) return roots;
  g = poly::monic(F, g);
  const Poly X = poly::x(F);
  Poly split = poly::gcd(F, g, poly::sub(F, poly::powmod(F, X, F.order(), g), X));
  if (poly::degree(split) <= 0) return roots;
  std::mt19937_64 rng(0x5eed0000ULL + F.p());
  std::vector<Factor> lin;
  edf(F, split, 1, rng, lin);
  for (const auto& l : lin) roots.push_back(F.neg(l.poly[0]));
  std::sort(roots.begin(), roots.end());
  return roots;
}

std::optional<FieldElement> sqrt_fq(const FieldElement& a, const Field& F) { return F.sqrt(a); }

FieldElement sqrt_fq_or_throw(const FieldElement& a, const Field& F) {
  auto r = F.sqrt(a);
  if (!r) throw std::domain_error("not a square");
  return *r;
}

FieldElement Extension::embed(const Field& base, const FieldElement& a) const {
  FieldElement r = field.zero();
  for (std::size_t i = base.degree(); i-- > 0;) {
    r = field.add(field.mul(r, base_gen_image), field.from_int(a.coeffs[i]));
  }
  return r;
}

namespace {

// Coordinates over F_p of an element of F[X]/(g): index i + D*j for t^i X^j.
std::vector<u32> flatten(const Field& F, const Poly& a, int d) {
  const unsigned D = F.degree();
  std::vector<u32> v(static_cast<std::size_t>(D) * d, 0);
  for (std::size_t j = 0; j < a.size(); ++j) {
    for (unsigned i = 0; i < D; ++i) v[i + D * j] = a[j].coeffs[i];
  }
  return v;
}

// Solve B u = rhs_k for each rhs over F_p; B given by columns. Returns nullopt if singular.
std::optional<std::vector<std::vector<u32>>> solve_columns(const std::vector<std::vector<u32>>& cols,
                                                           const std::vector<std::vector<u32>>& rhs, u64 p) {
  const std::size_t n = cols.size();
  const std::size_t m = rhs.size();
  std::vector<std::vector<u64>> A(n, std::vector<u64>(n + m, 0));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) A[r][c] = cols[c][r];
    for (std::size_t k = 0; k < m; ++k) A[r][n + k] = rhs[k][r];
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && A[piv][c] == 0) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(A[piv], A[c]);
    const u64 iv = fp_inv(static_cast<u32>(A[c][c]), p);
    for (auto& x : A[c]) x = x * iv % p;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || A[r][c] == 0) continue;
      const u64 f = A[r][c];
      for (std::size_t k = c; k < n + m; ++k) A[r][k] = (A[r][k] + p - f * A[c][k] % p) % p;
    }
  }
  std::vector<std::vector<u32>> out(m, std::vector<u32>(n));
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t r = 0; r < n; ++r) out[k][r] = static_cast<u32>(A[r][n + k]);
  }
  return out;
}

}  // namespace

Extension extend(const Field& F, const Poly& g_in) {
  const Poly g = poly::monic(F, g_in);
  const int d = poly::degree(g);
  if (d < 1) throw std::invalid_argument("extension polynomial must have positive degree");
  const unsigned D = F.degree();
  const std::size_t n = static_cast<std::size_t>(D) * d;
  const u64 p = F.p();
  const Poly X = poly::x(F);
  const Poly T = poly::constant(F, F.gen());
  std::mt19937_64 rng(0xe47e4d00ULL + p);

  auto try_candidate = [&](const Poly& z) -> std::optional<Extension> {
    std::vector<std::vector<u32>> cols;
    Poly pw = poly::constant(F, F.one());
    for (std::size_t i = 0; i < n; ++i) {
      cols.push_back(flatten(F, pw, d));
      pw = poly::mulmod(F, pw, z, g);
    }
    std::vector<std::vector<u32>> rhs = {flatten(F, pw, d), flatten(F, poly::mod(F, T, g), d),
                                         flatten(F, poly::mod(F, X, g), d)};
    auto sol = solve_columns(cols, rhs, p);
    if (!sol) return std::nullopt;
    std::vector<u32> M(n + 1);
    for (std::size_t i = 0; i < n; ++i) M[i] = static_cast<u32>((p - (*sol)[0][i]) % p);
    M[n] = 1;
    Field L = n == 1 ? Field(p, 1) : Field::trusted(p, std::move(M));
    if (n == 1) {
      // Degree one over F_p: the flat field is F_p itself.
      return Extension{L, L.from_int((*sol)[1][0]), L.from_int((*sol)[2][0])};
    }
    return Extension{L, L.from_coeffs((*sol)[1]), L.from_coeffs((*sol)[2])};
  };

  for (u64 c = 0; c < p; ++c) {
    Poly z = poly::add(F, X, poly::scale(F, T, F.from_int(static_cast<i64>(c))));
    if (auto e = try_candidate(poly::mod(F, z, g))) return *e;
  }
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Poly z;
    for (int i = 0; i < d; ++i) z.push_back(F.random(rng));
    poly::normalize(z);
    if (auto e = try_candidate(z)) return *e;
  }
  throw std::logic_error("no primitive element found");
}

SmallField::SmallField(u64 p, unsigned r) : p_(static_cast<u32>(p)), r_(r), field_(p, r) {
  mpz_class q = field_.order();
  if (r > 1 && q > (1 << 22)) throw std::invalid_argument("prime-power field too large to tabulate");
  q_ = static_cast<u32>(q.get_ui());
  const auto fac = numth::factorize(q_ - 1);
  if (r == 1) {
    for (u32 g = 2;; ++g) {
      bool ok = true;
      for (const auto& [l, e] : fac.factors) {
        (void)e;
        if (numth::powmod(g, (q_ - 1) / l, p_) == 1) ok = false;
      }
      if (ok || p_ == 3) {
        generator_ = p_ == 3 ? 2 : g;
        break;
      }
    }
    nonsquare_ = 2;
    while (legendre(nonsquare_, p_) != 2) ++nonsquare_;
    if (q_ <= (1u << 22)) chi_table();
    return;
  }
  for (u32 g = 2;; ++g) {
    const FieldElement ge = field_.decode(g);
    bool ok = true;
    for (const auto& [l, e] : fac.factors) {
      (void)e;
      if (field_.is_one(field_.pow(ge, static_cast<u64>((q_ - 1) / l)))) ok = false;
    }
    if (ok) {
      generator_ = g;
      break;
    }
  }
  log_.assign(q_, 0);
  exp_.assign(q_ - 1, 0);
  const FieldElement ge = field_.decode(generator_);
  FieldElement cur = field_.one();
  for (u32 i = 0; i + 1 < q_; ++i) {
    const u32 h = static_cast<u32>(field_.encode(cur));
    exp_[i] = h;
    log_[h] = i;
    cur = field_.mul(cur, ge);
  }
  nonsquare_ = 2;
  while (log_[nonsquare_] % 2 == 0) ++nonsquare_;
  chi_table();
}

u32 SmallField::add_slow(u32 a, u32 b) const {
  u32 out = 0, mult = 1;
  for (unsigned i = 0; i < r_; ++i) {
    u32 s = a % p_ + b % p_;
    if (s >= p_) s -= p_;
    out += s * mult;
    mult *= p_;
    a /= p_;
    b /= p_;
  }
  return out;
}

u32 SmallField::sub_slow(u32 a, u32 b) const {
  u32 out = 0, mult = 1;
  for (unsigned i = 0; i < r_; ++i) {
    const u32 x = a % p_, y = b % p_;
    out += (x >= y ? x - y : x + p_ - y) * mult;
    mult *= p_;
    a /= p_;
    b /= p_;
  }
  return out;
}

u32 SmallField::inv(u32 a) const {
  if (a == 0) throw std::domain_error("inverse of zero");
  if (r_ == 1) return fp_inv(a, p_);
  const u32 l = log_[a];
  return exp_[l == 0 ? 0 : q_ - 1 - l];
}

u32 SmallField::pow(u32 a, u64 e) const {
  if (r_ == 1) return static_cast<u32>(numth::powmod(a, e, p_));
  if (e == 0) return 1;
  if (a == 0) return 0;
  return exp_[static_cast<u64>(log_[a]) * (e % (q_ - 1)) % (q_ - 1)];
}

u32 SmallField::from_int(i64 v) const {
  const i64 pm = p_;
  return static_cast<u32>(((v % pm) + pm) % pm);
}

int SmallField::chi(u32 a) const {
  if (a == 0) return 0;
  if (r_ > 1) return log_[a] % 2 == 0 ? 1 : -1;
  if (!chi_table_.empty()) return chi_table_[a];
  return legendre(a, p_) == 1 ? 1 : -1;
}

const std::vector<std::int8_t>& SmallField::chi_table() const {
  if (chi_table_.empty()) {
    if (q_ > (1u << 22)) throw std::invalid_argument("field too large for a character table");
    std::vector<std::int8_t> t(q_, -1);
    t[0] = 0;
    if (r_ == 1) {
      // (x + 1)^2 = x^2 + 2x + 1, kept reduced without division.
      u64 sq = 0;
      for (u64 x = 1; x <= (p_ - 1) / 2; ++x) {
        sq += 2 * x - 1;
        while (sq >= p_) sq -= p_;
        t[sq] = 1;
      }
    } else {
      for (u32 a = 1; a < q_; ++a) t[a] = log_[a] % 2 == 0 ? 1 : -1;
    }
    chi_table_ = std::move(t);
  }
  return chi_table_;
}

std::optional<u32> SmallField::sqrt(u32 a) const {
  if (a == 0) return 0u;
  if (chi(a) < 0) return std::nullopt;
  u32 s;
  if (r_ > 1) {
    s = exp_[log_[a] / 2];
  } else {
    // Tonelli-Shanks in 64-bit arithmetic.
    u64 t = p_ - 1;
    unsigned e = 0;
    while (t % 2 == 0) {
      t /= 2;
      ++e;
    }
    u64 c = numth::powmod(nonsquare_, t, p_);
    u64 x = numth::powmod(a, (t + 1) / 2, p_);
    u64 b = numth::powmod(a, t, p_);
    unsigned m = e;
    while (b != 1) {
      unsigned i = 0;
      u64 bb = b;
      while (bb != 1) {
        bb = bb * bb % p_;
        ++i;
      }
      u64 w = c;
      for (unsigned j = 0; j + i + 1 < m; ++j) w = w * w % p_;
      m = i;
      c = w * w % p_;
      b = b * c % p_;
      x = x * w % p_;
    }
    s = static_cast<u32>(x);
  }
  const u32 ns = neg(s);
  return std::min(s, ns);
}

}  // namespace splitsurf::gf

namespace splitsurf::gf::sp {

void trim(SPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

int degree(const SPoly& a) { return static_cast<int>(a.size()) - 1; }

SPoly add(const SmallField& F, const SPoly& a, const SPoly& b) {
  SPoly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i) {
    r[i] = F.add(i < a.size() ? a[i] : 0, i < b.size() ? b[i] : 0);
  }
  trim(r);
  return r;
}

SPoly sub(const SmallField& F, const SPoly& a, const SPoly& b) {
  SPoly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i) {
    r[i] = F.sub(i < a.size() ? a[i] : 0, i < b.size() ? b[i] : 0);
  }
  trim(r);
  return r;
}

SPoly mul(const SmallField& F, const SPoly& a, const SPoly& b) {
  if (a.empty() || b.empty()) return {};
  if (F.prime()) {
    const u64 p = F.p();
    std::vector<u64> acc(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
      const u64 ai = a[i];
      if (ai == 0) continue;
      for (std::size_t j = 0; j < b.size(); ++j) {
        u64& c = acc[i + j];
        c += ai * b[j];
        if (c >= kReduceAt) c %= p;
      }
    }
    SPoly r(acc.size());
    for (std::size_t i = 0; i < acc.size(); ++i) r[i] = static_cast<u32>(acc[i] % p);
    trim(r);
    return r;
  }
  SPoly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
  }
  trim(r);
  return r;
}

SPoly scale(const SmallField& F, const SPoly& a, u32 c) {
  SPoly r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = F.mul(a[i], c);
  trim(r);
  return r;
}

std::pair<SPoly, SPoly> divmod(const SmallField& F, const SPoly& a, const SPoly& b) {
  if (b.empty()) throw std::domain_error("polynomial division by zero");
  SPoly rem = a;
  trim(rem);
  if (rem.size() < b.size()) return {SPoly{}, rem};
  SPoly q(rem.size() - b.size() + 1, 0);
  const u32 ilc = F.inv(b.back());
  const std::size_t db = b.size() - 1;
  if (F.prime()) {
    const u64 p = F.p();
    for (std::size_t i = rem.size(); i-- > db;) {
      const u64 c = static_cast<u64>(rem[i]) * ilc % p;
      if (c == 0) continue;
      const std::size_t shift = i - db;
      q[shift] = static_cast<u32>(c);
      const u64 nc = p - c;
      for (std::size_t j = 0; j < db; ++j) {
        rem[shift + j] = static_cast<u32>((rem[shift + j] + nc * b[j]) % p);
      }
      rem[i] = 0;
    }
  } else {
    for (std::size_t i = rem.size(); i-- > db;) {
      const u32 c = F.mul(rem[i], ilc);
      if (c == 0) continue;
      const std::size_t shift = i - db;
      q[shift] = c;
      for (std::size_t j = 0; j < db; ++j) rem[shift + j] = F.sub(rem[shift + j], F.mul(c, b[j]));
      rem[i] = 0;
    }
  }
  rem.resize(db);
  trim(rem);
  trim(q);
  return {q, rem};
}

SPoly mod(const SmallField& F, const SPoly& a, const SPoly& b) {
  if (a.size() < b.size()) {
    SPoly r = a;
    trim(r);
    return r;
  }
  return divmod(F, a, b).second;
}

SPoly mulmod(const SmallField& F, const SPoly& a, const SPoly& b, const SPoly& m) { return mod(F, mul(F, a, b), m); }

SPoly powmod(const SmallField& F, const SPoly& base, const mpz_class& e, const SPoly& m) {
  SPoly r = mod(F, SPoly{1}, m);
  if (e == 0) return r;
  const SPoly b = mod(F, base, m);
  const std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (std::size_t i = bits; i-- > 0;) {
    r = mulmod(F, r, r, m);
    if (mpz_tstbit(e.get_mpz_t(), i)) r = mulmod(F, r, b, m);
  }
  return r;
}

SPoly monic(const SmallField& F, const SPoly& a) {
  if (a.empty()) return a;
  return scale(F, a, F.inv(a.back()));
}

SPoly gcd(const SmallField& F, SPoly a, SPoly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    SPoly r = mod(F, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return monic(F, a);
}

u32 eval(const SmallField& F, const SPoly& a, u32 x) {
  u32 r = 0;
  for (std::size_t i = a.size(); i-- > 0;) r = F.add(F.mul(r, x), a[i]);
  return r;
}

u32 resultant(const SmallField& F, SPoly a, SPoly b) {
  trim(a);
  trim(b);
  if (a.empty() || b.empty()) return 0;
  u32 acc = 1;
  while (true) {
    const std::size_t da = a.size() - 1;
    const std::size_t db = b.size() - 1;
    if (db == 0) return F.mul(acc, F.pow(b[0], da));
    SPoly r = mod(F, a, b);
    if (r.empty()) return 0;
    const std::size_t dr = r.size() - 1;
    if ((da & db & 1) != 0) acc = F.neg(acc);
    acc = F.mul(acc, F.pow(b.back(), da - dr));
    a = std::move(b);
    b = std::move(r);
  }
}

Poly to_poly(const SmallField& F, const SPoly& a) {
  Poly r;
  r.reserve(a.size());
  for (u32 c : a) r.push_back(F.to_element(c));
  poly::normalize(r);
  return r;
}

SPoly from_poly(const SmallField& F, const Poly& a) {
  SPoly r;
  r.reserve(a.size());
  for (const auto& c : a) r.push_back(F.from_element(c));
  trim(r);
  return r;
}

}  // namespace splitsurf::gf::sp
