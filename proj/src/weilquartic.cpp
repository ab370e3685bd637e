#include "splitsurf/weilquartic.hpp"

#include <array>
#include <stdexcept>

#include "splitsurf/numth.hpp"

namespace splitsurf::weilquartic {

namespace {

u64 prime_of(u64 q) {
  const auto pp = numth::prime_power(q);
  if (!pp) throw std::invalid_argument("q must be a prime power");
  return pp->first;
}

unsigned valuation(mpz_class n, const mpz_class& p) {
  if (n == 0) return ~0u;
  unsigned v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

bool fits_i64(const mpz_class& v) { return mpz_fits_slong_p(v.get_mpz_t()) != 0; }

}  // namespace

const char* to_string(SplitTag tag) {
  switch (tag) {
    case SplitTag::Simple:
      return "Simple";
    case SplitTag::OrdinaryNonisotypic:
      return "OrdinaryNonisotypic";
    case SplitTag::OrdinaryIsotypic:
      return "OrdinaryIsotypic";
    case SplitTag::AlmostOrdinary:
      return "AlmostOrdinary";
    case SplitTag::SupersingularSplit:
      return "SupersingularSplit";
  }
  return "?";
}

void validate(u64 q, i64 a1, i64 a2) {
  const mpz_class Q = static_cast<unsigned long>(q);
  const mpz_class A1 = static_cast<long>(a1), A2 = static_cast<long>(a2);
  if (A1 * A1 > 16 * Q) throw std::invalid_argument("Weil bound violated: |a1| > 4 sqrt(q)");
  if (4 * A2 > A1 * A1 + 8 * Q) throw std::invalid_argument("Weil bound violated: a2 > a1^2/4 + 2q");
  const mpz_class lhs = A2 + 2 * Q;
  if (lhs < 0 || 4 * A1 * A1 * Q > lhs * lhs) {
    throw std::invalid_argument("Weil bound violated: a2 < 2|a1| sqrt(q) - 2q");
  }
}

bool is_valid(u64 q, i64 a1, i64 a2) {
  try {
    validate(q, a1, a2);
    return true;
  } catch (const std::invalid_argument&) {
    return false;
  }
}

WeilQuartic quartic_from_counts(u64 q, u64 n1, u64 n2) {
  const i64 a1 = static_cast<i64>(q) + 1 - static_cast<i64>(n1);
  const i64 t = a1 * a1 - (static_cast<i64>(q * q) + 1 - static_cast<i64>(n2));
  if (t % 2 != 0) throw std::invalid_argument("inconsistent counts: a1^2 - (q^2 + 1 - N2) is odd");
  const i64 a2 = t / 2;
  validate(q, a1, a2);
  return WeilQuartic{q, a1, a2};
}

namespace {

bool admissible(const mpz_class& q, const mpz_class& p, const mpz_class& s) {
  if (s * s > 4 * q) return false;
  if (gcd(s, p) == 1) return true;
  const bool square = mpz_perfect_square_p(q.get_mpz_t()) != 0;
  const mpz_class s2 = s * s;
  const unsigned long pm4 = mpz_class(p % 4).get_ui();
  const unsigned long pm3 = mpz_class(p % 3).get_ui();
  if (s == 0) return !square || pm4 != 1;
  if (square && s2 == q) return pm3 != 1;
  if (square && s2 == 4 * q) return true;
  if (!square && p == 2 && s2 == 2 * q) return true;
  if (!square && p == 3 && s2 == 3 * q) return true;
  return false;
}

}  // namespace

bool elliptic_admissible(const mpz_class& q, const mpz_class& s) {
  mpz_class p = 2;
  while (q % p != 0) p = p + 1;
  return admissible(q, p, s);
}

bool elliptic_admissible(u64 q, i64 s) {
  return admissible(mpz_class(static_cast<unsigned long>(q)), mpz_class(static_cast<unsigned long>(prime_of(q))),
                    mpz_class(static_cast<long>(s)));
}

namespace {

SplitClass classify_big(const mpz_class& q, const mpz_class& p, const mpz_class& a1, const mpz_class& a2) {
  SplitClass out;
  // y^2 - a1 y + (a2 - 2q) = 0.
  const mpz_class disc = a1 * a1 - 4 * (a2 - 2 * q);
  if (disc < 0 || mpz_perfect_square_p(disc.get_mpz_t()) == 0) return out;
  const mpz_class r = sqrt(disc);
  if ((a1 + r) % 2 != 0) return out;
  const mpz_class s = (a1 + r) / 2, t = (a1 - r) / 2;
  if (!admissible(q, p, s) || !admissible(q, p, t)) return out;
  const bool so = gcd(s, p) == 1, to = gcd(t, p) == 1;
  if (so && to) {
    out.tag = s == t ? SplitTag::OrdinaryIsotypic : SplitTag::OrdinaryNonisotypic;
  } else if (so || to) {
    out.tag = SplitTag::AlmostOrdinary;
  } else {
    out.tag = SplitTag::SupersingularSplit;
  }
  if (fits_i64(s) && fits_i64(t)) out.factors = std::make_pair(s.get_si(), t.get_si());
  return out;
}

// Power sums of the Frobenius roots, p_1..p_n, by Newton's identities.
std::vector<mpz_class> power_sums(const mpz_class& q, const mpz_class& a1, const mpz_class& a2, unsigned n) {
  const std::array<mpz_class, 5> e{1, a1, a2, q * a1, q * q};
  std::vector<mpz_class> ps(n + 1);
  ps[0] = 4;
  for (unsigned k = 1; k <= n; ++k) {
    mpz_class v = 0;
    for (unsigned i = 1; i <= std::min(k, 4u); ++i) {
      const mpz_class term = e[i] * (i == k ? mpz_class(k) : ps[k - i]);
      if (i % 2 == 1) {
        v += term;
      } else {
        v -= term;
      }
    }
    ps[k] = v;
  }
  return ps;
}

}  // namespace

SplitClass classify(u64 q, i64 a1, i64 a2) {
  const u64 p = prime_of(q);
  validate(q, a1, a2);
  return classify_big(mpz_class(static_cast<unsigned long>(q)), mpz_class(static_cast<unsigned long>(p)),
                      mpz_class(static_cast<long>(a1)),
                      mpz_class(static_cast<long>(a2)));
}

BigQuartic base_extend_big(u64 q, i64 a1, i64 a2, unsigned k) {
  if (k == 0) throw std::invalid_argument("k must be positive");
  const mpz_class Q = static_cast<unsigned long>(q);
  const auto ps = power_sums(Q, mpz_class(static_cast<long>(a1)), mpz_class(static_cast<long>(a2)), 2 * k);
  BigQuartic out;
  out.p = static_cast<unsigned long>(prime_of(q));
  mpz_pow_ui(out.q.get_mpz_t(), Q.get_mpz_t(), k);
  out.a1 = ps[k];
  out.a2 = (ps[k] * ps[k] - ps[2 * k]) / 2;
  return out;
}

SplitTag classify_tag(const BigQuartic& w) { return classify_big(w.q, w.p, w.a1, w.a2).tag; }

WeilQuartic base_extend(u64 q, i64 a1, i64 a2, unsigned k) {
  const BigQuartic b = base_extend_big(q, a1, a2, k);
  if (!mpz_fits_ulong_p(b.q.get_mpz_t()) || !fits_i64(b.a1) || !fits_i64(b.a2)) {
    throw std::overflow_error("base extension exceeds 64-bit coefficients");
  }
  return WeilQuartic{b.q.get_ui(), b.a1.get_si(), b.a2.get_si()};
}

bool is_supersingular(u64 q, i64 a1, i64 a2) {
  const auto pp = numth::prime_power(q);
  if (!pp) throw std::invalid_argument("q must be a prime power");
  const mpz_class p = static_cast<unsigned long>(pp->first);
  const unsigned n = pp->second;
  // Newton polygon: slopes all 1/2 iff v(a1) >= n/2 and v(a2) >= n.
  return 2ull * valuation(mpz_class(static_cast<long>(a1)), p) >= n && valuation(mpz_class(static_cast<long>(a2)), p) >= n;
}

GeometricSplit is_geometrically_split(u64 q, i64 a1, i64 a2, unsigned max_k) {
  validate(q, a1, a2);
  GeometricSplit out;
  for (unsigned k = 1; k <= max_k; ++k) {
    if (classify_tag(base_extend_big(q, a1, a2, k)) != SplitTag::Simple) {
      out.split = true;
      out.witness = k;
      return out;
    }
  }
  out.split = is_supersingular(q, a1, a2);
  return out;
}

WeilQuartic res_scalars_quartic(u64 q, i64 b) {
  if (b > 2 * static_cast<i64>(q) || b < -2 * static_cast<i64>(q)) {
    throw std::invalid_argument("res_scalars_quartic: |b| > 2q");
  }
  return WeilQuartic{q, 0, -b};
}

}  // namespace splitsurf::weilquartic
