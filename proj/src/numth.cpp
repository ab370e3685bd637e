#include "splitsurf/numth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace splitsurf::numth {

namespace {

void require_positive(u64 n, const char* who) {
  if (n == 0) throw std::invalid_argument(std::string(who) + ": argument must be >= 1");
}

// Squarefree indicator for 1..x.
std::vector<std::uint8_t> squarefree_sieve(u64 x) {
  std::vector<std::uint8_t> sf(x + 1, 1);
  sf[0] = 0;
  for (u64 d = 2; d * d <= x; ++d) {
    const u64 sq = d * d;
    for (u64 m = sq; m <= x; m += sq) sf[m] = 0;
  }
  return sf;
}

// Sum of a_i / b_i over [lo, hi) by binary splitting; result not reduced.
void split_sum(const std::vector<std::pair<u64, u64>>& terms, std::size_t lo, std::size_t hi,
               mpz_class& num, mpz_class& den) {
  if (hi - lo == 1) {
    num = static_cast<unsigned long>(terms[lo].first);
    den = static_cast<unsigned long>(terms[lo].second);
    return;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  mpz_class n1, d1, n2, d2;
  split_sum(terms, lo, mid, n1, d1);
  split_sum(terms, mid, hi, n2, d2);
  num = n1 * d2 + n2 * d1;
  den = d1 * d2;
}

}  // namespace

u64 FactoredInteger::radical() const {
  u64 r = 1;
  for (const auto& [p, e] : factors) r *= p;
  return r;
}

bool FactoredInteger::squarefree() const {
  return std::all_of(factors.begin(), factors.end(), [](const auto& f) { return f.second == 1; });
}

u64 gcd(u64 a, u64 b) {
  while (b != 0) {
    const u64 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

u64 lcm(u64 a, u64 b) { return a == 0 || b == 0 ? 0 : a / gcd(a, b) * b; }

u64 mulmod(u64 a, u64 b, u64 mod) {
  return static_cast<u64>(static_cast<unsigned __int128>(a) * b % mod);
}

u64 powmod(u64 base, u64 exp, u64 mod) {
  u64 result = 1 % mod;
  base %= mod;
  while (exp > 0) {
    if (exp & 1) result = mulmod(result, base, mod);
    base = mulmod(base, base, mod);
    exp >>= 1;
  }
  return result;
}

u64 isqrt(u64 n) {
  u64 r = static_cast<u64>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && static_cast<unsigned __int128>(r) * r > n) --r;
  while (static_cast<unsigned __int128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

std::optional<i64> exact_sqrt(i64 n) {
  if (n < 0) return std::nullopt;
  const u64 r = isqrt(static_cast<u64>(n));
  if (r * r != static_cast<u64>(n)) return std::nullopt;
  return static_cast<i64>(r);
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // Deterministic witness set for 64-bit integers.
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

FactoredInteger factorize(u64 n) {
  require_positive(n, "factorize");
  FactoredInteger out;
  out.n = n;
  u64 m = n;
  for (u64 p = 2; p * p <= m; p += (p == 2 ? 1 : 2)) {
    if (m % p != 0) continue;
    unsigned e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    out.factors.emplace_back(p, e);
  }
  if (m > 1) out.factors.emplace_back(m, 1);
  return out;
}

std::vector<u64> divisors(const FactoredInteger& f) {
  std::vector<u64> ds{1};
  for (const auto& [p, e] : f.factors) {
    const std::size_t base = ds.size();
    u64 pk = 1;
    for (unsigned k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) ds.push_back(ds[i] * pk);
    }
  }
  std::sort(ds.begin(), ds.end());
  return ds;
}

std::vector<u64> divisors(u64 n) { return divisors(factorize(n)); }

std::optional<std::pair<u64, unsigned>> prime_power(u64 q) {
  if (q < 2) return std::nullopt;
  const auto f = factorize(q);
  if (f.factors.size() != 1) return std::nullopt;
  return f.factors.front();
}

std::vector<std::uint32_t> primes_up_to(u64 limit) {
  std::vector<std::uint32_t> primes;
  if (limit < 2) return primes;
  std::vector<bool> composite(limit + 1, false);
  for (u64 i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(static_cast<std::uint32_t>(i));
    for (u64 j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return primes;
}

u64 psi(u64 n) {
  require_positive(n, "psi");
  u64 result = n;
  for (const auto& [p, e] : factorize(n).factors) result = result / p * (p + 1);
  return result;
}

MobiusPhiSigma mobius_phi_sigma(u64 n) {
  require_positive(n, "mobius_phi_sigma");
  MobiusPhiSigma out{1, 1, 1};
  for (const auto& [p, e] : factorize(n).factors) {
    out.mu = e > 1 ? 0 : -out.mu;
    u64 pk = 1;
    u64 geometric = 1;
    for (unsigned k = 0; k < e; ++k) {
      pk *= p;
      geometric += pk;
    }
    out.phi *= pk / p * (p - 1);
    out.sigma *= geometric;
  }
  return out;
}

mpq_class cee(u64 n) {
  require_positive(n, "cee");
  mpq_class c = 1;
  for (const auto& [p, e] : factorize(n).factors) {
    mpq_class f(2 * (p + 1), p);
    f.canonicalize();
    c *= f;
  }
  return c;
}

mpq_class dee(u64 n) {
  require_positive(n, "dee");
  mpq_class d = 1;
  for (const auto& [p, e] : factorize(n).factors) {
    if (e > 1) return 0;
    mpq_class f(p + 2, p);
    f.canonicalize();
    d *= f;
  }
  return d;
}

u64 divisor_psi_sum(u64 n) {
  require_positive(n, "divisor_psi_sum");
  // Multiplicative: at l^e the sum is 1 + sum_{k=1..e} l^{k-1}(l+1).
  u64 total = 1;
  for (const auto& [p, e] : factorize(n).factors) {
    u64 local = 1;
    u64 pk = 1;
    for (unsigned k = 1; k <= e; ++k) {
      local += pk * (p + 1);
      pk *= p;
    }
    total *= local;
  }
  return total;
}

std::vector<u64> psi_table(u64 x) {
  std::vector<u64> table(x + 1, 0);
  if (x == 0) return table;
  std::vector<std::uint32_t> smallest(x + 1, 0);
  std::vector<std::uint32_t> primes;
  table[1] = 1;
  for (u64 i = 2; i <= x; ++i) {
    if (smallest[i] == 0) {
      smallest[i] = static_cast<std::uint32_t>(i);
      primes.push_back(static_cast<std::uint32_t>(i));
      table[i] = i + 1;
    }
    for (std::uint32_t p : primes) {
      if (p > smallest[i] || static_cast<u64>(p) * i > x) break;
      const u64 m = p * i;
      smallest[m] = p;
      table[m] = (p == smallest[i]) ? table[i] * p : table[i] * (p + 1);
    }
  }
  return table;
}

u64 sum_psi(u64 x) {
  require_positive(x, "sum_psi");
  // psi(n) = sum_{d | n} mu(d)^2 n/d, so the partial sum is
  // sum_{d squarefree} T(floor(x/d)) with T(y) = y(y+1)/2.
  const auto sf = squarefree_sieve(x);
  unsigned __int128 total = 0;
  for (u64 d = 1; d <= x; ++d) {
    if (!sf[d]) continue;
    const unsigned __int128 y = x / d;
    total += y * (y + 1) / 2;
  }
  return static_cast<u64>(total);
}

mpq_class sum_psi_over_n(u64 x) {
  require_positive(x, "sum_psi_over_n");
  // psi(n)/n = sum_{d | n} mu(d)^2 / d.
  const auto sf = squarefree_sieve(x);
  std::vector<std::pair<u64, u64>> terms;
  for (u64 d = 1; d <= x; ++d) {
    if (sf[d]) terms.emplace_back(x / d, d);
  }
  mpz_class num, den;
  split_sum(terms, 0, terms.size(), num, den);
  mpq_class result(num, den);
  result.canonicalize();
  return result;
}

long double sum_psi_over_n_real(u64 x) {
  require_positive(x, "sum_psi_over_n_real");
  const auto sf = squarefree_sieve(x);
  long double total = 0.0L;
  long double comp = 0.0L;
  for (u64 d = x; d >= 1; --d) {
    if (!sf[d]) continue;
    const long double term = static_cast<long double>(x / d) / static_cast<long double>(d) - comp;
    const long double t = total + term;
    comp = (t - total) - term;
    total = t;
  }
  return total;
}

int kronecker_symbol(i64 D, i64 n) {
  if (n == 0) return (D == 1 || D == -1) ? 1 : 0;
  int sign = 1;
  if (n < 0) {
    n = -n;
    if (D < 0) sign = -sign;
  }
  // Factor out powers of two: (D|2) = 0 if D even, else +1 for D = +-1 mod 8, -1 for +-3 mod 8.
  int twos = 0;
  while ((n & 1) == 0) {
    n >>= 1;
    ++twos;
  }
  if (twos > 0) {
    if ((D & 1) == 0) return 0;
    const i64 r = ((D % 8) + 8) % 8;
    if ((twos & 1) && (r == 3 || r == 5)) sign = -sign;
  }
  // Jacobi symbol (D|n) for odd positive n.
  i64 a = D % n;
  if (a < 0) a += n;
  i64 m = n;
  while (a != 0) {
    while ((a & 1) == 0) {
      a >>= 1;
      const i64 r = m % 8;
      if (r == 3 || r == 5) sign = -sign;
    }
    std::swap(a, m);
    if (a % 4 == 3 && m % 4 == 3) sign = -sign;
    a %= m;
  }
  return m == 1 ? sign : 0;
}

}  // namespace splitsurf::numth
