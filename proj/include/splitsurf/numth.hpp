#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace splitsurf::numth {

using u64 = std::uint64_t;
using i64 = std::int64_t;

/// n together with its prime factorization, primes strictly increasing.
struct FactoredInteger {
  u64 n = 1;
  std::vector<std::pair<u64, unsigned>> factors;

  u64 radical() const;
  bool squarefree() const;
};

FactoredInteger factorize(u64 n);
std::vector<u64> divisors(const FactoredInteger& f);
std::vector<u64> divisors(u64 n);

bool is_prime(u64 n);

/// (p, r) with q = p^r, or nullopt if q is not a prime power.
std::optional<std::pair<u64, unsigned>> prime_power(u64 q);

std::vector<std::uint32_t> primes_up_to(u64 limit);

u64 gcd(u64 a, u64 b);
u64 lcm(u64 a, u64 b);
u64 powmod(u64 base, u64 exp, u64 mod);
u64 mulmod(u64 a, u64 b, u64 mod);
/// floor(sqrt(n)) for any 64-bit n.
u64 isqrt(u64 n);
/// Exact square root if n is a perfect square.
std::optional<i64> exact_sqrt(i64 n);

/// psi(n) = n * prod_{l | n} (1 + 1/l).
u64 psi(u64 n);

struct MobiusPhiSigma {
  int mu = 0;
  u64 phi = 0;
  u64 sigma = 0;
};
MobiusPhiSigma mobius_phi_sigma(u64 n);

/// Multiplicative C with C(l^e) = 2(1 + 1/l).
mpq_class cee(u64 n);
/// Multiplicative D with D(l) = 1 + 2/l and D(l^e) = 0 for e > 1; C = D * 1.
mpq_class dee(u64 n);

/// Sum over d | n of psi(d).
u64 divisor_psi_sum(u64 n);

/// Exact sum_{n <= x} psi(n), computed from a squarefree sieve.
u64 sum_psi(u64 x);
/// Exact sum_{n <= x} psi(n)/n as a reduced rational.
mpq_class sum_psi_over_n(u64 x);
/// Same sum in extended precision; used where the exact rational is too large.
long double sum_psi_over_n_real(u64 x);

/// psi(1..x) by a linear sieve (index 0 unused).
std::vector<u64> psi_table(u64 x);

/// Kronecker symbol (D|n) on the full integer domain; (D|0) = 1 iff D = +-1.
int kronecker_symbol(i64 D, i64 n);

/// 15 / (2 pi^2) and 15 / pi^2.
inline constexpr double kPsiSumConstant = 0.75991148575128552669;
inline constexpr double kPsiOverNConstant = 1.51982297150257105338;

}  // namespace splitsurf::numth
