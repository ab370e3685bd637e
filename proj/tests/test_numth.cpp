#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "splitsurf/numth.hpp"

using namespace splitsurf::numth;

namespace {

mpq_class frac(u64 a, u64 b) {
  mpq_class r(a, b);
  r.canonicalize();
  return r;
}

// Brute-force oracles by divisor enumeration.
u64 psi_oracle(u64 n) {
  mpq_class r = n;
  for (u64 l = 2; l <= n; ++l) {
    if (n % l == 0 && is_prime(l)) r *= frac(l + 1, l);
  }
  return r.get_num().get_ui();
}

MobiusPhiSigma mps_oracle(u64 n) {
  MobiusPhiSigma r{0, 0, 0};
  for (u64 k = 1; k <= n; ++k) {
    if (gcd(k, n) == 1) ++r.phi;
    if (n % k == 0) r.sigma += k;
  }
  int mu = 1;
  u64 m = n;
  for (u64 l = 2; l <= m; ++l) {
    if (m % l) continue;
    m /= l;
    if (m % l == 0) return {0, r.phi, r.sigma};
    mu = -mu;
  }
  r.mu = mu;
  return r;
}

}  // namespace

TEST_CASE("psi values") {
  CHECK(psi(1) == 1);
  CHECK(psi(4) == 6);
  CHECK(psi(6) == 12);
  CHECK_THROWS_AS(psi(0), std::invalid_argument);
  for (u64 n = 1; n <= 300; ++n) CHECK(psi(n) == psi_oracle(n));
}

TEST_CASE("mobius phi sigma") {
  auto a = mobius_phi_sigma(1);
  CHECK(a.mu == 1);
  CHECK(a.phi == 1);
  CHECK(a.sigma == 1);
  auto b = mobius_phi_sigma(12);
  CHECK(b.mu == 0);
  CHECK(b.phi == 4);
  CHECK(b.sigma == 28);
  auto c = mobius_phi_sigma(30);
  CHECK(c.mu == -1);
  CHECK(c.phi == 8);
  CHECK(c.sigma == 72);
  for (u64 n = 1; n <= 300; ++n) {
    auto x = mobius_phi_sigma(n);
    auto y = mps_oracle(n);
    CHECK(x.mu == y.mu);
    CHECK(x.phi == y.phi);
    CHECK(x.sigma == y.sigma);
  }
  CHECK_THROWS_AS(mobius_phi_sigma(0), std::invalid_argument);
}

TEST_CASE("cee and its Dirichlet factorization") {
  CHECK(cee(1) == 1);
  CHECK(cee(4) == 3);
  CHECK(cee(12) == 8);
  for (u64 n = 1; n <= 500; ++n) {
    mpq_class s = 0;
    for (u64 d : divisors(n)) s += dee(d);
    CHECK(s == cee(n));
  }
}

TEST_CASE("multiplicativity on random coprime pairs") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<u64> d(1, 1000000);
  int tested = 0;
  while (tested < 200) {
    const u64 m = d(rng), n = d(rng);
    if (gcd(m, n) != 1) continue;
    ++tested;
    CHECK(psi(m * n) == psi(m) * psi(n));
    const auto a = mobius_phi_sigma(m), b = mobius_phi_sigma(n), c = mobius_phi_sigma(m * n);
    CHECK(c.mu == a.mu * b.mu);
    CHECK(c.phi == a.phi * b.phi);
    CHECK(c.sigma == a.sigma * b.sigma);
    CHECK(cee(m * n) == cee(m) * cee(n));
  }
}

TEST_CASE("phi psi bound") {
  CHECK(mobius_phi_sigma(1).phi * psi(1) == 1);
  for (u64 n = 2; n <= 2000; ++n) CHECK(mobius_phi_sigma(n).phi * psi(n) < n * n);
}

TEST_CASE("partial sums") {
  CHECK(sum_psi(1) == 1);
  CHECK(sum_psi(10) == 82);
  CHECK(sum_psi_over_n(1) == 1);
  CHECK(sum_psi_over_n(4) == frac(1, 1) + frac(3, 2) + frac(4, 3) + frac(6, 4));
  u64 s = 0;
  mpq_class t = 0;
  for (u64 n = 1; n <= 2000; ++n) {
    s += psi(n);
    t += frac(psi(n), n);
    if (n % 97 == 0) {
      CHECK(sum_psi(n) == s);
      CHECK(sum_psi_over_n(n) == t);
    }
  }
  const auto table = psi_table(1000);
  for (u64 n = 1; n <= 1000; ++n) CHECK(table[n] == psi(n));
}

TEST_CASE("psi sum constant convergence") {
  const double c = 15.0 / (2.0 * std::numbers::pi * std::numbers::pi);
  double worst = 0;
  for (u64 x : {1000ull, 10000ull, 100000ull, 1000000ull}) {
    const double r = static_cast<double>(sum_psi(x)) / (static_cast<double>(x) * x);
    worst = std::max(worst, std::abs(r - c) * x / std::log(static_cast<double>(x)));
  }
  CHECK(worst < 10.0);
}

TEST_CASE("cee partial sums are O(x log x)") {
  mpq_class s = 0;
  double worst = 0;
  for (u64 x = 1; x <= 20000; ++x) {
    s += cee(x);
    if (x >= 10) worst = std::max(worst, s.get_d() / (x * std::log(static_cast<double>(x))));
  }
  CHECK(worst < 10.0);
}

TEST_CASE("divisor psi sum") {
  CHECK(divisor_psi_sum(1) == 1);
  CHECK(divisor_psi_sum(6) == 20);
  // Divisors 1, 2, 3, 4, 6, 12 have psi 1, 3, 4, 6, 12, 24.
  CHECK(divisor_psi_sum(12) == 50);
  for (u64 n = 1; n <= 500; ++n) {
    u64 s = 0;
    for (u64 d = 1; d <= n; ++d) {
      if (n % d == 0) s += psi_oracle(d);
    }
    CHECK(divisor_psi_sum(n) == s);
  }
  CHECK_THROWS_AS(divisor_psi_sum(0), std::invalid_argument);
}

TEST_CASE("kronecker symbol") {
  CHECK(kronecker_symbol(-3, 2) == -1);
  CHECK(kronecker_symbol(-4, 5) == 1);
  CHECK(kronecker_symbol(-7, 1) == 1);
  CHECK(kronecker_symbol(1, 0) == 1);
  CHECK(kronecker_symbol(5, 0) == 0);
  // Euler's criterion for odd primes.
  for (u64 p : {5ull, 7ull, 11ull, 13ull, 101ull}) {
    for (i64 D = -60; D <= 60; ++D) {
      const u64 a = static_cast<u64>(((D % static_cast<i64>(p)) + static_cast<i64>(p)) % static_cast<i64>(p));
      int expect = a == 0 ? 0 : (powmod(a, (p - 1) / 2, p) == 1 ? 1 : -1);
      CHECK(kronecker_symbol(D, static_cast<i64>(p)) == expect);
    }
  }
  // Complete multiplicativity in n.
  for (i64 D : {-3, -4, -7, -8, -15, -20, -23}) {
    for (i64 m = 1; m <= 30; ++m) {
      for (i64 n = 1; n <= 30; ++n) CHECK(kronecker_symbol(D, m * n) == kronecker_symbol(D, m) * kronecker_symbol(D, n));
    }
  }
}

TEST_CASE("factorization and primality") {
  for (u64 n = 1; n <= 3000; ++n) {
    const auto f = factorize(n);
    u64 prod = 1;
    u64 last = 1;
    for (auto [l, e] : f.factors) {
      CHECK(l > last);
      CHECK(e >= 1);
      CHECK(is_prime(l));
      last = l;
      for (unsigned i = 0; i < e; ++i) prod *= l;
    }
    CHECK(prod == n);
  }
  CHECK(is_prime(1000000007ull));
  CHECK_FALSE(is_prime(1000000007ull * 3));
  CHECK(is_prime(18446744073709551557ull));
}
