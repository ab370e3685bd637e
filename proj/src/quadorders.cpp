#include "splitsurf/quadorders.hpp"

#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>

#include "splitsurf/numth.hpp"

namespace splitsurf::quadorders {

namespace {

void require_discriminant(i64 delta, const char* who) {
  if (!is_discriminant(delta)) {
    throw std::invalid_argument(std::string(who) + ": " + std::to_string(delta) +
                                " is not a negative discriminant (must be < 0 and 0 or 1 mod 4)");
  }
}

i64 mod4(i64 x) { return ((x % 4) + 4) % 4; }

// Fundamental class numbers are reused heavily by censuses; memoize them.
std::map<i64, i64>& fundamental_cache() {
  static std::map<i64, i64> cache;
  return cache;
}
std::mutex& cache_mutex() {
  static std::mutex m;
  return m;
}

i64 fundamental_class_number(i64 fundamental) {
  {
    std::lock_guard<std::mutex> lock(cache_mutex());
    auto it = fundamental_cache().find(fundamental);
    if (it != fundamental_cache().end()) return it->second;
  }
  const i64 h = class_number_forms(fundamental);
  std::lock_guard<std::mutex> lock(cache_mutex());
  fundamental_cache().emplace(fundamental, h);
  return h;
}

}  // namespace

bool is_discriminant(i64 delta) { return delta < 0 && (mod4(delta) == 0 || mod4(delta) == 1); }

bool is_fundamental_discriminant(i64 delta) {
  if (!is_discriminant(delta)) return false;
  const auto abs_delta = static_cast<std::uint64_t>(-delta);
  if (mod4(delta) == 1) return numth::factorize(abs_delta).squarefree();
  const i64 m = delta / 4;
  const i64 r = mod4(m);
  if (r != 2 && r != 3) return false;
  return numth::factorize(static_cast<std::uint64_t>(-m)).squarefree();
}

Discriminant decompose(i64 delta) {
  require_discriminant(delta, "decompose");
  // Strip odd square factors, then factors of 4 while the cofactor stays a discriminant.
  const auto fact = numth::factorize(static_cast<std::uint64_t>(-delta));
  i64 f = 1;
  i64 core = delta;
  for (const auto& [p, e] : fact.factors) {
    if (p == 2) continue;
    for (unsigned k = 0; k < e / 2; ++k) {
      f *= static_cast<i64>(p);
      core /= static_cast<i64>(p * p);
    }
  }
  while (core % 4 == 0 && is_discriminant(core / 4)) {
    core /= 4;
    f *= 2;
  }
  return {delta, f, core};
}

i64 class_number_forms(i64 delta) {
  require_discriminant(delta, "class_number_forms");
  const i64 n = -delta;
  i64 count = 0;
  // Reduced: |b| <= a <= c, with b >= 0 whenever |b| = a or a = c; this forces a <= sqrt(|delta|/3).
  for (i64 b = n % 2; 3 * b * b <= n; b += 2) {
    const i64 ac = (b * b + n) / 4;
    for (i64 a = std::max<i64>(b, 1); a * a <= ac; ++a) {
      if (ac % a != 0) continue;
      const i64 c = ac / a;
      if (std::gcd(std::gcd(a, b), c) != 1) continue;
      // (a, b, c) is reduced for b >= 0; (a, -b, c) is a distinct reduced form unless b = 0, b = a or a = c.
      ++count;
      if (b != 0 && b != a && a != c) ++count;
    }
  }
  return count;
}

i64 class_number(i64 delta) {
  require_discriminant(delta, "class_number");
  const Discriminant d = decompose(delta);
  const i64 h0 = fundamental_class_number(d.fundamental);
  if (d.conductor == 1) return h0;
  // h(f^2 D) = h(D) f prod_{l | f} (1 - (D|l)/l) / [O_K^* : O^*].
  i64 numer = h0 * d.conductor;
  i64 denom = 1;
  for (const auto& [l, e] : numth::factorize(static_cast<std::uint64_t>(d.conductor)).factors) {
    const i64 li = static_cast<i64>(l);
    numer = numer / li * (li - numth::kronecker_symbol(d.fundamental, li));
  }
  if (d.fundamental == -3) denom = 3;
  if (d.fundamental == -4) denom = 2;
  return numer / denom;
}

i64 kronecker_class_number(i64 delta) {
  require_discriminant(delta, "kronecker_class_number");
  const Discriminant d = decompose(delta);
  i64 total = 0;
  for (auto g : numth::divisors(static_cast<std::uint64_t>(d.conductor))) {
    const i64 gi = static_cast<i64>(g);
    total += class_number(gi * gi * d.fundamental);
  }
  return total;
}

mpq_class hurwitz_weighted_h(i64 delta) {
  require_discriminant(delta, "hurwitz_weighted_h");
  if (delta == -3) return mpq_class(1, 3);
  if (delta == -4) return mpq_class(1, 2);
  return mpq_class(class_number(delta));
}

mpq_class hurwitz_class_number(i64 delta) {
  require_discriminant(delta, "hurwitz_class_number");
  const Discriminant d = decompose(delta);
  mpq_class total = 0;
  for (auto g : numth::divisors(static_cast<std::uint64_t>(d.conductor))) {
    const i64 gi = static_cast<i64>(g);
    total += hurwitz_weighted_h(gi * gi * d.fundamental);
  }
  return total;
}

}  // namespace splitsurf::quadorders
