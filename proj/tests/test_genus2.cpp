#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "splitsurf/error.hpp"
#include "splitsurf/genus2.hpp"

using namespace splitsurf;
using namespace splitsurf::genus2;

namespace {

std::optional<Genus2Curve> random_curve(const FieldPtr& F, int deg, std::mt19937_64& rng) {
  std::uniform_int_distribution<u32> d(0, F->q() - 1);
  for (int t = 0; t < 100; ++t) {
    SPoly f(deg + 1);
    for (auto& c : f) c = d(rng);
    if (f.back() == 0) continue;
    try {
      return Genus2Curve(F, f);
    } catch (const std::invalid_argument&) {
    }
  }
  return std::nullopt;
}

// Points over F_{p^2} by evaluating f at every element of the extension field.
u64 naive_count_ext(u32 p, const SPoly& f) {
  const gf::SmallField E(p, 2);
  u64 n = 0;
  for (u32 x = 0; x < E.q(); ++x) {
    u32 v = 0;
    for (std::size_t i = f.size(); i-- > 0;) v = E.add(E.mul(v, x), f[i]);
    n += v == 0 ? 1 : (E.chi(v) == 1 ? 2 : 0);
  }
  return n + (f.size() == 6 ? 1 : 2);
}

u64 naive_count(const gf::SmallField& F, const SPoly& f) {
  u64 n = 0;
  for (u32 x = 0; x < F.q(); ++x) {
    const u32 v = gf::sp::eval(F, f, x);
    for (u32 y = 0; y < F.q(); ++y) n += F.mul(y, y) == v;
  }
  if (f.size() == 6) return n + 1;
  return n + (F.chi(f.back()) == 1 ? 2 : 0);
}

// #J(F_q) for a quintic model, by listing every reduced Mumford pair.
u64 enumerate_jacobian(const Genus2Curve& C) {
  const auto& F = C.field();
  const u32 q = F.q();
  u64 n = 1;
  for (u32 u0 = 0; u0 < q; ++u0) {
    for (u32 v0 = 0; v0 < q; ++v0) n += is_valid_divisor(C, MumfordDivisor{{u0, 1}, v0 ? SPoly{v0} : SPoly{}});
  }
  for (u32 u0 = 0; u0 < q; ++u0)
    for (u32 u1 = 0; u1 < q; ++u1)
      for (u32 v0 = 0; v0 < q; ++v0)
        for (u32 v1 = 0; v1 < q; ++v1) {
          SPoly v{v0, v1};
          gf::sp::trim(v);
          n += is_valid_divisor(C, MumfordDivisor{{u0, u1, 1}, v});
        }
  return n;
}

}  // namespace

TEST_CASE("point counts agree with naive enumeration") {
  std::mt19937_64 rng(7);
  for (u64 q : {5, 7, 11, 13, 25, 125}) {
    auto F = ellipt::small_field(q);
    for (int deg : {5, 6}) {
      for (int t = 0; t < 6; ++t) {
        auto C = random_curve(F, deg, rng);
        REQUIRE(C);
        CHECK(genus2_count(*C, 1) == naive_count(*F, C->f()));
      }
    }
  }
  for (u32 p : {5u, 7u, 13u, 31u}) {
    auto F = ellipt::small_field(p);
    for (int deg : {5, 6}) {
      for (int t = 0; t < 4; ++t) {
        auto C = random_curve(F, deg, rng);
        CHECK(genus2_count(*C, 2) == naive_count_ext(p, C->f()));
      }
    }
  }
  // Fast finite-difference path on a larger prime.
  auto F = ellipt::small_field(1009);
  auto C = random_curve(F, 6, rng);
  CHECK(genus2_count(*C, 1) == naive_count(*F, C->f()));
}

TEST_CASE("Jacobian order equals enumerated Mumford pairs") {
  std::mt19937_64 rng(11);
  for (u64 q : {5, 7, 11}) {
    auto F = ellipt::small_field(q);
    for (int t = 0; t < 4; ++t) {
      auto C = random_curve(F, 5, rng);
      const auto w = weil_coeffs(*C, Strategy::Exhaustive);
      const i64 P1 = 1 - w.a1 + w.a2 - static_cast<i64>(q) * w.a1 + static_cast<i64>(q * q);
      CHECK(static_cast<u64>(P1) == enumerate_jacobian(*C));
    }
  }
}

TEST_CASE("Cantor arithmetic forms a group") {
  std::mt19937_64 rng(3);
  for (u64 q : {13, 49, 101}) {
    auto F = ellipt::small_field(q);
    for (int deg : {5, 6}) {
      auto C0 = random_curve(F, deg, rng);
      auto C = imaginary_model(*C0);
      REQUIRE(C);
      CHECK(is_imaginary_model(*C));
      const auto w = weil_coeffs(*C, Strategy::Exhaustive);
      CHECK(w == weil_coeffs(*C0, Strategy::Exhaustive));
      const mpz_class Q = static_cast<unsigned long>(q);
      const mpz_class order = 1 - mpz_class(static_cast<long>(w.a1)) * (1 + Q) + static_cast<long>(w.a2) + Q * Q;
      for (int t = 0; t < 5; ++t) {
        auto A = random_divisor(*C, rng), B = random_divisor(*C, rng), D = random_divisor(*C, rng);
        REQUIRE(A);
        REQUIRE(B);
        REQUIRE(D);
        CHECK(is_valid_divisor(*C, *A));
        const auto AB = cantor_add(*C, *A, *B);
        CHECK(is_valid_divisor(*C, AB));
        CHECK(AB == cantor_add(*C, *B, *A));
        CHECK(cantor_add(*C, AB, *D) == cantor_add(*C, *A, cantor_add(*C, *B, *D)));
        CHECK(cantor_add(*C, *A, cantor_neg(*C, *A)).is_zero());
        CHECK(cantor_mul(*C, 3, *A) == cantor_add(*C, *A, cantor_add(*C, *A, *A)));
        CHECK(cantor_mul(*C, order, *A).is_zero());
      }
    }
  }
}

TEST_CASE("Jacobian strategy agrees with exhaustive counting") {
  std::mt19937_64 rng(2024);
  for (u64 q : {101, 499, 1009}) {
    auto F = ellipt::small_field(q);
    for (int t = 0; t < 40; ++t) {
      auto C = random_curve(F, t % 2 ? 5 : 6, rng);
      REQUIRE(C);
      const auto ex = weil_coeffs(*C, Strategy::Exhaustive);
      const auto ja = weil_coeffs(*C, Strategy::Jacobian);
      CHECK(ex == ja);
    }
  }
  // Split Jacobian with many small-order elements: y^2 = x^6 + 1.
  auto F = ellipt::small_field(1009);
  Genus2Curve C(F, {1, 0, 0, 0, 0, 0, 1});
  CHECK(weil_coeffs(C, Strategy::Jacobian) == weil_coeffs(C, Strategy::Exhaustive));
}

TEST_CASE("large prime Jacobian orders annihilate random divisors") {
  std::mt19937_64 rng(99);
  auto F = ellipt::small_field(999983);
  for (int t = 0; t < 3; ++t) {
    auto C = random_curve(F, 5, rng);
    const mpz_class n = jacobian_order(*C);
    for (int k = 0; k < 3; ++k) CHECK(cantor_mul(*C, n, *random_divisor(*C, rng)).is_zero());
  }
}

TEST_CASE("invalid input") {
  auto F = ellipt::small_field(7);
  CHECK_THROWS_AS(Genus2Curve(F, {1, 0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(Genus2Curve(F, {0, 0, 1, 0, 0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(Genus2Curve(ellipt::small_field(3), {1, 1, 0, 0, 0, 1}), std::invalid_argument);
}
