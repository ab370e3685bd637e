#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "splitsurf/quadorders.hpp"

using namespace splitsurf::quadorders;

TEST_CASE("decompose") {
  auto a = decompose(-7);
  CHECK(a.conductor == 1);
  CHECK(a.fundamental == -7);
  auto b = decompose(-28);
  CHECK(b.conductor == 2);
  CHECK(b.fundamental == -7);
  auto c = decompose(-48);
  CHECK(c.conductor == 4);
  CHECK(c.fundamental == -3);
  CHECK_THROWS_AS(decompose(5), std::invalid_argument);
  CHECK_THROWS_AS(decompose(-6), std::invalid_argument);
  CHECK_THROWS_AS(decompose(0), std::invalid_argument);
  for (long d = -3; d >= -20000; --d) {
    if (!is_discriminant(d)) continue;
    const auto x = decompose(d);
    CHECK(static_cast<long>(x.conductor * x.conductor) * x.fundamental == d);
    CHECK(is_fundamental_discriminant(x.fundamental));
    const auto y = decompose(x.fundamental);
    CHECK(y.conductor == 1);
  }
}

TEST_CASE("class numbers by forms") {
  CHECK(class_number_forms(-3) == 1);
  CHECK(class_number_forms(-23) == 3);
  CHECK(class_number_forms(-20) == 2);
  CHECK_THROWS_AS(class_number_forms(-5), std::invalid_argument);
}

TEST_CASE("conductor formula") {
  CHECK(class_number(-7) == 1);
  CHECK(class_number(-28) == 1);
  CHECK(class_number(-12) == 1);
  CHECK(class_number(-16) == 1);
  CHECK(class_number(-27) == 1);
  for (long d = -3; d >= -5000; --d) {
    if (is_discriminant(d)) CHECK(class_number(d) == class_number_forms(d));
  }
}

TEST_CASE("Kronecker class number") {
  CHECK(kronecker_class_number(-15) == 2);
  CHECK(kronecker_class_number(-16) == 2);
  CHECK(kronecker_class_number(-3) == 1);
  for (long d = -3; d >= -3000; --d) {
    if (!is_discriminant(d)) continue;
    const auto H = kronecker_class_number(d);
    const auto h = class_number(d);
    CHECK(H >= h);
    CHECK((H == h) == is_fundamental_discriminant(d));
  }
}

TEST_CASE("Hurwitz weighting") {
  CHECK(hurwitz_weighted_h(-3) == mpq_class(1, 3));
  CHECK(hurwitz_weighted_h(-4) == mpq_class(1, 2));
  CHECK(hurwitz_weighted_h(-20) == 2);
  CHECK(hurwitz_class_number(-12) == mpq_class(4, 3));
  CHECK(hurwitz_class_number(-16) == mpq_class(3, 2));
  // Hurwitz relation: sum over t of H(t^2 - 4n) counts divisors, here for n prime.
  for (long p : {5L, 7L, 11L, 13L}) {
    mpq_class s = 0;
    for (long t = -2 * p; t <= 2 * p; ++t) {
      if (t * t < 4 * p) s += hurwitz_class_number(t * t - 4 * p);
    }
    CHECK(s == 2 * p);
  }
}

TEST_CASE("class number growth shape") {
  double worst = 0;
  for (long d = -5000; d >= -1000000; d -= 331) {
    if (!is_discriminant(d)) continue;
    const double a = std::abs(static_cast<double>(d));
    const double bound = std::sqrt(a) * std::log(a) * std::pow(std::log(std::log(a)), 2);
    worst = std::max(worst, static_cast<double>(kronecker_class_number(d)) / bound);
  }
  CHECK(worst < 1.0);
}
