#pragma once

#include <cstdint>

#include <gmpxx.h>

namespace splitsurf::quadorders {

using i64 = std::int64_t;

/// A negative discriminant with its decomposition delta = conductor^2 * fundamental.
struct Discriminant {
  i64 delta = 0;
  i64 conductor = 1;
  i64 fundamental = 0;

  bool is_fundamental() const { return conductor == 1; }
  friend bool operator==(const Discriminant&, const Discriminant&) = default;
};

bool is_discriminant(i64 delta);
bool is_fundamental_discriminant(i64 delta);

Discriminant decompose(i64 delta);

/// Number of primitive reduced forms (a, b, c) with b^2 - 4ac = delta.
i64 class_number_forms(i64 delta);

/// h(delta) from h(fundamental) via the conductor formula, divided by the unit index.
i64 class_number(i64 delta);

/// Sum of h over all orders containing the order of discriminant delta.
i64 kronecker_class_number(i64 delta);

/// h(delta) with the order of discriminant -3 counted 1/3 and -4 counted 1/2.
mpq_class hurwitz_weighted_h(i64 delta);

/// Sum over g | f of hurwitz_weighted_h(delta / g^2): the Hurwitz class number
/// H(|delta|) in the weighting that counts curves by 1/#Aut (times 2).
mpq_class hurwitz_class_number(i64 delta);

}  // namespace splitsurf::quadorders
