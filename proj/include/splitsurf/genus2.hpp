#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include <gmpxx.h>

#include "splitsurf/ellipt.hpp"
#include "splitsurf/gf.hpp"

namespace splitsurf::genus2 {

using gf::i64;
using gf::u32;
using gf::u64;
using gf::sp::SPoly;
using ellipt::FieldPtr;

/// y^2 = f(x) with f squarefree of degree 5 or 6.
class Genus2Curve {
 public:
  Genus2Curve(FieldPtr field, SPoly f);

  const gf::SmallField& field() const { return *field_; }
  const FieldPtr& field_ptr() const { return field_; }
  const SPoly& f() const { return f_; }
  int degree() const { return static_cast<int>(f_.size()) - 1; }
  u64 q() const { return field_->q(); }

 private:
  FieldPtr field_;
  SPoly f_;
};

/// #C(F_{q^k}) for k in {1, 2}, by character sums.
u64 genus2_count(const Genus2Curve& C, unsigned k);

/// Mumford pair (u, v): u monic, deg v < deg u, u | v^2 - f. The identity is (1, 0).
struct MumfordDivisor {
  SPoly u{1};
  SPoly v;
  bool is_zero() const { return u.size() == 1; }
  friend bool operator==(const MumfordDivisor&, const MumfordDivisor&) = default;
};

/// Cantor arithmetic needs a model whose point at infinity is a single place:
/// deg f = 5, or deg f = 6 with nonsquare leading coefficient.
bool is_imaginary_model(const Genus2Curve& C);
/// An isomorphic curve in imaginary form, if one exists over F_q.
std::optional<Genus2Curve> imaginary_model(const Genus2Curve& C);
/// Quadratic twist y^2 = n f(x) by the field's smallest nonsquare.
Genus2Curve quadratic_twist(const Genus2Curve& C);

bool is_valid_divisor(const Genus2Curve& C, const MumfordDivisor& D);
MumfordDivisor cantor_add(const Genus2Curve& C, const MumfordDivisor& D1, const MumfordDivisor& D2);
MumfordDivisor cantor_neg(const Genus2Curve& C, const MumfordDivisor& D);
MumfordDivisor cantor_mul(const Genus2Curve& C, const mpz_class& n, const MumfordDivisor& D);
/// Uniform-ish random element from sums of rational points (degree 2 for sextics).
std::optional<MumfordDivisor> random_divisor(const Genus2Curve& C, std::mt19937_64& rng);

struct WeilCoeffs {
  i64 a1 = 0;
  i64 a2 = 0;
  friend bool operator==(const WeilCoeffs&, const WeilCoeffs&) = default;
};

enum class Strategy { Auto, Exhaustive, Jacobian };

/// #Jac(C)(F_q) = P(1), from BSGS on the Jacobian and its twist (prime q).
mpz_class jacobian_order(const Genus2Curve& C);
/// Below this q the automatic strategy counts points over F_{q^2} directly.
inline constexpr u64 kExhaustiveLimit = 256;
WeilCoeffs weil_coeffs(const Genus2Curve& C, Strategy strategy = Strategy::Auto);

}  // namespace splitsurf::genus2
