#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace splitsurf::gf {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;

/// Element of F_p[t]/(m): coefficient vector of length deg m, entries in [0, p).
/// Ordering is lexicographic from the top coefficient down, i.e. the order of
/// the integer encoding sum c_i p^i.
struct FieldElement {
  std::vector<u32> coeffs;

  friend bool operator==(const FieldElement&, const FieldElement&) = default;
  friend std::strong_ordering operator<=>(const FieldElement& a, const FieldElement& b);
};

/// CSV-friendly "c0,c1,...".
std::string to_string(const FieldElement& a);

/// F_{p^k} = F_p[t]/(m) for a monic irreducible m of degree k. Immutable.
class Field {
 public:
  /// Lex-first monic irreducible modulus of degree k; p must be an odd prime.
  Field(u64 p, unsigned k);
  /// Explicit modulus (monic, low-to-high coefficients, irreducibility checked).
  Field(u64 p, std::vector<u32> modulus);
  /// Explicit modulus known to be irreducible; no check.
  static Field trusted(u64 p, std::vector<u32> modulus);

  u64 p() const { return p_; }
  unsigned degree() const { return k_; }
  const std::vector<u32>& modulus() const { return modulus_; }
  const mpz_class& order() const { return order_; }

  FieldElement zero() const;
  FieldElement one() const;
  FieldElement from_int(i64 v) const;
  /// The class of t.
  FieldElement gen() const;
  FieldElement from_coeffs(std::vector<u32> c) const;
  /// Integer encoding sum c_i p^i (only meaningful when it fits in 64 bits).
  u64 encode(const FieldElement& a) const;
  FieldElement decode(u64 code) const;

  bool is_zero(const FieldElement& a) const;
  bool is_one(const FieldElement& a) const;
  FieldElement add(const FieldElement& a, const FieldElement& b) const;
  FieldElement sub(const FieldElement& a, const FieldElement& b) const;
  FieldElement neg(const FieldElement& a) const;
  FieldElement mul(const FieldElement& a, const FieldElement& b) const;
  FieldElement scale(const FieldElement& a, u32 s) const;
  FieldElement sqr(const FieldElement& a) const { return mul(a, a); }
  FieldElement inv(const FieldElement& a) const;
  FieldElement pow(const FieldElement& a, const mpz_class& e) const;
  FieldElement pow(const FieldElement& a, u64 e) const;

  /// Norm to F_p, computed as a resultant.
  u32 norm(const FieldElement& a) const;
  /// Quadratic character: 0, 1 or -1.
  int chi(const FieldElement& a) const;
  bool is_square(const FieldElement& a) const { return chi(a) >= 0; }
  /// Square root, the lex-smaller of the two; nullopt for nonsquares.
  std::optional<FieldElement> sqrt(const FieldElement& a) const;

  FieldElement random(std::mt19937_64& rng) const;

  bool same_as(const Field& other) const { return p_ == other.p_ && modulus_ == other.modulus_; }

 private:
  Field() = default;
  void init_order();
  u64 p_;
  unsigned k_;
  std::vector<u32> modulus_;
  mpz_class order_;
  // Tonelli-Shanks data: order - 1 = 2^s * t, and a fixed nonsquare.
  mutable bool ts_ready_ = false;
  mutable unsigned ts_s_ = 0;
  mutable mpz_class ts_t_;
  mutable FieldElement ts_nonsquare_;
};

Field make_field(u64 p, unsigned k);

/// Polynomial over a Field, low-to-high, no trailing zeros (zero polynomial is empty).
using Poly = std::vector<FieldElement>;

namespace poly {
void normalize(Poly& f);
int degree(const Poly& f);
Poly from_ints(const Field& F, const std::vector<i64>& coeffs);
Poly x(const Field& F);
Poly constant(const Field& F, const FieldElement& c);
Poly add(const Field& F, const Poly& a, const Poly& b);
Poly sub(const Field& F, const Poly& a, const Poly& b);
Poly mul(const Field& F, const Poly& a, const Poly& b);
Poly scale(const Field& F, const Poly& a, const FieldElement& c);
/// Quotient and remainder; b must be nonzero.
std::pair<Poly, Poly> divmod(const Field& F, const Poly& a, const Poly& b);
Poly mod(const Field& F, const Poly& a, const Poly& b);
Poly monic(const Field& F, const Poly& a);
Poly gcd(const Field& F, Poly a, Poly b);
Poly derivative(const Field& F, const Poly& a);
FieldElement eval(const Field& F, const Poly& a, const FieldElement& x);
Poly mulmod(const Field& F, const Poly& a, const Poly& b, const Poly& m);
Poly powmod(const Field& F, const Poly& base, const mpz_class& e, const Poly& m);
bool is_squarefree(const Field& F, const Poly& f);
bool is_irreducible(const Field& F, const Poly& f);
}  // namespace poly

/// Irreducible factor of a polynomial, tagged with its degree.
struct Factor {
  Poly poly;
  int degree = 0;
};

/// Monic irreducible factors of a squarefree polynomial, sorted by (degree, lex).
std::vector<Factor> factor_squarefree(const Field& F, const Poly& f, std::mt19937_64& rng);

/// All roots of g in F, multiplicity collapsed, sorted lexicographically.
std::vector<FieldElement> poly_roots(const Poly& g, const Field& F);

FieldElement sqrt_fq_or_throw(const FieldElement& a, const Field& F);
std::optional<FieldElement> sqrt_fq(const FieldElement& a, const Field& F);

/// L = F[X]/(g) flattened to F_p[z]/(M), with the images of F's generator and of X.
struct Extension {
  Field field;
  FieldElement base_gen_image;
  FieldElement root_image;

  /// Image of an element of the base field F.
  FieldElement embed(const Field& base, const FieldElement& a) const;
};
Extension extend(const Field& F, const Poly& g);

/// Fast arithmetic for fields small enough to tabulate (q <= 2^22), or for
/// prime fields of any size up to 2^31. Elements are integer handles in [0, q)
/// equal to the encoding of the corresponding FieldElement.
class SmallField {
 public:
  SmallField(u64 p, unsigned r);
  explicit SmallField(u64 p) : SmallField(p, 1) {}

  u32 p() const { return p_; }
  unsigned r() const { return r_; }
  u32 q() const { return q_; }
  bool prime() const { return r_ == 1; }
  const Field& field() const { return field_; }

  u32 add(u32 a, u32 b) const {
    if (r_ == 1) {
      const u32 s = a + b;
      return s >= p_ ? s - p_ : s;
    }
    return add_slow(a, b);
  }
  u32 sub(u32 a, u32 b) const {
    if (r_ == 1) return a >= b ? a - b : a + p_ - b;
    return sub_slow(a, b);
  }
  u32 neg(u32 a) const { return sub(0, a); }
  u32 mul(u32 a, u32 b) const {
    if (r_ == 1) return static_cast<u32>(static_cast<u64>(a) * b % p_);
    if (a == 0 || b == 0) return 0;
    u32 e = log_[a] + log_[b];
    if (e >= q_ - 1) e -= q_ - 1;
    return exp_[e];
  }
  u32 inv(u32 a) const;
  u32 pow(u32 a, u64 e) const;
  u32 from_int(i64 v) const;
  int chi(u32 a) const;
  std::optional<u32> sqrt(u32 a) const;
  /// Multiplicative generator (smallest handle).
  u32 generator() const { return generator_; }
  /// Smallest nonsquare handle.
  u32 nonsquare() const { return nonsquare_; }
  FieldElement to_element(u32 a) const { return field_.decode(a); }
  u32 from_element(const FieldElement& a) const { return static_cast<u32>(field_.encode(a)); }
  /// Quadratic character table, built at construction when q <= 2^22.
  const std::vector<std::int8_t>& chi_table() const;

 private:
  u32 add_slow(u32 a, u32 b) const;
  u32 sub_slow(u32 a, u32 b) const;

  u32 p_;
  unsigned r_;
  u32 q_;
  Field field_;
  std::vector<u32> log_, exp_;
  u32 generator_ = 0;
  u32 nonsquare_ = 0;
  mutable std::vector<std::int8_t> chi_table_;
};

/// Dense polynomials over a SmallField with integer-handle coefficients,
/// low-to-high, no trailing zeros.
namespace sp {
using SPoly = std::vector<u32>;
void trim(SPoly& a);
int degree(const SPoly& a);
SPoly add(const SmallField& F, const SPoly& a, const SPoly& b);
SPoly sub(const SmallField& F, const SPoly& a, const SPoly& b);
SPoly mul(const SmallField& F, const SPoly& a, const SPoly& b);
SPoly scale(const SmallField& F, const SPoly& a, u32 c);
std::pair<SPoly, SPoly> divmod(const SmallField& F, const SPoly& a, const SPoly& b);
SPoly mod(const SmallField& F, const SPoly& a, const SPoly& b);
SPoly mulmod(const SmallField& F, const SPoly& a, const SPoly& b, const SPoly& m);
SPoly powmod(const SmallField& F, const SPoly& base, const mpz_class& e, const SPoly& m);
SPoly monic(const SmallField& F, const SPoly& a);
SPoly gcd(const SmallField& F, SPoly a, SPoly b);
u32 eval(const SmallField& F, const SPoly& a, u32 x);
/// Resultant Res(a, b) over the small field.
u32 resultant(const SmallField& F, SPoly a, SPoly b);
Poly to_poly(const SmallField& F, const SPoly& a);
SPoly from_poly(const SmallField& F, const Poly& a);
}  // namespace sp

}  // namespace splitsurf::gf
