#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include <gmpxx.h>

#include "splitsurf/gf.hpp"
#include "splitsurf/quadorders.hpp"

namespace splitsurf::ellipt {

using gf::i64;
using gf::u32;
using gf::u64;

using FieldPtr = std::shared_ptr<const gf::SmallField>;

/// Build (and cache per thread-safe registry) the small field of order q.
FieldPtr small_field(u64 q);

/// y^2 = x^3 + a4 x + a6 over F_q, p >= 5. The trace is computed on construction.
class EllipticCurve {
 public:
  EllipticCurve(FieldPtr field, u32 a4, u32 a6);

  const gf::SmallField& field() const { return *field_; }
  const FieldPtr& field_ptr() const { return field_; }
  u32 a4() const { return a4_; }
  u32 a6() const { return a6_; }
  u64 q() const { return field_->q(); }
  u64 p() const { return field_->p(); }
  i64 trace() const { return trace_; }
  bool ordinary() const { return trace_ % static_cast<i64>(p()) != 0; }
  u32 j_invariant() const;
  /// x^3 + a4 x + a6 as a small-field polynomial.
  gf::sp::SPoly cubic() const { return {a6_, a4_, 0, 1}; }

 private:
  FieldPtr field_;
  u32 a4_, a6_;
  i64 trace_ = 0;
};

u64 point_count(const EllipticCurve& E);
/// Character-sum count, any q.
u64 point_count_exhaustive(const gf::SmallField& F, u32 a4, u32 a6);
/// Mestre-style baby-step giant-step in the Hasse interval (prime fields).
u64 point_count_bsgs(const gf::SmallField& F, u32 a4, u32 a6);

/// One F_q-isomorphism class with its automorphism group order.
struct CurveClass {
  EllipticCurve curve;
  u32 aut = 2;
  mpq_class weight() const { return mpq_class(1, aut); }
};

std::vector<CurveClass> enumerate_curves(u64 q);

/// Number of supersingular j-invariants in F_p, by the closed formula.
u64 supersingular_trace0_count(u64 p);

struct Stratum {
  u64 q = 0;
  i64 a = 0;
  quadorders::Discriminant order_disc;
  u64 relcond = 0;
  i64 size = 0;
};

std::vector<Stratum> strata(u64 q, i64 a);

/// Conductor of Z[pi] for trace a (requires a^2 != 4q).
u64 frobenius_conductor(u64 q, i64 a);

u64 relative_conductor(const EllipticCurve& E);
/// True when Frobenius acts as an integer on E[m] (m coprime to q).
bool frobenius_scalar_on(const EllipticCurve& E, u64 m);

mpz_class sum_relcond_closed_form(u64 q);
mpz_class sum_relcond_enumerated(u64 q);

/// 2x2 matrix over Z/n, row-major, acting on coordinate columns.
struct FrobMatrix {
  u64 n = 1;
  std::array<u64, 4> m{1, 0, 0, 1};
  u64 trace() const { return (m[0] + m[3]) % n; }
  u64 det() const;
  bool scalar() const { return m[1] % n == 0 && m[2] % n == 0 && (m[0] + n - m[3]) % n == 0; }
};

/// Affine point over a generic field; inf marks the identity.
struct Point {
  gf::FieldElement x, y;
  bool inf = false;
  friend bool operator==(const Point&, const Point&) = default;
};

/// Curve coefficients pushed into an extension field.
struct CurveOver {
  const gf::Field* field = nullptr;
  gf::FieldElement a4, a6;

  Point identity() const { return Point{{}, {}, true}; }
  bool on_curve(const Point& P) const;
  Point neg(const Point& P) const;
  Point add(const Point& P, const Point& Q) const;
  Point mul(i64 k, const Point& P) const;
  /// q-power Frobenius.
  Point frobenius(const Point& P, u64 q) const;
};

/// Weil pairing e_m(P, Q) by Miller's algorithm; returns 1 for dependent points.
gf::FieldElement weil_pairing(const CurveOver& C, const Point& P, const Point& Q, u64 m);

/// Basis of E[m] for one prime power m, living in an extension of degree k over F_q.
struct TorsionComponent {
  u64 m = 1;
  unsigned k = 1;
  std::shared_ptr<const gf::Field> field;
  CurveOver curve;
  Point P, Q;
  FrobMatrix gamma;
  /// e(P, Q) = zeta^u for the library's fixed zeta (see canonical_root_factor).
  u64 u = 1;
};

struct TorsionBasis {
  u64 n = 1;
  unsigned extension_degree = 1;
  std::vector<TorsionComponent> components;
};

/// Lex-smallest monic irreducible factor of the m-th cyclotomic polynomial over F_q.
gf::sp::SPoly canonical_root_factor(const gf::SmallField& F, u64 m);

TorsionBasis torsion_basis(const EllipticCurve& E, u64 n, unsigned max_degree = 48);
FrobMatrix frobenius_matrix(const EllipticCurve& E, u64 n, unsigned max_degree = 48);
FrobMatrix frobenius_matrix(const TorsionBasis& B);
/// Order of the centralizer of gamma in GL_2(Z/n).
u64 centralizer_size(const FrobMatrix& gamma);
u64 torsion_aut_size(const EllipticCurve& E, u64 n, unsigned max_degree = 48);

enum class SymplecticType { Generic, Scalar, SquareClass, NonsquareClass };
const char* to_string(SymplecticType t);

SymplecticType symplectic_type(const EllipticCurve& E, u64 ell);
u64 count_anti_isometries(const EllipticCurve& E, const EllipticCurve& F, u64 n);
u64 count_anti_isometries(const TorsionBasis& A, const TorsionBasis& B);

}  // namespace splitsurf::ellipt
