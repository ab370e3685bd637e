#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include <gmpxx.h>

namespace splitsurf::weilquartic {

using i64 = std::int64_t;
using u64 = std::uint64_t;

/// f(T) = T^4 - a1 T^3 + a2 T^2 - q a1 T + q^2.
struct WeilQuartic {
  u64 q = 0;
  i64 a1 = 0;
  i64 a2 = 0;
  friend bool operator==(const WeilQuartic&, const WeilQuartic&) = default;
};

enum class SplitTag { Simple, OrdinaryNonisotypic, OrdinaryIsotypic, AlmostOrdinary, SupersingularSplit };

const char* to_string(SplitTag tag);

struct SplitClass {
  SplitTag tag = SplitTag::Simple;
  /// Elliptic traces s >= t with s + t = a1 and s t = a2 - 2q, when split.
  std::optional<std::pair<i64, i64>> factors;
  bool split() const { return tag != SplitTag::Simple; }
};

/// Throws std::invalid_argument naming the violated bound.
void validate(u64 q, i64 a1, i64 a2);
bool is_valid(u64 q, i64 a1, i64 a2);

WeilQuartic quartic_from_counts(u64 q, u64 n1, u64 n2);

bool elliptic_admissible(u64 q, i64 s);
bool elliptic_admissible(const mpz_class& q, const mpz_class& s);

SplitClass classify(u64 q, i64 a1, i64 a2);
inline SplitClass classify(const WeilQuartic& w) { return classify(w.q, w.a1, w.a2); }

/// Frobenius roots raised to the k-th power; throws std::overflow_error past 64 bits.
WeilQuartic base_extend(u64 q, i64 a1, i64 a2, unsigned k);

/// Arbitrary-precision variant used by the geometric sweep.
struct BigQuartic {
  mpz_class q, p, a1, a2;
};
BigQuartic base_extend_big(u64 q, i64 a1, i64 a2, unsigned k);
SplitTag classify_tag(const BigQuartic& w);

/// Slopes of the Newton polygon are all 1/2.
bool is_supersingular(u64 q, i64 a1, i64 a2);

struct GeometricSplit {
  bool split = false;
  /// Smallest k <= max_k with a split base extension; 0 if none was found.
  unsigned witness = 0;
};
GeometricSplit is_geometrically_split(u64 q, i64 a1, i64 a2, unsigned max_k = 24);

/// x^4 - b x^2 + q^2, stored as (a1, a2) = (0, -b).
WeilQuartic res_scalars_quartic(u64 q, i64 b);

}  // namespace splitsurf::weilquartic
