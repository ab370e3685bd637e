#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include <gmpxx.h>

#include "splitsurf/genus2.hpp"
#include "splitsurf/weilquartic.hpp"

namespace splitsurf::genus2 {

using weilquartic::SplitTag;

struct CensusResult {
  u64 q = 0;
  bool exact = true;
  /// Sum of 1/#Aut over genus-2 Jacobians (q^3 when exact).
  mpq_class weighted_jacobians_total;
  /// Split and geometrically split masses over all principally polarized surfaces.
  mpq_class weighted_split;
  mpq_class weighted_geom_split;
  /// Jacobian-only parts of the two masses above.
  mpq_class jacobian_split;
  mpq_class jacobian_geom_split;
  /// Products E x E' (all split) and restrictions of scalars.
  mpq_class product_mass;
  mpq_class restriction_mass;
  mpq_class restriction_split;
  mpq_class total_mass;
  /// Jacobian mass per split class; Simple included.
  std::map<SplitTag, mpq_class> by_tag;
  double c_q = 0;
  double d_q = 0;
  std::optional<double> stderr_c;
  std::optional<double> stderr_d;
  u64 samples = 0;
  /// Largest base-extension degree tried by the geometric sweep.
  unsigned geom_max_k = 24;
};

/// Weighted model counts keyed by Weil coefficients, before classification.
struct ModelHistogram {
  u64 q = 0;
  i64 a1_max = 0;
  i64 a2_max = 0;
  /// Rational-root case: index r = number of affine roots (0..5).
  std::array<std::vector<u64>, 6> with_root;
  /// No rational root on P^1; both twists folded in.
  std::vector<u64> rootless;

  explicit ModelHistogram(u64 q);
  std::size_t index(i64 a1, i64 a2) const;
  i64 a1_of(std::size_t idx) const;
  i64 a2_of(std::size_t idx) const;
  void merge(const ModelHistogram& other);
  friend bool operator==(const ModelHistogram& a, const ModelHistogram& b) {
    return a.q == b.q && a.with_root == b.with_root && a.rootless == b.rootless;
  }
};

/// Model-weight kernel over all normalized squarefree models; q prime >= 5.
ModelHistogram model_histogram_serial(u64 q);
ModelHistogram model_histogram_parallel(u64 q, int threads = 0);

/// Jacobian masses per (a1, a2) from a histogram.
std::map<std::pair<i64, i64>, mpq_class> jacobian_masses(const ModelHistogram& h);

/// Mass of restrictions of scalars of curves over F_{q^2} that are split over F_q (prime q).
mpq_class restriction_split_mass(u64 q);

inline constexpr u64 kExactMaxQ = 41;
CensusResult exact_cq(u64 q, int threads = 0, unsigned geom_max_k = 24);
/// Uniform binary sextic forms; prime q only. Deterministic in (q, samples, seed).
CensusResult monte_carlo_cq(u64 q, u64 samples, u64 seed, int threads = 0, unsigned geom_max_k = 24);
/// Same as exact_cq; the per-tag masses live in by_tag.
CensusResult split_census(u64 q, int threads = 0, unsigned geom_max_k = 24);

struct WeightedClass {
  Genus2Curve curve;
  mpq_class weight;
  u64 aut() const;
};

inline constexpr u64 kEnumerateMaxQ = 19;
/// One representative per F_q-isomorphism class with weight 1/#Aut; prime q in [5, 19].
std::vector<WeightedClass> enumerate_genus2_weighted(u64 q);

}  // namespace splitsurf::genus2
