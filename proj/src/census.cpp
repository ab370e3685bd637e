#include "splitsurf/census.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include <omp.h>

#include "splitsurf/ellipt.hpp"
#include "splitsurf/error.hpp"
#include "splitsurf/numth.hpp"
#include "splitsurf/quadorders.hpp"

namespace splitsurf::genus2 {

namespace sp = gf::sp;
using weilquartic::classify;
using weilquartic::is_geometrically_split;

ModelHistogram::ModelHistogram(u64 q_) : q(q_) {
  a1_max = static_cast<i64>(numth::isqrt(16 * q)) + 1;
  a2_max = 6 * static_cast<i64>(q) + 2;
  const auto n = static_cast<std::size_t>((2 * a1_max + 1) * (2 * a2_max + 1));
  for (auto& v : with_root) v.assign(n, 0);
  rootless.assign(n, 0);
}

std::size_t ModelHistogram::index(i64 a1, i64 a2) const {
  if (a1 < -a1_max || a1 > a1_max || a2 < -a2_max || a2 > a2_max)
    throw std::logic_error("Weil coefficients outside the histogram window");
  return static_cast<std::size_t>((a1 + a1_max) * (2 * a2_max + 1) + (a2 + a2_max));
}

i64 ModelHistogram::a1_of(std::size_t idx) const { return static_cast<i64>(idx) / (2 * a2_max + 1) - a1_max; }
i64 ModelHistogram::a2_of(std::size_t idx) const { return static_cast<i64>(idx) % (2 * a2_max + 1) - a2_max; }

void ModelHistogram::merge(const ModelHistogram& o) {
  for (std::size_t r = 0; r < with_root.size(); ++r)
    for (std::size_t i = 0; i < rootless.size(); ++i) with_root[r][i] += o.with_root[r][i];
  for (std::size_t i = 0; i < rootless.size(); ++i) rootless[i] += o.rootless[i];
}

namespace {

void require_prime(u64 q, u64 max_q) {
  if (q < 5 || q > max_q || !numth::is_prime(q))
    throw std::invalid_argument("q must be a prime in [5, " + std::to_string(max_q) + "]");
}

mpz_class gl2_order(u64 q) {
  const mpz_class Q = static_cast<unsigned long>(q);
  return (Q * Q - 1) * (Q * Q - Q);
}

// Normalized models of one shape: monic of degree deg, coefficients at pos
// compressed along the scaling action (weights), a0 iterated innermost.
struct Family {
  int deg = 6;
  bool rooted = false;
  std::vector<int> pos;
  std::vector<u64> weight;
  u64 a0_weight = 6;
};

std::vector<Family> families(u64 q) {
  Family A;
  A.deg = 5;
  A.rooted = true;
  if (q == 5) {
    // No translation to kill x^4 in characteristic 5.
    A.pos = {4, 3, 2, 1};
    A.weight = {2, 4, 6, 8};
  } else {
    A.pos = {3, 2, 1};
    A.weight = {4, 6, 8};
  }
  A.a0_weight = 10;
  Family B;
  B.deg = 6;
  B.pos = {4, 3, 2, 1};
  B.weight = {2, 3, 4, 5};
  B.a0_weight = 6;
  return {A, B};
}

struct Scratch {
  std::vector<u32> gx;
  std::vector<u32> cnt;
  std::vector<u32> val, step;
  std::vector<u64> a0_mult;
  std::vector<u32> disc;
};

class Kernel {
 public:
  explicit Kernel(u64 q) : q_(static_cast<u32>(q)), field_(ellipt::small_field(q)) {
    chi_.resize(q_);
    for (u32 v = 0; v < q_; ++v) chi_[v] = static_cast<std::int8_t>(field_->chi(v));
    for (u32 s = 0; s < q_; ++s) {
      for (u32 n = 0; n < q_; ++n) {
        const u64 disc = (static_cast<u64>(s) * s + 4ull * (q_ - n)) % q_;
        if (chi_[disc] != -1) continue;
        qs_.push_back(s);
        qn_.push_back(n);
      }
    }
    nq_ = qs_.size();
    // t^k = P_k + Q_k t modulo t^2 - s t + n.
    tp_.assign(7 * nq_, 0);
    tq_.assign(7 * nq_, 0);
    for (std::size_t j = 0; j < nq_; ++j) {
      u64 a = 1, b = 0;
      for (int k = 0; k < 7; ++k) {
        tp_[k * nq_ + j] = static_cast<u32>(a);
        tq_[k * nq_ + j] = static_cast<u32>(b);
        const u64 na = (q_ - b * qn_[j] % q_) % q_;
        const u64 nb = (a + b * qs_[j]) % q_;
        a = na;
        b = nb;
      }
    }
  }

  u64 group_count(const Family& fam) const {
    u64 total = 1;
    const std::size_t m = fam.pos.size();
    for (std::size_t i = 0; i < m; ++i) total += dw(fam.weight[i]) * pow_q(m - 1 - i);
    return total;
  }

  void run_group(const Family& fam, u64 g, ModelHistogram& h, Scratch& sc) const {
    const std::size_t m = fam.pos.size();
    std::array<u32, 7> c{};
    c[fam.deg] = 1;
    sc.a0_mult.assign(q_, 0);
    bool found = false;
    for (std::size_t i = 0; i < m && !found; ++i) {
      const u64 rest = pow_q(m - 1 - i);
      const u64 d = dw(fam.weight[i]);
      if (g < d * rest) {
        const u64 k = g / rest;
        u64 digits = g % rest;
        c[fam.pos[i]] = field_->pow(field_->generator(), k);
        for (std::size_t t = m; t-- > i + 1;) {
          c[fam.pos[t]] = static_cast<u32>(digits % q_);
          digits /= q_;
        }
        const u64 mult = (q_ - 1) / d;
        for (u32 a0 = 0; a0 < q_; ++a0) sc.a0_mult[a0] = mult;
        found = true;
      } else {
        g -= d * rest;
      }
    }
    if (!found) {
      // Every compressible coordinate is zero: a0 runs over coset representatives.
      const u64 d = dw(fam.a0_weight);
      for (u64 k = 0; k < d; ++k) sc.a0_mult[field_->pow(field_->generator(), k)] = (q_ - 1) / d;
    }
    process(fam, c, h, sc);
  }

 private:
  u64 dw(u64 w) const { return std::gcd<u64, u64>(w, q_ - 1); }
  u64 pow_q(std::size_t e) const {
    u64 r = 1;
    for (std::size_t i = 0; i < e; ++i) r *= q_;
    return r;
  }

  // disc[a0] == 0 iff g + a0 is not squarefree.
  void squarefree_table(const std::array<u32, 7>& c, int deg, Scratch& sc) const {
    const auto& F = *field_;
    SPoly g(c.begin(), c.begin() + deg + 1);
    SPoly dg;
    for (int i = 1; i <= deg; ++i) dg.push_back(F.mul(F.from_int(i), g[i]));
    sp::trim(dg);
    sc.disc.assign(q_, 0);
    if (dg.empty()) return;
    auto at = [&](u32 t) {
      SPoly gt = g;
      gt[0] = F.add(gt[0], t);
      return sp::degree(sp::gcd(F, gt, dg)) == 0 ? 1u : 0u;
    };
    if (q_ < 11) {
      for (u32 t = 0; t < q_; ++t) sc.disc[t] = at(t);
      return;
    }
    // Res(g + t, g') has degree <= deg - 1 in t: forward differences from six values.
    std::array<u32, 6> diff{};
    for (u32 t = 0; t < 6; ++t) {
      SPoly gt = g;
      gt[0] = F.add(gt[0], t);
      diff[t] = sp::resultant(F, gt, dg);
    }
    for (int k = 1; k < 6; ++k)
      for (int i = 5; i >= k; --i) diff[i] = F.sub(diff[i], diff[i - 1]);
    for (u32 t = 0; t < q_; ++t) {
      sc.disc[t] = diff[0];
      for (int i = 0; i < 5; ++i) diff[i] = F.add(diff[i], diff[i + 1]);
    }
  }

  void process(const Family& fam, const std::array<u32, 7>& c, ModelHistogram& h, Scratch& sc) const {
    const u64 q = q_;
    squarefree_table(c, fam.deg, sc);
    sc.gx.resize(q);
    sc.cnt.assign(q, 0);
    for (u32 x = 0; x < q_; ++x) {
      u64 v = 0;
      for (int k = fam.deg; k >= 0; --k) v = (v * x + c[k]) % q;
      sc.gx[x] = static_cast<u32>(v);
      ++sc.cnt[v];
    }
    sc.val.resize(nq_);
    sc.step.resize(nq_);
    for (std::size_t j = 0; j < nq_; ++j) {
      u64 A = 0, B = 0;
      for (int k = 0; k <= fam.deg; ++k) {
        if (c[k] == 0) continue;
        A += static_cast<u64>(c[k]) * tp_[k * nq_ + j];
        B += static_cast<u64>(c[k]) * tq_[k * nq_ + j];
      }
      A %= q;
      B %= q;
      const u64 s = qs_[j], n = qn_[j];
      sc.val[j] = static_cast<u32>((A * A + s * A % q * B + n * B % q * B) % q);
      // Norm(g(alpha) + a0) - Norm(g(alpha) + a0 - 1) = Tr + 2 a0 - 1; step holds it for a0 = 1.
      sc.step[j] = static_cast<u32>((2 * A + s * B + 1) % q);
    }
    const i64 iq = static_cast<i64>(q);
    const i64 inf = fam.deg == 5 ? 1 : 2;
    const i64 nq = static_cast<i64>(nq_);
    for (u32 a0 = 0; a0 < q_; ++a0) {
      if (a0 > 0) {
        for (std::size_t j = 0; j < nq_; ++j) {
          u32 v = sc.val[j] + sc.step[j];
          sc.val[j] = v >= q_ ? v - q_ : v;
          u32 st = sc.step[j] + 2;
          sc.step[j] = st >= q_ ? st - q_ : st;
        }
      }
      const u64 mult = sc.a0_mult[a0];
      if (mult == 0 || sc.disc[a0] == 0) continue;
      const u32 r = sc.cnt[(q_ - a0) % q_];
      if (!fam.rooted && r > 0) continue;
      i64 s1 = 0;
      for (u32 x = 0; x < q_; ++x) {
        u32 v = sc.gx[x] + a0;
        s1 += chi_[v >= q_ ? v - q_ : v];
      }
      i64 s2 = 0;
      for (std::size_t j = 0; j < nq_; ++j) s2 += chi_[sc.val[j]];
      const i64 n1 = iq + s1 + inf;
      const i64 n2 = 2 * iq - static_cast<i64>(r) + 2 * nq + 2 * s2 + inf;
      const i64 a1 = iq + 1 - n1;
      const i64 t = a1 * a1 - (iq * iq + 1 - n2);
      if (t % 2 != 0) throw std::logic_error("odd a2 numerator in census kernel");
      const i64 a2 = t / 2;
      if (fam.rooted) {
        h.with_root[r][h.index(a1, a2)] += mult;
      } else {
        h.rootless[h.index(a1, a2)] += mult;
        h.rootless[h.index(-a1, a2)] += mult;
      }
    }
  }

  u32 q_;
  ellipt::FieldPtr field_;
  std::vector<std::int8_t> chi_;
  std::vector<u32> qs_, qn_;
  std::size_t nq_ = 0;
  std::vector<u32> tp_, tq_;
};

}  // namespace

ModelHistogram model_histogram_serial(u64 q) {
  require_prime(q, kExactMaxQ);
  const Kernel K(q);
  ModelHistogram h(q);
  Scratch sc;
  for (const auto& fam : families(q)) {
    const u64 n = K.group_count(fam);
    for (u64 g = 0; g < n; ++g) K.run_group(fam, g, h, sc);
  }
  return h;
}

ModelHistogram model_histogram_parallel(u64 q, int threads) {
  require_prime(q, kExactMaxQ);
  const Kernel K(q);
  const int nt = threads > 0 ? threads : omp_get_max_threads();
  std::vector<ModelHistogram> parts(static_cast<std::size_t>(nt), ModelHistogram(q));
  for (const auto& fam : families(q)) {
    const i64 n = static_cast<i64>(K.group_count(fam));
#pragma omp parallel num_threads(nt)
    {
      Scratch sc;
      auto& h = parts[static_cast<std::size_t>(omp_get_thread_num())];
#pragma omp for schedule(dynamic, 16)
      for (i64 g = 0; g < n; ++g) K.run_group(fam, static_cast<u64>(g), h, sc);
    }
  }
  ModelHistogram out(q);
  for (const auto& p : parts) out.merge(p);
  return out;
}

std::map<std::pair<i64, i64>, mpq_class> jacobian_masses(const ModelHistogram& h) {
  const u64 q = h.q;
  const mpz_class gl = gl2_order(q);
  const mpz_class Q = static_cast<unsigned long>(q);
  // Rational-root models carry (q+1)(q-1)q / (|GL2| (1 + r)); in characteristic 5 the
  // translation is not normalized away, which removes the factor q.
  const mpz_class rooted_num = q == 5 ? mpz_class((Q + 1) * (Q - 1)) : mpz_class((Q + 1) * (Q - 1) * Q);
  const mpq_class rootless_w(mpz_class((Q - 1) * Q), mpz_class(2 * gl));
  std::map<std::pair<i64, i64>, mpq_class> out;
  for (std::size_t i = 0; i < h.rootless.size(); ++i) {
    mpq_class m = 0;
    for (std::size_t r = 0; r < h.with_root.size(); ++r) {
      if (h.with_root[r][i] == 0) continue;
      m += mpq_class(rooted_num * static_cast<unsigned long>(h.with_root[r][i]), gl * static_cast<unsigned long>(1 + r));
    }
    if (h.rootless[i] != 0) m += rootless_w * static_cast<unsigned long>(h.rootless[i]);
    if (m == 0) continue;
    m.canonicalize();
    out[{h.a1_of(i), h.a2_of(i)}] = m;
  }
  return out;
}

mpq_class restriction_split_mass(u64 q) {
  if (q < 5 || !numth::is_prime(q)) throw std::invalid_argument("restriction mass needs a prime q >= 5");
  // Curves over F_{q^2} with trace b = s^2 - 2q, each weighted 1/(2 #Aut).
  // Ordinary traces: H(b^2 - 4q^2) / 4. The supersingular trace -2q (s = 0) has mass (q - 1)/48.
  mpq_class total(static_cast<long>(q - 1), 48);
  const i64 iq = static_cast<i64>(q);
  for (i64 s = 1; s * s < 4 * iq; ++s) {
    const i64 delta = s * s * (s * s - 4 * iq);
    total += quadorders::hurwitz_class_number(delta) / 4;
  }
  total.canonicalize();
  return total;
}

namespace {

void finish(CensusResult& r) {
  const mpq_class Q = static_cast<unsigned long>(r.q);
  const mpq_class denom = Q * Q * Q + Q * Q;
  const double rq = std::sqrt(static_cast<double>(r.q));
  r.c_q = rq * mpq_class(r.weighted_split / denom).get_d();
  r.d_q = rq * mpq_class(r.weighted_geom_split / denom).get_d();
}

void require_sweep(unsigned k) {
  if (k < 1 || k > 240) throw std::invalid_argument("geometric sweep bound must be in [1, 240]");
}

class GeomCache {
 public:
  GeomCache(u64 q, unsigned max_k) : q_(q), max_k_(max_k) {}
  bool operator()(i64 a1, i64 a2) {
    const auto key = std::make_pair(a1, a2);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    bool g = classify(q_, a1, a2).split() || is_geometrically_split(q_, a1, a2, max_k_).split;
    cache_.emplace(key, g);
    return g;
  }

 private:
  u64 q_;
  unsigned max_k_;
  std::map<std::pair<i64, i64>, bool> cache_;
};

}  // namespace

CensusResult exact_cq(u64 q, int threads, unsigned geom_max_k) {
  require_prime(q, kExactMaxQ);
  require_sweep(geom_max_k);
  const ModelHistogram h = threads == 1 ? model_histogram_serial(q) : model_histogram_parallel(q, threads);
  CensusResult r;
  r.q = q;
  r.exact = true;
  r.geom_max_k = geom_max_k;
  GeomCache geom(q, geom_max_k);
  for (const auto& [key, m] : jacobian_masses(h)) {
    const auto [a1, a2] = key;
    const auto cls = classify(q, a1, a2);
    r.by_tag[cls.tag] += m;
    r.weighted_jacobians_total += m;
    if (cls.split()) r.jacobian_split += m;
    if (geom(a1, a2)) r.jacobian_geom_split += m;
  }
  const mpq_class Q = static_cast<unsigned long>(q);
  if (r.weighted_jacobians_total != Q * Q * Q) throw std::logic_error("Jacobian mass differs from q^3");
  r.product_mass = Q * Q / 2;
  r.restriction_mass = Q * Q / 2;
  r.restriction_split = restriction_split_mass(q);
  r.weighted_split = r.jacobian_split + r.product_mass + r.restriction_split;
  r.weighted_geom_split = r.jacobian_geom_split + r.product_mass + r.restriction_mass;
  r.total_mass = r.weighted_jacobians_total + r.product_mass + r.restriction_mass;
  finish(r);
  return r;
}

CensusResult split_census(u64 q, int threads, unsigned geom_max_k) { return exact_cq(q, threads, geom_max_k); }

namespace {

struct BlockTally {
  u64 n = 0, split = 0, geom = 0;
  std::map<SplitTag, u64> tags;
};

constexpr u64 kBlock = 2048;

BlockTally run_block(const ellipt::FieldPtr& F, u64 seed, u64 block, u64 count, GeomCache& geom) {
  std::seed_seq ss{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                   static_cast<std::uint32_t>(F->q()), static_cast<std::uint32_t>(block),
                   static_cast<std::uint32_t>(block >> 32)};
  std::mt19937_64 rng(ss);
  std::uniform_int_distribution<u32> dist(0, F->q() - 1);
  BlockTally t;
  while (t.n < count) {
    SPoly f(7);
    for (auto& c : f) c = dist(rng);
    sp::trim(f);
    if (f.size() < 6) continue;
    SPoly df;
    for (std::size_t i = 1; i < f.size(); ++i) df.push_back(F->mul(F->from_int(static_cast<i64>(i)), f[i]));
    sp::trim(df);
    if (sp::degree(sp::gcd(*F, f, df)) > 0) continue;
    const Genus2Curve C(F, f);
    const auto w = weil_coeffs(C, Strategy::Auto);
    const auto cls = classify(F->q(), w.a1, w.a2);
    ++t.n;
    ++t.tags[cls.tag];
    t.split += cls.split();
    t.geom += geom(w.a1, w.a2);
  }
  return t;
}

}  // namespace

CensusResult monte_carlo_cq(u64 q, u64 samples, u64 seed, int threads, unsigned geom_max_k) {
  require_sweep(geom_max_k);
  if (q < 5 || !numth::is_prime(q) || q > 10000000)
    throw std::invalid_argument("Monte Carlo census needs a prime q in [5, 10^7]");
  if (samples < 1000) throw std::invalid_argument("at least 1000 samples are required");
  const auto F = q <= (1u << 22) ? ellipt::small_field(q) : std::make_shared<const gf::SmallField>(q);
  const u64 nblocks = (samples + kBlock - 1) / kBlock;
  std::vector<BlockTally> tallies(nblocks);
  const int nt = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel num_threads(nt)
  {
    GeomCache geom(q, geom_max_k);
#pragma omp for schedule(dynamic, 1)
    for (i64 b = 0; b < static_cast<i64>(nblocks); ++b) {
      const u64 ub = static_cast<u64>(b);
      const u64 count = std::min<u64>(kBlock, samples - ub * kBlock);
      tallies[ub] = run_block(F, seed, ub, count, geom);
    }
  }
  BlockTally all;
  for (const auto& t : tallies) {
    all.n += t.n;
    all.split += t.split;
    all.geom += t.geom;
    for (const auto& [k, v] : t.tags) all.tags[k] += v;
  }
  CensusResult r;
  r.q = q;
  r.exact = false;
  r.geom_max_k = geom_max_k;
  r.samples = all.n;
  const mpq_class Q = static_cast<unsigned long>(q);
  const mpq_class Q3 = Q * Q * Q;
  const mpq_class N = static_cast<unsigned long>(all.n);
  r.weighted_jacobians_total = Q3;
  for (const auto& [k, v] : all.tags) r.by_tag[k] = Q3 * static_cast<unsigned long>(v) / N;
  r.jacobian_split = Q3 * static_cast<unsigned long>(all.split) / N;
  r.jacobian_geom_split = Q3 * static_cast<unsigned long>(all.geom) / N;
  r.product_mass = Q * Q / 2;
  r.restriction_mass = Q * Q / 2;
  r.restriction_split = restriction_split_mass(q);
  r.weighted_split = r.jacobian_split + r.product_mass + r.restriction_split;
  r.weighted_geom_split = r.jacobian_geom_split + r.product_mass + r.restriction_mass;
  r.total_mass = Q3 + Q * Q;
  finish(r);
  const double dq = static_cast<double>(q);
  const double scale = std::sqrt(dq) * dq * dq * dq / (dq * dq * dq + dq * dq);
  const double n = static_cast<double>(all.n);
  const double ps = static_cast<double>(all.split) / n, pg = static_cast<double>(all.geom) / n;
  r.stderr_c = scale * std::sqrt(ps * (1 - ps) / n);
  r.stderr_d = scale * std::sqrt(pg * (1 - pg) / n);
  return r;
}

// ---------------------------------------------------------------------------
// Isomorphism classes by union-find over normalized models.

u64 WeightedClass::aut() const {
  const mpq_class inv = 1 / weight;
  if (inv.get_den() != 1) throw std::logic_error("class weight is not 1/n");
  return inv.get_num().get_ui();
}

namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0u); }
  u32 find(u32 x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(u32 a, u32 b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) std::swap(a, b);
    parent_[a] = b;
  }

 private:
  std::vector<u32> parent_;
};

using Coeffs = std::array<u32, 7>;

// h(x) = f(x + t), degree <= 6.
Coeffs taylor_shift(const gf::SmallField& F, Coeffs h, u32 t) {
  for (int i = 0; i < 7; ++i)
    for (int j = 5; j >= i; --j) h[j] = F.add(h[j], F.mul(t, h[j + 1]));
  return h;
}

// x^6 f(t + 1/x).
Coeffs invert_at(const gf::SmallField& F, const Coeffs& f, u32 t) {
  const Coeffs h = taylor_shift(F, f, t);
  Coeffs g{};
  for (int i = 0; i < 7; ++i) g[i] = h[6 - i];
  return g;
}

class ModelSpace {
 public:
  explicit ModelSpace(u64 q) : q_(static_cast<u32>(q)), F_(ellipt::small_field(q)) {
    rooted_free_ = q == 5 ? 5 : 4;
    n_rooted_ = pow_q(rooted_free_);
    n_rootless_ = 2 * pow_q(5);
    nonsq_ = F_->nonsquare();
  }
  u64 size() const { return n_rooted_ + n_rootless_; }
  u64 rooted_count() const { return n_rooted_; }
  const gf::SmallField& F() const { return *F_; }
  const ellipt::FieldPtr& field() const { return F_; }

  // Coefficients of model idx (the rootless twist multiplies by the class representative).
  Coeffs decode(u64 idx) const {
    Coeffs c{};
    if (idx < n_rooted_) {
      c[5] = 1;
      for (int i = 0; i < rooted_free_; ++i) {
        c[i] = static_cast<u32>(idx % q_);
        idx /= q_;
      }
      return c;
    }
    idx -= n_rooted_;
    c[6] = 1;
    for (int i = 0; i < 5; ++i) {
      c[i] = static_cast<u32>(idx % q_);
      idx /= q_;
    }
    if (idx == 1)
      for (auto& v : c) v = F_->mul(v, nonsq_);
    return c;
  }

  // Index of a monic quintic already normalized (a4 = 0 unless q = 5).
  u64 rooted_index(const Coeffs& c) const {
    u64 idx = 0;
    for (int i = rooted_free_; i-- > 0;) idx = idx * q_ + c[i];
    return idx;
  }

  u64 rootless_index(const Coeffs& monic, bool twisted) const {
    u64 idx = twisted ? 1 : 0;
    for (int i = 5; i-- > 0;) idx = idx * q_ + monic[i];
    return n_rooted_ + idx;
  }

  // Quintic with nonzero leading coefficient -> normalized rooted model index.
  u64 normalize_quintic(Coeffs g) const {
    const auto& F = *F_;
    const u32 L = g[5];
    if (q_ != 5 && g[4] != 0) {
      // x -> x - g4 / (5 L)
      const u32 shift = F.neg(F.mul(g[4], F.inv(F.mul(F.from_int(5), L))));
      g = taylor_shift(F, g, shift);
    }
    // g(L x) / L^6
    const u32 Linv = F.inv(L);
    Coeffs m{};
    u32 pw = F.pow(Linv, 6);
    for (int i = 0; i <= 5; ++i) {
      m[i] = F.mul(g[i], pw);
      pw = F.mul(pw, L);
    }
    return rooted_index(m);
  }

  // Sextic with nonzero leading coefficient -> normalized rootless model index.
  u64 normalize_sextic(Coeffs g) const {
    const auto& F = *F_;
    const u32 L = g[6];
    if (g[5] != 0) g = taylor_shift(F, g, F.neg(F.mul(g[5], F.inv(F.mul(F.from_int(6), L)))));
    const u32 Linv = F.inv(L);
    for (auto& v : g) v = F.mul(v, Linv);
    return rootless_index(g, F.chi(L) == -1);
  }

  bool squarefree(const Coeffs& c, int deg) const {
    const auto& F = *F_;
    SPoly f(c.begin(), c.begin() + deg + 1);
    SPoly df;
    for (int i = 1; i <= deg; ++i) df.push_back(F.mul(F.from_int(i), f[i]));
    sp::trim(df);
    return sp::degree(sp::gcd(F, f, df)) == 0;
  }

 private:
  u64 pow_q(int e) const {
    u64 r = 1;
    for (int i = 0; i < e; ++i) r *= q_;
    return r;
  }

  u32 q_;
  ellipt::FieldPtr F_;
  int rooted_free_;
  u64 n_rooted_, n_rootless_;
  u32 nonsq_;
};

}  // namespace

std::vector<WeightedClass> enumerate_genus2_weighted(u64 q) {
  require_prime(q, kEnumerateMaxQ);
  const ModelSpace M(q);
  const auto& F = M.F();
  const u64 n = M.size();
  UnionFind uf(n);
  // Integer model weights in units of 1 / (120 |GL2|).
  std::vector<u64> units(n, 0);
  const u64 gl = gl2_order(q).get_ui();
  const u64 rooted_base = (q == 5 ? (q + 1) * (q - 1) : (q + 1) * (q - 1) * q) * 120;
  const u64 rootless_units = (q - 1) * q * 60;
  const u32 g = F.generator();
  const u32 lam = F.mul(g, g);
  for (u64 idx = 0; idx < n; ++idx) {
    const Coeffs c = M.decode(idx);
    if (idx < M.rooted_count()) {
      if (!M.squarefree(c, 5)) continue;
      std::vector<u32> roots;
      for (u32 x = 0; x < q; ++x)
        if (sp::eval(F, SPoly(c.begin(), c.begin() + 6), x) == 0) roots.push_back(x);
      units[idx] = rooted_base / (1 + roots.size());
      // x -> lam x with y scaled to keep the model monic.
      Coeffs s{};
      const u32 li = F.inv(lam);
      u32 pw = 1;
      for (int i = 5; i >= 0; --i) {
        s[i] = F.mul(c[i], pw);
        pw = F.mul(pw, li);
      }
      uf.unite(static_cast<u32>(idx), static_cast<u32>(M.rooted_index(s)));
      if (q == 5) uf.unite(static_cast<u32>(idx), static_cast<u32>(M.rooted_index(taylor_shift(F, c, 1))));
      for (u32 rho : roots) uf.unite(static_cast<u32>(idx), static_cast<u32>(M.normalize_quintic(invert_at(F, c, rho))));
    } else {
      if (!M.squarefree(c, 6)) continue;
      bool rootless = true;
      for (u32 x = 0; x < q && rootless; ++x) rootless = sp::eval(F, SPoly(c.begin(), c.end()), x) != 0;
      if (!rootless) continue;
      units[idx] = rootless_units;
      Coeffs s{};
      const u32 gi = F.inv(g);
      u32 pw = 1;
      for (int i = 6; i >= 0; --i) {
        s[i] = F.mul(c[i], pw);
        pw = F.mul(pw, gi);
      }
      uf.unite(static_cast<u32>(idx), static_cast<u32>(M.normalize_sextic(s)));
      for (u32 t = 0; t < q; ++t) uf.unite(static_cast<u32>(idx), static_cast<u32>(M.normalize_sextic(invert_at(F, c, t))));
    }
  }
  std::unordered_map<u32, u64> comp;
  for (u64 idx = 0; idx < n; ++idx)
    if (units[idx]) comp[uf.find(static_cast<u32>(idx))] += units[idx];
  std::vector<std::pair<u32, u64>> sorted(comp.begin(), comp.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<WeightedClass> out;
  out.reserve(sorted.size());
  const mpz_class denom = mpz_class(static_cast<unsigned long>(gl)) * 120;
  for (const auto& [root, u] : sorted) {
    const Coeffs c = M.decode(root);
    SPoly f(c.begin(), c.end());
    sp::trim(f);
    WeightedClass wc{Genus2Curve(M.field(), f), mpq_class(mpz_class(static_cast<unsigned long>(u)), denom)};
    wc.weight.canonicalize();
    out.push_back(std::move(wc));
  }
  return out;
}

}  // namespace splitsurf::genus2
