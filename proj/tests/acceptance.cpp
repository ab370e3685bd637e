// One line per acceptance criterion; exit status 1 if any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "pisplit_oracle.hpp"
#include "splitsurf/census.hpp"
#include "splitsurf/driver.hpp"
#include "splitsurf/ellipt.hpp"
#include "splitsurf/error.hpp"
#include "splitsurf/numth.hpp"
#include "splitsurf/quadorders.hpp"

using namespace splitsurf;
using i64 = std::int64_t;
using u64 = std::uint64_t;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::vector<u64> prime_powers(u64 lo, u64 hi) {
  std::vector<u64> out;
  for (u64 q = lo; q <= hi; ++q) {
    const auto pp = numth::prime_power(q);
    if (pp && pp->first >= 5) out.push_back(q);
  }
  return out;
}

Outcome criterion1() {
  const std::map<u64, double> expected{{17, .7989}, {19, .8058}, {23, .8006}, {29, .8113},
                                       {31, .8118}, {37, .8228}, {41, .8188}};
  Outcome o;
  std::ostringstream os;
  for (const auto& [q, want] : expected) {
    const double c = genus2::exact_cq(q).c_q;
    const bool ok = std::round(c * 1e4) / 1e4 == want && std::abs(c - want) <= 5e-5;
    o.pass &= ok;
    char buf[64];
    std::snprintf(buf, sizeof buf, "c_%llu=%.6f%s ", static_cast<unsigned long long>(q), c, ok ? "" : "(!)");
    os << buf;
  }
  o.detail = os.str();
  return o;
}

Outcome criterion2() {
  Outcome o;
  std::ostringstream os;
  for (const u64 q : {5ull, 7ull, 11ull, 13ull, 17ull}) {
    mpq_class mass = 0;
    for (const auto& c : genus2::enumerate_genus2_weighted(q)) mass += c.weight;
    const mpq_class Q = static_cast<unsigned long>(q);
    const auto census = genus2::exact_cq(q);
    const bool ok = mass == Q * Q * Q && census.total_mass == Q * Q * Q + Q * Q;
    o.pass &= ok;
    os << "q=" << q << (ok ? " ok " : " MISMATCH ");
  }
  o.detail = os.str();
  return o;
}

Outcome criterion3() {
  Outcome o;
  std::ostringstream os;
  std::mt19937_64 rng(20240601);
  std::vector<u64> primes;
  for (const auto p : numth::primes_up_to(9999))
    if (p > 1000) primes.push_back(p);
  std::shuffle(primes.begin(), primes.end(), rng);
  primes.resize(10);
  double lo = 1e9, hi = 0;
  for (const u64 q : primes) {
    const double r = mpq_class(ellipt::sum_relcond_closed_form(q), static_cast<unsigned long>(q)).get_d();
    lo = std::min(lo, r);
    hi = std::max(hi, r);
    o.pass &= r >= 2.07 && r <= 4.27;
  }
  std::size_t checked = 0;
  for (const u64 q : prime_powers(5, 200)) {
    const bool ok = ellipt::sum_relcond_closed_form(q) == ellipt::sum_relcond_enumerated(q);
    if (!ok) os << "mismatch at q=" << q << ' ';
    o.pass &= ok;
    ++checked;
  }
  os << "ratio range [" << lo << ", " << hi << "] over 10 primes; closed form = enumeration for " << checked
     << " prime powers <= 200";
  o.detail = os.str();
  return o;
}

Outcome criterion4() {
  Outcome o;
  std::ostringstream os;
  std::size_t discs = 0;
  for (i64 d = -50000; d <= -3; ++d) {
    if (!quadorders::is_discriminant(d)) continue;
    ++discs;
    if (quadorders::class_number(d) != quadorders::class_number_forms(d)) {
      o.pass = false;
      os << "h mismatch at " << d << ' ';
    }
  }
  std::size_t classes = 0;
  for (const u64 q : prime_powers(5, 101)) {
    const i64 p = static_cast<i64>(numth::prime_power(q)->first);
    std::map<i64, i64> by_trace;
    for (const auto& c : ellipt::enumerate_curves(q)) ++by_trace[c.curve.trace()];
    const i64 Q = static_cast<i64>(q);
    const i64 b = static_cast<i64>(numth::isqrt(4 * q));
    for (i64 a = -b; a <= b; ++a) {
      if (a % p == 0) continue;
      ++classes;
      const i64 H = quadorders::kronecker_class_number(a * a - 4 * Q);
      if (H != by_trace[a]) {
        o.pass = false;
        os << "H mismatch q=" << q << " a=" << a << ' ';
      }
    }
  }
  os << discs << " discriminants, " << classes << " ordinary isogeny classes";
  o.detail = os.str();
  return o;
}

Outcome criterion5() {
  const double s = static_cast<double>(numth::sum_psi(1000000)) / 1e12;
  const double t = static_cast<double>(numth::sum_psi_over_n_real(1000000)) / 1e6;
  const double pi2 = std::numbers::pi * std::numbers::pi;
  Outcome o;
  o.pass = std::abs(s - 15 / (2 * pi2)) < 1e-3 && std::abs(t - 15 / pi2) < 1e-3;
  char buf[160];
  std::snprintf(buf, sizeof buf, "sum_psi/x^2=%.7f (limit %.7f), sum_psi_over_n/x=%.7f (limit %.7f)", s,
                15 / (2 * pi2), t, 15 / pi2);
  o.detail = buf;
  return o;
}

Outcome criterion6() {
  Outcome o;
  std::size_t checked = 0, skipped = 0;
  std::ostringstream os;
  for (const u64 q : prime_powers(5, 50)) {
    for (const auto& c : ellipt::enumerate_curves(q)) {
      const u64 rc = ellipt::relative_conductor(c.curve);
      for (u64 n = 2; n <= 10; ++n) {
        if (numth::gcd(n, q) != 1) continue;
        u64 sz;
        try {
          sz = ellipt::torsion_aut_size(c.curve, n, 48);
        } catch (const Undetermined&) {
          ++skipped;
          continue;
        }
        const u64 g = numth::gcd(n, rc);
        const u64 phi = numth::mobius_phi_sigma(n).phi;
        const bool ok = phi * phi * g * g <= sz && sz <= phi * numth::psi(n) * g * g;
        if (!ok) {
          o.pass = false;
          os << "violated q=" << q << " a4=" << c.curve.a4() << " a6=" << c.curve.a6() << " n=" << n << ' ';
        }
        ++checked;
      }
    }
  }
  os << checked << " (curve, n) pairs checked, " << skipped << " beyond torsion degree 48";
  o.detail = os.str();
  return o;
}

Outcome criterion7() {
  Outcome o;
  const u64 ell = 5;
  std::size_t pairs = 0;
  u64 least = ~0ull;
  for (const u64 q : {11ull, 13ull}) {
    std::vector<ellipt::EllipticCurve> curves;
    std::vector<ellipt::SymplecticType> types;
    for (const auto& c : ellipt::enumerate_curves(q)) {
      if (!c.curve.ordinary()) continue;
      curves.push_back(c.curve);
      types.push_back(ellipt::symplectic_type(c.curve, ell));
    }
    for (std::size_t i = 0; i < curves.size(); ++i)
      for (std::size_t j = i; j < curves.size(); ++j) {
        // Same symplectic type presupposes conjugate Frobenius mod ell, hence equal traces mod ell.
        if ((curves[i].trace() - curves[j].trace()) % static_cast<i64>(ell) != 0 || types[i] != types[j]) continue;
        const u64 n = ellipt::count_anti_isometries(curves[i], curves[j], ell);
        least = std::min(least, n);
        o.pass &= n >= ell - 1;
        ++pairs;
      }
  }
  o.pass &= pairs > 0;
  o.detail = std::to_string(pairs) + " same-type pairs, minimum count " + std::to_string(least);
  return o;
}

Outcome criterion8() {
  Outcome o;
  const std::vector<i64> f{6, 1, 0, 0, 0, 1};
  const auto C = driver::RationalGenus2::parse("x^5+x+6");
  const auto small = driver::pisplit(C, 1000, 40);
  std::size_t mismatches = 0;
  for (const auto& d : small.decisions) {
    const i64 p = static_cast<i64>(d.p);
    const auto [a1, a2] = oracle::weil_from_counts(p, static_cast<i64>(oracle::count_base(d.p, f)),
                                                   static_cast<i64>(oracle::count_ext(static_cast<oracle::u32>(d.p), f)));
    if (!d.determined || d.a1 != a1 || d.a2 != a2 || d.split() != oracle::split_oracle(p, a1, a2)) ++mismatches;
  }
  const auto big = driver::pisplit(C, 1000000, 40);
  bool monotone = true;
  for (std::size_t i = 1; i < big.samples.size(); ++i)
    monotone &= big.samples[i].pi_split >= big.samples[i - 1].pi_split && big.samples[i].z > big.samples[i - 1].z;
  o.pass = mismatches == 0 && monotone && big.undetermined.empty();
  std::vector<std::pair<double, double>> pts;
  for (const auto& s : big.samples) pts.emplace_back(static_cast<double>(s.z), static_cast<double>(s.pi_split));
  const auto fit = driver::fit_counting(pts, driver::FitModel::SqrtOverLogPower);
  std::ostringstream os;
  os << small.decisions.size() << " primes <= 1000, " << mismatches << " mismatches; pi_split(1e6)="
     << big.samples.back().pi_split << " over " << big.decisions.size() << " good primes, "
     << big.undetermined.size() << " undetermined, monotone=" << (monotone ? "yes" : "no")
     << "; informational fit a=" << fit.a << " b=" << fit.b;
  o.detail = os.str();
  return o;
}

Outcome criterion9() {
  Outcome o;
  auto synth = [](double a, double b) {
    std::vector<std::pair<double, double>> pts;
    for (const u64 z : driver::log_grid(1000000, 40)) {
      const double x = static_cast<double>(z);
      pts.emplace_back(x, a * std::sqrt(x) / std::pow(std::log(x), b));
    }
    return pts;
  };
  double worst_c = 0, worst_ab = 0;
  for (const double c : {1.0, 4.4651, 7.25}) {
    worst_c = std::max(worst_c, std::abs(driver::fit_counting(synth(c, 1.0), driver::FitModel::SqrtOverLog).c - c));
  }
  for (const auto& [a, b] : std::vector<std::pair<double, double>>{{4.4651, 1.02269}, {2.0, 0.6}, {3.0, 1.9}}) {
    const auto f = driver::fit_counting(synth(a, b), driver::FitModel::SqrtOverLogPower);
    worst_ab = std::max({worst_ab, std::abs(f.a - a), std::abs(f.b - b)});
  }
  o.pass = worst_c < 1e-6 && worst_ab < 1e-4;
  char buf[128];
  std::snprintf(buf, sizeof buf, "max |c error|=%.2e, max |(a,b) error|=%.2e", worst_c, worst_ab);
  o.detail = buf;
  return o;
}

Outcome criterion10() {
  Outcome o;
  std::ostringstream os;
  const double exact = genus2::exact_cq(17).c_q;
  double worst = 0;
  for (u64 seed = 1; seed <= 10; ++seed) {
    const auto r = genus2::monte_carlo_cq(17, 20000, seed);
    const double z = std::abs(r.c_q - exact) / *r.stderr_c;
    worst = std::max(worst, z);
    o.pass &= z <= 4;
  }
  const auto big = genus2::monte_carlo_cq(1031, 100000, 1);
  const double z = std::abs(big.c_q - 0.8387) / std::hypot(*big.stderr_c, 0.0002);
  o.pass &= z <= 3;
  char buf[200];
  std::snprintf(buf, sizeof buf, "q=17: max deviation %.2f sigma over 10 seeds; q=1031: c=%.4f +- %.4f (%.2f sigma)",
                worst, big.c_q, *big.stderr_c, z);
  os << buf;
  o.detail = os.str();
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                       criterion6, criterion7, criterion8, criterion9, criterion10};
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %2d: %s  %s  [%.1fs]\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
