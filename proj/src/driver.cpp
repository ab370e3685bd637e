#include "splitsurf/driver.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <omp.h>

#include "splitsurf/census.hpp"
#include "splitsurf/ellipt.hpp"
#include "splitsurf/error.hpp"
#include "splitsurf/numth.hpp"
#include "splitsurf/quadorders.hpp"

#ifndef SPLITSURF_VERSION
#define SPLITSURF_VERSION "unknown"
#endif

namespace splitsurf::driver {

using weilquartic::SplitTag;

namespace {

void trim_poly(std::vector<mpz_class>& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

}  // namespace

std::vector<mpz_class> parse_polynomial(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  if (s.empty()) throw std::invalid_argument("empty polynomial");
  std::vector<mpz_class> f;
  std::size_t i = 0;
  auto fail = [&](const std::string& why) { throw std::invalid_argument("cannot parse polynomial '" + text + "': " + why); };
  while (i < s.size()) {
    int sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
    } else if (i != 0) {
      fail("expected + or -");
    }
    std::size_t j = i;
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
    mpz_class coeff = 1;
    const bool has_digits = j > i;
    if (has_digits) coeff = mpz_class(s.substr(i, j - i));
    i = j;
    unsigned long e = 0;
    if (i < s.size() && s[i] == '*') {
      if (!has_digits) fail("dangling *");
      ++i;
    }
    if (i < s.size() && s[i] == 'x') {
      ++i;
      e = 1;
      if (i < s.size() && s[i] == '^') {
        ++i;
        std::size_t k = i;
        while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) ++k;
        if (k == i) fail("missing exponent");
        e = std::stoul(s.substr(i, k - i));
        i = k;
      }
    } else if (!has_digits) {
      fail("expected a coefficient or x");
    }
    if (e > 64) fail("degree too large");
    if (f.size() <= e) f.resize(e + 1, 0);
    f[e] += sign * coeff;
  }
  trim_poly(f);
  return f;
}

std::string format_polynomial(const std::vector<mpz_class>& f) {
  std::string out;
  for (std::size_t i = f.size(); i-- > 0;) {
    if (f[i] == 0) continue;
    mpz_class c = f[i];
    if (!out.empty()) out += c < 0 ? "-" : "+";
    else if (c < 0) out += "-";
    c = abs(c);
    if (i == 0 || c != 1) out += c.get_str();
    if (i > 0) out += i == 1 ? "x" : "x^" + std::to_string(i);
  }
  return out.empty() ? "0" : out;
}

mpz_class discriminant(const std::vector<mpz_class>& f0) {
  std::vector<mpz_class> f = f0;
  trim_poly(f);
  const int n = static_cast<int>(f.size()) - 1;
  if (n < 1) throw std::invalid_argument("discriminant needs degree >= 1");
  if (n == 1) return 1;
  std::vector<mpz_class> df(n);
  for (int i = 1; i <= n; ++i) df[i - 1] = f[i] * i;
  // Sylvester matrix of f (degree n) and f' (degree n - 1), size 2n - 1.
  const int m = 2 * n - 1;
  std::vector<std::vector<mpz_class>> M(m, std::vector<mpz_class>(m, 0));
  for (int r = 0; r < n - 1; ++r)
    for (int k = 0; k <= n; ++k) M[r][r + k] = f[n - k];
  for (int r = 0; r < n; ++r)
    for (int k = 0; k <= n - 1; ++k) M[n - 1 + r][r + k] = df[n - 1 - k];
  // Fraction-free Bareiss elimination.
  mpz_class prev = 1;
  int sign = 1;
  for (int k = 0; k < m - 1; ++k) {
    if (M[k][k] == 0) {
      int piv = -1;
      for (int r = k + 1; r < m; ++r)
        if (M[r][k] != 0) {
          piv = r;
          break;
        }
      if (piv < 0) return 0;
      std::swap(M[k], M[piv]);
      sign = -sign;
    }
    for (int i = k + 1; i < m; ++i) {
      for (int j = k + 1; j < m; ++j) {
        M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]);
        mpz_divexact(M[i][j].get_mpz_t(), M[i][j].get_mpz_t(), prev.get_mpz_t());
      }
    }
    prev = M[k][k];
  }
  mpz_class res = sign * M[m - 1][m - 1];
  // disc = (-1)^{n(n-1)/2} Res(f, f') / lead(f)
  if ((n * (n - 1) / 2) % 2 == 1) res = -res;
  mpz_class out;
  mpz_divexact(out.get_mpz_t(), res.get_mpz_t(), f[n].get_mpz_t());
  return out;
}

RationalGenus2::RationalGenus2(std::vector<mpz_class> coeffs) : f(std::move(coeffs)) {
  trim_poly(f);
  if (degree() != 5 && degree() != 6) throw std::invalid_argument("genus-2 model needs degree 5 or 6");
  disc = discriminant(f);
  if (disc == 0) throw std::invalid_argument("polynomial is not squarefree");
}

genus2::Genus2Curve RationalGenus2::reduce(u64 p) const {
  auto F = std::make_shared<const gf::SmallField>(p);
  genus2::SPoly g(f.size());
  const mpz_class P = static_cast<unsigned long>(p);
  for (std::size_t i = 0; i < f.size(); ++i) {
    mpz_class r = f[i] % P;
    if (r < 0) r += P;
    g[i] = static_cast<genus2::u32>(r.get_ui());
  }
  return genus2::Genus2Curve(F, g);
}

std::vector<u64> good_primes(const RationalGenus2& C, u64 z) {
  std::vector<u64> out;
  if (z < 5) return out;
  for (const auto p : numth::primes_up_to(z)) {
    if (p < 5) continue;
    if (mpz_divisible_ui_p(C.disc.get_mpz_t(), p) || mpz_divisible_ui_p(C.f.back().get_mpz_t(), p)) continue;
    out.push_back(p);
  }
  return out;
}

PrimeDecision decide_prime(const RationalGenus2& C, u64 p, genus2::Strategy strategy) {
  PrimeDecision d;
  d.p = p;
  try {
    const auto w = genus2::weil_coeffs(C.reduce(p), strategy);
    d.a1 = w.a1;
    d.a2 = w.a2;
    d.tag = weilquartic::classify(p, w.a1, w.a2).tag;
  } catch (const Undetermined&) {
    d.determined = false;
  }
  return d;
}

std::vector<u64> log_grid(u64 z, unsigned n) {
  if (n == 0) throw std::invalid_argument("grid needs at least one point");
  std::vector<u64> out;
  const u64 lo = std::min<u64>(100, z);
  if (n == 1 || lo == z) return {z};
  const double a = std::log(static_cast<double>(lo)), b = std::log(static_cast<double>(z));
  for (unsigned i = 0; i < n; ++i) {
    u64 v = i + 1 == n ? z : static_cast<u64>(std::llround(std::exp(a + (b - a) * i / (n - 1))));
    v = std::clamp<u64>(v, lo, z);
    if (out.empty() || v > out.back()) out.push_back(v);
  }
  return out;
}

namespace {

PisplitResult assemble(u64 z, unsigned grid, std::vector<PrimeDecision> decisions) {
  PisplitResult r;
  r.z = z;
  for (const auto& d : decisions)
    if (!d.determined) r.undetermined.push_back(d.p);
  std::size_t idx = 0;
  u64 split = 0;
  for (const u64 g : log_grid(std::max<u64>(z, 1), grid)) {
    while (idx < decisions.size() && decisions[idx].p <= g) split += decisions[idx++].split();
    r.samples.push_back(CountingSample{g, split, idx});
  }
  r.decisions = std::move(decisions);
  return r;
}

}  // namespace

PisplitResult pisplit_serial(const RationalGenus2& C, u64 z, unsigned grid) {
  const auto primes = good_primes(C, z);
  std::vector<PrimeDecision> decisions;
  decisions.reserve(primes.size());
  for (const u64 p : primes) decisions.push_back(decide_prime(C, p));
  return assemble(z, grid, std::move(decisions));
}

PisplitResult pisplit(const RationalGenus2& C, u64 z, unsigned grid, int threads) {
  const auto primes = good_primes(C, z);
  std::vector<PrimeDecision> decisions(primes.size());
  const int nt = threads > 0 ? threads : omp_get_max_threads();
  const i64 n = static_cast<i64>(primes.size());
  // Large primes first so the tail of the schedule is short.
#pragma omp parallel for num_threads(nt) schedule(dynamic, 8)
  for (i64 i = n - 1; i >= 0; --i) decisions[static_cast<std::size_t>(i)] = decide_prime(C, primes[static_cast<std::size_t>(i)]);
  return assemble(z, grid, std::move(decisions));
}

// ---------------------------------------------------------------------------

namespace {

double basis(double z, double b) { return std::sqrt(z) / std::pow(std::log(z), b); }

// Least-squares amplitude and residual sum of squares for a fixed exponent.
std::pair<double, double> amplitude(const std::vector<std::pair<double, double>>& s, double b) {
  double num = 0, den = 0;
  for (const auto& [z, y] : s) {
    const double g = basis(z, b);
    num += y * g;
    den += g * g;
  }
  const double c = num / den;
  double sse = 0;
  for (const auto& [z, y] : s) {
    const double e = y - c * basis(z, b);
    sse += e * e;
  }
  return {c, sse};
}

}  // namespace

double fit_model_value(const FitResult& fit, double z) {
  return fit.model == FitModel::SqrtOverLog ? fit.c * basis(z, 1.0) : fit.a * basis(z, fit.b);
}

FitResult fit_counting(const std::vector<std::pair<double, double>>& samples, FitModel model) {
  std::vector<std::pair<double, double>> s;
  for (const auto& pt : samples)
    if (pt.first >= 100) s.push_back(pt);
  if (s.size() < 10) throw std::invalid_argument("fit needs at least 10 samples with z >= 100");
  if (std::all_of(s.begin(), s.end(), [](const auto& pt) { return pt.second == 0; }))
    throw std::invalid_argument("fit samples are all zero");
  FitResult r;
  r.model = model;
  if (model == FitModel::SqrtOverLog) {
    r.c = amplitude(s, 1.0).first;
    r.a = r.c;
    r.b = 1.0;
  } else {
    const double phi = (std::sqrt(5.0) - 1) / 2;
    double lo = 0.5, hi = 2.0;
    double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    double f1 = amplitude(s, x1).second, f2 = amplitude(s, x2).second;
    while (hi - lo > 1e-6) {
      if (f1 < f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - phi * (hi - lo);
        f1 = amplitude(s, x1).second;
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + phi * (hi - lo);
        f2 = amplitude(s, x2).second;
      }
    }
    r.b = (lo + hi) / 2;
    r.a = amplitude(s, r.b).first;
    r.c = r.a;
  }
  double acc = 0;
  std::size_t cnt = 0;
  for (const auto& [z, y] : s) {
    if (y == 0) continue;
    const double e = (fit_model_value(r, z) - y) / y;
    acc += e * e;
    ++cnt;
  }
  r.residual = std::sqrt(acc / static_cast<double>(cnt));
  return r;
}

// ---------------------------------------------------------------------------

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string format_rational(const mpq_class& v) {
  mpq_class c = v;
  c.canonicalize();
  if (c.get_den() == 1) return c.get_num().get_str() + "/1";
  return c.get_str();
}

namespace {

std::string mode_of(const genus2::CensusResult& r) { return r.exact ? "exact" : "monte_carlo"; }

genus2::CensusResult census_for(const SurveyParams& p) {
  return p.exact ? genus2::exact_cq(p.q, p.threads, p.max_k)
                 : genus2::monte_carlo_cq(p.q, p.samples, p.seed, p.threads, p.max_k);
}

nlohmann::ordered_json base_meta(const std::string& kind, const SurveyParams& p) {
  nlohmann::ordered_json m;
  m["kind"] = kind;
  m["command_line"] = p.command_line;
  m["seed"] = p.seed;
  m["library_version"] = SPLITSURF_VERSION;
  m["heuristics"] = nlohmann::ordered_json::object();
  return m;
}

const char* tag_label(SplitTag t) {
  switch (t) {
    case SplitTag::OrdinaryNonisotypic: return "W";
    case SplitTag::OrdinaryIsotypic: return "X";
    case SplitTag::AlmostOrdinary: return "Y";
    case SplitTag::SupersingularSplit: return "Z";
    case SplitTag::Simple: break;
  }
  return "simple";
}

const char* model_name(FitModel m) { return m == FitModel::SqrtOverLog ? "c*sqrt(z)/log(z)" : "a*sqrt(z)/log(z)^b"; }

nlohmann::ordered_json fit_json(const FitResult& f) {
  nlohmann::ordered_json j;
  j["model"] = model_name(f.model);
  j["c"] = f.c;
  j["a"] = f.a;
  j["b"] = f.b;
  j["residual"] = f.residual;
  return j;
}

}  // namespace

SurveyTable run_survey(const std::string& kind, const SurveyParams& p) {
  SurveyTable t;
  t.kind = kind;
  t.meta = base_meta(kind, p);
  if (kind == "cq" || kind == "dq") {
    const auto r = census_for(p);
    const bool c = kind == "cq";
    t.columns = {"q", "mode", c ? "c_q" : "d_q", "stderr", c ? "weighted_split" : "weighted_geom_split", "total_mass",
                 "samples"};
    const auto se = c ? r.stderr_c : r.stderr_d;
    t.rows.push_back({std::to_string(r.q), mode_of(r), format_real(c ? r.c_q : r.d_q), se ? format_real(*se) : "",
                      format_rational(c ? r.weighted_split : r.weighted_geom_split), format_rational(r.total_mass),
                      std::to_string(r.samples)});
    if (!r.exact) t.meta["samples"] = p.samples;
    t.meta["heuristics"]["nonjacobian_masses"] = "products q^2/2 and restrictions of scalars added analytically";
    if (!c) t.meta["heuristics"]["geometric_split_max_k"] = r.geom_max_k;
  } else if (kind == "census") {
    const auto r = genus2::split_census(p.q, p.threads, p.max_k);
    t.columns = {"q", "class", "weighted_mass"};
    const std::string q = std::to_string(p.q);
    for (const auto tag : {SplitTag::OrdinaryNonisotypic, SplitTag::OrdinaryIsotypic, SplitTag::AlmostOrdinary,
                           SplitTag::SupersingularSplit, SplitTag::Simple}) {
      const auto it = r.by_tag.find(tag);
      t.rows.push_back({q, tag_label(tag), format_rational(it == r.by_tag.end() ? mpq_class(0) : it->second)});
    }
    t.rows.push_back({q, "jacobian_geom_split", format_rational(r.jacobian_geom_split)});
    t.rows.push_back({q, "jacobian_total", format_rational(r.weighted_jacobians_total)});
    t.rows.push_back({q, "product", format_rational(r.product_mass)});
    t.rows.push_back({q, "restriction", format_rational(r.restriction_mass)});
    t.rows.push_back({q, "restriction_split", format_rational(r.restriction_split)});
    t.rows.push_back({q, "split_total", format_rational(r.weighted_split)});
    t.rows.push_back({q, "geom_split_total", format_rational(r.weighted_geom_split)});
    t.rows.push_back({q, "total", format_rational(r.total_mass)});
    t.meta["heuristics"]["geometric_split_max_k"] = r.geom_max_k;
  } else if (kind == "relcond") {
    const u64 lo = p.q_min ? p.q_min : p.q, hi = p.q_max ? p.q_max : p.q;
    if (lo > hi) throw std::invalid_argument("relcond needs q-min <= q-max");
    t.columns = {"q", "S", "S_over_q"};
    if (p.verify) t.columns.push_back("S_enumerated");
    for (u64 q = lo; q <= hi; ++q) {
      const auto pp = numth::prime_power(q);
      if (!pp || pp->first < 5) continue;
      const mpz_class closed = ellipt::sum_relcond_closed_form(q);
      t.rows.push_back({std::to_string(q), closed.get_str(),
                        format_real(mpq_class(closed, static_cast<unsigned long>(q)).get_d())});
      if (p.verify)
        t.rows.back().push_back(q <= kRelcondVerifyMaxQ ? ellipt::sum_relcond_enumerated(q).get_str() : "");
    }
    if (t.rows.empty()) throw std::invalid_argument("no prime power q with p >= 5 in the requested range");
    if (p.verify) t.meta["verify_max_q"] = kRelcondVerifyMaxQ;
  } else if (kind == "classify") {
    weilquartic::validate(p.q, p.a1, p.a2);
    const auto cls = weilquartic::classify(p.q, p.a1, p.a2);
    t.columns = {"q", "a1", "a2", "tag", "split", "s", "t"};
    t.rows.push_back({std::to_string(p.q), std::to_string(p.a1), std::to_string(p.a2), weilquartic::to_string(cls.tag),
                      cls.split() ? "1" : "0", cls.factors ? std::to_string(cls.factors->first) : "",
                      cls.factors ? std::to_string(cls.factors->second) : ""});
    if (p.geometric) {
      const auto geom = weilquartic::is_geometrically_split(p.q, p.a1, p.a2, p.max_k);
      t.columns.insert(t.columns.end(), {"geom_split", "witness_k"});
      t.rows.back().insert(t.rows.back().end(), {geom.split ? "1" : "0", std::to_string(geom.witness)});
      t.meta["heuristics"]["geometric_split_max_k"] = p.max_k;
    }
  } else if (kind == "classnum") {
    if (p.d_from > p.d_to || p.d_to >= 0) throw std::invalid_argument("classnum needs negative discriminants A <= B");
    if (p.d_from == p.d_to && !quadorders::is_discriminant(p.d_from))
      throw std::invalid_argument(std::to_string(p.d_from) + " is not a negative discriminant");
    t.columns = {"delta", "h", "H", "f", "delta_star"};
    if (p.verify) t.columns.push_back("h_forms");
    for (i64 d = p.d_from; d <= p.d_to; ++d) {
      if (!quadorders::is_discriminant(d)) continue;
      const auto dec = quadorders::decompose(d);
      t.rows.push_back({std::to_string(d), std::to_string(quadorders::class_number(d)),
                        std::to_string(quadorders::kronecker_class_number(d)), std::to_string(dec.conductor),
                        std::to_string(dec.fundamental)});
      if (p.verify) t.rows.back().push_back(std::to_string(quadorders::class_number_forms(d)));
    }
  } else if (kind == "arith") {
    if (p.x_max < 1 || p.x_max > kArithMaxX) throw std::invalid_argument("arith-sums needs 1 <= max <= 10^8");
    const double pi2 = std::numbers::pi * std::numbers::pi;
    t.columns = {"x", "sum_psi", "sum_psi_over_n", "ratio_to_15_over_2pi2", "ratio_to_15_over_pi2"};
    std::vector<u64> xs;
    for (u64 x = 10; x <= p.x_max; x *= 10) xs.push_back(x);
    if (xs.empty() || xs.back() != p.x_max) xs.push_back(p.x_max);
    for (const u64 xi : xs) {
      const double x = static_cast<double>(xi);
      const u64 s = numth::sum_psi(xi);
      const double so = static_cast<double>(numth::sum_psi_over_n_real(xi));
      t.rows.push_back({std::to_string(xi), std::to_string(s), format_real(so),
                        format_real(static_cast<double>(s) / (x * x) / (15 / (2 * pi2))),
                        format_real(so / x / (15 / pi2))});
    }
    t.meta["ratios"] = "sum_psi/x^2 over 15/(2 pi^2) and sum_psi_over_n/x over 15/pi^2";
  } else if (kind == "pisplit") {
    const auto C = RationalGenus2::parse(p.curve);
    const auto r = p.threads == 1 ? pisplit_serial(C, p.zmax, p.grid) : pisplit(C, p.zmax, p.grid, p.threads);
    t.columns = {"z", "pi_split", "good_primes"};
    for (const auto& smp : r.samples)
      t.rows.push_back({std::to_string(smp.z), std::to_string(smp.pi_split), std::to_string(smp.good)});
    t.undetermined = r.undetermined.size();
    t.meta["curve"] = format_polynomial(C.f);
    t.meta["discriminant"] = C.disc.get_str();
    t.meta["zmax"] = p.zmax;
    t.meta["grid"] = p.grid;
    t.meta["good_primes"] = r.decisions.size();
    t.meta["undetermined_primes"] = r.undetermined;
    t.meta["heuristics"]["good_reduction"] = "p >= 5, p does not divide disc(f) or lead(f)";
    t.meta["heuristics"]["fit_loss"] = "least squares on counts over the log-spaced grid, z >= 100";
    std::vector<std::pair<double, double>> pts;
    for (const auto& smp : r.samples) pts.emplace_back(static_cast<double>(smp.z), static_cast<double>(smp.pi_split));
    nlohmann::ordered_json fits = nlohmann::ordered_json::array();
    for (const auto m : {FitModel::SqrtOverLog, FitModel::SqrtOverLogPower}) {
      try {
        fits.push_back(fit_json(fit_counting(pts, m)));
      } catch (const std::invalid_argument& e) {
        fits.push_back({{"model", model_name(m)}, {"error", e.what()}});
      }
    }
    t.meta["fits"] = fits;
    t.meta["reference_informational"] = {{"c", 4.4651}, {"b", 1.02269}, {"z", "2^30"}};
  } else if (kind == "fit") {
    const auto pts = read_counting_csv(p.input);
    t.columns = {"model", "c", "a", "b", "residual"};
    std::vector<FitModel> models;
    if (p.fit_model == "c" || p.fit_model == "both") models.push_back(FitModel::SqrtOverLog);
    if (p.fit_model == "ab" || p.fit_model == "both") models.push_back(FitModel::SqrtOverLogPower);
    if (models.empty()) throw std::invalid_argument("fit model must be c, ab or both");
    for (const auto m : models) {
      const auto f = fit_counting(pts, m);
      t.rows.push_back({model_name(m), format_real(f.c), format_real(f.a), format_real(f.b), format_real(f.residual)});
    }
    t.meta["input"] = p.input;
    t.meta["heuristics"]["golden_section"] = "b in [0.5, 2], tolerance 1e-6";
  } else {
    throw std::invalid_argument("unknown survey kind: " + kind);
  }
  return t;
}

std::string to_csv(const SurveyTable& t) {
  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) os << ',';
      const bool quote = v[i].find_first_of(",\"") != std::string::npos;
      if (!quote) {
        os << v[i];
        continue;
      }
      os << '"';
      for (char ch : v[i]) os << (ch == '"' ? "\"\"" : std::string(1, ch));
      os << '"';
    }
    os << '\n';
  };
  line(t.columns);
  for (const auto& r : t.rows) line(r);
  return os.str();
}

std::string to_json(const SurveyTable& t) {
  nlohmann::ordered_json j;
  j["kind"] = t.kind;
  j["columns"] = t.columns;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& r : t.rows) {
    nlohmann::ordered_json o;
    for (std::size_t i = 0; i < t.columns.size(); ++i) o[t.columns[i]] = i < r.size() ? r[i] : "";
    rows.push_back(o);
  }
  j["rows"] = rows;
  j["meta"] = t.meta;
  return j.dump(2) + "\n";
}

namespace {

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << content;
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace

void write_survey(const SurveyTable& t, const std::string& path, OutputFormat format) {
  if (format == OutputFormat::Json) {
    write_file(path, to_json(t));
    return;
  }
  write_file(path, to_csv(t));
  write_file(path + ".meta.json", t.meta.dump(2) + "\n");
}

std::vector<std::pair<double, double>> read_counting_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string header;
  if (!std::getline(in, header)) throw std::invalid_argument(path + " is empty");
  std::vector<std::string> cols;
  {
    std::stringstream ss(header);
    std::string c;
    while (std::getline(ss, c, ',')) cols.push_back(c);
  }
  const auto zi = std::find(cols.begin(), cols.end(), "z") - cols.begin();
  const auto pi = std::find(cols.begin(), cols.end(), "pi_split") - cols.begin();
  if (zi == static_cast<long>(cols.size()) || pi == static_cast<long>(cols.size()))
    throw std::invalid_argument(path + " lacks z and pi_split columns");
  std::vector<std::pair<double, double>> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> v;
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) v.push_back(c);
    if (v.size() < cols.size()) throw std::invalid_argument(path + ": short row");
    out.emplace_back(std::stod(v[zi]), std::stod(v[pi]));
  }
  return out;
}

}  // namespace splitsurf::driver
