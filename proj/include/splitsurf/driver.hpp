#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

#include "splitsurf/genus2.hpp"
#include "splitsurf/weilquartic.hpp"

namespace splitsurf::driver {

using i64 = std::int64_t;
using u64 = std::uint64_t;

/// Parse an integer polynomial in x such as "x^5+x+6" or "-3*x^6 + 2x - 1"; low-to-high.
std::vector<mpz_class> parse_polynomial(const std::string& text);
std::string format_polynomial(const std::vector<mpz_class>& f);
/// Discriminant of f (degree >= 1) from the Sylvester resultant of f and f'.
mpz_class discriminant(const std::vector<mpz_class>& f);

/// y^2 = f(x) over Q.
struct RationalGenus2 {
  std::vector<mpz_class> f;
  mpz_class disc;

  explicit RationalGenus2(std::vector<mpz_class> coeffs);
  static RationalGenus2 parse(const std::string& text) { return RationalGenus2(parse_polynomial(text)); }
  int degree() const { return static_cast<int>(f.size()) - 1; }
  /// Reduction modulo a good prime p, on a field that is not shared with other threads.
  genus2::Genus2Curve reduce(u64 p) const;
};

/// Primes 5 <= p <= z with p not dividing disc(f) or the leading coefficient.
std::vector<u64> good_primes(const RationalGenus2& C, u64 z);

struct PrimeDecision {
  u64 p = 0;
  i64 a1 = 0;
  i64 a2 = 0;
  weilquartic::SplitTag tag = weilquartic::SplitTag::Simple;
  bool determined = true;
  bool split() const { return determined && tag != weilquartic::SplitTag::Simple; }
};

struct CountingSample {
  u64 z = 0;
  u64 pi_split = 0;
  u64 good = 0;
};

struct PisplitResult {
  u64 z = 0;
  std::vector<PrimeDecision> decisions;
  std::vector<u64> undetermined;
  std::vector<CountingSample> samples;
};

/// Log-spaced grid of n integers from min(100, z) to z, strictly increasing.
std::vector<u64> log_grid(u64 z, unsigned n);

PrimeDecision decide_prime(const RationalGenus2& C, u64 p, genus2::Strategy strategy = genus2::Strategy::Auto);
PisplitResult pisplit_serial(const RationalGenus2& C, u64 z, unsigned grid = 40);
PisplitResult pisplit(const RationalGenus2& C, u64 z, unsigned grid = 40, int threads = 0);

enum class FitModel { SqrtOverLog, SqrtOverLogPower };

struct FitResult {
  FitModel model = FitModel::SqrtOverLog;
  double c = 0;
  double a = 0;
  double b = 1;
  /// RMS relative error on the samples.
  double residual = 0;
};

/// Least squares on counts: c closed form; b by golden section on [0.5, 2] (tolerance 1e-6).
FitResult fit_counting(const std::vector<std::pair<double, double>>& samples, FitModel model);
double fit_model_value(const FitResult& fit, double z);

// ---------------------------------------------------------------------------
// Surveys: tables of rows with a provenance sidecar.

struct SurveyParams {
  u64 q = 17;
  /// Prime-power range for relcond; both zero means the single q.
  u64 q_min = 0;
  u64 q_max = 0;
  bool exact = false;
  u64 samples = 100000;
  u64 seed = 1;
  int threads = 0;
  unsigned max_k = 24;
  bool geometric = false;
  std::string curve = "x^5+x+6";
  u64 zmax = 100000;
  unsigned grid = 40;
  /// arith: rows at powers of ten up to x_max.
  u64 x_max = 1000000;
  /// classnum: discriminants in [d_from, d_to].
  i64 d_from = -3;
  i64 d_to = -3;
  i64 a1 = 0;
  i64 a2 = 0;
  /// relcond: enumeration column (q <= 200); classnum: reduced-forms column.
  bool verify = false;
  std::string input;
  std::string fit_model = "both";
  std::string command_line;
};

struct SurveyTable {
  std::string kind;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  nlohmann::ordered_json meta;
  u64 undetermined = 0;
};

enum class OutputFormat { Csv, Json };

/// kind in {cq, dq, relcond, census, classify, classnum, arith, pisplit, fit}.
SurveyTable run_survey(const std::string& kind, const SurveyParams& params);
std::string to_csv(const SurveyTable& t);
std::string to_json(const SurveyTable& t);
/// Writes the table and, for CSV, a sidecar "<path>.meta.json".
void write_survey(const SurveyTable& t, const std::string& path, OutputFormat format);

std::string format_real(double v);
std::string format_rational(const mpq_class& v);
inline constexpr u64 kArithMaxX = 100000000;
inline constexpr u64 kRelcondVerifyMaxQ = 200;
/// Reads (z, pi_split) columns from a pisplit CSV.
std::vector<std::pair<double, double>> read_counting_csv(const std::string& path);

}  // namespace splitsurf::driver
