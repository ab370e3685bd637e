#include <cstdio>
#include <iostream>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "splitsurf/driver.hpp"
#include "splitsurf/error.hpp"

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitUndetermined = 3;

}  // namespace

int main(int argc, char** argv) {
  using namespace splitsurf::driver;
  CLI::App app{"Split Jacobians of genus-2 curves over finite fields"};
  app.require_subcommand(1);
  app.fallthrough();

  SurveyParams p;
  std::string out;
  std::string format = "csv";
  bool strict = false;
  app.add_option("--out", out, "Output file (default: stdout)");
  app.add_option("--seed", p.seed, "Random seed");
  app.add_option("--threads", p.threads, "OpenMP threads (0 = default)")->check(CLI::NonNegativeNumber);
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_flag("--strict", strict, "Exit with status 3 when some prime stays undetermined");

  auto* cq = app.add_subcommand("cq", "Weighted proportion of split Jacobians c_q");
  auto* dq = app.add_subcommand("dq", "Weighted proportion of geometrically split Jacobians d_q");
  for (auto* sc : {cq, dq}) {
    sc->add_option("--q", p.q, "Prime q >= 5")->required();
    auto* ex = sc->add_flag("--exact", p.exact, "Exact census instead of Monte Carlo");
    sc->add_option("--samples", p.samples, "Monte Carlo sample count")->excludes(ex);
    sc->add_option("--max-k", p.max_k, "Geometric-split sweep bound");
  }
  auto* rel = app.add_subcommand("relcond-sum", "Sums of relative conductors over elliptic curves");
  auto* rq = rel->add_option("--q", p.q, "Single prime power q");
  rel->add_option("--q-min", p.q_min, "Smallest q of the range")->excludes(rq);
  rel->add_option("--q-max", p.q_max, "Largest q of the range")->excludes(rq);
  rel->add_flag("--verify", p.verify, "Add the enumeration column for q <= 200");
  auto* census = app.add_subcommand("census", "Exact weighted census by split class");
  census->add_option("--q", p.q, "Prime q >= 5")->required();
  census->add_option("--max-k", p.max_k, "Geometric-split sweep bound");
  auto* classify = app.add_subcommand("classify", "Classify a Weil quartic T^4 - a1 T^3 + a2 T^2 - q a1 T + q^2");
  classify->add_option("--q", p.q)->required();
  classify->add_option("--a1", p.a1)->required();
  classify->add_option("--a2", p.a2)->required();
  classify->add_flag("--geometric", p.geometric, "Also sweep base extensions for a geometric splitting");
  classify->add_option("--max-k", p.max_k, "Geometric-split sweep bound");
  auto* classnum = app.add_subcommand("classnum", "Class numbers of negative discriminants");
  i64 delta = 0;
  std::vector<i64> range;
  auto* dopt = classnum->add_option("--delta", delta, "A single discriminant");
  classnum->add_option("--range", range, "Discriminants A <= delta <= B")->expected(2)->excludes(dopt);
  classnum->add_flag("--forms", p.verify, "Cross-check by counting reduced forms");
  auto* arith = app.add_subcommand("arith-sums", "Partial sums of the Dedekind psi function at powers of ten");
  arith->add_option("--max", p.x_max, "Largest x (at most 10^8)")->required();
  auto* pis = app.add_subcommand("pisplit", "Count primes with split reduction for y^2 = f(x) over Q");
  pis->add_option("--curve", p.curve, "Integer polynomial f of degree 5 or 6");
  pis->add_option("--zmax", p.zmax, "Largest prime considered");
  pis->add_option("--grid", p.grid, "Number of log-spaced sample points")->check(CLI::PositiveNumber);
  auto* fit = app.add_subcommand("fit", "Fit sqrt(z)/log(z)^b models to a pisplit CSV");
  fit->add_option("input", p.input, "CSV with z and pi_split columns")->required();
  fit->add_option("--model", p.fit_model, "c, ab or both")->check(CLI::IsMember({"c", "ab", "both"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInvalid;
  }

  for (int i = 0; i < argc; ++i) p.command_line += (i ? " " : "") + std::string(argv[i]);
  const std::string name = app.get_subcommands().front()->get_name();
  const std::string kind = name == "relcond-sum" ? "relcond" : name == "arith-sums" ? "arith" : name;
  if (name == "classnum") {
    if (range.size() == 2) {
      p.d_from = range[0];
      p.d_to = range[1];
    } else if (classnum->count("--delta")) {
      p.d_from = p.d_to = delta;
    } else {
      std::cerr << "invalid parameters: classnum needs --delta or --range\n";
      return kExitInvalid;
    }
  }
  if (name == "relcond-sum" && !rel->count("--q") && !(rel->count("--q-min") && rel->count("--q-max"))) {
    std::cerr << "invalid parameters: relcond-sum needs --q or both --q-min and --q-max\n";
    return kExitInvalid;
  }
  // classify reports JSON unless a format was requested explicitly.
  if (name == "classify" && !app.count("--format")) format = "json";
  const OutputFormat fmt = format == "json" ? OutputFormat::Json : OutputFormat::Csv;

  try {
    const SurveyTable t = run_survey(kind, p);
    if (out.empty()) {
      std::cout << (fmt == OutputFormat::Json ? to_json(t) : to_csv(t));
    } else {
      write_survey(t, out, fmt);
    }
    if (t.undetermined > 0) {
      std::cerr << t.undetermined << " prime(s) left undetermined\n";
      if (strict) return kExitUndetermined;
    }
  } catch (const splitsurf::Undetermined& e) {
    std::cerr << "undetermined: " << e.what() << '\n';
    return kExitUndetermined;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid parameters: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::out_of_range& e) {
    std::cerr << "invalid parameters: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
