// mahler: command-line front end.
//
//   mahler solve  <file> [--precision q] [--depth n] [--verify] [--json] [--epsilon q]
//   mahler newton <file> [--json]
//   mahler selftest [--seed n] [--count n] [--precision q] [--depth n]

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "mahler/pipeline.hpp"
#include "mahler/random.hpp"

namespace {

std::string read_input(const std::string& path) {
  std::ostringstream ss;
  if (path == "-") {
    ss << std::cin.rdbuf();
  } else {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    ss << in.rdbuf();
  }
  return ss.str();
}

mahler::Rational parse_rational_flag(const std::string& s, const char* name) {
  try {
    return mahler::Rational::parse(s);
  } catch (const std::exception&) {
    throw CLI::ValidationError(name, "expected a rational such as 8 or 17/2");
  }
}

int emit(const mahler::PipelineResult& r, bool as_json) {
  if (as_json)
    std::cout << r.report.dump(2) << "\n";
  else
    std::cout << r.text;
  return r.exit_code;
}

// Random factored operators through the full pipeline; 0 iff all verify.
int selftest(std::uint64_t seed, int count, const mahler::Rational& ceiling, long depth) {
  using namespace mahler;
  OperatorSampler sampler(seed);
  int failed = 0;
  for (int i = 0; i < count; ++i) {
    RandomOperatorConfig cfg;
    cfg.radix = i % 2 ? 3 : 2;
    cfg.ceiling = ceiling * 2;
    RandomOperator R = sampler.sample(cfg);
    std::string why;
    try {
      FrobeniusOutput out = frobenius_basis(R.L, {ceiling, depth, Rational(0)});
      if (out.partial || out.solution_count() != static_cast<std::size_t>(R.L.order())) why = "incomplete basis";
      if (why.empty() && !check_factorization(R.L, out.factorization, out.plan, ceiling).ok()) why = "factorization check";
      for (const auto& b : out.blocks) {
        if (why.empty() && !b.checks.ok()) why = "g check";
        for (const auto& y : b.solutions) {
          ResidualReport rr = residual_report(R.L, y, Rational(1, 8));
          if (why.empty() && !(rr.zero && rr.gaps_ok)) why = "residual";
        }
      }
      if (why.empty() && !verify_independence(out).ok) why = "independence";
    } catch (const Error& e) {
      why = e.what();
    }
    std::cout << "operator " << i + 1 << " (p = " << R.L.radix() << ", order " << R.L.order()
              << "): " << (why.empty() ? "ok" : "FAILED: " + why) << "\n";
    if (!why.empty()) ++failed;
  }
  std::cout << count - failed << "/" << count << " verified\n";
  return failed ? mahler::kExitVerifyFailed : mahler::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Solve linear Mahler equations over Hahn series"};
  app.require_subcommand(1);

  std::string file;
  std::string precision = "8", epsilon = "1/8";
  long depth = 8;
  bool verify = false, as_json = false;
  bool precision_set = false, depth_set = false;

  auto* solve = app.add_subcommand("solve", "Newton polygon, factorization and solution basis");
  solve->add_option("file", file, "equation file ('-' for stdin)")->required();
  auto* p_opt = solve->add_option("--precision", precision, "exponent ceiling (rational, default 8)");
  auto* d_opt = solve->add_option("--depth", depth, "geometric-sum depth (default 8)")->check(CLI::NonNegativeNumber);
  solve->add_flag("--verify", verify, "check factorization, residuals and independence");
  solve->add_flag("--json", as_json, "machine-readable report");
  solve->add_option("--epsilon", epsilon, "largest acceptable uncertified residual gap (default 1/8)");

  auto* newton = app.add_subcommand("newton", "Newton polygon, characteristic polynomials and plan only");
  newton->add_option("file", file, "equation file ('-' for stdin)")->required();
  newton->add_flag("--json", as_json, "machine-readable report");

  std::uint64_t seed = 1;
  int count = 20;
  auto* self = app.add_subcommand("selftest", "run the pipeline on random factored operators");
  self->add_option("--seed", seed, "random seed");
  self->add_option("--count", count, "number of operators")->check(CLI::PositiveNumber);
  self->add_option("--precision", precision, "exponent ceiling (rational, default 8)");
  self->add_option("--depth", depth, "geometric-sum depth (default 8)")->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
    precision_set = p_opt->count() > 0;
    depth_set = d_opt->count() > 0;
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : mahler::kExitInputError;
  }

  try {
    if (*self) return selftest(seed, count, parse_rational_flag(precision, "--precision"), depth);

    mahler::PipelineOptions opt;
    if (precision_set) opt.ceiling = parse_rational_flag(precision, "--precision");
    if (depth_set) opt.depth = depth;
    opt.verify = verify;
    opt.epsilon = parse_rational_flag(epsilon, "--epsilon");
    opt.newton_only = static_cast<bool>(*newton);
    return emit(mahler::run_pipeline(read_input(file), opt), as_json);
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << "\n";
    return mahler::kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return mahler::kExitInputError;
  }
}
