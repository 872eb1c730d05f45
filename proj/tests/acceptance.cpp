// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
//
//   acceptance [--verbose]

#include <chrono>
#include <cstring>
#include <functional>
#include <iostream>

#include "support/suites.hpp"

namespace {

using mahler::Rational;
using suite::Outcome;

bool verbose = false;

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); }
};

// Runs `body`, turning exceptions into a failed check.
Outcome guarded(const std::string& tag, const std::function<Outcome()>& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    Outcome o;
    o.cases = 1;
    o.check(false, tag + "exception: " + e.what());
    return o;
  }
}

bool report(int id, const std::string& name, const Outcome& o, double seconds, double limit = 0) {
  const bool in_time = limit <= 0 || seconds < limit;
  const bool pass = o.ok() && in_time;
  std::cout << (pass ? "PASS" : "FAIL") << "  criterion " << id << ": " << name << " (" << o.cases << " cases, "
            << o.compared << " coefficients compared, " << seconds << " s";
  if (limit > 0) std::cout << ", limit " << limit << " s";
  std::cout << ")\n";
  if (!pass || verbose) {
    if (!in_time) std::cout << "    time limit exceeded\n";
    for (const auto& n : o.notes) std::cout << "    " << n << "\n";
  }
  return pass;
}

constexpr std::uint64_t kOperatorSeed = 20240601;
constexpr std::uint64_t kGaugeSeed = 777;
constexpr std::uint64_t kOrder1Seed = 4242;
constexpr int kRandomOperators = 200;
constexpr int kGaugeOperators = 100;
constexpr int kOrder1Cases = 200;

struct WorkedSet {
  long p;
  Rational nu;
};
const WorkedSet kWorked[] = {{2, Rational(-2)}, {3, Rational(-3)}};

}  // namespace

int main(int argc, char** argv) {
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--verbose") == 0) verbose = true;
  std::cout.setf(std::ios::fixed);
  std::cout.precision(2);

  const Rational C(8), C2(16);
  const long D = 8, D2 = 16;
  bool all = true;

  // 1. Newton data of the worked example.
  {
    Timer t;
    Outcome o;
    for (const auto& w : kWorked)
      o.merge(guarded("", [&] { return suite::worked_example_newton(w.p, w.nu); }));
    all = report(1, "worked example: slopes, multiplicities, χ, s, ν", o, t.seconds(), 1.0) && all;
  }

  // 2. Closed forms of g_1, g_2, y_1, y_2.
  std::vector<mahler::FrobeniusOutput> worked_small;
  {
    Timer t;
    Outcome o;
    for (const auto& w : kWorked)
      o.merge(guarded("", [&] {
        worked_small.push_back(suite::worked_basis(w.p, w.nu, C, D));
        return suite::worked_example_closed_forms(w.p, w.nu, C, D, worked_small.back());
      }));
    all = report(2, "worked example: closed forms of g and y", o, t.seconds(), 2.0) && all;
  }

  // 3. Residual suite; the same operators feed criterion 6.
  const auto ops = suite::random_operators(kOperatorSeed, kRandomOperators, C * 2);
  std::vector<std::optional<mahler::FrobeniusOutput>> basis_small(ops.size());
  {
    Timer t;
    Outcome o;
    for (std::size_t i = 0; i < ops.size(); ++i) {
      const std::string tag = "operator " + std::to_string(i) + ": ";
      o.merge(guarded(tag, [&] {
        basis_small[i] = mahler::frobenius_basis(ops[i].L, {C, D, Rational(0)});
        return suite::basis_properties(ops[i], *basis_small[i], tag);
      }));
    }
    all = report(3, "random operators: full bases, zero residuals, independence", o, t.seconds(), 60.0) && all;
  }

  // 4. Gauge lemmas.
  {
    Timer t;
    Outcome o;
    const auto gops = suite::random_operators(kGaugeSeed, kGaugeOperators, C * 2);
    mahler::OperatorSampler rnd(kGaugeSeed + 1);
    for (std::size_t i = 0; i < gops.size(); ++i) {
      const std::string tag = "operator " + std::to_string(i) + ": ";
      o.merge(guarded(tag, [&] { return suite::gauge_lemmas(gops[i].L, rnd, tag); }));
    }
    all = report(4, "gauge lemmas: θ, e_c, units, right factor (φ-c)h^-1", o, t.seconds()) && all;
  }

  // 5. Order-1 solver against the recursion oracle.
  const auto cases = suite::order1_cases(kOrder1Seed, kOrder1Cases);
  std::vector<mahler::ParametricSeries> order1_small(cases.size());
  {
    Timer t;
    Outcome o;
    for (std::size_t i = 0; i < cases.size(); ++i) {
      const std::string tag = "case " + std::to_string(i) + ": ";
      o.merge(guarded(tag, [&] {
        order1_small[i] = suite::solve_case(cases[i], C, D);
        return suite::order1_properties(cases[i], order1_small[i], C, D, tag);
      }));
    }
    all = report(5, "order-1 solver vs recursion oracle, pole bounds", o, t.seconds()) && all;
  }

  // 6. Factorization on the worked example and the random operators.
  {
    Timer t;
    Outcome o;
    for (const auto& w : kWorked) {
      const std::string tag = "worked p=" + std::to_string(w.p) + ": ";
      o.merge(guarded(tag, [&] {
        mahler::Operator L = suite::worked_example(w.p, w.nu, C);
        auto out = mahler::frobenius_basis(L, {C, D, Rational(0)});
        return suite::factorization_properties(L, out.factorization, out.newton,
                                               suite::factor_check_ceiling(out, w.p, C), nullptr, tag);
      }));
    }
    for (std::size_t i = 0; i < ops.size(); ++i) {
      const std::string tag = "operator " + std::to_string(i) + ": ";
      if (!basis_small[i]) {
        Outcome f;
        f.cases = 1;
        f.check(false, tag + "no basis computed");
        o.merge(f);
        continue;
      }
      const auto& out = *basis_small[i];
      o.merge(guarded(tag, [&] {
        return suite::factorization_properties(ops[i].L, out.factorization, out.newton,
                                               suite::factor_check_ceiling(out, ops[i].L.radix(), C), &ops[i], tag);
      }));
    }
    all = report(6, "factorization: val, cld product, ν, reconstruction, recovery", o, t.seconds()) && all;
  }

  // 7. Doubled ceiling and depth leave certified coefficients alone.
  {
    Timer t;
    Outcome o;
    for (std::size_t k = 0; k < std::size(kWorked); ++k) {
      const auto& w = kWorked[k];
      const std::string tag = "worked p=" + std::to_string(w.p) + ": ";
      o.merge(guarded(tag, [&] {
        auto big = suite::worked_basis(w.p, w.nu, C2, D2);
        Outcome r = suite::worked_example_closed_forms(w.p, w.nu, C2, D2, big);
        if (k < worked_small.size()) r.merge(suite::basis_refines(worked_small[k], big, tag));
        return r;
      }));
    }
    const auto ops2 = suite::random_operators(kOperatorSeed, kRandomOperators, C2 * 2);
    for (std::size_t i = 0; i < ops2.size(); ++i) {
      if (!basis_small[i]) continue;
      const std::string tag = "operator " + std::to_string(i) + ": ";
      o.merge(guarded(tag, [&] {
        auto big = mahler::frobenius_basis(ops2[i].L, {C2, D2, Rational(0)});
        return suite::basis_refines(*basis_small[i], big, tag);
      }));
    }
    for (std::size_t i = 0; i < cases.size(); ++i) {
      const std::string tag = "case " + std::to_string(i) + ": ";
      o.merge(guarded(tag, [&] {
        Outcome r;
        r.cases = 1;
        std::string why;
        auto big = suite::solve_case(cases[i], C2, D2);
        r.check(suite::refines(order1_small[i], big, &why, &r.compared), tag + why);
        return r;
      }));
    }
    all = report(7, "refinement at doubled ceiling and depth", o, t.seconds()) && all;
  }

  std::cout << (all ? "all criteria passed" : "some criteria FAILED") << "\n";
  return all ? 0 : 1;
}
