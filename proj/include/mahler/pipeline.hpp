#pragma once

// End-to-end driver: text → operator → Newton data → factorization →
// basis → verification, rendered as JSON and as plain text.

#include <sstream>

#include "mahler/parser.hpp"
#include "mahler/report.hpp"

namespace mahler {

enum ExitCode : int { kExitOk = 0, kExitVerifyFailed = 1, kExitInputError = 2, kExitPartial = 3 };

struct PipelineOptions {
  std::optional<Rational> ceiling;  // overrides the input file
  std::optional<long> depth;
  bool verify = false;              // or-ed with the file's `verify`
  Rational epsilon{1, 8};           // largest acceptable residual gap
  bool newton_only = false;
};

struct PipelineResult {
  nlohmann::json report;
  std::string text;
  int exit_code = kExitOk;
};

namespace detail {

// Precision used to elaborate the coefficients. Right division and the
// gauges consume headroom proportional to the valuation spread of L and
// to the twist ν/(p-1), so the input is expanded past the requested
// ceiling by that much (plus a margin of 2).
inline Rational working_ceiling(const EquationSpec& spec, const Rational& ceiling) {
  Operator probe = elaborate(spec, ceiling + 2);
  std::optional<Rational> lo, hi;
  for (const auto& a : probe.coeffs()) {
    if (!a.has_certified_leading()) continue;
    Rational v = val(a);
    if (!lo || v < *lo) lo = v;
    if (!hi || v > *hi) hi = v;
  }
  Rational slack = *hi - *lo + 2;
  NewtonData nd = newton_polygon(probe);
  for (const auto& nu : twist_exponents(spec.p, nd.slopes))
    slack = std::max(slack, *hi - *lo + 2 + nu / Rational(spec.p - 1));
  return ceiling + slack;
}

inline nlohmann::json diagnostic(const Error& e) {
  nlohmann::json d{{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}};
  if (auto* pe = dynamic_cast<const ParseError*>(&e)) {
    d["line"] = pe->line();
    d["column"] = pe->column();
  }
  return d;
}

inline std::string yes(bool b) { return b ? "ok" : "FAILED"; }

}  // namespace detail

inline PipelineResult run_pipeline(const EquationSpec& spec, const PipelineOptions& opt = {}) {
  namespace js = mahler::json;
  PipelineResult res;
  auto& R = res.report;
  std::ostringstream out;

  const Rational C = opt.ceiling.value_or(spec.ceiling.value_or(Rational(8)));
  const long depth = opt.depth.value_or(spec.depth.value_or(8));
  const bool verify = opt.verify || spec.verify.value_or(false);

  nlohmann::json coeffs = nlohmann::json::array();
  for (const auto& e : spec.coeffs) coeffs.push_back(print(e));
  R["input"] = {{"p", spec.p}, {"coeffs", coeffs}, {"precision", js::encode(C)}, {"depth", depth}, {"verify", verify}};
  R["diagnostics"] = nlohmann::json::array();

  Operator L(spec.p, {});
  try {
    const Rational W = detail::working_ceiling(spec, C);
    L = elaborate(spec, W);
    R["input"]["working_precision"] = js::encode(W);
  } catch (const Error& e) {
    R["diagnostics"].push_back(detail::diagnostic(e));
    R["status"] = "input_error";
    res.exit_code = kExitInputError;
    res.text = std::string("error: ") + e.what() + "\n";
    return res;
  }

  out << "operator (p = " << spec.p << ", order " << L.order() << ")\n";
  for (std::size_t i = 0; i < spec.coeffs.size(); ++i) out << "  a[" << i << "] = " << print(spec.coeffs[i]) << "\n";

  try {
    FrobeniusOutput F;
    if (opt.newton_only) {
      F.newton = analyze(L);
      F.partial = !F.newton.all_rational();
      F.plan = frobenius_plan(F.newton, L);
    } else {
      F = frobenius_basis(L, {C, depth, Rational(0)});
    }

    nlohmann::json newton = js::encode(F.newton);
    newton["plan"] = js::encode(F.plan);
    R["newton"] = newton;

    out << "\nNewton polygon\n  vertices:";
    for (const auto& v : F.newton.vertices) out << " (" << v.x << ", " << v.y << ")";
    out << "\n";
    for (std::size_t j = 0; j < F.newton.slopes.size(); ++j) {
      const auto& s = F.newton.slopes[j];
      out << "  slope " << j + 1 << ": mu = " << s.mu << ", r = " << s.r << ", nu = " << F.plan.nu[j]
          << ", chi = " << F.newton.charpolys[j].to_string() << "\n";
      for (const auto& e : F.newton.exponents[j]) out << "    exponent c = " << e.c << " (multiplicity " << e.m << ")\n";
      if (F.newton.residuals[j].degree() > 0)
        out << "    non-rational part: " << F.newton.residuals[j].to_string() << "\n";
    }
    if (F.partial) {
      R["diagnostics"].push_back({{"kind", "warning"},
                                  {"message", "some exponents are not rational; the basis is partial"}});
      out << "\nwarning: some exponents are not rational; the basis is partial\n";
    }
    if (opt.newton_only) {
      R["status"] = F.partial ? "partial" : "ok";
      res.exit_code = F.partial ? kExitPartial : kExitOk;
      res.text = out.str();
      return res;
    }

    nlohmann::json fact = js::encode(F.factorization);
    out << "\nfactorization\n";
    if (F.factorization.complete) out << "  a = " << to_string(F.factorization.a, 6) << "\n";
    for (std::size_t i = 0; i < F.factorization.layers.size(); ++i)
      for (const auto& f : F.factorization.layers[i])
        out << "  layer " << i + 1 << ": (z^(" << f.nu << ") phi - " << f.c << ") h^-1, h = " << to_string(f.h, 6) << "\n";

    nlohmann::json gs = nlohmann::json::array(), sols = nlohmann::json::array();
    out << "\nsolutions\n";
    for (const auto& b : F.blocks) {
      gs.push_back({{"c", js::encode(b.entry.c)},
                    {"j", b.entry.j + 1},
                    {"s", b.entry.s},
                    {"m", b.entry.m},
                    {"g", js::encode(b.g)},
                    {"checks", js::encode(b.checks)}});
      out << "  g[c=" << b.entry.c << ", j=" << b.entry.j + 1 << "] = " << to_string(b.g, 8) << "\n";
      for (std::size_t m = 0; m < b.solutions.size(); ++m) {
        nlohmann::json y = js::encode(b.solutions[m]);
        y["j"] = b.entry.j + 1;
        y["m"] = m;
        sols.push_back(y);
        out << "  y[c=" << b.entry.c << ", j=" << b.entry.j + 1 << ", m=" << m << "] =";
        for (const auto& [k, f] : b.solutions[m].parts)
          out << "\n      (" << to_string(f, 8) << ") * l[" << k.first << "," << k.second << "]";
        out << "\n";
      }
    }
    R["factorization"] = fact;
    R["g"] = gs;
    R["solutions"] = sols;

    bool pass = true;
    if (verify) {
      const Rational fc = C + [&] {
        Rational m(0);
        for (const auto& nu : F.plan.nu) m = std::max(m, nu / Rational(spec.p - 1));
        return m;
      }();
      FactorizationCheck fchk = check_factorization(L, F.factorization, F.plan, fc);
      nlohmann::json residuals = nlohmann::json::array();
      bool res_ok = true, g_ok = true;
      for (const auto& b : F.blocks) {
        g_ok = g_ok && b.checks.ok();
        for (const auto& y : b.solutions) {
          ResidualReport rr = residual_report(L, y, opt.epsilon);
          res_ok = res_ok && rr.zero && rr.gaps_ok;
          residuals.push_back(js::encode(rr));
        }
      }
      IndependenceReport ind = verify_independence(F);
      pass = fchk.ok() && g_ok && res_ok && ind.ok;
      R["verification"] = {{"factorization", js::encode(fchk)},
                           {"g", g_ok},
                           {"residuals", residuals},
                           {"independence", js::encode(ind)},
                           {"epsilon", js::encode(opt.epsilon)},
                           {"pass", pass}};
      out << "\nverification\n  factorization: " << detail::yes(fchk.ok()) << "\n  g equations: " << detail::yes(g_ok)
          << "\n  residuals: " << detail::yes(res_ok) << "\n  independence: " << detail::yes(ind.ok) << "\n";
      for (const auto& f : ind.failures) out << "    " << f << "\n";
      if (!pass)
        R["diagnostics"].push_back({{"kind", "VerificationFailed"}, {"message", "one or more verification checks failed"}});
    }
    if (!pass) {
      R["status"] = "verification_failed";
      res.exit_code = kExitVerifyFailed;
    } else if (F.partial) {
      R["status"] = "partial";
      res.exit_code = kExitPartial;
    } else {
      R["status"] = "ok";
      res.exit_code = kExitOk;
    }
    out << "\nstatus: " << R["status"].get<std::string>() << " (" << F.solution_count() << " of " << L.order()
        << " solutions)\n";
  } catch (const Error& e) {
    R["diagnostics"].push_back(detail::diagnostic(e));
    R["status"] = "error";
    res.exit_code = kExitVerifyFailed;
    out << "error: " << e.what() << "\n";
  }
  res.text = out.str();
  return res;
}

inline PipelineResult run_pipeline(std::string_view text, const PipelineOptions& opt = {}) {
  try {
    return run_pipeline(parse_spec(text), opt);
  } catch (const Error& e) {
    PipelineResult res;
    res.report = {{"status", "input_error"}, {"diagnostics", nlohmann::json::array({detail::diagnostic(e)})}};
    res.exit_code = kExitInputError;
    res.text = std::string("error: ") + e.what() + "\n";
    return res;
  }
}

}  // namespace mahler
