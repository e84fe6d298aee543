#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "heis/experiments.hpp"
#include "heis/hodge.hpp"
#include "heis/kohn.hpp"
#include "heis/residue.hpp"
#include "heis/rumin.hpp"
#include "heis/sandbox.hpp"

using namespace heis;

namespace {

constexpr double kThresholdSeconds = 120.0;
constexpr double kTotalSeconds = 600.0;
constexpr double kParametrixTol = 1e-8;
constexpr double kProjectionTol = 1e-8;
constexpr double kSzegoTol = 1e-10;
constexpr double kTraceTol = 1e-6;
constexpr double kLogTol = 0.05;
constexpr double kSandboxTol = 1e-9;
constexpr double kHodgeTol = 1e-10;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::vector<int> failed;

void line(int id, bool ok, const std::string& name, std::string detail) {
  while (!detail.empty() && (detail.back() == ' ' || detail.back() == ';')) detail.pop_back();
  std::printf("%s  %2d  %-30s %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) failed.push_back(id);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double check_value(const SuiteResult& s, const std::string& name) {
  for (const auto& c : s.checks)
    if (c.name == name) return c.value;
  return NAN;
}

void thresholds() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::string detail;
  for (int n : {1, 2}) {
    ExperimentConfig c;
    c.n = n;
    c.N = 24;
    auto s = run_thresholds(c);
    ok = ok && s.passed();
    detail += fmt("n=%d missed=%g spurious=%g floor=%g; ", n, check_value(s, "thresholds.missed"),
                  check_value(s, "thresholds.spurious_dips"), check_value(s, "thresholds.floor_violations"));
  }
  const double dt = seconds_since(t0);
  line(1, ok && dt <= kThresholdSeconds, "Folland-Stein thresholds", detail + fmt("%.1fs (limit %.0fs)", dt, kThresholdSeconds));
}

void parametrix() {
  int mismatch = 0;
  double worst = 0.0;
  for (int n : {1, 2}) {
    auto ctx = make_kohn_context(n, 8);
    for (int p = 0; p <= n; ++p)
      for (int q = 0; q <= n; ++q) {
        const auto w = parametrix_exists(ctx, p, q);
        mismatch += w.exists != y_condition(q, LeviSignature{n, 0}, n);
        if (w.exists) worst = std::max(worst, w.residual);
      }
  }
  line(2, mismatch == 0 && worst <= kParametrixTol, "Y(q) <=> parametrix",
       fmt("mismatches=%d max residual=%.2e (tol %.0e)", mismatch, worst, kParametrixTol));
}

void projections() {
  double worst = 0.0;
  for (int n : {1, 2}) {
    auto ctx = make_kohn_context(n, 8);
    for (int p = 0; p <= n; ++p)
      for (int q = 0; q <= n; ++q) {
        const auto sp = szego_projection_symbols(ctx, p, q);
        worst = std::max({worst, sp.identity_residual, sp.partial_inverse_residual, sp.orthogonality_residual});
      }
  }
  line(3, worst <= kProjectionTol, "projection identities", fmt("max residual=%.2e (tol %.0e)", worst, kProjectionTol));
}

void szego() {
  double idem = 0.0, flip = 0.0;
  int rank_bad = 0;
  for (int n : {1, 2}) {
    auto ctx = make_kohn_context(n, n == 1 ? 16 : 8);
    for (int k = 0; k <= 3; ++k) {
      const auto sk = szego_symbol_level(ctx, k);
      idem = std::max({idem, reliable_distance(star(sk, sk), sk), reliable_distance(adjoint_symbol(sk), sk)});
      rank_bad += std::lround(sk.reliable_block(1).trace().real()) != std::lround(binomial(k + n - 1, n - 1));
      rank_bad += sk.reliable_block(-1).norm() > kSzegoTol;
      const auto fc = sector_flip_check(ctx, k, 4.0, kSzegoTol);
      flip = std::max({flip, fc.flip_distance, fc.conformal_distance});
    }
  }
  line(4, idem <= kSzegoTol && rank_bad == 0 && flip <= kSzegoTol, "Szego symbols s_k",
       fmt("idempotency/adjoint=%.2e rank errors=%d flip/conformal=%.2e (tol %.0e)", idem, rank_bad, flip, kSzegoTol));
}

void rumin() {
  bool ok = true;
  std::string detail;
  for (int n : {1, 2}) {
    ExperimentConfig c;
    c.n = n;
    auto s = run_rumin(c);
    ok = ok && s.passed();
    detail += fmt("n=%d d^2=%.1e proj=%.1e weights=%.1e singular=%g; ", n, check_value(s, "rumin.square_zero"),
                  check_value(s, "rumin.projection_residual"), check_value(s, "rumin.laplacian_projection"),
                  check_value(s, "rumin.laplacian_singular_sectors"));
  }
  line(5, ok, "Rumin complex", detail);
}

void trace() {
  const auto conv = FrameConvention::section5();
  auto run = [&](int N) {
    const auto t = make_truncation(1, N);
    std::vector<std::pair<HomogeneousSymbol, HomogeneousSymbol>> pairs;
    for (int i = 0; i < 50; ++i) pairs.push_back(random_band_pair(t, conv, i % 3, 7919ull * 7 + i));
    return trace_property_test(pairs, kTraceTol);
  };
  const auto coarse = run(24), fine = run(48);
  auto absolute = [](const TraceTestReport& r) {
    double m = 0.0;
    for (const auto& t : r.trials) m = std::max(m, std::abs(t.res_pq - t.res_qp));
    return m;
  };
  const double abs24 = absolute(coarse), abs48 = absolute(fine);
  const auto t = make_truncation(1, 24);
  SymbolExpansion diff{{field_symbol(0, t, conv), field_symbol(1, t, conv), identity_symbol(t, conv)}};
  const auto q = folland_stein_power(0.1, 3, t, conv);
  SymbolExpansion low{{q, star(field_symbol(1, t, conv), q)}};
  const bool zeros = res(diff).value == cplx(0.0) && res(low).value == cplx(0.0);
  line(6, abs24 <= kTraceTol && abs48 < abs24 && zeros, "noncommutative trace",
       fmt("abs max dev N=24 %.2e, N=48 %.2e (tol %.0e); relative %.2e -> %.2e; exact zeros=%s", abs24, abs48,
           kTraceTol, coarse.max_deviation, fine.max_deviation, zeros ? "yes" : "no"));
}

void log_coefficient() {
  ExperimentConfig c;
  c.suites = {"residues"};
  c.trace_pairs = 1;
  c.trace_refinement = false;
  auto s = run_residues(c);
  const double err = check_value(s, "residues.log_coefficient");
  line(7, err <= kLogTol, "log-coefficient cross-check",
       fmt("max member error=%.3f (tol %.2f) gamma=%.5f", err, kLogTol, check_value(s, "residues.log_gamma")));
}

void sandbox() {
  ExperimentConfig c;
  auto s = run_sandbox(c);
  double hodge = 0.0;
  bool signs = true;
  for (int n : {1, 2}) {
    const auto r = hodge_tau_checks(n, 8);
    signs = signs && r.star_square_exact;
    hodge = std::max({hodge, r.unitarity, r.adjoint_formula, r.conjugation, r.tau_intertwining, r.conjugate_projection});
    for (const auto& f : r.flat_residues) hodge = std::max(hodge, std::abs(f.value));
  }
  const double ops = check_value(s, "sandbox.operator_identities");
  line(8, ops <= kSandboxTol && hodge <= kHodgeTol && signs, "finite-complex sandbox + Hodge",
       fmt("50 complexes max=%.2e (tol %.0e); Hodge/tau max=%.2e (tol %.0e); star^2 signs exact=%s", ops, kSandboxTol,
           hodge, kHodgeTol, signs ? "yes" : "no"));
}

void flat_szego() {
  auto ctx = make_kohn_context(1, 16);
  const auto S = szego_projection_symbols(ctx, 0, 0).S.block(0, 0);
  const auto r = res(SymbolExpansion{{S}});
  const double L = hirachi_bridge(r);
  line(9, r.value == cplx(0.0) && L == 0.0, "flat Szego residue",
       fmt("Res=%g L=%g (flat model only, not the curved statement)", std::abs(r.value), L));
}

void determinism() {
  const auto t0 = Clock::now();
  ExperimentConfig c;
  const std::string a = to_json(run_report(c)).dump();
  const double dt = seconds_since(t0);
  const std::string b = to_json(run_report(c)).dump();
  line(10, a == b && dt <= kTotalSeconds, "determinism and runtime",
       fmt("byte identical=%s; default report %.1fs (limit %.0fs)", a == b ? "yes" : "no", dt, kTotalSeconds));
}

}  // namespace

// Usage: acceptance [--expect-fail ID]...
// Exit 0 when the failing criteria are exactly the listed ones.
int main(int argc, char** argv) {
  std::vector<int> expected;
  for (int i = 1; i + 1 < argc; i += 2)
    if (std::string(argv[i]) == "--expect-fail") expected.push_back(std::atoi(argv[i + 1]));
  const std::vector<std::function<void()>> criteria = {thresholds, parametrix, projections, szego,      rumin,
                                                       trace,      log_coefficient, sandbox, flat_szego, determinism};
  for (const auto& c : criteria) c();
  std::printf("%zu of %zu criteria passed\n", criteria.size() - failed.size(), criteria.size());
  std::sort(expected.begin(), expected.end());
  if (!expected.empty()) {
    const bool match = failed == expected;
    std::printf("expected failures %s\n", match ? "match" : "DO NOT match");
    return match ? 0 : 1;
  }
  return failed.empty() ? 0 : 1;
}
