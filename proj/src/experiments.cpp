#include "heis/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "heis/hodge.hpp"
#include "heis/kohn.hpp"
#include "heis/residue.hpp"
#include "heis/rumin.hpp"
#include "heis/sandbox.hpp"

namespace heis {

namespace {

bool compare(double value, double tol, const std::string& rel) {
  if (rel == "<=") return value <= tol;
  if (rel == ">=") return value >= tol;
  return value == tol;
}

int svd_rank(const Eigen::MatrixXd& M) {
  if (M.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  int r = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i) r += svd.singularValues()(i) > 1e-10;
  return r;
}

std::vector<std::pair<int, int>> bidegrees(const ExperimentConfig& cfg) {
  if (!cfg.pq.empty()) return cfg.pq;
  std::vector<std::pair<int, int>> out;
  for (int p = 0; p <= cfg.n; ++p)
    for (int q = 0; q <= cfg.n; ++q) out.emplace_back(p, q);
  return out;
}

void kohn_checks(const ExperimentConfig& cfg, SuiteResult& s) {
  const auto conv = FrameConvention::from_name(cfg.convention);
  auto ctx = make_kohn_context(cfg.n, cfg.kohn_truncation(), conv);
  Table t{"kohn", {"p", "q", "y_condition", "parametrix", "parametrix_residual", "identity_residual",
                   "partial_inverse_residual", "orthogonality_residual", "rank_plus", "rank_minus"}, {}};
  int mismatch = 0;
  double par = 0.0, ident = 0.0, partial = 0.0, orth = 0.0;
  for (const auto& [p, q] : bidegrees(cfg)) {
    const bool y = y_condition(q, model_signature(cfg.n), cfg.n);
    const auto w = parametrix_exists(ctx, p, q);
    mismatch += w.exists != y;
    if (w.exists) par = std::max(par, w.residual);
    const auto sp = szego_projection_symbols(ctx, p, q);
    ident = std::max(ident, sp.identity_residual);
    partial = std::max(partial, sp.partial_inverse_residual);
    orth = std::max(orth, sp.orthogonality_residual);
    t.rows.push_back({p, q, y, w.exists, w.exists ? w.residual : 0.0, sp.identity_residual,
                      sp.partial_inverse_residual, sp.orthogonality_residual, sp.rank_plus, sp.rank_minus});
  }
  s.add("kohn.parametrix_vs_y_condition", mismatch, 0, "==");
  s.add("kohn.parametrix_residual", par, cfg.scaled(cfg.tol.parametrix));
  s.add("kohn.projection_identity", ident, cfg.scaled(cfg.tol.projection));
  s.add("kohn.partial_inverse", partial, cfg.scaled(cfg.tol.projection));
  s.add("kohn.orthogonality", orth, cfg.scaled(cfg.tol.projection));
  s.tables.push_back(std::move(t));
}

void szego_checks(const ExperimentConfig& cfg, SuiteResult& s) {
  const auto conv = FrameConvention::from_name(cfg.convention);
  const int N = std::max(cfg.kohn_truncation(), cfg.n == 1 ? 16 : 8);
  auto ctx = make_kohn_context(cfg.n, N, conv);
  Table t{"szego", {"k", "rank", "expected_rank", "idempotency", "self_adjointness", "flip", "conformal"}, {}};
  double idem = 0.0, sa = 0.0, flip = 0.0, conf = 0.0;
  int rank_mismatch = 0;
  for (int k : cfg.levels) {
    const auto sk = szego_symbol_level(ctx, k);
    const double i = reliable_distance(star(sk, sk), sk);
    const double a = reliable_distance(adjoint_symbol(sk), sk);
    const long rank = std::lround(sk.reliable_block(1).trace().real());
    const long other = std::lround(sk.reliable_block(-1).trace().real());
    const long expected = std::lround(binomial(k + cfg.n - 1, cfg.n - 1));
    rank_mismatch += (rank != expected) + (other != 0);
    const auto fc = sector_flip_check(ctx, k, 4.0, cfg.scaled(cfg.tol.szego));
    idem = std::max(idem, i);
    sa = std::max(sa, a);
    flip = std::max(flip, fc.flip_distance);
    conf = std::max(conf, fc.conformal_distance);
    t.rows.push_back({k, rank, expected, i, a, fc.flip_distance, fc.conformal_distance});
  }
  const double tol = cfg.scaled(cfg.tol.szego);
  s.add("szego.idempotency", idem, tol);
  s.add("szego.self_adjointness", sa, tol);
  s.add("szego.rank_mismatch", rank_mismatch, 0, "==");
  s.add("szego.sector_flip", flip, tol);
  s.add("szego.conformal", conf, tol);
  s.tables.push_back(std::move(t));
}

void rumin_checks(const ExperimentConfig& cfg, SuiteResult& s) {
  const auto conv = FrameConvention::from_name(cfg.convention);
  const int n = cfg.n;
  auto ctx = make_rumin_context(n, cfg.rumin_truncation(), conv);

  double square = 0.0;
  for (int k = 0; k + 1 < 2 * n; ++k)
    if (k != n - 1) square = std::max(square, reliable_norm(compose(d_R(ctx, k + 1), d_R(ctx, k))));
  const auto D = D_R_middle(ctx);
  square = std::max(square, reliable_norm(compose(D, d_R(ctx, n - 1))));
  square = std::max(square, reliable_norm(compose(d_R(ctx, n), D)));
  s.add("rumin.square_zero", square, cfg.scaled(cfg.tol.rumin_square));

  int eps_mismatch = 0;
  for (int k = 0; k + 2 <= 2 * n; ++k) {
    const long expected = std::lround(std::min(binomial(2 * n, k), binomial(2 * n, k + 2)));
    eps_mismatch += svd_rank(real_eps(n, k, conv)) != expected;
  }
  s.add("rumin.eps_rank_mismatch", eps_mismatch, 0, "==");

  Table lt{"rumin_laplacians", {"k", "j", "order", "self_adjointness", "min_eigenvalue", "invertible"}, {}};
  int order_mismatch = 0, singular = 0;
  double selfadj = 0.0, min_eig = 1e300;
  std::vector<FormSymbol> laps;
  for (int k = 0; k <= 2 * n; ++k) {
    for (int j : k == n ? std::vector<int>{1, 2} : std::vector<int>{0}) {
      auto L = contact_laplacian(ctx, k, j);
      const int expected = k == n ? 4 : 2;
      order_mismatch += L.order() != expected;
      const double sa = reliable_distance(L, L.adjoint());
      const double me = min_eigenvalue(L);
      const bool inv = std::holds_alternative<FormSymbol>(invert(L));
      singular += !inv;
      selfadj = std::max(selfadj, sa);
      min_eig = std::min(min_eig, me);
      lt.rows.push_back({k, j, L.order(), sa, me, inv});
    }
  }
  s.add("rumin.laplacian_order_mismatch", order_mismatch, 0, "==");
  s.add("rumin.laplacian_self_adjointness", selfadj, cfg.scaled(cfg.tol.rumin_square));
  s.add("rumin.laplacian_singular_sectors", singular, 0, "==");
  s.add("rumin.laplacian_min_eigenvalue", min_eig, 0.0, ">=", false);

  // a_{k+1} d Δ_k = b_k Δ_{k+1} d away from the middle degrees
  const double fault = cfg.corrupt == "laplacian_weight" ? 1.25 : 1.0;
  auto lap = [&](int k) {
    const auto [a, b] = contact_laplacian_weights(n, k);
    return weighted_contact_laplacian(ctx, k, fault * a, b);
  };
  double inter = 0.0;
  for (int k = 0; k + 1 <= 2 * n; ++k) {
    if (k == n - 1 || k == n) continue;
    const double a = contact_laplacian_weights(n, k + 1).first;
    const double b = contact_laplacian_weights(n, k).second;
    auto d = d_R(ctx, k);
    auto lhs = cplx(a) * compose(d, lap(k));
    auto rhs = cplx(b) * compose(lap(k + 1), d);
    inter = std::max(inter, reliable_distance(lhs, rhs) / std::max(1.0, reliable_norm(lhs)));
  }
  s.add("rumin.laplacian_intertwining", inter, cfg.scaled(cfg.tol.rumin_projection),
        "<=", true, n == 1 ? "no off-middle pair for n = 1" : "");

  // a_{k+1} d* Δ_{k+1}^+ d against d* (d d*)^+ d
  double weighted = 0.0;
  for (int k = 0; k < 2 * n; ++k) {
    if (k == n - 1) continue;
    const double a = contact_laplacian_weights(n, k + 1).first;
    auto d = d_R(ctx, k);
    auto lhs = cplx(a) * compose(d.adjoint(), compose(spectral_pseudo_inverse(lap(k + 1)), d));
    auto rhs = compose(d.adjoint(), compose(spectral_pseudo_inverse(compose(d, d.adjoint())), d));
    weighted = std::max(weighted, reliable_distance(lhs, rhs));
  }
  s.add("rumin.laplacian_projection", weighted, cfg.scaled(cfg.tol.rumin_projection));
  s.tables.push_back(std::move(lt));

  const auto pr = rumin_projections(ctx);
  Table pt{"rumin_projections", {"name", "k", "residual", "idempotence", "self_adjointness", "reciprocal_residual"}, {}};
  double proj = 0.0, reciprocal = -1.0;
  auto row = [&](const RuminProjection& p) {
    proj = std::max({proj, p.residual, p.idempotence, p.self_adjointness});
    reciprocal = std::max(reciprocal, p.reciprocal_residual);
    pt.rows.push_back({p.name, p.k, p.residual, p.idempotence, p.self_adjointness, p.reciprocal_residual});
  };
  for (const auto& p : pr.d_projections) row(p);
  row(pr.D_projection);
  s.add("rumin.projection_residual", proj, cfg.scaled(cfg.tol.rumin_projection));
  s.add("rumin.reciprocal_coefficient_residual", reciprocal, cfg.scaled(cfg.tol.rumin_projection), "<=", false,
        "reciprocal coefficient variant; negative when undefined");
  s.tables.push_back(std::move(pt));
}

void hodge_checks(const ExperimentConfig& cfg, SuiteResult& s) {
  const auto conv = FrameConvention::from_name(cfg.convention);
  const auto rep = hodge_tau_checks(cfg.n, cfg.hodge_N, conv);
  const double tol = cfg.scaled(cfg.tol.hodge);
  s.add("hodge.star_square_sign", rep.star_square_exact ? 1 : 0, 1, "==");
  s.add("hodge.unitarity", rep.unitarity, tol);
  s.add("hodge.adjoint_formula", rep.adjoint_formula, tol);
  s.add("hodge.conjugation", rep.conjugation, tol);
  s.add("hodge.tau_intertwining", rep.tau_intertwining, tol);
  s.add("hodge.conjugate_projection", rep.conjugate_projection, tol);
  double flat = 0.0;
  for (const auto& r : rep.flat_residues) flat = std::max(flat, std::abs(r.value));
  s.add("hodge.flat_residues", flat, 0.0, "==");
}

}  // namespace

CheckResult& SuiteResult::add(std::string name, double value, double tolerance, std::string relation, bool gating,
                              std::string note) {
  CheckResult c{std::move(name), value, tolerance, relation, compare(value, tolerance, relation), gating,
                std::move(note)};
  checks.push_back(std::move(c));
  return checks.back();
}

bool SuiteResult::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return !c.gating || c.passed; });
}

bool Report::passed() const {
  return std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.passed(); });
}

std::vector<std::string> Report::failures() const {
  std::vector<std::string> out;
  for (const auto& s : suites)
    for (const auto& c : s.checks)
      if (c.gating && !c.passed) out.push_back(s.name + "/" + c.name);
  return out;
}

Json to_json(const CheckResult& c) {
  Json j{{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance}, {"relation", c.relation},
         {"passed", c.passed}, {"gating", c.gating}};
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

Json to_json(const Table& t) { return Json{{"name", t.name}, {"columns", t.columns}, {"rows", t.rows}}; }

Json to_json(const SuiteResult& s) {
  Json checks = Json::array(), tables = Json::array();
  for (const auto& c : s.checks) checks.push_back(to_json(c));
  for (const auto& t : s.tables) tables.push_back(to_json(t));
  return Json{{"name", s.name}, {"passed", s.passed()}, {"checks", checks}, {"tables", tables}};
}

Json to_json(const Report& r) {
  Json suites = Json::array();
  for (const auto& s : r.suites) suites.push_back(to_json(s));
  return Json{{"schema", "heislab-report/1"}, {"config", to_json(r.config)}, {"suites", suites},
              {"failures", r.failures()}, {"passed", r.passed()}};
}

std::string to_csv(const Table& t) {
  std::ostringstream os;
  for (size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << "\n";
  for (const auto& row : t.rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) os << ",";
      const auto& v = row[i];
      os << (v.is_string() ? v.get<std::string>() : v.dump());
    }
    os << "\n";
  }
  return os.str();
}

SuiteResult run_thresholds(const ExperimentConfig& cfg) {
  validate(cfg);
  const auto conv = FrameConvention::from_name(cfg.convention);
  const auto t = make_truncation(cfg.n, cfg.N);
  const auto [lo, hi] = cfg.lambda_range();
  const double c = std::abs(conv.bracket_constant());
  const double w = cfg.match_window;

  std::vector<double> expected;
  for (int k = 0;; ++k) {
    const double v = c * (0.5 * cfg.n + k);
    if (v > std::max(std::abs(lo), std::abs(hi)) + w) break;
    for (double s : {-v, v})
      if (s >= lo - w && s <= hi + w) expected.push_back(s);
  }
  std::sort(expected.begin(), expected.end());
  auto near = [&](double l) {
    return std::any_of(expected.begin(), expected.end(), [&](double e) { return std::abs(l - e) <= w + 1e-12; });
  };

  SuiteResult s{"thresholds", {}, {}};
  Table grid{"sigma_min", {"lambda", "sigma_plus", "sigma_minus"}, {}};
  const long count = std::lround(std::floor((hi - lo) / cfg.lambda_step + 1e-9)) + 1;
  std::vector<double> lambdas, sigma;
  // FS(λ) = FS(0) − λμ; the shift reproduces folland_stein_symbol bit for bit
  const auto base = folland_stein_symbol({0.0, cfg.n}, t, conv);
  for (long i = 0; i < count; ++i) {
    const double l = lo + static_cast<double>(i) * cfg.lambda_step;
    Eigen::MatrixXcd plus = base.plus(), minus = base.minus();
    plus.diagonal().array() -= l;
    minus.diagonal().array() += l;
    const HomogeneousSymbol fs(2, plus, minus, t, conv, base.reliable_level());
    const auto [sp, sm] = sector_sigma_min(fs);
    lambdas.push_back(l);
    sigma.push_back(std::min(sp, sm));
    grid.rows.push_back({l, sp, sm});
  }
  const double dip = cfg.scaled(cfg.tol.dip), floor = cfg.tol.floor / cfg.tol_scale;
  int spurious = 0, low = 0, missed = 0;
  for (size_t i = 0; i < lambdas.size(); ++i) {
    if (near(lambdas[i])) continue;
    spurious += sigma[i] < dip;
    low += sigma[i] <= floor;
  }
  Table summary{"thresholds", {"expected", "nearest_dip", "sigma_min"}, {}};
  for (double e : expected) {
    double best = 1e300, at = e;
    for (size_t i = 0; i < lambdas.size(); ++i) {
      if (std::abs(lambdas[i] - e) > w + 1e-12) continue;
      if (sigma[i] < best) best = sigma[i], at = lambdas[i];
    }
    missed += !(best < dip);
    summary.rows.push_back({e, at, best < 1e300 ? best : -1.0});
  }
  s.add("thresholds.expected_count", static_cast<double>(expected.size()), 1, ">=");
  s.add("thresholds.missed", missed, 0, "==");
  s.add("thresholds.spurious_dips", spurious, 0, "==");
  s.add("thresholds.floor_violations", low, 0, "==");
  s.tables.push_back(std::move(summary));
  s.tables.push_back(std::move(grid));
  return s;
}

SuiteResult run_rumin(const ExperimentConfig& cfg) {
  validate(cfg);
  SuiteResult s{"rumin", {}, {}};
  rumin_checks(cfg, s);
  return s;
}

SuiteResult run_identities(const ExperimentConfig& cfg) {
  validate(cfg);
  SuiteResult s{"identities", {}, {}};
  kohn_checks(cfg, s);
  szego_checks(cfg, s);
  rumin_checks(cfg, s);
  hodge_checks(cfg, s);
  return s;
}

SuiteResult run_sandbox(const ExperimentConfig& cfg) {
  validate(cfg);
  SuiteResult s{"sandbox", {}, {}};
  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<int> dim(0, 8), len(3, 6);
  Table t{"complexes", {"index", "dims", "max_residual", "master"}, {}};
  double worst = 0.0, master = 0.0;
  for (int i = 0; i < cfg.sandbox_complexes; ++i) {
    std::vector<int> dims(len(rng));
    for (auto& d : dims) d = dim(rng);
    const auto c = sandbox_build(dims, cfg.seed * 1000003ull + static_cast<unsigned long long>(i));
    const auto r = sandbox_verify(c, cfg.scaled(cfg.tol.sandbox));
    double m = 0.0;
    for (const auto& st : r.steps) m = std::max(m, st.master);
    worst = std::max(worst, r.max_residual);
    master = std::max(master, m);
    t.rows.push_back({i, dims, r.max_residual, m});
  }
  s.add("sandbox.operator_identities", worst, cfg.scaled(cfg.tol.sandbox));
  s.add("sandbox.master_identity", master, cfg.scaled(cfg.tol.sandbox));
  s.tables.push_back(std::move(t));
  return s;
}

SuiteResult run_residues(const ExperimentConfig& cfg) {
  validate(cfg);
  const auto conv = FrameConvention::from_name(cfg.convention);
  const int n = cfg.n;
  const auto t = make_truncation(n, cfg.N);
  SuiteResult s{"residues", {}, {}};
  Table rows{"residues", {"label", "res_re", "res_im", "quadrature_error", "L"}, {}};
  auto add_row = [&](const std::string& label, const ResidueValue& r) {
    rows.rows.push_back({label, r.value.real(), r.value.imag(), r.quadrature_error, hirachi_bridge(r)});
  };

  const auto fs = folland_stein_power(0.0, n + 1, t, conv);
  const auto dens = residue_density(fs);
  add_row("folland_stein_power", dens);
  if (n == 1) {
    const double exact = 4.0 * std::pow(std::numbers::pi, 3) / std::abs(conv.bracket_constant());
    s.add("residues.folland_stein_density", std::abs(dens.value - exact) / exact, 1e-6);
  }

  SymbolExpansion diff{{field_symbol(0, t, conv), field_symbol(1, t, conv), identity_symbol(t, conv)}};
  const auto rd = res(diff);
  add_row("differential_operator", rd);
  s.add("residues.differential_operator", std::abs(rd.value), 0.0, "==");
  const auto q = folland_stein_power(0.1, n + 2, t, conv);
  SymbolExpansion low{{q, star(field_symbol(1, t, conv), q)}};
  const auto rl = res(low);
  add_row("low_order", rl);
  s.add("residues.low_order", std::abs(rl.value), 0.0, "==");

  auto ctx = make_kohn_context(n, cfg.kohn_truncation(), conv);
  const auto S = szego_projection_symbols(ctx, 0, 0).S.block(0, 0);
  const auto rs = res(SymbolExpansion{{S}});
  add_row("flat_szego", rs);
  s.add("residues.flat_szego_L", std::abs(hirachi_bridge(rs)), 0.0, "==", true,
        "flat model only; says nothing about curved boundaries");

  std::vector<std::pair<HomogeneousSymbol, HomogeneousSymbol>> pairs;
  for (int i = 0; i < cfg.trace_pairs; ++i)
    pairs.push_back(random_band_pair(t, conv, i % 3, cfg.seed * 7919ull + static_cast<unsigned long long>(i)));
  const auto tr = trace_property_test(pairs, cfg.scaled(cfg.tol.trace));
  Table tt{"trace", {"pair", "res_pq_re", "res_qp_re", "deviation", "commutator"}, {}};
  for (size_t i = 0; i < tr.trials.size(); ++i)
    tt.rows.push_back({i, tr.trials[i].res_pq.real(), tr.trials[i].res_qp.real(), tr.trials[i].deviation,
                       tr.trials[i].commutator});
  s.add("residues.trace_deviation", tr.max_deviation, cfg.scaled(cfg.tol.trace));
  if (cfg.trace_refinement) {
    const auto t2 = make_truncation(n, 2 * cfg.N);
    std::vector<std::pair<HomogeneousSymbol, HomogeneousSymbol>> coarse, fine;
    for (unsigned long long k = 0; k < 2; ++k) {
      coarse.push_back(random_band_pair(t, conv, 2, cfg.seed + k));
      fine.push_back(random_band_pair(t2, conv, 2, cfg.seed + k));
    }
    const double a = trace_property_test(coarse).max_deviation, b = trace_property_test(fine).max_deviation;
    s.add("residues.trace_refinement", b - a, 0.0, "<=", true, "deviation(2N) - deviation(N)");
  }
  s.tables.push_back(std::move(rows));
  s.tables.push_back(std::move(tt));

  if (cfg.log_family && n == 1) {
    const auto t2 = make_truncation(1, 2 * cfg.N);
    std::vector<std::pair<std::string, HomogeneousSymbol>> fam;
    for (double l : {0.0, 0.2, -0.25, 0.35}) {
      std::ostringstream label;
      label << "fs(" << l << ")^-2";
      fam.push_back({label.str(), folland_stein_power(l, 2, t2, conv)});
    }
    auto rep = log_coefficient_crosscheck(fam);
    double worst = 0.0;
    Table lt{"log_coefficient", {"label", "density_re", "fitted_b_re", "predicted_b_re", "error", "fit_residual"}, {}};
    for (const auto& r : rep.rows) {
      worst = std::max(worst, r.error);
      lt.rows.push_back(Json::array({r.label, r.density.real(), r.fitted_b.real(), r.predicted_b.real(), r.error, r.fit_residual}));
    }
    s.add("residues.log_coefficient", worst, cfg.scaled(cfg.tol.log_coefficient));
    s.add("residues.log_gamma", rep.gamma.real(), 0.0, "<=", false, "calibration constant from the first member");
    s.tables.push_back(std::move(lt));
  }
  return s;
}

Report run_report(const ExperimentConfig& cfg) {
  validate(cfg);
  Report r{cfg, {}};
  for (const auto& name : cfg.suites) {
    if (name == "thresholds") r.suites.push_back(run_thresholds(cfg));
    else if (name == "identities") r.suites.push_back(run_identities(cfg));
    else if (name == "residues") r.suites.push_back(run_residues(cfg));
    else if (name == "sandbox") r.suites.push_back(run_sandbox(cfg));
    else if (name == "rumin") r.suites.push_back(run_rumin(cfg));
  }
  return r;
}

}  // namespace heis
